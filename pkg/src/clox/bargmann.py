"""Bargmann-space realizations as differential operators on polynomials.

A :class:`DiffOp` is a sum of terms ``coeff * z^s (z d/dz + c_1)...(z d/dz + c_r) (d/dz)^t``
acting on coefficient lists (index = exponent).  Everything is exact term
arithmetic on monomials: ``z^n -> coeff * prod(n - t + c_i) * n!/(n-t)! * z^(n-t+s)``.

Two realizations are provided.  Within one grade subspace the SGA
generators act on ``e_k = c'_k z^k``, the image of ``|k lam + mu>``.  On the
whole Fock space the vector realization maps ``|n>`` to the monomial
``w_n z^n`` in component ``n mod lam``, where ``w_n`` are the coefficients
of the unnormalized eigenstate ``|z)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .algebra import AlgebraParams
from .cstates import check_labels, eigen_log_weight, log_cs_coefficients, valid_labels
from .fock import build_fock

PASS_THRESHOLD = 1e-12


class BargmannDomainError(ValueError):
    """An operator produced a negative power of z with a nonzero coefficient."""


@dataclass(frozen=True)
class Term:
    coeff: float
    zshift: int = 0
    euler: tuple[float, ...] = ()
    dorder: int = 0

    def on_monomial(self, n: int) -> tuple[float, int]:
        """(factor, new exponent) for the action on z^n."""
        t = self.dorder
        if t > n:
            return 0.0, n - t + self.zshift
        val = self.coeff * math.perm(n, t)
        for c in self.euler:
            val *= n - t + c
        return val, n - t + self.zshift

    def normal_form(self) -> Term:
        """Equivalent term with no d/dz: (d/dz)^t = z^-t prod_{i<t}(z d/dz - i)."""
        t = self.dorder
        if t == 0:
            return self
        roots = tuple(c - t for c in self.euler) + tuple(float(-i) for i in range(t))
        return Term(self.coeff, self.zshift - t, roots, 0)

    def __str__(self) -> str:
        parts = []
        if self.coeff != 1 or (not self.euler and not self.dorder and not self.zshift):
            parts.append(f"{self.coeff:.6g}")
        if self.zshift == 1:
            parts.append("z")
        elif self.zshift:
            parts.append(f"z^{self.zshift}")
        for c in self.euler:
            parts.append("(z d/dz)" if c == 0 else f"(z d/dz {'+' if c > 0 else '-'} {abs(c):.6g})")
        if self.dorder == 1:
            parts.append("d/dz")
        elif self.dorder:
            parts.append(f"(d/dz)^{self.dorder}")
        return " ".join(parts)


@dataclass(frozen=True)
class DiffOp:
    terms: tuple[Term, ...] = ()

    @classmethod
    def single(cls, coeff: float = 1.0, zshift: int = 0, euler=(), dorder: int = 0) -> DiffOp:
        return cls((Term(float(coeff), int(zshift), tuple(float(c) for c in euler), int(dorder)),))

    def apply(self, poly) -> list[float]:
        """Act on a polynomial given by its coefficient list."""
        out: dict[int, float] = {}
        for n, a in enumerate(poly):
            if a == 0:
                continue
            for term in self.terms:
                val, m = term.on_monomial(n)
                if val == 0:
                    continue
                if m < 0:
                    raise BargmannDomainError(f"term '{term}' maps z^{n} to z^{m}")
                out[m] = out.get(m, 0.0) + a * val
        if not out:
            return []
        res = [0.0] * (max(out) + 1)
        for m, v in out.items():
            res[m] = v
        return res

    def monomial(self, n: int) -> dict[int, float]:
        """Action on z^n as {exponent: coefficient}."""
        out: dict[int, float] = {}
        for term in self.terms:
            val, m = term.on_monomial(n)
            if val != 0:
                if m < 0:
                    raise BargmannDomainError(f"term '{term}' maps z^{n} to z^{m}")
                out[m] = out.get(m, 0.0) + val
        return out

    def __add__(self, other: DiffOp) -> DiffOp:
        return DiffOp(self.terms + other.terms)

    def __neg__(self) -> DiffOp:
        return self.scale(-1.0)

    def __sub__(self, other: DiffOp) -> DiffOp:
        return self + (-other)

    def scale(self, c: float) -> DiffOp:
        return DiffOp(tuple(Term(c * t.coeff, t.zshift, t.euler, t.dorder) for t in self.terms))

    def __matmul__(self, other: DiffOp) -> DiffOp:
        """Composition ``self o other``.

        Uses p(z d/dz) z^d = z^d p(z d/dz + d) on normal-form terms.
        """
        out = []
        for t1 in self.terms:
            n1 = t1.normal_form()
            for t2 in other.terms:
                n2 = t2.normal_form()
                roots = tuple(c + n2.zshift for c in n1.euler) + n2.euler
                out.append(Term(n1.coeff * n2.coeff, n1.zshift + n2.zshift, roots, 0))
        return DiffOp(tuple(out))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(str(t) for t in self.terms)


def commutator(x: DiffOp, y: DiffOp) -> DiffOp:
    return x @ y - y @ x


@dataclass(frozen=True)
class VectorDiffOp:
    """lam x lam grid of optional DiffOps acting on lam-vectors of polynomials."""

    entries: tuple[tuple[DiffOp | None, ...], ...]
    size: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "size", len(self.entries))

    @classmethod
    def empty(cls, lam: int) -> list[list[DiffOp | None]]:
        return [[None] * lam for _ in range(lam)]

    @classmethod
    def from_grid(cls, grid) -> VectorDiffOp:
        return cls(tuple(tuple(row) for row in grid))

    def apply(self, vec) -> list[list[float]]:
        out = []
        for row in self.entries:
            acc: list[float] = []
            for op, poly in zip(row, vec):
                if op is None or not poly:
                    continue
                res = op.apply(poly)
                if len(res) > len(acc):
                    acc.extend([0.0] * (len(res) - len(acc)))
                for i, v in enumerate(res):
                    acc[i] += v
            out.append(acc)
        return out

    def __matmul__(self, other: VectorDiffOp) -> VectorDiffOp:
        lam = self.size
        grid = self.empty(lam)
        for i in range(lam):
            for j in range(lam):
                acc = None
                for k in range(lam):
                    x, y = self.entries[i][k], other.entries[k][j]
                    if x is None or y is None:
                        continue
                    acc = x @ y if acc is None else acc + x @ y
                grid[i][j] = acc
        return self.from_grid(grid)

    def __sub__(self, other: VectorDiffOp) -> VectorDiffOp:
        lam = self.size
        grid = self.empty(lam)
        for i in range(lam):
            for j in range(lam):
                x, y = self.entries[i][j], other.entries[i][j]
                if x is None:
                    grid[i][j] = None if y is None else -y
                else:
                    grid[i][j] = x if y is None else x - y
        return self.from_grid(grid)

    def __str__(self) -> str:
        rows = []
        for row in self.entries:
            rows.append("[" + ", ".join("0" if op is None else str(op) for op in row) + "]")
        return "\n".join(rows)


# -- index bookkeeping --------------------------------------------------------

def fock_index(params: AlgebraParams, mu: int, k: int) -> int:
    """Fock label n = k lam + mu of the k-th basis monomial in grade mu."""
    return k * params.lam + mu


def grade_degree(params: AlgebraParams, n: int) -> tuple[int, int]:
    """Inverse of :func:`fock_index`: (mu, k)."""
    k, mu = divmod(n, params.lam)
    return mu, k


def bargmann_basis(params: AlgebraParams, mu: int, alpha: int, k: int) -> tuple[int, float]:
    """Image of |k lam + mu> in the grade-mu space: (degree k, weight c'_k)."""
    return k, math.exp(log_cs_coefficients(params, mu, alpha, k)[k])


# -- operators ------------------------------------------------------------------

def sga_diffops(params: AlgebraParams, mu: int, alpha: int) -> tuple[DiffOp, DiffOp, DiffOp]:
    """(J+, J-, J0) acting on the grade-mu Bargmann space for the alpha family."""
    check_labels(params, mu, alpha)
    lam = params.lam
    bb = params.bb
    jplus = DiffOp.single(float(lam) ** (alpha - 1), 1, [bb(nu) for nu in range(mu + 1, mu + alpha + 1)])
    euler = [bb(nu) + 1 for nu in range(1, mu + 1)] + [bb(nu) for nu in range(mu + alpha + 1, lam)]
    jminus = DiffOp.single(float(lam) ** (lam - alpha - 1), 0, euler, 1)
    j0 = DiffOp.single(1.0, 0, [0.5 * (bb(mu) + bb(mu + 1))])
    return jplus, jminus, j0


def vector_bargmann_ops(params: AlgebraParams) -> tuple[VectorDiffOp, VectorDiffOp, VectorDiffOp]:
    """(N, A+, A) acting on lam-component Bargmann vectors.

    The entries ``d/dz + beta_nu / z`` of A are stored in normal-ordered form
    ``z^-1 (z d/dz + beta_nu)``, which acts identically on every monomial.
    """
    lam = params.lam
    nop = VectorDiffOp.empty(lam)
    adag = VectorDiffOp.empty(lam)
    aop = VectorDiffOp.empty(lam)
    for mu in range(lam):
        nop[mu][mu] = DiffOp.single(1.0, 0, [0.0])
        adag[(mu + 1) % lam][mu] = DiffOp.single(1.0, 1)
    for nu in range(1, lam):
        aop[nu - 1][nu] = DiffOp.single(1.0, -1, [params.beta[nu]])
    aop[lam - 1][0] = DiffOp.single(1.0, 0, (), 1)
    return VectorDiffOp.from_grid(nop), VectorDiffOp.from_grid(adag), VectorDiffOp.from_grid(aop)


def literal_lowering_entry(beta_nu: float) -> DiffOp:
    """d/dz + beta_nu / z as two separate terms."""
    return DiffOp.single(1.0, 0, (), 1) + DiffOp.single(beta_nu, -1)


# -- verification ---------------------------------------------------------------

def _rel(x: float, ref: float) -> float:
    return abs(x - ref) / abs(ref) if ref != 0 else abs(x)


def _fock_dim(params: AlgebraParams, kmax: int) -> int:
    return (kmax + 3) * params.lam


def sga_mismatches(params: AlgebraParams, mu: int, alpha: int, kmax: int, rep=None) -> dict[str, float]:
    """Per-generator max relative mismatch of DiffOp vs Fock matrix elements."""
    lam = params.lam
    if rep is None or rep.dim < _fock_dim(params, kmax):
        rep = build_fock(params, _fock_dim(params, kmax))
    ops = dict(zip(("J+", "J-", "J0"), sga_diffops(params, mu, alpha)))
    mats = {"J+": rep.jplus, "J-": rep.jminus, "J0": rep.j0}
    logc = log_cs_coefficients(params, mu, alpha, kmax + 1)
    worst = {name: 0.0 for name in ops}
    for k in range(kmax + 1):
        n = fock_index(params, mu, k)
        for name, op in ops.items():
            image = op.monomial(k)
            for kp in range(max(0, k - 1), k + 2):
                npr = fock_index(params, mu, kp)
                fock = mats[name][npr, n].real
                coef = image.pop(kp, 0.0)
                barg = coef * math.exp(logc[k] - logc[kp]) if coef else 0.0
                worst[name] = max(worst[name], _rel(barg, fock))
            if image:
                # anything left lands outside the three neighbouring degrees
                worst[name] = max(worst[name], max(abs(v) for v in image.values()))
    return worst


def verify_sga_bargmann(params: AlgebraParams, mu: int, alpha: int, kmax: int = 40, rep=None) -> float:
    return max(sga_mismatches(params, mu, alpha, kmax, rep).values())


def sga_commutator_mismatch(params: AlgebraParams, mu: int, alpha: int, kmax: int) -> float:
    """max over degrees <= kmax of |[J0, J+-] -+ J+-| acting on z^k, exact term arithmetic."""
    jp, jm, j0 = sga_diffops(params, mu, alpha)
    worst = 0.0
    for op, sign in ((jp, 1.0), (jm, -1.0)):
        diff = commutator(j0, op) - op.scale(sign)
        for k in range(kmax + 1):
            vals = diff.monomial(k).values()
            scale = max([1.0] + [abs(v) for v in op.monomial(k).values()])
            if vals:
                worst = max(worst, max(abs(v) for v in vals) / scale)
    return worst


def vector_log_weights(params: AlgebraParams, nmax: int) -> np.ndarray:
    return np.array([eigen_log_weight(params, n) for n in range(nmax + 1)])


def _basis_vector(params: AlgebraParams, n: int) -> list[list[float]]:
    lam = params.lam
    vec: list[list[float]] = [[] for _ in range(lam)]
    vec[n % lam] = [0.0] * n + [1.0]
    return vec


def vector_mismatches(params: AlgebraParams, kmax: int, rep=None) -> dict[str, float]:
    """N, A+, A vs N, a+, a on |n>, n <= kmax; plus [A, A+] vs 1 + alpha_mu."""
    lam = params.lam
    dim = kmax + lam + 2
    if rep is None or rep.dim < dim:
        rep = build_fock(params, max(dim, 2 * lam))
    nop, adag, aop = vector_bargmann_ops(params)
    logw = vector_log_weights(params, kmax + 1)
    ops = {"N": (nop, rep.num), "A+": (adag, rep.adag), "A": (aop, rep.a)}
    comm = aop @ adag - adag @ aop
    worst = {name: 0.0 for name in ops}
    worst["[A,A+]"] = 0.0
    for n in range(kmax + 1):
        basis = _basis_vector(params, n)
        for name, (op, mat) in ops.items():
            image = op.apply(basis)
            for comp, poly in enumerate(image):
                for m, coef in enumerate(poly):
                    if coef == 0:
                        continue
                    if m % lam != comp:
                        raise AssertionError(f"{name}: degree {m} landed in component {comp}")
            for npr in range(max(0, n - 1), n + 2):
                poly = image[npr % lam]
                coef = poly[npr] if npr < len(poly) else 0.0
                barg = coef * math.exp(logw[n] - logw[npr]) if coef else 0.0
                worst[name] = max(worst[name], _rel(barg, mat[npr, n].real))
        image = comm.apply(basis)
        mu = n % lam
        for comp, poly in enumerate(image):
            for m, coef in enumerate(poly):
                target = 1.0 + params.alpha[mu] if (comp == mu and m == n) else 0.0
                worst["[A,A+]"] = max(worst["[A,A+]"], _rel(coef, target) if target else abs(coef))
    return worst


def verify_vector_bargmann(params: AlgebraParams, kmax: int = 40, rep=None) -> float:
    return max(vector_mismatches(params, kmax, rep).values())


def verify_all_sga(params: AlgebraParams, kmax: int = 40) -> float:
    rep = build_fock(params, _fock_dim(params, kmax))
    return max(verify_sga_bargmann(params, mu, alpha, kmax, rep) for mu, alpha in valid_labels(params))
