"""Coherent states |z; mu; alpha> and eigenstates |z> of the annihilation operator.

Coefficients are generated by the two-term recursion forced by
``(a^(lam-alpha) - z a+^alpha) |psi> = 0`` inside the grade-mu subspace and
kept in log space; ``c'_0 = 1`` and all coefficients are real positive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .algebra import AlgebraParams, log_structure_factorial, structure_function
from .fock import annihilation
from .specfun import SeriesError, pfq

TAIL_BOUND = 1e-14
_TAIL_TARGET = 1e-17
_MAX_K = 200_000


class DomainError(ValueError):
    """Coherent-state label outside the region where the state is normalizable."""


@dataclass(frozen=True)
class CoherentState:
    z: complex
    mu: int
    alpha: int
    cprime: tuple[float, ...]
    norm: float
    kmax: int
    lam: int
    logc: tuple[float, ...] = field(default=(), repr=False, compare=False)

    def vector(self, dim: int | None = None) -> np.ndarray:
        """Unit-norm Fock vector of length ``dim`` (default ``(kmax+1)*lam``).

        Entries past the truncation order are left at zero.
        """
        return _assemble(self.lam, self.mu, self.z, np.asarray(self.logc), self.norm, dim or (self.kmax + 1) * self.lam)

    def to_dict(self) -> dict:
        return {
            "z": [self.z.real, self.z.imag],
            "mu": self.mu,
            "alpha": self.alpha,
            "coefficients": list(self.cprime),
            "norm": self.norm,
        }


@dataclass(frozen=True)
class EigenCS:
    z: complex
    dprime: tuple[float, ...]
    norm: float
    components: tuple[CoherentState, ...]

    @property
    def omega(self) -> complex:
        return self.z ** len(self.components)


def check_labels(params: AlgebraParams, mu: int, alpha: int) -> None:
    lam = params.lam
    if not 0 <= alpha <= lam // 2:
        raise DomainError(f"alpha must lie in 0..{lam // 2}, got {alpha}")
    if not 0 <= mu <= lam - alpha - 1:
        raise DomainError(f"mu must lie in 0..{lam - alpha - 1} for alpha={alpha}, got {mu}")


def valid_labels(params: AlgebraParams) -> list[tuple[int, int]]:
    """All (mu, alpha) pairs for which the coherent states exist."""
    lam = params.lam
    return [(mu, alpha) for alpha in range(lam // 2 + 1) for mu in range(lam - alpha)]


def _log_ratio(params: AlgebraParams, mu: int, alpha: int, k: int) -> float:
    """log(c'_{k+1} / c'_k)."""
    lam = params.lam
    n = k * lam + mu
    up = math.fsum(math.log(structure_function(params, n + j)) for j in range(1, alpha + 1))
    down = math.fsum(math.log(structure_function(params, n + lam - i)) for i in range(lam - alpha))
    return 0.5 * (up - down)


def log_cs_coefficients(params: AlgebraParams, mu: int, alpha: int, kmax: int) -> np.ndarray:
    """log c'_0 .. log c'_kmax; never underflows, unlike the coefficients."""
    check_labels(params, mu, alpha)
    out = np.zeros(kmax + 1)
    for k in range(kmax):
        out[k + 1] = out[k] + _log_ratio(params, mu, alpha, k)
    return out


def cs_coefficients(params: AlgebraParams, mu: int, alpha: int, kmax: int) -> np.ndarray:
    return np.exp(log_cs_coefficients(params, mu, alpha, kmax))


def _check_domain(params: AlgebraParams, alpha: int, absz: float) -> None:
    lam = params.lam
    if 2 * alpha == lam and absz * absz >= 1.0:
        raise DomainError(f"alpha = lam/2 states exist only for |z| < 1 (unit disc), got |z| = {absz}")


def cs_norm(params: AlgebraParams, mu: int, alpha: int, absz: float) -> float:
    """N^(alpha)_mu(|z|) from its hypergeometric closed form."""
    check_labels(params, mu, alpha)
    _check_domain(params, alpha, absz)
    lam = params.lam
    bb = params.bb
    upper = [bb(nu) for nu in range(mu + 1, mu + alpha + 1)]
    lower = [bb(nu) + 1 for nu in range(1, mu + 1)] + [bb(nu) for nu in range(mu + alpha + 1, lam)]
    y = absz * absz / float(lam) ** (lam - 2 * alpha)
    return pfq(upper, lower, y)


def truncation_order(params: AlgebraParams, mu: int, alpha: int, absz: float) -> int:
    """Smallest K whose neglected tail sum_{k>K} c'^2_k |z|^2k is negligible.

    The tail after K is bounded geometrically by the current term ratio once
    that ratio is below one; K is also large enough that the last retained
    term is below ``TAIL_BOUND`` of the norm.
    """
    check_labels(params, mu, alpha)
    _check_domain(params, alpha, absz)
    if absz == 0:
        return 0
    log2z = 2.0 * math.log(absz)
    logterm = 0.0
    total = 1.0
    for k in range(_MAX_K):
        step = 2.0 * _log_ratio(params, mu, alpha, k) + log2z
        nxt = logterm + step
        ratio = math.exp(step)
        if ratio < 1.0:
            tail = math.exp(nxt) / (1.0 - ratio)
            if tail < _TAIL_TARGET * total and math.exp(logterm) < TAIL_BOUND * total:
                return k
        logterm = nxt
        total += math.exp(logterm)
    raise SeriesError("could not reach the tail bound")


def coherent_state(params: AlgebraParams, z: complex, mu: int, alpha: int, kmax: int | None = None) -> CoherentState:
    z = complex(z)
    if kmax is None:
        kmax = truncation_order(params, mu, alpha, abs(z))
    else:
        check_labels(params, mu, alpha)
        _check_domain(params, alpha, abs(z))
    logc = log_cs_coefficients(params, mu, alpha, kmax)
    norm = _recursion_norm(logc, abs(z))
    return CoherentState(z, mu, alpha, tuple(np.exp(logc)), norm, kmax, params.lam, tuple(logc))


def _recursion_norm(logc: np.ndarray, absz: float) -> float:
    if absz == 0:
        return 1.0
    k = np.arange(len(logc))
    return math.fsum(np.exp(2 * logc + 2 * k * math.log(absz)))


def recursion_norm(params: AlgebraParams, mu: int, alpha: int, absz: float) -> float:
    """sum_k c'^2_k |z|^2k from the recursion, truncated by the tail bound."""
    kmax = truncation_order(params, mu, alpha, absz)
    return _recursion_norm(log_cs_coefficients(params, mu, alpha, kmax), absz)


def _assemble(lam: int, mu: int, z: complex, logc: np.ndarray, norm: float, dim: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    for k, lc in enumerate(logc):
        n = k * lam + mu
        if n >= dim:
            break
        if z == 0:
            v[n] = 1.0 if k == 0 else 0.0
        else:
            v[n] = np.exp(lc + k * np.log(z) - 0.5 * math.log(norm))
    return v


def cs_build(params: AlgebraParams, z: complex, mu: int, alpha: int, dim: int | None = None) -> np.ndarray:
    """Normalized |z; mu; alpha> as a Fock vector.

    Raises ``ValueError`` if ``dim`` cannot hold the coefficients needed by
    the tail bound.
    """
    cs = coherent_state(params, z, mu, alpha)
    need = cs.kmax * params.lam + mu + 1
    if dim is None:
        dim = (cs.kmax + 1) * params.lam
    elif dim < need:
        raise ValueError(f"dim {dim} too small for the tail bound; need at least {need}")
    return cs.vector(dim)


def _power_apply(m: np.ndarray, v: np.ndarray, power: int) -> np.ndarray:
    for _ in range(power):
        v = m @ v
    return v


def cs_residual(params: AlgebraParams, v: np.ndarray, z: complex, alpha: int) -> float:
    """|| (a^(lam-alpha) - z a+^alpha) v || over rows untouched by truncation."""
    lam = params.lam
    dim = len(v)
    a = annihilation(params, dim)
    r = _power_apply(a, v, lam - alpha) - z * _power_apply(a.conj().T, v, alpha)
    return float(np.linalg.norm(r[: dim - (lam - alpha)]))


def eigen_residual(params: AlgebraParams, v: np.ndarray, z: complex) -> float:
    """|| a v - z v || over rows untouched by truncation."""
    a = annihilation(params, len(v))
    return float(np.linalg.norm((a @ v - z * v)[:-1]))


def eigen_cs_norm(params: AlgebraParams, absz: float) -> float:
    """Normalization of |z> as a sum of lam 0F(lam-1) series."""
    lam = params.lam
    bb = params.bb
    t = absz * absz / lam
    total = []
    for mu in range(lam):
        lower = [bb(nu) + 1 for nu in range(1, mu + 1)] + [bb(nu) for nu in range(mu + 1, lam)]
        prod = math.prod(bb(nu) for nu in range(1, mu + 1))
        total.append(pfq([], lower, t**lam) * t**mu / prod)
    return math.fsum(total)


def eigen_cs(params: AlgebraParams, z: complex, kmax: int | None = None) -> EigenCS:
    """Grade components of |z); ``kmax`` is raised to the tail-bound order if smaller."""
    z = complex(z)
    lam = params.lam
    omega = z**lam
    # one shared order so no grade is cut off before its neighbours
    need = max(truncation_order(params, mu, 0, abs(omega)) for mu in range(lam))
    kmax = need if kmax is None else max(kmax, need)
    comps = tuple(coherent_state(params, omega, mu, 0, kmax) for mu in range(lam))
    dprime = tuple(
        math.sqrt(c.norm / math.prod(params.bb(nu) for nu in range(1, mu + 1)))
        for mu, c in enumerate(comps)
    )
    norm = eigen_cs_norm(params, abs(z))
    return EigenCS(z, dprime, norm, comps)


def eigen_cs_dim(params: AlgebraParams, z: complex) -> int:
    lam = params.lam
    absw = abs(complex(z)) ** lam
    return (max(truncation_order(params, mu, 0, absw) for mu in range(lam)) + 1) * lam


def _eigen_unnormalized(params: AlgebraParams, ecs: EigenCS, dim: int) -> np.ndarray:
    lam = params.lam
    v = np.zeros(dim, dtype=complex)
    for mu, (comp, d) in enumerate(zip(ecs.components, ecs.dprime)):
        if mu >= dim:
            break
        v += d * (ecs.z / math.sqrt(lam)) ** mu * comp.vector(dim)
    return v


def eigen_norm_mismatch(params: AlgebraParams, z: complex) -> float:
    """Relative gap between the assembled squared norm and the closed form."""
    ecs = eigen_cs(params, z)
    v = _eigen_unnormalized(params, ecs, eigen_cs_dim(params, z))
    return abs(float(np.vdot(v, v).real) / ecs.norm - 1.0)


def eigen_cs_build(params: AlgebraParams, z: complex, dim: int | None = None) -> tuple[EigenCS, np.ndarray]:
    """|z> assembled from the grade components |z^lam; mu; 0>.

    Returns the state record and the unit-norm vector.  Raises
    ``ArithmeticError`` if the squared norm of the assembled combination
    misses the closed-form normalization by more than 1e-10 relative.
    """
    if dim is None:
        dim = eigen_cs_dim(params, z)
    ecs = eigen_cs(params, z, -(-dim // params.lam) - 1)
    v = _eigen_unnormalized(params, ecs, dim)
    sq = float(np.vdot(v, v).real)
    if dim >= eigen_cs_dim(params, z) and abs(sq / ecs.norm - 1.0) > 1e-10:
        raise ArithmeticError(f"eigenstate norm mismatch: {sq} vs closed form {ecs.norm}")
    return ecs, v / math.sqrt(sq)


def eigen_log_weight(params: AlgebraParams, n: int) -> float:
    """log w_n with |z) = sum_n w_n z^n |n>, from the grade decomposition.

    w_n^2 = c'^2_k / (lam^mu prod_{nu<=mu} betabar_nu) for n = k lam + mu.
    """
    lam = params.lam
    k, mu = divmod(n, lam)
    logc = log_cs_coefficients(params, mu, 0, k)[k]
    logprod = math.fsum(math.log(params.bb(nu)) for nu in range(1, mu + 1))
    return logc - 0.5 * (mu * math.log(lam) + logprod)


def glauber_log_weight(params: AlgebraParams, n: int) -> float:
    """-(1/2) log F(n)!, the weight making a|z) = z|z) term by term."""
    return -0.5 * log_structure_factorial(params, n)


def cs_overlap(u: np.ndarray, v: np.ndarray) -> complex:
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    return complex(np.vdot(u, v))
