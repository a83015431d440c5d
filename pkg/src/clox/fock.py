"""Truncated Fock-space matrices for the C_lambda-extended oscillator."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import AlgebraParams, structure_values


@dataclass(frozen=True)
class FockRep:
    params: AlgebraParams
    dim: int
    a: np.ndarray
    adag: np.ndarray
    num: np.ndarray
    t: np.ndarray
    proj: tuple[np.ndarray, ...]
    h0: np.ndarray
    jplus: np.ndarray
    jminus: np.ndarray
    j0: np.ndarray


def annihilation(params: AlgebraParams, dim: int) -> np.ndarray:
    """Matrix of ``a`` with ``a|n> = sqrt(F(n)) |n-1>``; column 0 is zero."""
    f = structure_values(params, dim - 1)
    return np.diag(np.sqrt(f[1:]).astype(complex), 1)


def build_fock(params: AlgebraParams, dim: int) -> FockRep:
    lam = params.lam
    if dim < 2 * lam:
        raise ValueError(f"dim must be at least 2*lambda = {2 * lam}, got {dim}")
    a = annihilation(params, dim)
    adag = a.conj().T.copy()
    n = np.arange(dim)
    num = np.diag(n.astype(complex))
    t = np.diag(np.exp(2j * math.pi * n / lam))
    proj = tuple(np.diag((n % lam == mu).astype(complex)) for mu in range(lam))
    h0 = 0.5 * (a @ adag + adag @ a)
    jplus = np.linalg.matrix_power(adag, lam) / lam
    jminus = np.linalg.matrix_power(a, lam) / lam
    j0 = h0 / lam
    for m in (a, adag, num, t, h0, jplus, jminus, j0, *proj):
        m.setflags(write=False)
    return FockRep(params, dim, a, adag, num, t, proj, h0, jplus, jminus, j0)


def _comm(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return x @ y - y @ x


def _record(name: str, diff: np.ndarray, scale: float) -> dict:
    dev = float(np.max(np.abs(diff))) if diff.size else 0.0
    return {"name": name, "max_deviation": dev, "scale": scale, "rel_deviation": dev / max(1.0, scale)}


def check_algebra(rep: FockRep) -> list[dict]:
    """Maximum deviations of the defining relations on the interior block.

    Each record carries the absolute deviation and a deviation scaled by the
    largest entry of the terms being compared (never by less than 1); the
    scaled value is what thresholds apply to, since entries of ``J_+-`` grow
    like ``n**(lam/2)``.
    """
    p = rep.params
    lam = p.lam
    m = rep.dim - lam - 1
    blk = np.s_[:m, :m]
    ident = np.eye(rep.dim)
    ext = sum(alpha * pr for alpha, pr in zip(p.alpha, rep.proj))
    phase = np.exp(-2j * math.pi / lam)

    out = []
    aad = rep.a @ rep.adag
    ada = rep.adag @ rep.a
    out.append(_record("[a,a+] - I - sum alpha_mu P_mu", (aad - ada - ident - ext)[blk],
                       float(np.max(np.abs(aad[blk])))))
    lhs = rep.adag @ rep.t
    out.append(_record("a+ T - e^(-2pi i/lam) T a+", (lhs - phase * rep.t @ rep.adag)[blk],
                       float(np.max(np.abs(lhs[blk])))))
    worst = None
    for mu in range(lam):
        lhs = rep.adag @ rep.proj[mu]
        rec = _record("a+ P_mu - P_mu+1 a+", (lhs - rep.proj[(mu + 1) % lam] @ rep.adag)[blk],
                      float(np.max(np.abs(lhs[blk]))))
        if worst is None or rec["rel_deviation"] > worst["rel_deviation"]:
            worst = rec
    out.append(worst)
    lhs = rep.num @ rep.adag
    out.append(_record("[N,a+] - a+", (_comm(rep.num, rep.adag) - rep.adag)[blk],
                       float(np.max(np.abs(lhs[blk])))))
    out.append(_record("[N,T]", _comm(rep.num, rep.t)[blk], float(rep.dim)))

    s = rep.dim - 2 * lam
    sga = np.s_[:s, :s]
    for name, j, sign in (("[J0,J+] - J+", rep.jplus, 1.0), ("[J0,J-] + J-", rep.jminus, -1.0)):
        lhs = rep.j0 @ j
        scale = float(max(np.max(np.abs(lhs[sga])), np.max(np.abs(j[sga]))))
        out.append(_record(name, (_comm(rep.j0, j) - sign * j)[sga], scale))
    return out


def spectrum(params: AlgebraParams, nmax: int) -> np.ndarray:
    """Energies E_0..E_nmax of H0 = {a, a+}/2, i.e. (F(n) + F(n+1)) / 2."""
    f = structure_values(params, nmax + 1)
    return 0.5 * (f[:-1] + f[1:])


def sga_commutator_report(rep: FockRep) -> dict:
    """Diagonal of [J-, J+] on the interior block, as an exploratory record.

    Not a pass/fail check: for lam > 2 the closure is a polynomial in J0 and
    the grading projectors, which is reported as data only.
    """
    s = rep.dim - 2 * rep.params.lam
    c = _comm(rep.jminus, rep.jplus)[:s, :s]
    offdiag = c - np.diag(np.diag(c))
    return {
        "name": "[J-,J+] diagonal",
        "diagonal": np.real(np.diag(c)).tolist(),
        "max_offdiag": float(np.max(np.abs(offdiag))) if s else 0.0,
    }
