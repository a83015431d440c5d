"""Special-function kernels: log-Gamma, pFq series and Meijer G machinery.

Only the class G^{m,0}_{p,q} with m = q is needed here, for real parameters
and a positive real argument.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

PFQ_MAX_TERMS = 100_000
RESIDUE_MAX_TERMS = 10_000
_WINDOW = 32
_EPS = float(np.finfo(np.longdouble).eps)
_CANCEL_TOL = 1e-8


class SeriesError(ArithmeticError):
    """A series diverges or did not converge within its iteration cap."""


class DegenerateParameters(ValueError):
    """Two lower Meijer parameters differ by an integer (confluent poles)."""


@dataclass(frozen=True)
class MeijerParams:
    arow: tuple[float, ...]
    brow: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "arow", tuple(float(a) for a in self.arow))
        object.__setattr__(self, "brow", tuple(float(b) for b in self.brow))
        if not self.brow:
            raise ValueError("brow must be nonempty")

    @property
    def order(self) -> int:
        return len(self.arow) + len(self.brow)

    def is_generic(self, tol: float = 1e-9) -> bool:
        b = self.brow
        for i in range(len(b)):
            for j in range(i + 1, len(b)):
                d = b[i] - b[j]
                if abs(d - round(d)) < tol:
                    return False
        return True


def log_gamma(x: float) -> float:
    """Natural log of Gamma(x) for x > 0."""
    if not x > 0:
        raise ValueError(f"log_gamma needs x > 0, got {x}")
    return math.lgamma(x)


def pfq(a, b, y: float) -> float:
    """Generalized hypergeometric series pFq(a; b; y) for positive terms.

    All ``b`` must be positive and ``y >= 0``; with ``len(a) == len(b) + 1``
    the series only converges for ``y < 1``.  Once k exceeds every parameter,
    summation stops when the remaining tail, bounded geometrically by the next
    term ratio (or its limit y when p = q + 1), is below 1e-16 of the sum.
    """
    a = [float(v) for v in a]
    b = [float(v) for v in b]
    if y < 0:
        raise ValueError("pfq expects y >= 0")
    if any(not v > 0 for v in b):
        raise ValueError("pfq expects positive lower parameters")
    if any(v < 0 for v in a):
        raise ValueError("pfq expects nonnegative upper parameters")
    if len(a) > len(b) + 1 or (len(a) == len(b) + 1 and y >= 1):
        raise SeriesError(f"{len(a)}F{len(b)} diverges at y = {y}")
    if y == 0:
        return 1.0
    # term ratios are monotone once k exceeds every parameter; before that a
    # small ratio says nothing about the tail
    kmin = math.ceil(max(a + b, default=0.0)) + 1
    limit = y if len(a) == len(b) + 1 else 0.0
    total = 1.0
    term = 1.0
    for k in range(PFQ_MAX_TERMS):
        term *= _pfq_ratio(a, b, y, k)
        total += term
        if term == 0.0:
            return total
        if k >= kmin:
            r = max(_pfq_ratio(a, b, y, k + 1), limit)
            if r < 1.0 and term * r / (1.0 - r) < 1e-16 * total:
                return total
    raise SeriesError(f"pfq did not converge in {PFQ_MAX_TERMS} terms")


def _pfq_ratio(a, b, y: float, k: int) -> float:
    num = y
    for v in a:
        num *= v + k
    den = float(k + 1)
    for v in b:
        den *= v + k
    return num / den


def mellin_meijer_g(p: MeijerParams, s: float) -> float:
    """log of the Mellin transform of G^{q,0}_{p,q}(y | arow; brow) at real s.

    int_0^inf y^(s-1) G dy = prod Gamma(b_j + s) / prod Gamma(a_j + s).
    """
    for v in p.brow + p.arow:
        if not v + s > 0:
            raise ValueError(f"Mellin transform outside real Gamma domain: {v} + {s} <= 0")
    return math.fsum(math.lgamma(b + s) for b in p.brow) - math.fsum(math.lgamma(a + s) for a in p.arow)


def _gamma_signed(x: float) -> tuple[float, float]:
    """(sign, log|Gamma(x)|); x must not be a nonpositive integer."""
    if x <= 0 and x == math.floor(x):
        raise ValueError(f"Gamma pole at {x}")
    lg = math.lgamma(x)
    if x > 0:
        return 1.0, lg
    # Gamma is negative on (-1, 0), (-3, -2), ...
    return (-1.0 if math.floor(x) % 2 else 1.0), lg


def _rgamma_signed(x: float) -> tuple[float, float]:
    """(sign, log|1/Gamma(x)|), sign 0 when 1/Gamma vanishes."""
    if x <= 0 and x == math.floor(x):
        return 0.0, 0.0
    s, lg = _gamma_signed(x)
    return s, -lg


def _signed_series(a, b, x: float) -> tuple[float, float]:
    """sum_k prod (a)_k / prod (b)_k x^k / k! with possibly signed terms.

    Convergence is monitored over windows of 32 terms: the sum is accepted
    once a full window of terms stays below 1e-17 of the largest partial sum
    magnitude seen, after the term ratio has dropped below one.  Terms and
    partial sums are carried in extended precision where the platform has
    it, since alternating series cancel heavily at large x.  Returns the sum
    and the peak magnitude, which bounds the rounding error.
    """
    one = np.longdouble(1)
    x = np.longdouble(x)
    total = one
    term = one
    peak = 1.0
    small = 0
    for k in range(RESIDUE_MAX_TERMS):
        num = x
        for v in a:
            num *= v + k
        den = one * (k + 1)
        for v in b:
            den *= v + k
        ratio = num / den
        term *= ratio
        total += term
        peak = max(peak, abs(float(total)), abs(float(term)))
        if term == 0.0:
            return float(total), peak
        if abs(ratio) < 1.0 and abs(term) < 1e-17 * peak:
            small += 1
            if small >= _WINDOW:
                return float(total), peak
        else:
            small = 0
    raise SeriesError(f"residue branch did not converge in {RESIDUE_MAX_TERMS} terms")


def meijer_g_residue_series(p: MeijerParams, y: float) -> float:
    """G^{q,0}_{p,q}(y | arow; brow) as a sum of residues.

    The poles of prod Gamma(b_j + s) at s = -b_h - k are simple when no two
    lower parameters differ by an integer, giving::

        G = sum_h  prod_{j!=h} Gamma(b_j - b_h) / prod_i Gamma(a_i - b_h)
                  * y^{b_h} * pF_{q-1}(1 + b_h - a; 1 + b_h - b_{j!=h}; (-1)^(p-q) y)

    For p = q the series converge only for y < 1; the function vanishes for
    y > 1 in that case.  Raises :class:`SeriesError` when cancellation
    between or within the branches leaves less than about eight digits.
    """
    if not y > 0:
        raise ValueError("y must be positive")
    if not p.is_generic():
        raise DegenerateParameters(
            f"lower parameters {p.brow} contain an integer difference; "
            "pointwise evaluation unavailable"
        )
    nb, na = len(p.brow), len(p.arow)
    if na > nb:
        raise ValueError("need len(arow) <= len(brow)")
    if na == nb:
        if y > 1:
            return 0.0
        if y == 1:
            raise SeriesError("residue series does not converge at y = 1 for p = q")
    x = y if (na - nb) % 2 == 0 else -y
    logy = math.log(y)
    total = 0.0
    scale = 0.0
    for h, bh in enumerate(p.brow):
        sign = 1.0
        logc = bh * logy
        for j, bj in enumerate(p.brow):
            if j != h:
                sg, lg = _gamma_signed(bj - bh)
                sign *= sg
                logc += lg
        for ai in p.arow:
            sg, lg = _rgamma_signed(ai - bh)
            sign *= sg
            logc += lg
        if sign == 0.0:
            continue
        upper = [1.0 + bh - ai for ai in p.arow]
        lower = [1.0 + bh - bj for j, bj in enumerate(p.brow) if j != h]
        val, peak = _signed_series(upper, lower, x)
        total += sign * math.exp(logc) * val
        scale = max(scale, math.exp(logc) * peak)
    if _EPS * scale > _CANCEL_TOL * abs(total):
        raise SeriesError(f"residue series lost its precision to cancellation at y = {y}")
    return total
