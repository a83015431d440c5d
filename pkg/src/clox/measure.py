"""Resolution-of-unity measures for the coherent-state families.

The radial density of the diagonal resolution for |z; mu; alpha) is a
Meijer G-function in y = |z|^2 / lam^(lam - 2 alpha).  Inserting the state
expansion into the resolution and integrating the angle leaves the moment
problem

    int_0^inf h(y) y^k dy = 1 / (pi * lam^((lam - 2 alpha)(k+1)) * c'_k^2),

which is checked against the Mellin transform of the G-function.  Only the
overall constant is fitted (to k = 0); every k >= 1 is a genuine test.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace

import numpy as np

from .algebra import AlgebraParams
from .cstates import check_labels, glauber_log_weight, log_cs_coefficients
from .specfun import DegenerateParameters, MeijerParams, mellin_meijer_g, meijer_g_residue_series

PASS_THRESHOLD = 1e-10


@dataclass(frozen=True)
class RadialMeasure:
    mu: int
    alpha: int
    mg: MeijerParams
    logA: float

    def density(self, y: float) -> float:
        """h(y) = A * G(y); raises DegenerateParameters for confluent rows."""
        return math.exp(self.logA) * meijer_g_residue_series(self.mg, y)


def meijer_rows(params: AlgebraParams, mu: int, alpha: int) -> MeijerParams:
    lam = params.lam
    bb = params.bb
    arow = [bb(nu) - 1 for nu in range(mu + 1, mu + alpha + 1)]
    brow = [0.0] + [bb(nu) for nu in range(1, mu + 1)] + [bb(nu) - 1 for nu in range(mu + alpha + 1, lam)]
    return MeijerParams(tuple(arow), tuple(brow))


def required_moment(params: AlgebraParams, mu: int, alpha: int, k: int) -> float:
    """log of the k-th radial moment the density must have."""
    return _required_from_logc(params, alpha, k, log_cs_coefficients(params, mu, alpha, k)[k])


def _required_from_logc(params: AlgebraParams, alpha: int, k: int, logc: float) -> float:
    lam = params.lam
    return -math.log(math.pi) - (lam - 2 * alpha) * (k + 1) * math.log(lam) - 2.0 * logc


def radial_measure(params: AlgebraParams, mu: int, alpha: int) -> RadialMeasure:
    check_labels(params, mu, alpha)
    mg = meijer_rows(params, mu, alpha)
    logA = float(required_moment(params, mu, alpha, 0) - mellin_meijer_g(mg, 1.0))
    return RadialMeasure(mu, alpha, mg, logA)


def moment_mismatches(params: AlgebraParams, mu: int, alpha: int, kmax: int,
                      measure: RadialMeasure | None = None) -> np.ndarray:
    """Relative mismatch |moment(h) / required - 1| for k = 0..kmax."""
    if measure is None:
        measure = radial_measure(params, mu, alpha)
    logc = log_cs_coefficients(params, mu, alpha, kmax)
    out = np.empty(kmax + 1)
    for k in range(kmax + 1):
        diff = measure.logA + mellin_meijer_g(measure.mg, k + 1.0) - _required_from_logc(params, alpha, k, logc[k])
        out[k] = abs(math.expm1(diff))
    return out


def verify_resolution(params: AlgebraParams, mu: int, alpha: int, kmax: int = 50,
                      measure: RadialMeasure | None = None) -> float:
    """Largest relative moment mismatch over k = 0..kmax."""
    return float(np.max(moment_mismatches(params, mu, alpha, kmax, measure)))


def resolution_report(params: AlgebraParams, mu: int, alpha: int, kmax: int = 50) -> tuple[dict, list[tuple[int, float]]]:
    """Summary record and per-k (k, mismatch) rows for one family."""
    mis = moment_mismatches(params, mu, alpha, kmax)
    worst = float(np.max(mis))
    record = {
        "lambda": params.lam,
        "alpha_params": list(params.alpha),
        "mu": mu,
        "alpha": alpha,
        "kmax": kmax,
        "max_rel_error": worst,
        "status": "pass" if worst < PASS_THRESHOLD else "fail",
    }
    return record, [(k, float(v)) for k, v in enumerate(mis)]


def measures_alpha0(params: AlgebraParams) -> list[RadialMeasure]:
    return [radial_measure(params, mu, 0) for mu in range(params.lam)]


def nondiagonal_weights(params: AlgebraParams, t: float,
                        measures: list[RadialMeasure] | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Weights h_mu(t) and g_mu(t) of the eigenstate resolution of unity.

    h_mu(t) = lam^lam (prod_{nu<=mu} betabar_nu) t^(lam-mu-1) h^(0)_mu(t^lam)
    and g is the inverse discrete Fourier transform of h.  Needs pointwise
    G values, so degenerate parameters raise DegenerateParameters.
    """
    lam = params.lam
    if measures is None:
        measures = measures_alpha0(params)
    h = np.empty(lam)
    for mu, m in enumerate(measures):
        prod = math.prod(params.bb(nu) for nu in range(1, mu + 1))
        h[mu] = lam**lam * prod * t ** (lam - mu - 1) * m.density(t**lam)
    g = np.array([
        sum(cmath.exp(2j * math.pi * mu * nu / lam) * h[nu] for nu in range(lam)) / lam
        for mu in range(lam)
    ])
    return h, g


def _fourier_mix(lam: int, n: int) -> np.ndarray:
    """Coefficients c_nu with sum_mu g_mu(t) e^(-2 pi i mu n / lam) = sum_nu c_nu h_nu(t)."""
    mu = np.arange(lam)
    c = np.empty(lam, dtype=complex)
    for nu in range(lam):
        c[nu] = np.sum(np.exp(2j * np.pi * mu * (nu - n) / lam)) / lam
    return c


def nondiagonal_elements(params: AlgebraParams, kmax: int,
                         measures: list[RadialMeasure] | None = None) -> np.ndarray:
    """Fock matrix of the eigenstate resolution, n, n' < (kmax+1) lam.

    The element <n| . |n'> of sum_mu int d^2z g_mu(t) |z)(z e^(2 pi i mu/lam)|
    is w_n w_n' times an angular integral of exp(i (n - n') theta), done
    with an equal-weight rule that is exact for these trigonometric
    polynomials, times the radial integral of the Fourier-mixed weights.
    Radial moments are only taken for weights that survive the mixing; each
    is the Mellin moment of h^(0)_nu at integer order after t^lam = u.
    """
    lam = params.lam
    if measures is None:
        measures = measures_alpha0(params)
    nmax = (kmax + 1) * lam
    logw = np.array([glauber_log_weight(params, n) for n in range(nmax)])
    m_ang = 2 * nmax + 1
    theta = 2 * np.pi * np.arange(m_ang) / m_ang
    logprod = [math.fsum(math.log(params.bb(nu)) for nu in range(1, mu + 1)) for mu in range(lam)]

    shifts = np.arange(-(nmax - 1), nmax)
    by_shift = np.exp(1j * shifts[:, None] * theta).sum(axis=-1) * (2 * np.pi / m_ang)
    idx = np.arange(nmax)
    angular = by_shift[idx[:, None] - idx[None, :] + nmax - 1]

    out = angular.copy()
    for n in range(nmax):
        for n2 in range(nmax):
            ang = angular[n, n2]
            if abs(ang) < 1e-12:
                continue
            c = _fourier_mix(lam, n2)
            k, mu = divmod(n, lam)
            radial = 0.0 + 0.0j
            for nu in range(lam):
                if abs(c[nu]) < 1e-12:
                    continue
                if nu != mu:
                    raise ArithmeticError("Fourier mixing left a weight from another grade")
                # int_0^inf r dr h_nu(r^2/lam) r^(2n), with h^(0) moments at order k
                logr = ((n + 1) * math.log(lam) - math.log(2.0) + lam * math.log(lam) + logprod[nu]
                        - math.log(lam) + measures[nu].logA + mellin_meijer_g(measures[nu].mg, k + 1.0))
                radial += c[nu] * math.exp(logr + logw[n] + logw[n2])
            out[n, n2] = ang * radial
    return out


def verify_nondiagonal(params: AlgebraParams, kmax: int = 30,
                       measures: list[RadialMeasure] | None = None) -> float:
    """Max deviation of the eigenstate resolution from the identity matrix.

    Diagonal entries are compared relatively, off-diagonal ones absolutely.
    """
    m = nondiagonal_elements(params, kmax, measures)
    return float(np.max(np.abs(m - np.eye(len(m)))))


def integrable_on_disc(params: AlgebraParams, mu: int, alpha: int) -> bool:
    """Whether the alpha = lam/2 density is integrable up to y = 1.

    G^{q,0}_{q,q} behaves like (1 - y)^(sum a - sum b - 1) near y = 1.
    Families with alpha < lam/2 decay at infinity and are always integrable.
    """
    if 2 * alpha != params.lam:
        return True
    mg = meijer_rows(params, mu, alpha)
    return sum(mg.arow) - sum(mg.brow) > 0


def shifted(measure: RadialMeasure, dlogA: float) -> RadialMeasure:
    return replace(measure, logA=measure.logA + dlogA)


def sample_positivity(params: AlgebraParams, mu: int, alpha: int, ygrid) -> dict:
    """Sample h on a grid; status 'skipped' when pointwise values are unavailable."""
    m = radial_measure(params, mu, alpha)
    try:
        vals = [m.density(float(y)) for y in ygrid]
    except DegenerateParameters as exc:
        return {"status": "skipped", "reason": str(exc)}
    return {"status": "ok", "min": min(vals), "positive": all(v >= 0 for v in vals)}
