"""Parameters of the C_lambda-extended oscillator and its structure function.

The algebra is fixed by the group order ``lam`` and real parameters
``alpha[0..lam-1]`` summing to zero.  Everything downstream is driven by the
partial sums ``beta`` and the shifted values ``betabar``::

    beta[mu]    = alpha[0] + ... + alpha[mu-1]        (beta[0] = beta[lam] = 0)
    betabar[mu] = (beta[mu] + mu) / lam

and by the structure function ``F(n) = n + beta[n mod lam]``, the eigenvalue
of ``a^dagger a`` on the number state ``|n>``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

SUM_TOL = 1e-12


class ParameterError(ValueError):
    """Raised for inconsistent or non-admissible algebra parameters."""


@dataclass(frozen=True)
class AlgebraParams:
    lam: int
    alpha: tuple[float, ...]
    beta: tuple[float, ...] = field(repr=False)
    betabar: tuple[float, ...] = field(repr=False)
    tol: float = 1e-10

    def bb(self, nu: int) -> float:
        """betabar with the extended index convention.

        ``bb(0) = 0``, ``bb(lam) = 1`` and ``bb(nu + lam) = bb(nu) + 1``.
        """
        q, r = divmod(nu, self.lam)
        return q + (0.0 if r == 0 else self.betabar[r - 1])

    def grade(self, n: int) -> int:
        return n % self.lam


def validate_params(lam: int, alpha, tol: float = 1e-10) -> AlgebraParams:
    """Check the parameters and return a populated :class:`AlgebraParams`.

    Raises :class:`ParameterError` if ``sum(alpha) != 0`` (within 1e-12) or if
    any ``betabar[mu] <= 0``, which would give a zero or negative norm to some
    number state.
    """
    lam = int(lam)
    if lam < 2:
        raise ParameterError(f"group order must be >= 2, got {lam}")
    alpha = tuple(float(a) for a in alpha)
    if len(alpha) != lam:
        raise ParameterError(f"expected {lam} alpha values, got {len(alpha)}")
    if not all(math.isfinite(a) for a in alpha):
        raise ParameterError("alpha values must be finite")
    if not tol > 0:
        raise ParameterError("tol must be positive")
    total = math.fsum(alpha)
    if abs(total) > SUM_TOL:
        raise ParameterError(f"alpha must sum to zero, got {total:.3e}")

    beta = [0.0]
    for mu in range(1, lam):
        beta.append(math.fsum(alpha[:mu]))
    beta.append(0.0)
    betabar = tuple((beta[mu] + mu) / lam for mu in range(1, lam))
    for mu, b in enumerate(betabar, start=1):
        if not b > 0:
            raise ParameterError(
                f"betabar[{mu}] = {b:.6g} is not positive: F({mu}) <= 0, "
                "no unitary Fock representation"
            )
    return AlgebraParams(lam=lam, alpha=alpha, beta=tuple(beta), betabar=betabar, tol=float(tol))


def params_from_betabar(betabar, tol: float = 1e-10) -> AlgebraParams:
    """Back-solve alpha from prescribed positive ``betabar[1..lam-1]``."""
    betabar = [float(b) for b in betabar]
    lam = len(betabar) + 1
    beta = [0.0] + [lam * b - mu for mu, b in enumerate(betabar, start=1)] + [0.0]
    alpha = [beta[mu + 1] - beta[mu] for mu in range(lam)]
    # the back-solved alphas telescope to zero only up to rounding
    alpha[-1] = -math.fsum(alpha[:-1])
    return validate_params(lam, alpha, tol)


def random_params(lam: int, rng: np.random.Generator, low: float = 0.1, high: float = 3.0) -> AlgebraParams:
    """Admissible parameters with ``betabar`` drawn uniformly from (low, high)."""
    return params_from_betabar(rng.uniform(low, high, size=lam - 1))


def structure_function(params: AlgebraParams, n: int) -> float:
    """F(n) = n + beta[n mod lam]."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return n + params.beta[n % params.lam]


def structure_values(params: AlgebraParams, nmax: int) -> np.ndarray:
    """Array of F(0), ..., F(nmax)."""
    n = np.arange(nmax + 1)
    return n + np.asarray(params.beta[:-1])[n % params.lam]


def log_structure_factorial(params: AlgebraParams, n: int) -> float:
    """log(F(1) F(2) ... F(n))."""
    return math.fsum(math.log(structure_function(params, m)) for m in range(1, n + 1))


def kappa_from_alpha(params: AlgebraParams) -> list[complex]:
    """Coefficients of sum_mu kappa_mu T^mu equal to sum_mu alpha_mu P_mu.

    kappa_nu = (1/lam) sum_mu alpha_mu exp(-2 pi i mu nu / lam).
    """
    lam = params.lam
    out = []
    for nu in range(lam):
        acc = sum(a * cmath.exp(-2j * math.pi * mu * nu / lam) for mu, a in enumerate(params.alpha))
        out.append(acc / lam)
    # kappa_0 is the plain sum of alphas, zero by validation
    out[0] = complex(0.0, 0.0)
    return out


def alpha_from_kappa(kappa) -> list[float]:
    """Inverse transform: alpha_mu = sum_nu kappa_nu exp(2 pi i mu nu / lam)."""
    lam = len(kappa)
    return [
        sum(k * cmath.exp(2j * math.pi * mu * nu / lam) for nu, k in enumerate(kappa)).real
        for mu in range(lam)
    ]
