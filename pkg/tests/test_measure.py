import math

import mpmath as mp
import numpy as np
import pytest
from scipy import integrate

from clox.algebra import params_from_betabar, random_params, validate_params
from clox.cstates import log_cs_coefficients, valid_labels
from clox.measure import (
    integrable_on_disc,
    meijer_rows,
    moment_mismatches,
    nondiagonal_elements,
    radial_measure,
    required_moment,
    sample_positivity,
    shifted,
    verify_nondiagonal,
    verify_resolution,
)
from clox.specfun import DegenerateParameters, MeijerParams

BOSON = validate_params(2, (0, 0))
GENERIC3 = params_from_betabar((0.41, 0.87))


def test_boson_rows_and_density():
    mg = meijer_rows(BOSON, 0, 0)
    assert mg.arow == () and mg.brow == (0.0, -0.5)
    assert meijer_rows(BOSON, 1, 0).brow == (0.0, 0.5)
    # h = A sqrt(pi) y^(-1/2) exp(-2 sqrt(y)) for the even boson family
    m = radial_measure(BOSON, 0, 0)
    for y in (0.1, 1.0, 7.0):
        ref = math.exp(m.logA) * math.sqrt(math.pi / y) * math.exp(-2 * math.sqrt(y))
        assert m.density(y) == pytest.approx(ref, rel=1e-9)


def test_degenerate_rows_raise():
    p = validate_params(2, (1, -1))
    with pytest.raises(DegenerateParameters):
        radial_measure(p, 0, 0).density(0.5)


def test_required_moment_boson():
    # |z;0;0> has c'_k = 1/sqrt((2k)!), L = 4
    for k in range(6):
        ref = -math.log(math.pi) - 2 * (k + 1) * math.log(2) + math.lgamma(2 * k + 1)
        assert required_moment(BOSON, 0, 0, k) == pytest.approx(ref, abs=1e-12)


@pytest.mark.parametrize("mu,alpha", [(0, 0), (1, 0), (2, 0), (0, 1), (1, 1)])
def test_moments_by_mpmath_quadrature(mu, alpha):
    # quadrature of mpmath's own G, independent of the Mellin formula;
    # G decays like exp(-d y^(1/d)) with d = lam - 2 alpha
    mp.mp.dps = 20
    m = radial_measure(GENERIC3, mu, alpha)
    d = GENERIC3.lam - 2 * alpha
    top = (45.0 / d) ** d
    pts = [0, 1] + [float(v) for v in np.geomspace(10, top, 4)]
    g = lambda y: mp.meijerg([[], list(m.mg.arow)], [list(m.mg.brow), []], y)
    for k in (0, 2):
        val = float(mp.quad(lambda y: g(y) * y**k, pts)) * math.exp(m.logA)
        assert val == pytest.approx(math.exp(required_moment(GENERIC3, mu, alpha, k)), rel=1e-8)


def test_half_lambda_closed_form():
    # lam = 2, alpha0 = 2: G^{1,0}_{1,1}(y | 1/2; 0) = (1 - y)^(-1/2) / Gamma(1/2) on (0, 1)
    p = validate_params(2, (2, -2))
    m = radial_measure(p, 0, 1)
    assert m.mg.arow == (0.5,) and m.mg.brow == (0.0,)
    closed = lambda y: math.exp(m.logA) * (1 - y) ** -0.5 / math.sqrt(math.pi)
    for y in (0.05, 0.3, 0.8):
        assert m.density(y) == pytest.approx(closed(y), rel=1e-10)
    for k in (0, 1, 3, 7):
        val = integrate.quad(lambda y: y**k * math.exp(m.logA) / math.sqrt(math.pi), 0, 1,
                             weight="alg", wvar=(0, -0.5))[0]
        assert val == pytest.approx(math.exp(required_moment(p, 0, 1, k)), rel=1e-10)


def test_density_against_mpmath():
    for mu, alpha in valid_labels(GENERIC3):
        m = radial_measure(GENERIC3, mu, alpha)
        for y in (0.1, 0.5, 2.0):
            if 2 * alpha == GENERIC3.lam and y >= 1:
                continue
            ref = math.exp(m.logA) * float(mp.meijerg([[], list(m.mg.arow)], [list(m.mg.brow), []], y))
            assert m.density(y) == pytest.approx(ref, rel=1e-9)


@pytest.mark.parametrize("k", [0, 1, 3])
def test_two_dimensional_quadrature(k):
    # <2k| int d^2z h(|z|^2/4) |z;0;0)(z;0;0| |2k> = 1 for bosons, with the
    # closed-form density A sqrt(pi) y^(-1/2) exp(-2 sqrt(y))
    m = radial_measure(BOSON, 0, 0)
    ck2 = 1.0 / math.factorial(2 * k)

    def integrand(theta, r):
        y = r * r / 4
        h = math.exp(m.logA) * math.sqrt(math.pi / y) * math.exp(-2 * math.sqrt(y))
        return r * h * ck2 * r ** (2 * k)

    val = integrate.dblquad(integrand, 0, 80, 0, 2 * math.pi, epsabs=0, epsrel=1e-11)[0]
    assert val == pytest.approx(1.0, rel=1e-9)


@pytest.mark.parametrize("lam", [2, 3, 4, 5, 6])
def test_resolution_random(rng, lam):
    for _ in range(3):
        p = random_params(lam, rng)
        for mu, alpha in valid_labels(p):
            assert verify_resolution(p, mu, alpha, 50) < 1e-10


def test_resolution_reference(ref_params):
    for mu, alpha in valid_labels(ref_params):
        assert verify_resolution(ref_params, mu, alpha, 50) < 1e-10


def test_corrupted_constant_detected():
    m = radial_measure(GENERIC3, 1, 0)
    assert verify_resolution(GENERIC3, 1, 0, 10, shifted(m, 1e-6)) > 5e-7


def test_corrupted_row_detected():
    m = radial_measure(GENERIC3, 1, 0)
    bad = type(m)(m.mu, m.alpha, MeijerParams(m.mg.arow, (m.mg.brow[0], m.mg.brow[1] + 1e-6, *m.mg.brow[2:])), m.logA)
    mis = moment_mismatches(GENERIC3, 1, 0, 10, bad)
    assert mis[0] < 1e-5 and mis[10] > 1e-6


def test_half_lambda_families_and_conjecture_regime():
    for alpha in [(0.3, -0.3), (0.5, -0.25, 0.25, -0.5), (0.25, -0.5, 0.125, 0.25, -0.375, 0.25),
                  (0.25, -0.125, 0.25, -0.25, 0.125, -0.25, 0.125, -0.125)]:
        p = validate_params(len(alpha), alpha)
        for mu in range(p.lam // 2):
            assert verify_resolution(p, mu, p.lam // 2, 50) < 1e-10


def test_integrability_flag():
    assert not integrable_on_disc(BOSON, 0, 1)
    assert integrable_on_disc(BOSON, 0, 0)
    p = validate_params(2, (2, -2))
    # arow = betabar_1 - 1 = 1/2 > brow sum 0
    assert integrable_on_disc(p, 0, 1)


def test_positivity_report():
    res = sample_positivity(GENERIC3, 1, 0, np.linspace(0.05, 3, 12))
    assert res["status"] == "ok" and res["positive"]
    assert sample_positivity(validate_params(2, (1, -1)), 0, 0, [0.5])["status"] == "skipped"


def test_negative_density_exists():
    # sampled densities are not always positive; mpmath confirms the sign
    p = validate_params(6, (0.25, -0.5, 0.125, 0.25, -0.375, 0.25))
    m = radial_measure(p, 0, 2)
    ref = float(mp.meijerg([[], list(m.mg.arow)], [list(m.mg.brow), []], 0.05))
    assert m.density(0.05) < 0 and ref < 0


@pytest.mark.parametrize("alpha", [(0, 0), (2, -2), (1, 0, -1), (0.5, -0.25, 0.25, -0.5)])
def test_nondiagonal_identity(alpha):
    p = validate_params(len(alpha), alpha)
    assert verify_nondiagonal(p, 30) < 1e-10


def test_nondiagonal_random(rng):
    for lam in (3, 5):
        assert verify_nondiagonal(random_params(lam, rng), 20) < 1e-10


def test_nondiagonal_corruption_detected():
    p = validate_params(3, (1, 0, -1))
    ms = [radial_measure(p, mu, 0) for mu in range(3)]
    ms[1] = shifted(ms[1], 1e-6)
    assert verify_nondiagonal(p, 10, ms) > 5e-7
    assert nondiagonal_elements(p, 5).shape == (18, 18)


def test_required_moment_examples():
    assert required_moment(BOSON, 0, 0, 0) == pytest.approx(math.log(1 / (4 * math.pi)), abs=1e-15)
    assert required_moment(BOSON, 0, 0, 1) == pytest.approx(math.log(2 / (16 * math.pi)), abs=1e-15)
    p = validate_params(3, (1, 0, -1))
    for mu, alpha in valid_labels(p):
        logc = log_cs_coefficients(p, mu, alpha, 12)
        for k in range(12):
            # required(k) / required(k+1) = lam^(lam - 2 alpha) (c'_(k+1) / c'_k)^2
            ratio = required_moment(p, mu, alpha, k) - required_moment(p, mu, alpha, k + 1)
            ref = (3 - 2 * alpha) * math.log(3) + 2 * (logc[k + 1] - logc[k])
            assert ratio == pytest.approx(ref, abs=1e-12)


def test_boson_resolution_tight():
    assert verify_resolution(BOSON, 0, 0, 50) < 1e-12
    assert verify_nondiagonal(BOSON, 30) < 1e-12


def test_resolution_report_fields():
    from clox.measure import resolution_report

    rec, rows = resolution_report(GENERIC3, 1, 1, 20)
    assert list(rec) == ["lambda", "alpha_params", "mu", "alpha", "kmax", "max_rel_error", "status"]
    assert rec["status"] == "pass" and len(rows) == 21 and rows[0][0] == 0
