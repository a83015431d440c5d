"""Verification suites: each returns a list of check records.

A record is ``{name, max_deviation, threshold, status}`` plus an optional
``reason`` (for skipped checks) or ``note``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from . import bargmann, cstates, fock, measure
from .algebra import AlgebraParams
from .specfun import DegenerateParameters, SeriesError

log = logging.getLogger(__name__)

SUITES = ("algebra", "cs", "resolution", "nondiagonal", "bargmann", "vector-bargmann")

ALGEBRA_THRESHOLD = 1e-12
CS_THRESHOLD = 1e-10
MOMENT_THRESHOLD = 1e-10
BARGMANN_THRESHOLD = 1e-12

DEFAULT_Z_GRID = (0.0, 0.5, 0.6 + 0.6j, -1.3j, 2.0)


@dataclass
class SuiteOptions:
    dim: int = 120
    kmax: int = 50
    kmax_bargmann: int = 40
    kmax_nondiagonal: int = 30
    z_grid: tuple[complex, ...] = DEFAULT_Z_GRID
    y_grid: tuple[float, ...] = field(default_factory=lambda: tuple(np.linspace(0.05, 3.0, 12)))


def check(name: str, deviation: float, threshold: float, **extra) -> dict:
    rec = {
        "name": name,
        "max_deviation": float(deviation),
        "threshold": float(threshold),
        "status": "pass" if deviation < threshold else "fail",
    }
    rec.update(extra)
    return rec


def skipped(name: str, threshold: float, reason: str) -> dict:
    return {"name": name, "max_deviation": None, "threshold": float(threshold), "status": "skipped", "reason": reason}


def algebra_suite(params: AlgebraParams, opts: SuiteOptions) -> list[dict]:
    rep = fock.build_fock(params, opts.dim)
    out = [check(f"algebra {r['name']}", r["rel_deviation"], ALGEBRA_THRESHOLD) for r in fock.check_algebra(rep)]
    lam = params.lam
    e = fock.spectrum(params, opts.dim)
    spacing = float(np.max(np.abs(e[lam:] - e[:-lam] - lam)))
    out.append(check("spectrum E(n+lam) - E(n) - lam", spacing, ALGEBRA_THRESHOLD))
    diag = np.real(np.diag(rep.h0))[: opts.dim - 1]
    out.append(check("spectrum vs diagonal of H0", float(np.max(np.abs(diag - e[: opts.dim - 1]))), ALGEBRA_THRESHOLD))
    return out


def cs_suite(params: AlgebraParams, opts: SuiteOptions) -> list[dict]:
    lam = params.lam
    out = []
    for mu, alpha in cstates.valid_labels(params):
        res, nrm, skipped_z = 0.0, 0.0, []
        for z in opts.z_grid:
            if 2 * alpha == lam and abs(z) >= 0.9:
                skipped_z.append(z)
                continue
            v = cstates.cs_build(params, z, mu, alpha)
            res = max(res, cstates.cs_residual(params, v, z, alpha))
            closed = cstates.cs_norm(params, mu, alpha, abs(z))
            nrm = max(nrm, abs(cstates.recursion_norm(params, mu, alpha, abs(z)) / closed - 1.0))
        label = f"mu={mu} alpha={alpha}"
        out.append(check(f"cs residual {label}", res, CS_THRESHOLD))
        out.append(check(f"cs norm recursion vs pFq {label}", nrm, CS_THRESHOLD))
        if skipped_z:
            out.append(skipped(f"cs {label} outside unit disc", CS_THRESHOLD,
                               f"{len(skipped_z)} grid labels with |z| >= 0.9 excluded for alpha = lam/2"))
    eig, eig_norm = 0.0, 0.0
    for z in opts.z_grid:
        eig_norm = max(eig_norm, cstates.eigen_norm_mismatch(params, z))
        ecs, v = cstates.eigen_cs_build(params, z)
        eig = max(eig, cstates.eigen_residual(params, v, z))
    out.append(check("eigenstate residual |a v - z v|", eig, CS_THRESHOLD))
    out.append(check("eigenstate norm assembled vs closed form", eig_norm, CS_THRESHOLD))
    return out


def resolution_suite(params: AlgebraParams, opts: SuiteOptions) -> list[dict]:
    """Moment checks of the diagonal resolutions plus sampled density reports.

    Positivity and integrability of the density depend on the parameters, so
    they are emitted with status "report" and never fail the suite.
    """
    lam = params.lam
    out = []
    for mu, alpha in cstates.valid_labels(params):
        rec, _ = measure.resolution_report(params, mu, alpha, opts.kmax)
        dev = rec["max_rel_error"]
        notes = []
        if 2 * alpha == lam and lam >= 8:
            notes.append("conjectured density; numerical evidence only")
        if 2 * alpha == lam and not measure.integrable_on_disc(params, mu, alpha):
            notes.append("density not integrable at |z| = 1; moments hold by analytic continuation")
        extra = {"mu": mu, "alpha": alpha, "kmax": opts.kmax}
        if notes:
            extra["note"] = "; ".join(notes)
        out.append(check(f"resolution mu={mu} alpha={alpha} k<={opts.kmax}", dev, MOMENT_THRESHOLD, **extra))
    for mu, alpha in cstates.valid_labels(params):
        name = f"density positivity mu={mu} alpha={alpha}"
        grid = [y for y in opts.y_grid if not (2 * alpha == lam and y >= 1.0)]
        try:
            res = measure.sample_positivity(params, mu, alpha, grid)
        except SeriesError as exc:
            out.append(skipped(name, 0.0, str(exc)))
            continue
        if res["status"] == "skipped":
            out.append(skipped(name, 0.0, res["reason"]))
        else:
            out.append({"name": name, "max_deviation": max(0.0, -res["min"]), "threshold": 0.0,
                        "status": "report", "positive": res["positive"], "note": "sampled, not proved"})
    return out


def nondiagonal_suite(params: AlgebraParams, opts: SuiteOptions) -> list[dict]:
    dev = measure.verify_nondiagonal(params, opts.kmax_nondiagonal)
    out = [check(f"nondiagonal resolution k<={opts.kmax_nondiagonal}", dev, MOMENT_THRESHOLD)]
    name = "nondiagonal Fourier inversion of weights"
    try:
        worst = 0.0
        lam = params.lam
        for t in (0.3, 0.8, 1.5):
            h, g = measure.nondiagonal_weights(params, t)
            back = [sum(g[mu] * np.exp(-2j * np.pi * mu * nu / lam) for mu in range(lam)) for nu in range(lam)]
            worst = max(worst, float(np.max(np.abs(np.array(back) - h) / np.maximum(np.abs(h), 1e-300))))
        out.append(check(name, worst, MOMENT_THRESHOLD))
    except DegenerateParameters as exc:
        out.append(skipped(name, MOMENT_THRESHOLD, f"{exc}; moments verified instead"))
    return out


def bargmann_suite(params: AlgebraParams, opts: SuiteOptions) -> list[dict]:
    k = opts.kmax_bargmann
    rep = fock.build_fock(params, (k + 3) * params.lam)
    out = []
    for mu, alpha in cstates.valid_labels(params):
        for gen, dev in bargmann.sga_mismatches(params, mu, alpha, k, rep).items():
            out.append(check(f"bargmann {gen} mu={mu} alpha={alpha} k<={k}", dev, BARGMANN_THRESHOLD))
        dev = bargmann.sga_commutator_mismatch(params, mu, alpha, k)
        out.append(check(f"bargmann [J0,J+-] mu={mu} alpha={alpha}", dev, BARGMANN_THRESHOLD))
    return out


def vector_bargmann_suite(params: AlgebraParams, opts: SuiteOptions) -> list[dict]:
    k = opts.kmax_bargmann
    return [check(f"vector bargmann {name} n<={k}", dev, BARGMANN_THRESHOLD)
            for name, dev in bargmann.vector_mismatches(params, k).items()]


_RUNNERS = {
    "algebra": algebra_suite,
    "cs": cs_suite,
    "resolution": resolution_suite,
    "nondiagonal": nondiagonal_suite,
    "bargmann": bargmann_suite,
    "vector-bargmann": vector_bargmann_suite,
}


def run_suite(name: str, params: AlgebraParams, opts: SuiteOptions) -> list[dict]:
    names = SUITES if name == "all" else (name,)
    out = []
    for n in names:
        if n not in _RUNNERS:
            raise KeyError(f"unknown suite {n!r}")
        log.info("running suite %s", n)
        out.extend(_RUNNERS[n](params, opts))
    return out


def all_passed(checks: list[dict]) -> bool:
    return all(c["status"] != "fail" for c in checks)
