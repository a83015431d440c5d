"""Command-line entry point: ``clox spectrum|cs|density|verify|sweep``.

Exit codes: 0 success, 1 a check failed, 2 bad configuration or input.
The log level is taken from the ``CLOX_LOG_LEVEL`` environment variable.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__, cstates, fock, measure, suites
from .algebra import AlgebraParams, ParameterError, random_params, validate_params
from .report import csv_text, dumps, write_atomic
from .specfun import DegenerateParameters, SeriesError

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

log = logging.getLogger("clox")

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    lam: int = 2
    alpha: tuple[float, ...] = (0.0, 0.0)
    tol: float = 1e-10
    dim: int | None = None
    kmax: int = 50
    kmax_bargmann: int = 40
    kmax_nondiagonal: int = 30
    z_grid: tuple[complex, ...] = suites.DEFAULT_Z_GRID
    y_grid: tuple[float, ...] = ()
    mu: int = 0
    alpha_cs: int = 0
    seed: int = 0
    output: str | None = None
    format: str = "json"
    source: str | None = field(default=None, repr=False)

    def params(self) -> AlgebraParams:
        return validate_params(self.lam, self.alpha, self.tol)

    def resolved_dim(self) -> int:
        need = (self.kmax + 2) * self.lam
        if self.dim is None:
            return max(120, need)
        if self.dim < need:
            raise ConfigError(f"dim = {self.dim} is below (kmax + 2) * lambda = {need}")
        return self.dim

    def echo(self) -> dict:
        return {
            "lambda": self.lam,
            "alpha": list(self.alpha),
            "tol": self.tol,
            "dim": self.dim,
            "kmax": self.kmax,
            "kmax_bargmann": self.kmax_bargmann,
            "kmax_nondiagonal": self.kmax_nondiagonal,
            "z_grid": [[z.real, z.imag] for z in self.z_grid],
            "seed": self.seed,
        }


def _parse_complex(value) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, str):
        parts = value.split(",")
        if len(parts) == 1:
            return complex(float(parts[0]))
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    raise ConfigError(f"cannot read complex label from {value!r}")


def load_config(path: str | None) -> RunConfig:
    """Read a TOML config with sections [algebra], [run] and [output]."""
    cfg = RunConfig()
    if path is None:
        return cfg
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    alg = data.get("algebra", {})
    run = data.get("run", {})
    outp = data.get("output", {})
    unknown = set(data) - {"algebra", "run", "output"}
    if unknown:
        raise ConfigError(f"unknown config sections: {sorted(unknown)}")
    try:
        cfg.lam = int(alg.get("lambda", cfg.lam))
        cfg.alpha = tuple(float(a) for a in alg.get("alpha", [0.0] * cfg.lam))
        cfg.tol = float(alg.get("tol", cfg.tol))
        if "dim" in run:
            cfg.dim = int(run["dim"])
        cfg.kmax = int(run.get("kmax", cfg.kmax))
        cfg.kmax_bargmann = int(run.get("kmax_bargmann", cfg.kmax_bargmann))
        cfg.kmax_nondiagonal = int(run.get("kmax_nondiagonal", cfg.kmax_nondiagonal))
        if "z_grid" in run:
            cfg.z_grid = tuple(_parse_complex(z) for z in run["z_grid"])
        if "y_grid" in run:
            cfg.y_grid = tuple(float(y) for y in run["y_grid"])
        cfg.mu = int(run.get("mu", cfg.mu))
        cfg.alpha_cs = int(run.get("alpha_cs", cfg.alpha_cs))
        cfg.seed = int(run.get("seed", cfg.seed))
        cfg.output = outp.get("path") or None
        cfg.format = str(outp.get("format", cfg.format))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad value in {path}: {exc}") from exc
    cfg.source = path
    return cfg


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.output:
        write_atomic(cfg.output, text)
    else:
        sys.stdout.write(text)


def _options(cfg: RunConfig) -> suites.SuiteOptions:
    opts = suites.SuiteOptions(
        dim=cfg.resolved_dim(),
        kmax=cfg.kmax,
        kmax_bargmann=cfg.kmax_bargmann,
        kmax_nondiagonal=cfg.kmax_nondiagonal,
        z_grid=cfg.z_grid,
    )
    if cfg.y_grid:
        opts.y_grid = cfg.y_grid
    return opts


def _report(cfg: RunConfig, checks: list[dict]) -> str:
    if cfg.format == "csv":
        rows = [(c["name"], c["max_deviation"] if c["max_deviation"] is not None else "",
                 c["threshold"], c["status"]) for c in checks]
        return csv_text(["name", "max_deviation", "threshold", "status"], rows)
    return dumps({"config_echo": cfg.echo(), "checks": checks, "version": __version__})


def cmd_spectrum(cfg: RunConfig, args) -> int:
    params = cfg.params()
    nmax = args.nmax if args.nmax is not None else cfg.resolved_dim() - 1
    e = fock.spectrum(params, nmax)
    rows = [(n, float(e[n]), n % params.lam) for n in range(nmax + 1)]
    if cfg.format == "csv":
        _emit(cfg, csv_text(["n", "E_n", "grade"], rows))
    else:
        _emit(cfg, dumps({"config_echo": cfg.echo(),
                          "spectrum": [{"n": n, "E": en, "grade": g} for n, en, g in rows],
                          "version": __version__}))
    return EXIT_OK


def cmd_cs(cfg: RunConfig, args) -> int:
    params = cfg.params()
    z = _parse_complex(args.z) if args.z is not None else (cfg.z_grid[0] if cfg.z_grid else 0j)
    mu = cfg.mu if args.mu is None else args.mu
    alpha = cfg.alpha_cs if args.alpha_cs is None else args.alpha_cs
    state = cstates.coherent_state(params, z, mu, alpha)
    v = state.vector()
    closed = cstates.cs_norm(params, mu, alpha, abs(z))
    rec = state.to_dict()
    rec["norm_closed_form"] = closed
    rec["norm_relative_gap"] = abs(state.norm / closed - 1.0)
    rec["residual"] = cstates.cs_residual(params, v, z, alpha)
    rec["dim"] = len(v)
    if cfg.format == "csv":
        _emit(cfg, csv_text(["k", "n", "coefficient"],
                            [(k, k * params.lam + mu, c) for k, c in enumerate(state.cprime)],
                            notes=[f"norm={state.norm!r}", f"residual={rec['residual']!r}"]))
    else:
        _emit(cfg, dumps({"config_echo": cfg.echo(), "state": rec, "version": __version__}))
    return EXIT_OK


def cmd_density(cfg: RunConfig, args) -> int:
    params = cfg.params()
    mu = cfg.mu if args.mu is None else args.mu
    alpha = cfg.alpha_cs if args.alpha_cs is None else args.alpha_cs
    if args.y_grid:
        ygrid = [float(y) for y in args.y_grid.split(",")]
    else:
        ygrid = list(cfg.y_grid) or [float(y) for y in np.linspace(0.0, 5.0, 26)]
    m = measure.radial_measure(params, mu, alpha)
    notes = [f"h(y) = A * G(y), log A = {m.logA!r}",
             f"arow = {list(m.mg.arow)}, brow = {list(m.mg.brow)}"]
    rows = []
    if any(y <= 0 for y in ygrid):
        notes.append("y <= 0 rows omitted: possible endpoint singularity")
    for y in ygrid:
        if y <= 0:
            continue
        try:
            rows.append((y, m.density(y)))
        except DegenerateParameters:
            notes.append("pointwise evaluation unavailable for degenerate parameters; moments verified")
            rows = []
            break
        except SeriesError as exc:
            notes.append(f"y = {y!r} omitted: {exc}")
    _emit(cfg, csv_text(["y", "h"], rows, notes))
    return EXIT_OK


def cmd_verify(cfg: RunConfig, args) -> int:
    params = cfg.params()
    checks = suites.run_suite(args.suite, params, _options(cfg))
    _emit(cfg, _report(cfg, checks))
    failed = [c["name"] for c in checks if c["status"] == "fail"]
    for name in failed:
        log.error("check failed: %s", name)
    return EXIT_OK if not failed else EXIT_FAIL


def cmd_sweep(cfg: RunConfig, args) -> int:
    """Resolution, algebra and Bargmann checks over seeded random parameters."""
    rng = np.random.default_rng(cfg.seed if args.seed is None else args.seed)
    lams = [int(v) for v in args.lambdas.split(",")]
    opts = _options(cfg)
    checks = []
    for lam in lams:
        for i in range(args.count):
            params = random_params(lam, rng)
            opts.dim = max(120, (opts.kmax + 2) * lam)
            tag = f"lam={lam} #{i}"
            for suite in ("algebra", "resolution", "bargmann"):
                for c in suites.run_suite(suite, params, opts):
                    c = dict(c, name=f"{tag} {c['name']}", alpha_params=list(params.alpha))
                    checks.append(c)
    _emit(cfg, _report(cfg, checks))
    return EXIT_OK if suites.all_passed(checks) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="TOML config file")
    common.add_argument("--kmax", type=int)
    common.add_argument("--dim", type=int)
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--format", choices=("json", "csv"))

    parser = argparse.ArgumentParser(prog="clox", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", parents=[common], help="energy levels E_n")
    p.add_argument("--nmax", type=int)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("cs", parents=[common], help="coherent state |z; mu; alpha>")
    p.add_argument("--z", help="label as RE,IM")
    p.add_argument("--mu", type=int)
    p.add_argument("--alpha-cs", type=int)
    p.set_defaults(func=cmd_cs)

    p = sub.add_parser("density", parents=[common], help="tabulate the radial density h(y)")
    p.add_argument("--mu", type=int)
    p.add_argument("--alpha-cs", type=int)
    p.add_argument("--y-grid", help="comma separated y values")
    p.set_defaults(func=cmd_density, format_default="csv")

    p = sub.add_parser("verify", parents=[common], help="run verification suites")
    p.add_argument("--suite", default="all", choices=(*suites.SUITES, "all"))
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", parents=[common], help="checks over seeded random parameters")
    p.add_argument("--lambdas", default="2,3,4,5,6")
    p.add_argument("--count", type=int, default=5)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get("CLOX_LOG_LEVEL", "WARNING").upper(),
                        format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.kmax is not None:
            cfg.kmax = args.kmax
        if args.dim is not None:
            cfg.dim = args.dim
        if args.out is not None:
            cfg.output = args.out
        if args.format is not None:
            cfg.format = args.format
        elif getattr(args, "format_default", None):
            cfg.format = args.format_default
        if cfg.format not in ("json", "csv"):
            raise ConfigError(f"unknown format {cfg.format!r}")
        return args.func(cfg, args)
    except (ConfigError, ParameterError, cstates.DomainError) as exc:
        log.error("%s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
