"""Command-line front end.

Exit codes: 0 success, 1 a check failed, 2 invalid input, 3 numerical
non-convergence.  Errors are reported as one JSON object on stderr.
Results are printed as JSON with sorted keys; floats use the shortest
representation that round-trips (at most 17 significant digits) and
non-finite values are the strings ``"inf"``, ``"-inf"`` and ``"nan"``.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .errors import (BracketError, HighEnergyError, InvalidInput, NotInOrliczSpace, QuadratureError)
from .quadrature import DEFAULT_SPEC, QuadratureSpec

EXIT_OK, EXIT_CHECK_FAILED, EXIT_INPUT, EXIT_NONCONVERGENCE = 0, 1, 2, 3
COMMANDS = ("energy", "jenergy", "solve", "subext", "verify", "kappa", "fit", "bedford")


class CliError(Exception):
    def __init__(self, message: str, code: int, kind: str = "input"):
        super().__init__(message)
        self.code = code
        self.kind = kind


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message, EXIT_INPUT, "usage")


@dataclass
class RunConfig:
    """Validated settings of one invocation."""

    command: str
    weight: str = "poly:p=1"
    profile: Optional[str] = None
    measure: Optional[str] = None
    n: list = field(default_factory=lambda: [1])
    quad_rel_tol: Optional[float] = None
    out: Optional[str] = None
    csv: Optional[str] = None
    suite: str = "all"
    family: str = "trunc"
    budget: int = 200
    samples: int = 32
    seed_order: Optional[str] = None
    log_radius: float = 1.0
    workers: Optional[int] = None
    weight_given: bool = False

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise InvalidInput(f"unknown command {self.command!r}")
        if not self.n or any(int(k) < 1 for k in self.n):
            raise InvalidInput("dimension n must be at least 1")
        if self.quad_rel_tol is not None and not (0 < self.quad_rel_tol < 1):
            raise InvalidInput("--quad-rel-tol must lie in (0, 1)")
        if self.measure and self.measure.startswith("table:") and not os.path.isfile(self.measure[6:]):
            raise InvalidInput(f"measure table {self.measure[6:]!r} does not exist")
        needs_profile = {"energy", "jenergy", "subext", "bedford"}
        needs_measure = {"solve", "kappa", "fit"}
        if self.command in needs_profile and not self.profile:
            raise InvalidInput(f"{self.command} needs --profile")
        if self.command in needs_measure and not self.measure:
            raise InvalidInput(f"{self.command} needs --measure")
        if self.budget < 1 or self.samples < 1:
            raise InvalidInput("--budget and --samples must be positive")

    @property
    def dimension(self) -> int:
        return int(self.n[0])

    @property
    def spec(self) -> QuadratureSpec:
        if self.quad_rel_tol is None:
            return DEFAULT_SPEC
        return QuadratureSpec(rel_tol=self.quad_rel_tol, abs_tol=DEFAULT_SPEC.abs_tol,
                              max_depth=DEFAULT_SPEC.max_depth, max_blocks=DEFAULT_SPEC.max_blocks)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isfinite(x):
            return x
        return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")
    return obj


def dumps(obj) -> str:
    """Deterministic JSON text."""
    return json.dumps(_jsonable(obj), sort_keys=True, indent=2)


def _write_csv(path: str, rows: Sequence[Sequence]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "y", "series"])
        for r in rows:
            writer.writerow([repr(float(r[0])), repr(float(r[1])), r[2]])


# -- commands -----------------------------------------------------------------

def _cmd_energy(cfg: RunConfig, capacity: bool):
    from .radial import energy_solution, j_energy_solution
    from .specs import parse_profile, parse_weight
    g = parse_profile(cfg.profile, cfg.dimension)
    w = parse_weight(cfg.weight)
    sol = (j_energy_solution if capacity else energy_solution)(g, w, cfg.spec)
    return {"value": sol.value, "solver": sol.to_json(), "profile": g.to_json(), "weight": w.to_json(),
            "n": cfg.dimension}, EXIT_OK, []


def _cmd_solve(cfg: RunConfig):
    from .radial import dirichlet_solve
    from .specs import parse_measure
    mu = parse_measure(cfg.measure, cfg.dimension)
    g = dirichlet_solve(mu, cfg.dimension)
    s = np.unique(np.concatenate([-np.geomspace(1e-3, 20.0, 64)[::-1], [0.0],
                                  [k for k in mu.s_kinks() if math.isfinite(k) and k >= -20.0]]))
    gs = np.asarray(g.g(s), dtype=float)
    ms = np.asarray(mu.m_closed(s), dtype=float)
    result = {"measure": mu.to_json(), "n": cfg.dimension, "total_mass": mu.total,
              "lower": g.lower, "bounded": math.isfinite(g.lower),
              "samples": {"s": s.tolist(), "g": gs.tolist()}}
    rows = [(a, b, "g") for a, b in zip(s, gs)] + [(a, b, "mass") for a, b in zip(s, ms)]
    return result, EXIT_OK, rows


def _cmd_subext(cfg: RunConfig):
    from .radial import energy, subextension
    from .specs import parse_profile, parse_weight
    if not cfg.log_radius > 0:
        raise InvalidInput("--log-radius must be positive")
    g = parse_profile(cfg.profile, cfg.dimension)
    w = parse_weight(cfg.weight)
    sub = subextension(g, cfg.log_radius)
    e0, e1 = energy(g, w, cfg.spec), energy(sub, w, cfg.spec)
    s = np.linspace(-8.0, cfg.log_radius, 161)
    rows = [(a, b, "original") for a, b in zip(s[s <= 0], np.asarray(g.g(s[s <= 0])))]
    rows += [(a, b, "subextension") for a, b in zip(s, np.asarray(sub.g(s)))]
    return {"profile": g.to_json(), "log_radius": cfg.log_radius, "contact": sub.s_star,
            "slope": sub.slope_star, "energy": e0, "energy_subextension": e1,
            "decreases": e1 <= e0 * (1 + 1e-9) if math.isfinite(e0) else True}, EXIT_OK, rows


def _cmd_verify(cfg: RunConfig):
    from .verify import SUITES, run_suite, write_csv, write_jsonl
    from .specs import parse_weight
    if cfg.suite not in SUITES:
        raise InvalidInput(f"unknown suite {cfg.suite!r}; choose from {', '.join(SUITES)}")
    weights = [parse_weight(x) for x in cfg.weight.split(";")] if cfg.weight_given else None
    reports = run_suite(cfg.suite, [int(k) for k in cfg.n], weights, cfg.workers, cfg.spec)
    if cfg.out:
        write_jsonl(reports, cfg.out)
    if cfg.csv:
        write_csv(reports, cfg.csv)
    counts = {k: sum(r.status == k for r in reports) for k in ("pass", "fail", "skipped")}
    failed = [r.name for r in reports if r.status == "fail"]
    result = {"suite": cfg.suite, "n": [int(k) for k in cfg.n], "checks": len(reports), **counts,
              "failed": failed}
    return result, (EXIT_CHECK_FAILED if failed else EXIT_OK), None


def _cmd_kappa(cfg: RunConfig):
    from .conjecture import get_family, kappa_lower_bound
    from .specs import parse_measure, parse_weight
    mu = parse_measure(cfg.measure, cfg.dimension)
    w = parse_weight(cfg.weight)
    order = cfg.seed_order.split(",") if cfg.seed_order else None
    est = kappa_lower_bound(mu, w, cfg.family, cfg.budget, cfg.dimension, order, cfg.spec)
    return est.to_json(), EXIT_OK, est.csv_rows(get_family(cfg.family).names)


def _cmd_fit(cfg: RunConfig):
    from .conjecture import coercivity_fit
    from .specs import parse_measure, parse_weight
    mu = parse_measure(cfg.measure, cfg.dimension)
    w = parse_weight(cfg.weight)
    fit = coercivity_fit(mu, w, cfg.family, cfg.samples, cfg.dimension, cfg.spec)
    rows = [(e, v, "samples") for _, e, v in fit.points]
    if math.isfinite(fit.a) and fit.points:
        xs = sorted(e for _, e, _ in fit.points)
        rows += [(x, fit.a * x + fit.C, "line") for x in (xs[0], xs[-1])]
    code = EXIT_OK if fit.violations == 0 else EXIT_CHECK_FAILED
    return fit.to_json(), code, rows


def _cmd_bedford(cfg: RunConfig):
    from .conjecture import bedford_pipeline
    from .specs import parse_profile
    rep = bedford_pipeline(parse_profile(cfg.profile, cfg.dimension), spec=cfg.spec)
    return rep.to_json(), (EXIT_OK if rep.ok else EXIT_CHECK_FAILED), []


def execute(cfg: RunConfig):
    """Run one validated configuration; returns ``(result, exit code, csv rows)``."""
    cfg.validate()
    handlers = {
        "energy": lambda: _cmd_energy(cfg, False),
        "jenergy": lambda: _cmd_energy(cfg, True),
        "solve": lambda: _cmd_solve(cfg),
        "subext": lambda: _cmd_subext(cfg),
        "verify": lambda: _cmd_verify(cfg),
        "kappa": lambda: _cmd_kappa(cfg),
        "fit": lambda: _cmd_fit(cfg),
        "bedford": lambda: _cmd_bedford(cfg),
    }
    return handlers[cfg.command]()


# -- argument parsing ---------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="JSON file with default values for any flag")
    common.add_argument("--weight", help="weight spec, e.g. poly:p=2, exp, iterexp:k=2")
    common.add_argument("--n", type=int, action="append", help="complex dimension (repeatable for verify)")
    common.add_argument("--quad-rel-tol", type=float, help="relative quadrature tolerance")
    common.add_argument("--out", help="also write the JSON result (JSON lines for verify) here")
    common.add_argument("--csv", help="write plot data as CSV (x, y, series)")

    parser = _Parser(prog="highenergy", description="Weighted energies of radial plurisubharmonic functions.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, help_ in (("energy", "weighted energy E of a profile"),
                        ("jenergy", "capacity energy J of a profile")):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("--profile", help="profile spec, e.g. trunc:M=2")
    p = sub.add_parser("solve", parents=[common], help="radial Dirichlet problem for a measure")
    p.add_argument("--measure", help="measure spec or table:<csv file>")
    p = sub.add_parser("subext", parents=[common], help="subextension to a larger ball")
    p.add_argument("--profile")
    p.add_argument("--log-radius", type=float, help="log of the larger radius (default 1)")
    p = sub.add_parser("verify", parents=[common], help="run an inequality suite")
    p.add_argument("--suite", help="all, scaling, fundamental, cap, moser_trudinger, convexity, "
                                   "semicontinuity or cone")
    p.add_argument("--workers", type=int, help="thread count for the suite")
    for name, help_ in (("kappa", "lower bound on the half-measure norm ratio"),
                        ("fit", "coercivity line through sampled energies and norms")):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("--measure")
        p.add_argument("--family", help="profile family searched")
        p.add_argument("--budget", type=int, help="maximal ratio evaluations (kappa)")
        p.add_argument("--samples", type=int, help="family samples (fit)")
        p.add_argument("--seed-order", help="comma-separated parameter visiting order (kappa)")
    p = sub.add_parser("bedford", parents=[common], help="finite energies or a divergence witness")
    p.add_argument("--profile")
    return parser


def config_from_args(argv: Optional[Sequence[str]] = None) -> RunConfig:
    args = build_parser().parse_args(argv)
    values = {k: v for k, v in vars(args).items() if v is not None}
    defaults: dict = {}
    if "config" in values:
        path = values.pop("config")
        try:
            with open(path) as fh:
                defaults = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InvalidInput(f"cannot read config {path!r}: {exc}") from None
        if not isinstance(defaults, dict):
            raise InvalidInput("config file must hold a JSON object")
        defaults = {k.replace("-", "_"): v for k, v in defaults.items()}
        if "n" in defaults and not isinstance(defaults["n"], list):
            defaults["n"] = [defaults["n"]]
    merged = {**defaults, **values}
    known = set(RunConfig.__dataclass_fields__)
    unknown = set(merged) - known - {"weight_given"}
    if unknown:
        raise InvalidInput(f"unknown settings: {', '.join(sorted(unknown))}")
    return RunConfig(**merged, weight_given="weight" in merged)


def _error(exc: BaseException, code: int, kind: str) -> int:
    diag = {"error": kind, "type": type(exc).__name__, "message": str(exc), "exit_code": code}
    for attr in ("partial", "block"):
        if hasattr(exc, attr):
            diag[attr] = getattr(exc, attr)
    print(json.dumps(_jsonable(diag), sort_keys=True), file=sys.stderr)
    return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        cfg = config_from_args(argv)
        result, code, rows = execute(cfg)
    except CliError as exc:
        return _error(exc, exc.code, exc.kind)
    except (NotInOrliczSpace, InvalidInput, FileNotFoundError, OSError) as exc:
        return _error(exc, EXIT_INPUT, "input")
    except (QuadratureError, BracketError) as exc:
        return _error(exc, EXIT_NONCONVERGENCE, "non-convergence")
    except HighEnergyError as exc:
        return _error(exc, EXIT_NONCONVERGENCE, "numerical")
    text = dumps({"command": cfg.command, "config": _public(cfg), "result": result})
    print(text)
    if cfg.out and cfg.command != "verify":
        with open(cfg.out, "w") as fh:
            fh.write(text + "\n")
    if cfg.csv and rows:
        _write_csv(cfg.csv, rows)
    return code


def _public(cfg: RunConfig) -> dict:
    d = asdict(cfg)
    return {k: v for k, v in d.items() if k not in ("out", "csv", "workers", "weight_given")}


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
