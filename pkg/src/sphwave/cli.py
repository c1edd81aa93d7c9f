"""Command-line front end: ``sphwave run`` and ``sphwave check``.

Configuration is JSON::

    {
      "potential": {"a": 1.0, "v1": -1.0, "v_inf": 0.0},
      "energy": 1.0,
      "l_max": null,
      "routes": ["inhomogeneous", "homogeneous", "matching"],
      "residual_points": 16,
      "radial_scan": {"r_min": 0.0, "r_max": 3.0, "n": 61, "cos_theta": 1.0},
      "tolerances": {"quadrature_abs": 1e-10, "quadrature_rel": 1e-10,
                     "route_agreement": 1e-9, "residual": 1e-5},
      "seed": 0,
      "r_split": null
    }

Only ``potential`` and ``energy`` are required. Exit codes: 0 success,
1 I/O error, 2 configuration error, 3 numerical error, 4 verification
failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import os
import sys
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

from . import field, oracle, solver
from ._validation import check_routes
from .errors import (ConfigError, DomainError, SingularSystemError, SpecialFunctionOverflow,
                     SphwaveError)
from .model import BeamSpec, StepPotential, derive_wavenumbers

log = logging.getLogger("sphwave")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_VERIFY = 0, 2, 3, 4

COEFFICIENT_HEADER = ["l", "route", "re_A_gt", "im_A_gt", "re_A_lt", "im_A_lt"]
OBSERVABLE_HEADER = ["l", "delta_l", "sigma_l"]
SCAN_HEADER = ["r", "cos_theta", "re_psi", "im_psi", "abs_psi"]
RESIDUAL_HEADER = ["r", "cos_theta", "equation", "rel_residual"]

DEFAULT_TOLERANCES = {
    "quadrature_abs": 1e-10,
    "quadrature_rel": 1e-10,
    "route_agreement": 1e-9,
    "residual": 1e-5,
}
#: Route deltas use ``max(|u|, |v|, ROUTE_DELTA_FLOOR * (2l+1))`` as the
#: denominator so coefficients that vanish identically compare sanely.
ROUTE_DELTA_FLOOR = 1e-4


@dataclass
class RunConfig:
    a: float
    v1: float
    v_inf: float
    energy: float
    l_max: Optional[int] = None
    routes: tuple = solver.ROUTES
    residual_points: int = 16
    r_min: float = 0.0
    r_max: float = 3.0
    n_scan: int = 61
    scan_cos_theta: float = 1.0
    tolerances: Dict[str, float] = dc_field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    seed: int = 0
    r_split: Optional[float] = None

    def echo(self) -> Dict[str, Any]:
        return {
            "potential": {"a": self.a, "v1": self.v1, "v_inf": self.v_inf},
            "energy": self.energy,
            "l_max": self.l_max,
            "routes": list(self.routes),
            "residual_points": self.residual_points,
            "radial_scan": {"r_min": self.r_min, "r_max": self.r_max, "n": self.n_scan,
                            "cos_theta": self.scan_cos_theta},
            "tolerances": dict(self.tolerances),
            "seed": self.seed,
            "r_split": self.r_split,
        }


@dataclass
class RunReport:
    config: RunConfig
    wavenumbers: Dict[str, Any] = dc_field(default_factory=dict)
    l_max: Optional[int] = None
    coefficients: Dict[str, list] = dc_field(default_factory=dict)
    route_deltas: Dict[str, List[float]] = dc_field(default_factory=dict)
    residuals: List[Dict[str, Any]] = dc_field(default_factory=list)
    observables: Optional[Dict[str, Any]] = None
    radial_scan: List[tuple] = dc_field(default_factory=list)
    oracle: Optional[Dict[str, Any]] = None
    failures: List[str] = dc_field(default_factory=list)
    warnings: List[str] = dc_field(default_factory=list)
    timing: Dict[str, float] = dc_field(default_factory=dict)


# -- configuration --------------------------------------------------------------

def example_config() -> Dict[str, Any]:
    return {
        "potential": {"a": 1.0, "v1": -1.0, "v_inf": 0.0},
        "energy": 1.0,
        "routes": list(solver.ROUTES),
        "residual_points": 8,
        "radial_scan": {"r_min": 0.0, "r_max": 3.0, "n": 31, "cos_theta": 1.0},
        "seed": 7,
    }


def _reject_constant(name):
    raise ConfigError(f"non-finite literal {name} is not accepted")


def load_config(path) -> Dict[str, Any]:
    """Read a JSON configuration, reporting syntax errors by line and column."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _number(raw, name, required=True, default=None, integer=False):
    if raw is None:
        if required:
            raise ConfigError("missing required field", field=name)
        return default
    if isinstance(raw, bool) or not isinstance(raw, (int, float)):
        raise ConfigError(f"expected a number, got {raw!r}", field=name)
    if integer:
        if not isinstance(raw, int):
            raise ConfigError(f"expected an integer, got {raw!r}", field=name)
        return raw
    if not math.isfinite(raw):
        raise ConfigError("must be finite", field=name)
    return float(raw)


def _section(raw: Dict[str, Any], name: str, required=False) -> Dict[str, Any]:
    sec = raw.get(name)
    if sec is None:
        if required:
            raise ConfigError("missing required section", field=name)
        return {}
    if not isinstance(sec, dict):
        raise ConfigError("expected an object", field=name)
    return sec


def parse_config(raw: Dict[str, Any]) -> RunConfig:
    """Validate a decoded JSON object into a :class:`RunConfig`."""
    if not isinstance(raw, dict):
        raise ConfigError("top level must be an object")
    known = {"potential", "energy", "l_max", "routes", "residual_points", "radial_scan",
             "tolerances", "seed", "r_split"}
    extra = sorted(set(raw) - known)
    if extra:
        raise ConfigError(f"unknown field(s) {', '.join(extra)}")
    pot = _section(raw, "potential", required=True)
    a = _number(pot.get("a"), "potential.a")
    v1 = _number(pot.get("v1"), "potential.v1")
    v_inf = _number(pot.get("v_inf"), "potential.v_inf")
    energy = _number(raw.get("energy"), "energy")
    if a <= 0:
        raise ConfigError("must be positive", field="potential.a")
    if energy <= v_inf:
        raise ConfigError("energy must exceed potential.v_inf", field="energy")

    l_max = _number(raw.get("l_max"), "l_max", required=False, integer=True)
    if l_max is not None and not 0 <= l_max <= solver.L_CAP:
        raise ConfigError(f"must lie in [0, {solver.L_CAP}]", field="l_max")
    routes = raw.get("routes", list(solver.ROUTES))
    if not isinstance(routes, list) or not all(isinstance(r, str) for r in routes):
        raise ConfigError("expected a list of route names", field="routes")
    try:
        routes = check_routes(routes)
    except DomainError as exc:
        raise ConfigError(str(exc), field="routes") from None
    n_res = _number(raw.get("residual_points"), "residual_points", required=False,
                    default=16, integer=True)
    if n_res < 0:
        raise ConfigError("must be >= 0", field="residual_points")

    scan = _section(raw, "radial_scan")
    r_min = _number(scan.get("r_min"), "radial_scan.r_min", required=False, default=0.0)
    r_max = _number(scan.get("r_max"), "radial_scan.r_max", required=False, default=3.0 * a)
    n_scan = _number(scan.get("n"), "radial_scan.n", required=False, default=61, integer=True)
    cos_t = _number(scan.get("cos_theta"), "radial_scan.cos_theta", required=False, default=1.0)
    if r_min < 0:
        raise ConfigError("must be >= 0", field="radial_scan.r_min")
    if not r_min < r_max:
        raise ConfigError("must exceed radial_scan.r_min", field="radial_scan.r_max")
    if n_scan < 2:
        raise ConfigError("must be >= 2", field="radial_scan.n")
    if not -1.0 <= cos_t <= 1.0:
        raise ConfigError("must lie in [-1, 1]", field="radial_scan.cos_theta")

    tol_raw = _section(raw, "tolerances")
    extra = sorted(set(tol_raw) - set(DEFAULT_TOLERANCES))
    if extra:
        raise ConfigError(f"unknown tolerance(s) {', '.join(extra)}", field="tolerances")
    tolerances = dict(DEFAULT_TOLERANCES)
    for key in DEFAULT_TOLERANCES:
        if key in tol_raw:
            value = _number(tol_raw[key], f"tolerances.{key}")
            if value <= 0:
                raise ConfigError("must be positive", field=f"tolerances.{key}")
            tolerances[key] = value

    seed = _number(raw.get("seed"), "seed", required=False, default=0, integer=True)
    r_split = _number(raw.get("r_split"), "r_split", required=False)
    if r_split is not None and r_split < a:
        raise ConfigError("must be >= potential.a", field="r_split")
    return RunConfig(a, v1, v_inf, energy, l_max, routes, n_res, r_min, r_max, n_scan, cos_t,
                     tolerances, seed, r_split)


# -- pipeline -------------------------------------------------------------------

def thread_count() -> int:
    """Worker cap from ``SPHWAVE_THREADS`` (unset or 0 means one per CPU)."""
    raw = os.environ.get("SPHWAVE_THREADS", "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"expected an integer, got {raw!r}", field="SPHWAVE_THREADS") from None
    if n < 0:
        raise ConfigError("must be >= 0", field="SPHWAVE_THREADS")
    return n or (os.cpu_count() or 1)


def _cplx(z) -> List[float]:
    z = complex(z)
    return [z.real, z.imag]


def run(config: RunConfig, verify: bool = False) -> RunReport:
    """Solve, cross-check and evaluate one configuration.

    Numerical errors (singular systems, overflow) propagate; verification
    failures are collected in ``report.failures``.
    """
    report = RunReport(config)
    if not config.routes:
        return report
    t0 = time.perf_counter()
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        _run_pipeline(config, report, verify)
    report.warnings = [f"{w.category.__name__}: {w.message}" for w in caught]
    report.timing["total_seconds"] = time.perf_counter() - t0
    return report


def _run_pipeline(config: RunConfig, report: RunReport, verify: bool) -> None:
    pot = StepPotential(config.a, config.v1, config.v_inf)
    wn = derive_wavenumbers(pot, BeamSpec(config.energy))
    a = pot.radius_a
    report.wavenumbers = {"k": wn.k, "k0": _cplx(wn.k0), "k1": _cplx(wn.k1)}
    l_max = config.l_max if config.l_max is not None else solver.choose_lmax(wn, a)
    report.l_max = l_max

    t = time.perf_counter()
    for route in config.routes:
        report.coefficients[route] = solver.solve(wn, a, l_max, route)
    report.timing["solve_seconds"] = time.perf_counter() - t
    routes = list(config.routes)
    tol_route = config.tolerances["route_agreement"]
    for i, first in enumerate(routes):
        for second in routes[i + 1:]:
            deltas = _route_deltas(report.coefficients[first], report.coefficients[second])
            report.route_deltas[f"{first}/{second}"] = deltas
            if max(deltas) > tol_route:
                report.failures.append(
                    f"routes {first} and {second} differ by {max(deltas):.3e} "
                    f"> {tol_route:.1e} at l={int(np.argmax(deltas))}")

    primary = report.coefficients[routes[0]]
    obs = field.observables(primary, wn)
    report.observables = {
        "phase_shifts": [float(d) for d in obs.phase_shifts],
        "cross_sections_partial": [float(s) for s in obs.cross_sections_partial],
        "cross_section_total": obs.cross_section_total,
        "forward_amplitude": _cplx(field.far_field_amplitude(primary, wn, 1.0)),
        "optical_theorem_gap": field.optical_theorem_gap(primary, wn),
    }

    radii = np.linspace(config.r_min, config.r_max, config.n_scan)
    for r in radii:
        psi = field.psi_total(primary, wn, a, field.FieldPoint(float(r), config.scan_cos_theta),
                              incident="exact")
        report.radial_scan.append((float(r), config.scan_cos_theta, psi))

    t = time.perf_counter()
    report.residuals = _residuals(config, primary, wn, a)
    report.timing["residual_seconds"] = time.perf_counter() - t
    if verify:
        tol_res = config.tolerances["residual"]
        for res in report.residuals:
            if res["rel_residual"] > tol_res:
                report.failures.append(
                    f"{res['equation']} residual {res['rel_residual']:.3e} > {tol_res:.1e} "
                    f"at r={res['r']:.6g}, cos_theta={res['cos_theta']:.6g}")
        report.oracle = _oracle(wn, a, obs.phase_shifts)
        if report.oracle["max_gap"] > 1e-6:
            report.failures.append(
                f"Numerov phase shifts differ by {report.oracle['max_gap']:.3e} > 1e-06")


def _route_deltas(first, second) -> List[float]:
    out = []
    for l, (c1, c2) in enumerate(zip(first, second)):
        floor = ROUTE_DELTA_FLOOR * (2 * l + 1)
        out.append(max(abs(c1.a_gt - c2.a_gt) / max(abs(c1.a_gt), abs(c2.a_gt), floor),
                       abs(c1.a_lt - c2.a_lt) / max(abs(c1.a_lt), abs(c2.a_lt), floor)))
    return out


def _residuals(config: RunConfig, coeffs, wn, a) -> List[Dict[str, Any]]:
    if config.residual_points == 0:
        return []
    rng = np.random.default_rng(config.seed)
    points = field.sample_field_points(a, config.residual_points, rng)
    tol = {"abs_tol": config.tolerances["quadrature_abs"],
           "rel_tol": config.tolerances["quadrature_rel"]}

    def one(p):
        inh = field.residual_inhomogeneous(coeffs, wn, a, p, **tol)
        hom = field.residual_homogeneous(coeffs, wn, a, p, r_split=config.r_split, **tol)
        return [(p, "inhomogeneous", inh), (p, "homogeneous", hom)]

    # map() preserves input order, so output does not depend on scheduling
    with ThreadPoolExecutor(max_workers=thread_count()) as pool:
        rows = [row for chunk in pool.map(one, points) for row in chunk]
    return [{"r": p.r, "cos_theta": p.cos_theta, "equation": eq,
             "rel_residual": rep.rel_residual, "abs_residual": rep.abs_residual,
             "quadrature_error_estimate": rep.quadrature_error_estimate,
             "converged": rep.converged} for p, eq, rep in rows]


def _oracle(wn, a, deltas) -> Dict[str, Any]:
    l_top = min(len(deltas) - 1, 10)
    values = [oracle.phase_shift_oracle(wn, a, l) for l in range(l_top + 1)]
    gaps = [abs(oracle.wrap_pi(v - d)) for v, d in zip(values, deltas)]
    return {"phase_shifts": values, "gaps": gaps, "max_gap": max(gaps)}


# -- output ---------------------------------------------------------------------

def _fmt(x: float) -> str:
    return f"{x:.16e}"


def _write_csv(path: Path, header, rows) -> None:
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def emit_outputs(report: RunReport, out_dir) -> List[Path]:
    """Write the CSV tables and ``report.json``; returns the written paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    if report.coefficients:
        path = out / "coefficients.csv"
        rows = [[c.l, route, _fmt(c.a_gt.real), _fmt(c.a_gt.imag), _fmt(c.a_lt.real),
                 _fmt(c.a_lt.imag)]
                for route, coeffs in report.coefficients.items() for c in coeffs]
        _write_csv(path, COEFFICIENT_HEADER, rows)
        written.append(path)

        obs = report.observables
        path = out / "observables.csv"
        rows = [[l, _fmt(d), _fmt(s)] for l, (d, s) in
                enumerate(zip(obs["phase_shifts"], obs["cross_sections_partial"]))]
        rows.append(["sigma_total", "", _fmt(obs["cross_section_total"])])
        _write_csv(path, OBSERVABLE_HEADER, rows)
        written.append(path)

        path = out / "radial_scan.csv"
        rows = [[_fmt(r), _fmt(c), _fmt(psi.real), _fmt(psi.imag), _fmt(abs(psi))]
                for r, c, psi in report.radial_scan]
        _write_csv(path, SCAN_HEADER, rows)
        written.append(path)

        path = out / "residuals.csv"
        rows = [[_fmt(x["r"]), _fmt(x["cos_theta"]), x["equation"], _fmt(x["rel_residual"])]
                for x in report.residuals]
        _write_csv(path, RESIDUAL_HEADER, rows)
        written.append(path)

    path = out / "report.json"
    path.write_text(json.dumps(report_dict(report), indent=2, sort_keys=True) + "\n")
    written.append(path)
    return written


def report_dict(report: RunReport) -> Dict[str, Any]:
    out: Dict[str, Any] = {"config": report.config.echo()}
    if not report.coefficients:
        return out
    out.update({
        "wavenumbers": report.wavenumbers,
        "l_max": report.l_max,
        "coefficients": {route: [{"l": c.l, "A_gt": _cplx(c.a_gt), "A_lt": _cplx(c.a_lt)}
                                 for c in coeffs]
                         for route, coeffs in report.coefficients.items()},
        "route_deltas": report.route_deltas,
        "residuals": report.residuals,
        "observables": report.observables,
        "oracle": report.oracle,
        "failures": report.failures,
        "warnings": report.warnings,
        "timing": report.timing,
    })
    return out


# -- entry points -----------------------------------------------------------------

def _cmd_run(args) -> int:
    raw = load_config(args.config)
    if args.routes is not None:
        raw["routes"] = [r.strip() for r in args.routes.split(",") if r.strip()]
    if args.l_max is not None:
        raw["l_max"] = args.l_max
    config = parse_config(raw)
    report = run(config, verify=args.verify)
    for path in emit_outputs(report, args.out):
        log.info("wrote %s", path)
    for line in report.failures:
        print(f"verification failure: {line}", file=sys.stderr)
    return EXIT_VERIFY if report.failures else EXIT_OK


def _cmd_check(args) -> int:
    from . import checks

    suite = checks.FULL if args.full else checks.QUICK
    names = args.only or list(suite)
    unknown = [n for n in names if n not in suite]
    if unknown:
        raise ConfigError(f"unknown check(s) {', '.join(unknown)}; "
                          f"available: {', '.join(suite)}")
    failed = 0
    for name in names:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            result = suite[name]()
        print(f"{result.line()}  ({result.seconds:.1f}s)", flush=True)
        failed += not result.passed
    print(f"{len(names) - failed}/{len(names)} checks passed")
    return EXIT_VERIFY if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sphwave",
                                     description="Partial-wave scattering by a spherical step.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="solve one configuration and write reports")
    p_run.add_argument("--config", required=True, help="JSON configuration file")
    p_run.add_argument("--out", required=True, help="output directory")
    p_run.add_argument("--routes", help="comma-separated subset of " + ",".join(solver.ROUTES))
    p_run.add_argument("--l-max", type=int, dest="l_max", help="override the partial-wave cutoff")
    p_run.add_argument("--verify", action="store_true",
                       help="fail on residuals above tolerance and compare with Numerov")
    p_run.set_defaults(func=_cmd_run)

    p_check = sub.add_parser("check", help="run the built-in invariant suite")
    p_check.add_argument("--full", action="store_true", help="use acceptance-size samples")
    p_check.add_argument("--only", nargs="+", metavar="NAME", help="run only these checks")
    p_check.set_defaults(func=_cmd_check)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SingularSystemError, SpecialFunctionOverflow, ArithmeticError) as exc:
        detail = f" (l={exc.l})" if getattr(exc, "l", None) is not None else ""
        print(f"numerical error{detail}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (DomainError, SphwaveError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(str(exc), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
