"""
Experiment Runner Module

Entry point of `python -m cli`: parses the subcommand, builds the configuration, runs the
experiment and writes its artifacts.

Key Features:
- Subcommands exponents, weights, decay, extend-scaling, wavepackets and plot
- results.csv (or rows embedded in summary.json with --format json), summary.json and run_log.json
- Exit codes: 0 every record passes, 1 a check failed, 2 usage or configuration error,
  3 numerical precondition violated (the parameter is named on stderr and in summary.json)

Dependencies:
- argparse: For the command line
- cli.config / cli.records / cli.plot: For configuration, artifacts and plots
- exponents, weights, fractal, extension, wavepackets: For the experiments themselves
"""

import argparse
import logging
import math
import sys
import time
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from cli.config import ConfigError, ExperimentConfig, build_config, read_config_file
from cli.plot import PlotError, emit_plot
from cli.records import (
    CSV_NAME,
    SUMMARY_NAME,
    ExperimentRecord,
    build_summary,
    write_csv,
    write_json,
    write_run_log,
)
from exponents import (
    beta_lower,
    check_recursion,
    exponent_curves,
    exponent_table,
    planar_decay,
    to_rational,
)
from exponents.rational import decimal_string, format_rational, parse_table
from extension.profiles import RECIPES, make_profile, midpoint_profile
from extension.scaling import SLOPE_TOLERANCE, scaling_experiment
from fractal.energy import frostman_check, mattila_integral
from fractal.fourier import decay_fit
from fractal.measures import cantor_measure, point_mass, valid_radius_max
from numerics.errors import DomainError, PreconditionError
from wavepackets.broad import broad_norm
from wavepackets.partition import decompose, tube_mass_fraction
from wavepackets.tubes import Tube
from wavepackets.variety import concentration_test, parse_variety
from weights.recipes import DEFAULT_SPACING, cantor_weight, plane_weight, uniform_weight, weight_from_measure
from weights.sampled import read_weight_grid, write_weight_grid
from weights.verify import DEFAULT_RADII, verify_weight

logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_PRECONDITION = 3

RECONSTRUCTION_TOLERANCE = 1e-6
POINT_MASS_TOLERANCE = 1e-6
DECAY_TOLERANCE = {2: 0.15, 3: 0.2}
FROSTMAN_CONSTANT = 4.0
FROSTMAN_RADII = 6
FIELD_WEIGHT_SPACING = 0.5
DEFAULT_R_MAX = 128.0

EXPONENT_COLUMNS = ["d", "alpha", "beta_lower", "gamma0", "gamma_broad", "mattila_ok", "best_prior", "strictly_better"]
RATIONAL_COLUMNS = ["alpha", "beta_lower", "gamma0", "gamma_broad", "best_prior"]


@dataclass
class RunOutcome:
    records: List[ExperimentRecord]
    rows: List[Dict[str, Any]] = field(default_factory=list)
    columns: List[str] = field(default_factory=list)
    extra: Dict[str, Any] = field(default_factory=dict)


def _timed(function: Callable, *args, **kwargs):
    start = time.perf_counter()
    result = function(*args, **kwargs)
    return result, time.perf_counter() - start


def _radii(value) -> List[float]:
    """Radii given as a list or as "8,16,32"."""
    if isinstance(value, str):
        value = [part for part in value.split(",") if part.strip()]
    try:
        return [float(r) for r in value]
    except (TypeError, ValueError):
        raise ConfigError(f"cannot read radii from {value!r}")


def _profile_recipe(config: ExperimentConfig, d: int):
    name = config.params["f"]
    if name not in RECIPES:
        raise ConfigError(f"unknown profile recipe {name!r}; expected one of {sorted(RECIPES)}")
    f_params = dict(config.params.get("f_params") or {})
    if name == "random-smooth":
        f_params.setdefault("seed", config.seed)
    return RECIPES[name](d, **f_params)


# exponents

def run_exponents(config: ExperimentConfig) -> RunOutcome:
    params = config.params
    d = params["d"]
    if params.get("table"):
        alphas = parse_table(params["table"])
    elif params.get("alpha") is not None:
        alphas = [to_rational(params["alpha"])]
    else:
        raise ConfigError("alpha or table not defined in config")

    table, elapsed = _timed(exponent_table, d, alphas)
    rows = []
    for row in table:
        values = {
            "d": row.d,
            "alpha": row.alpha,
            "beta_lower": row.beta_lower,
            "gamma0": row.gamma0,
            "gamma_broad": row.gamma_broad,
            "mattila_ok": row.mattila_ok,
            "best_prior": row.best_prior,
            "strictly_better": row.strictly_better,
        }
        if config.format == "csv":
            for name in RATIONAL_COLUMNS:
                value = values[name]
                values[f"{name}_pq"] = None if value is None else format_rational(value)
                values[name] = None if value is None else decimal_string(value)
        rows.append(values)

    curves = exponent_curves(d)
    broken = {name: [format_rational(b) for b in curve.discontinuities()] for name, curve in curves.items()}
    records = [
        ExperimentRecord("continuity", all(not b for b in broken.values()),
                         passed=all(not b for b in broken.values()), wall_time=elapsed, details={"discontinuities": broken})
    ]
    if params.get("compare_prior"):
        open_range = [row for row in table if Fraction(d, 2) < row.alpha < d]
        worse = [format_rational(row.alpha) for row in open_range if not row.strictly_better]
        records.append(ExperimentRecord("strictly_better", len(open_range) - len(worse), bound=len(open_range),
                                        passed=not worse, details={"not_better_at": worse}))
    if params.get("check_recursion"):
        if d < 4:
            raise DomainError(f"the recursion is stated for d >= 4, got {d}", "d")
        mismatches, elapsed = _timed(check_recursion, d)
        records.append(ExperimentRecord("recursion", len(mismatches), bound=0, passed=not mismatches,
                                        wall_time=elapsed, details={"mismatches": [str(m) for m in mismatches[:20]]}))
    columns = EXPONENT_COLUMNS + [f"{name}_pq" for name in RATIONAL_COLUMNS]
    print(f"{len(rows)} rows for d={d}")
    return RunOutcome(records, rows, columns)


# measures

def _measure_from_params(params: Dict[str, Any], d: int, key: str = "recipe"):
    """Build the measure named by params[key]: "point", "cantor" (with b, rho, n) or "cantor:b,rho,n"."""
    spec = params.get(key)
    if spec is None:
        raise ConfigError(f"{key} not defined in config")
    name, _, args = str(spec).partition(":")
    if name == "point":
        mu = point_mass(d)
    elif name == "cantor":
        if args:
            parts = [part.strip() for part in args.split(",")]
            if len(parts) != 3:
                raise ConfigError(f"expected cantor:b,rho,n, got {spec!r}")
            values = dict(zip(("b", "rho", "n"), parts))
        else:
            values = {part: params.get(part) for part in ("b", "rho", "n")}
            for part, value in values.items():
                if value is None:
                    raise ConfigError(f"{part} not defined in config")
        try:
            b, n = int(values["b"]), int(values["n"])
            rho = float(Fraction(str(values["rho"])))
        except (TypeError, ValueError, ZeroDivisionError):
            raise ConfigError(f"cannot read cantor parameters from {spec!r}")
        mu = cantor_measure(d, b, rho, n)
    else:
        raise ConfigError(f"unknown measure recipe {spec!r}")

    if params.get("alpha_claimed") is not None:
        alpha = to_rational(params["alpha_claimed"], "alpha_claimed")
        if not 0 <= alpha <= d:
            raise DomainError(f"claimed dimension must lie in [0, {d}], got {alpha}", "alpha_claimed")
        mu = replace(mu, claimed_alpha=float(alpha))
    return mu


# weights

def _weight_from_params(params: Dict[str, Any]):
    if params.get("grid"):
        return read_weight_grid(params["grid"])
    recipe = params.get("recipe")
    if recipe is None:
        raise ConfigError("recipe or grid not defined in config")
    d = params.get("d")
    if d is None:
        raise ConfigError("d not defined in config")
    spacing = float(params.get("spacing", DEFAULT_SPACING))
    if recipe == "uniform":
        return uniform_weight(d, float(params.get("half_width", 16.0)), spacing)
    if recipe == "plane":
        return plane_weight(d, float(params.get("half_width", 16.0)), spacing, int(params.get("axis", 0)))
    if recipe == "cantor":
        for name in ("b", "rho", "n", "R"):
            if params.get(name) is None:
                raise ConfigError(f"{name} not defined in config")
        return cantor_weight(d, int(params["b"]), float(params["rho"]), int(params["n"]), float(params["R"]), spacing)
    if recipe == "from-measure":
        if params.get("R") is None:
            raise ConfigError("R not defined in config")
        return weight_from_measure(_measure_from_params(params, d, "measure"), float(params["R"]), spacing)
    raise ConfigError(f"unknown weight recipe {recipe!r}")


def run_weights(config: ExperimentConfig) -> RunOutcome:
    params = config.params
    if params["action"] != "verify":
        raise ConfigError(f"unknown weights action {params['action']!r}")
    weight = _weight_from_params(params)
    if params.get("save_grid"):
        path = write_weight_grid(weight, config.out_dir / "weight.bin")
        print(f"Weight grid saved to {path}")

    alpha, constant = float(params["alpha"]), float(params["constant"])
    radii = _radii(params.get("radii", DEFAULT_RADII))
    records, rows = [], []
    for r in radii:
        certificate, elapsed = _timed(verify_weight, weight, alpha, constant, [r], threads=config.threads)
        rows.append({"radius": r, "worst_ratio": certificate.worst_ratio, "pass": certificate.passed})
        records.append(ExperimentRecord(f"ratio@r={r:g}", certificate.worst_ratio, bound=constant,
                                        passed=certificate.passed, wall_time=elapsed,
                                        details={"worst_center": certificate.worst_center}))
    print(f"Weight {weight.metadata.get('recipe', 'grid')}: worst ratio {max(row['worst_ratio'] for row in rows):.6g} (C={constant:g})")
    return RunOutcome(records, rows, ["radius", "worst_ratio", "pass"], {"weight_integral": weight.integral()})


# decay

def run_decay(config: ExperimentConfig) -> RunOutcome:
    params = config.params
    d = params["d"]
    mu = _measure_from_params(params, d)

    limit = valid_radius_max(mu)
    R_max = float(params.get("R_max", min(limit, DEFAULT_R_MAX) if limit is not None else DEFAULT_R_MAX))
    fit, elapsed = _timed(decay_fit, mu, float(params.get("R_min", 1.0)), R_max, int(params.get("count", 8)),
                          params.get("nodes"), config.threads)

    alpha = to_rational(mu.claimed_alpha)
    if alpha == 0:
        expected, tolerance = Fraction(0), POINT_MASS_TOLERANCE
        fit_ok = abs(fit.fitted_beta) <= tolerance
    else:
        expected = planar_decay(alpha) if d == 2 else beta_lower(d, alpha)
        tolerance = float(params.get("tolerance", DECAY_TOLERANCE.get(d, 0.2)))
        fit_ok = fit.fitted_beta >= float(expected) - tolerance
    records = [ExperimentRecord("fitted_beta", fit.fitted_beta, bound=float(expected), tolerance=tolerance,
                                passed=fit_ok, wall_time=elapsed, details={"stderr": fit.stderr})]

    scale = mu.atom_scale if mu.atom_scale > 0 else 1e-3
    radii = np.geomspace(scale, 1.0, FROSTMAN_RADII)
    constant = float(params.get("frostman_constant", FROSTMAN_CONSTANT))
    certificate, elapsed = _timed(frostman_check, mu, radii, alpha=mu.claimed_alpha, constant=constant)
    records.append(ExperimentRecord("frostman", certificate.worst_ratio, bound=constant, passed=certificate.passed,
                                    wall_time=elapsed, details={"radii": radii}))

    extra = {"fitted_beta": fit.fitted_beta, "expected_beta": expected, "bound_beta": float(expected),
             "claimed_alpha": mu.claimed_alpha}
    if params.get("mattila_R"):
        integral, elapsed = _timed(mattila_integral, mu, mu.claimed_alpha, float(params["mattila_R"]))
        extra["mattila"] = {"value": integral.value, "energy": integral.energy, "ratio": integral.ratio}
    print(f"Fitted beta {fit.fitted_beta:.6f} (expected {float(expected):.6f})")
    return RunOutcome(records, fit.rows(), ["R", "average", "log_R", "log_average"], extra)


# extend-scaling

def _weight_factory(config: ExperimentConfig, d: int) -> Callable[[float], Any]:
    params = config.params
    name = params["weight"]
    if name == "uniform":
        return lambda R: uniform_weight(d, R, FIELD_WEIGHT_SPACING)
    if name == "plane":
        return lambda R: plane_weight(d, R, FIELD_WEIGHT_SPACING)
    if name == "cantor":
        for key in ("b", "rho", "n"):
            if params.get(key) is None:
                raise ConfigError(f"{key} not defined in config")
        b, rho, n = int(params["b"]), float(params["rho"]), int(params["n"])
        return lambda R: cantor_weight(d, b, rho, n, R, DEFAULT_SPACING)
    raise ConfigError(f"unknown weight recipe {name!r}")


def run_extend_scaling(config: ExperimentConfig) -> RunOutcome:
    params = config.params
    d = params["d"]
    recipe = _profile_recipe(config, d)
    result, elapsed = _timed(
        scaling_experiment, recipe, _weight_factory(config, d), float(params["p"]), params["alpha"],
        _radii(params["R"]), float(params.get("spacing", 0.5)), config.threads,
    )
    tolerance = float(params.get("tolerance", SLOPE_TOLERANCE))
    passed = result.slope <= float(result.exponent) + tolerance
    records = [ExperimentRecord("slope", result.slope, bound=result.exponent, tolerance=tolerance,
                                passed=passed, wall_time=elapsed, details={"stderr": result.stderr})]
    print(f"Fitted slope {result.slope:.6f} (exponent {result.exponent})")
    return RunOutcome(records, result.rows(), ["R", "norm", "log_R", "log_norm"],
                      {"slope": result.slope, "exponent": result.exponent})


# wavepackets

def run_wavepackets(config: ExperimentConfig) -> RunOutcome:
    params = config.params
    d = int(params.get("d", 2))
    R, delta = float(params["R"]), float(params["delta"])
    recipe = _profile_recipe(config, d)
    h = float(params.get("h", min(R**-0.5 / 16, 1.0 / (4.0 * R))))
    f = midpoint_profile(d, recipe, h)
    wp, elapsed = _timed(decompose, f, R, delta)
    error = math.sqrt(float(np.sum(f.weights * np.abs(wp.reconstruct() - f.values) ** 2))) / max(f.l2_norm(), 1e-300)
    records = [ExperimentRecord("reconstruction", error, bound=RECONSTRUCTION_TOLERANCE,
                                passed=error <= RECONSTRUCTION_TOLERANCE, wall_time=elapsed,
                                details={"tiles": len(wp), "dropped": wp.dropped})]

    extra: Dict[str, Any] = {"tiles": len(wp), "dropped": wp.dropped, "f_norm": wp.f_norm}
    if d == 2 and len(wp):
        tile, piece = wp.dominant()
        tube_share = tube_mass_fraction(tile, piece, threads=config.threads)
        extra["essential_support"] = {"tile": tile.key, "tube_radius": Tube.from_tile(tile).radius, "share": tube_share}

    verdicts: Dict[str, str] = {}
    if params.get("variety"):
        Z = parse_variety(params["variety"], d)
        E = float(params.get("E", 1.0))
        split, elapsed = _timed(concentration_test, wp, Z, E, config.threads)
        verdicts = {key: verdict.value for key, verdict in split.verdicts.items()}
        accounted = split.energy_total / max(wp.f_norm**2, 1e-300)
        share = split.energy_in / split.energy_total if split.energy_total > 0 else 0.0
        records.append(ExperimentRecord("concentration", share, passed=0.5 <= accounted <= 2.0, wall_time=elapsed,
                                        details={"E": E, "mass_in": split.mass_in, "mass_out": split.mass_out,
                                                 "mass_inconclusive": split.mass_inconclusive,
                                                 "inconclusive": split.inconclusive, "accounted": accounted}))
        extra["verdict_counts"] = {v: sum(value == v for value in verdicts.values()) for v in sorted(set(verdicts.values()))}
    rows = [{"tile": tile.key, "mass": piece.l2_norm(), "verdict": verdicts.get(tile.key, "")} for tile, piece in wp]

    if params.get("K"):
        broad_R = float(params.get("broad_R", 8.0))
        profile = make_profile(d, recipe, 1.0 / (4.0 * broad_R))
        H = uniform_weight(d, broad_R, FIELD_WEIGHT_SPACING)
        broad, elapsed = _timed(broad_norm, profile, broad_R, int(params["K"]), int(params.get("A", 1)),
                                float(params.get("p", 2.0)), H, threads=config.threads)
        extra["broad_norm"] = broad.to_dict()
        records.append(ExperimentRecord("broad_norm", broad.value, bound=broad.full,
                                        passed=broad.value <= broad.full * (1 + 1e-12), wall_time=elapsed))
    print(f"{len(wp)} tiles ({wp.dropped} dropped), reconstruction error {error:.3g}")
    return RunOutcome(records, rows, ["tile", "mass", "verdict"], extra)


# plot

def run_plot(config: ExperimentConfig) -> RunOutcome:
    params = config.params
    out_path = Path(params.get("output") or config.out_dir / f"{params['plot']}.svg")
    info, elapsed = _timed(emit_plot, params["csv"], params["plot"], out_path)
    print(f"Plot saved to {info['path']}")
    extra = {k: v for k, v in info.items() if k != "path"}
    return RunOutcome([ExperimentRecord("plot", str(info["path"]), wall_time=elapsed)], extra=extra)


HANDLERS: Dict[str, Callable[[ExperimentConfig], RunOutcome]] = {
    "exponents": run_exponents,
    "weights": run_weights,
    "decay": run_decay,
    "extend-scaling": run_extend_scaling,
    "wavepackets": run_wavepackets,
    "plot": run_plot,
}


def run(config: ExperimentConfig) -> int:
    """
    Run one experiment and write its artifacts under config.out.

    Returns:
        int: exit code (0 pass, 1 failed check, 2 configuration error, 3 precondition violated)
    """
    print(f"\n=== Running {config.kind} ===")
    out_dir = config.out_dir
    start = time.perf_counter()
    try:
        outcome = HANDLERS[config.kind](config)
    except ConfigError as e:
        print(f"Configuration error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except PlotError as e:
        print(f"Plot error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except PreconditionError as e:
        print(f"Precondition violated ({e.parameter}): {e}", file=sys.stderr)
        summary = build_summary(config.echo(), [], error={"parameter": e.parameter, "message": str(e)})
        summary["pass"] = False
        write_json(summary, out_dir / SUMMARY_NAME)
        write_run_log(out_dir, config.kind, [], time.perf_counter() - start, "precondition")
        return EXIT_PRECONDITION

    print("\n=== Writing results ===")
    summary = build_summary(config.echo(), outcome.records, **outcome.extra)
    if outcome.columns:
        if config.format == "csv":
            path = write_csv(outcome.rows, out_dir / CSV_NAME, outcome.columns)
            print(f"Table saved to {path}")
        else:
            summary["rows"] = outcome.rows
    path = write_json(summary, out_dir / SUMMARY_NAME)
    print(f"Summary saved to {path}")
    status = "pass" if summary["pass"] else "fail"
    write_run_log(out_dir, config.kind, outcome.records, time.perf_counter() - start, status)

    print("\n=== Result ===")
    for record in outcome.records:
        print(f"{record.name}: {record.value} ({'pass' if record.passed else 'FAIL'})")
    return EXIT_PASS if summary["pass"] else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON configuration file")
    common.add_argument("--out", help="output directory")
    common.add_argument("--seed", type=int, help="seed of every random stream")
    common.add_argument("--threads", type=int, help="worker threads")
    common.add_argument("--format", choices=["csv", "json"], help="table format")
    common.add_argument("--verbose", action="store_true", help="debug logging")

    parser = argparse.ArgumentParser(prog="python -m cli", description="Weighted restriction experiments")
    sub = parser.add_subparsers(dest="kind", required=True)

    p = sub.add_parser("exponents", parents=[common], help="exact exponent tables")
    p.add_argument("--d", type=int)
    p.add_argument("--alpha")
    p.add_argument("--table", help="start:end:step")
    p.add_argument("--compare-prior", dest="compare_prior", action="store_true", default=None)
    p.add_argument("--check-recursion", dest="check_recursion", action="store_true", default=None)

    p = sub.add_parser("weights", parents=[common], help="weight certificates")
    p.add_argument("action", choices=["verify"])
    p.add_argument("--recipe", choices=["uniform", "plane", "cantor", "from-measure"])
    p.add_argument("--measure", help='measure of a from-measure weight: "point" or "cantor:b,rho,n"')
    p.add_argument("--grid", help="binary weight grid file")
    p.add_argument("--d", type=int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--constant", type=float)
    p.add_argument("--radii")
    p.add_argument("--half-width", dest="half_width", type=float)
    p.add_argument("--spacing", type=float)
    p.add_argument("--b", type=int)
    p.add_argument("--rho", type=float)
    p.add_argument("--n", type=int)
    p.add_argument("--R", type=float)
    p.add_argument("--save-grid", dest="save_grid", action="store_true", default=None)

    p = sub.add_parser("decay", parents=[common], help="spherical-average decay of fractal measures")
    p.add_argument("--recipe", help='"point", "cantor" with --b --rho --n, or "cantor:b,rho,n"')
    p.add_argument("--d", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--rho", type=float)
    p.add_argument("--n", type=int)
    p.add_argument("--alpha-claimed", dest="alpha_claimed", help="dimension the measure is checked against")
    p.add_argument("--rmin", "--R-min", dest="R_min", type=float)
    p.add_argument("--rmax", "--R-max", dest="R_max", type=float)
    p.add_argument("--count", type=int)
    p.add_argument("--quad-nodes", "--nodes", dest="nodes", type=int)
    p.add_argument("--tolerance", type=float)
    p.add_argument("--mattila-R", dest="mattila_R", type=float)

    p = sub.add_parser("extend-scaling", parents=[common], help="R-growth of weighted extension norms")
    p.add_argument("--d", type=int)
    p.add_argument("--p", type=float)
    p.add_argument("--alpha")
    p.add_argument("--weight", choices=["uniform", "plane", "cantor"])
    p.add_argument("--f", choices=sorted(RECIPES))
    p.add_argument("--R", help="radii, e.g. 8,16,32,64")
    p.add_argument("--b", type=int)
    p.add_argument("--rho", type=float)
    p.add_argument("--n", type=int)

    p = sub.add_parser("wavepackets", parents=[common], help="wave packets, tangency and broad norms")
    p.add_argument("--d", type=int)
    p.add_argument("--R", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--f", choices=sorted(RECIPES))
    p.add_argument("--h", type=float, help="frequency grid spacing")
    p.add_argument("--variety", help='e.g. "x3 - x1^2 - x2^2"; polynomials separated by ";"')
    p.add_argument("--E", type=float)
    p.add_argument("--K", type=int)
    p.add_argument("--A", type=int)
    p.add_argument("--p", type=float)
    p.add_argument("--broad-R", dest="broad_R", type=float)

    p = sub.add_parser("plot", parents=[common], help="SVG plot of a results CSV")
    p.add_argument("--csv")
    p.add_argument("--plot", choices=["decay", "scaling", "exponents"])
    p.add_argument("--output")
    return parser


GLOBAL_FLAGS = ("config", "out", "seed", "threads", "format", "verbose", "kind")


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_PASS

    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(asctime)s %(name)s %(levelname)s %(message)s")
    values = vars(args)
    params = {k: v for k, v in values.items() if k not in GLOBAL_FLAGS}
    overrides = {k: values[k] for k in ("out", "seed", "threads", "format")}
    try:
        file_data = read_config_file(args.config) if args.config else None
        config = build_config(args.kind, file_data, overrides, params)
    except ConfigError as e:
        print(f"Configuration error: {e}", file=sys.stderr)
        return EXIT_USAGE
    return run(config)
