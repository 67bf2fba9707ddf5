"""
Command-line front end of the hard-edge laboratory.

    python -m cli verify --theta 1 --alpha 0 --potential linear --n 8,12,16,24 --target kappa
    python -m cli specfun --wright 1,1 --x 1
    python -m cli parametrix-check --theta 1.41421356 --alpha 0.3 --jmax 6

Exit codes: 0 success, 1 usage error, 2 validation failure, 3 numerical non-convergence.
"""

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Dict, List, Optional, Sequence

import mpmath
import narwhals as nw

from biorthogonal import (BiorthogonalSystem, SystemCache, biorthogonality_residual, build_system, config_hash,
                          direct_kappa)
from data_providers import BACKENDS, fit_log_log_rate, is_strictly_decreasing, provider_for, summarize_column
from equilibrium import EquilibriumData, solve_equilibrium, virial_residual
from hardedge_verify import (ConvergenceReport, hard_edge_constants, kernel_target, scaled_kernel, verify_kappa,
                             verify_kernel_limit, verify_pn_asymptotics)
from numeric_core import (ConfigError, FitFailure, HardEdgeError, NonConvergence, NotOneCut, PrecisionContext,
                          PrecisionLoss, SingularMoment, decimal_string, error_message)
from parametrix import biorthogonality_matrix, max_biorthogonality_deviation
from specfun import FoxIParams, WrightParams, fox_I, wright_bessel

from .config import TARGETS, MalformedConfig, RunConfig

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_NONCONVERGENCE = 3

SCHEMA_VERSION = 1
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

NONCONVERGENCE_ERRORS = (NonConvergence, NotOneCut, FitFailure, SingularMoment, PrecisionLoss)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class Outcome:
    """What a subcommand hands back for emission."""
    name: str
    summary: str
    records: List[Dict[str, Any]]
    schema_provider: str
    result: Dict[str, Any]
    passed: bool = True
    frame_hook: Optional[Callable] = field(default=None, repr=False)


def _floats(text: str) -> List[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _ints(text: str) -> List[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _complexes(text: str) -> List[complex]:
    try:
        return [complex(v.replace("i", "j")) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated complex numbers, got {text!r}")


def _points(text: str) -> List[List[float]]:
    try:
        return [[float(c) for c in pair.split(":")] for pair in text.split(",") if pair.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected x:y pairs separated by commas, got {text!r}")


def _potential(text: str) -> Dict[str, Any]:
    """linear | monomial:R | series:c1,c2,... | a JSON descriptor."""
    text = text.strip()
    if text.startswith("{"):
        try:
            return json.loads(text)
        except json.JSONDecodeError as e:
            raise argparse.ArgumentTypeError(f"malformed potential descriptor: {e}")
    kind, _, rest = text.partition(":")
    if kind == "linear" and not rest:
        return {"type": "linear"}
    if kind == "monomial" and rest.isdigit():
        return {"type": "monomial", "r": int(rest)}
    if kind == "series" and rest:
        return {"type": "series", "coeffs": _floats(rest)}
    raise argparse.ArgumentTypeError(f"unknown potential {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="JSON run configuration (path or name of a file in src/data)")
    common.add_argument("--theta", type=float)
    common.add_argument("--alpha", type=float)
    common.add_argument("--potential", type=_potential, help="linear, monomial:R, series:c1,c2,... or JSON")
    common.add_argument("--n", dest="n_list", type=_ints, help="comma-separated increasing n values")
    common.add_argument("--bits", dest="mantissa_bits", type=int, help="mantissa bits (default $MB_PREC_BITS)")
    common.add_argument("--backend", choices=BACKENDS)
    common.add_argument("--jobs", type=int, help="worker processes for independent n")
    common.add_argument("--cache-dir", dest="cache_dir", help="directory of cached biorthogonal systems")
    common.add_argument("--log-level", dest="log_level", type=str.upper)
    common.add_argument("--out", help="directory receiving the CSV and JSON reports")

    parser = _Parser(prog="hardedge", description="Hard-edge asymptotics laboratory for Muttalib-Borodin ensembles")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    specfun = commands.add_parser("specfun", parents=[common], help="Wright and Fox-type special functions")
    specfun.add_argument("--wright", type=_floats, help="a1,a2 of J_{a1,a2}")
    specfun.add_argument("--fox", dest="fox_kind", type=int, choices=(1, 2, 3), help="kind of I_{theta,a}")
    specfun.add_argument("--fox-a", dest="fox_a", type=float)
    specfun.add_argument("--method", dest="fox_method", choices=("mellin_barnes", "wright", "residue"))
    specfun.add_argument("--x", type=_complexes, help="comma-separated arguments")

    parametrix = commands.add_parser("parametrix-check", parents=[common], help="model-function pairings")
    parametrix.add_argument("--jmax", type=int)
    parametrix.add_argument("--radii", type=_floats)
    parametrix.add_argument("--family", choices=("plain", "tilde"))
    parametrix.add_argument("--grid", help="JSON file of theta/alpha records")
    parametrix.add_argument("--tolerance", type=float)

    equilibrium = commands.add_parser("equilibrium", parents=[common], help="equilibrium measure of V")
    equilibrium.add_argument("--grid-size", dest="grid_size", type=int)
    equilibrium.add_argument("--extrapolate", action="store_true", default=None)

    commands.add_parser("biortho", parents=[common], help="biorthogonal systems for each n")

    kernel = commands.add_parser("kernel", parents=[common], help="scaled kernel against its hard-edge limit")
    kernel.add_argument("--points", type=_points, help="x:y pairs separated by commas")
    kernel.add_argument("--grid-size", dest="grid_size", type=int)

    verify = commands.add_parser("verify", parents=[common], help="convergence report for kappa, p, q or kernel")
    verify.add_argument("--target", choices=TARGETS)
    verify.add_argument("--grid-size", dest="grid_size", type=int)
    verify.add_argument("--extrapolate", action="store_true", default=None)
    verify.add_argument("--points", type=_points)
    return parser


def configure_logging(level: str):
    logging.basicConfig(level=getattr(logging, level.upper()), format=LOG_FORMAT, force=True)
    logging.captureWarnings(True)


# systems


def _build_worker(config: RunConfig, n: int) -> BiorthogonalSystem:
    return build_system(config.model_params(n), n, config.precision())


def build_systems(config: RunConfig, mantissa_bits: Optional[int] = None) -> List[BiorthogonalSystem]:
    """One system of degree n per n in n_list; cache reads and writes stay in this process."""
    if mantissa_bits is not None:
        config = replace(config, mantissa_bits=mantissa_bits)
    cache = SystemCache(config.cache_dir) if config.cache_dir else None
    systems: Dict[int, BiorthogonalSystem] = {}
    if cache is not None:
        for n in config.n_list:
            cached = cache.load(config.model_params(n), n, config.mantissa_bits)
            if cached is not None:
                systems[n] = cached
    missing = [n for n in config.n_list if n not in systems]
    if config.jobs > 1 and len(missing) > 1:
        with ProcessPoolExecutor(max_workers=min(config.jobs, len(missing))) as pool:
            built = list(pool.map(_build_worker, [config] * len(missing), missing))
    else:
        built = [_build_worker(config, n) for n in missing]
    for n, system in zip(missing, built):
        systems[n] = system
        if cache is not None:
            cache.store(system)
    return [systems[n] for n in config.n_list]


def solve_for(config: RunConfig) -> EquilibriumData:
    eq = solve_equilibrium(config.potential_object, config.theta, grid_size=config.grid_size,
                           extrapolate=config.extrapolate)
    logger.info("equilibrium solved: b=%.10g d1=%.10g", eq.b, eq.d1)
    return eq


# subcommands


def run_specfun(config: RunConfig, ctx: PrecisionContext) -> Outcome:
    """
    Rows use the specfun schema; Wright rows carry kind 0 with (a, theta) = (a1, a2).
    """
    if (config.wright is None) == (config.fox_kind is None):
        raise ConfigError(error_message("cli", "give exactly one of --wright a1,a2 or --fox KIND", "run_specfun"))
    records = []
    values = []
    with ctx.workprec():
        for x in config.x:
            if config.wright is not None:
                a1, a2 = config.wright
                value = wright_bessel(WrightParams(a1=a1, a2=a2), _as_mp(x), ctx)
                kind, theta, a = 0, a2, a1
            else:
                value = fox_I(config.fox_kind, FoxIParams(theta=config.theta, a=config.fox_a), mpmath.mpc(x), ctx,
                              method=config.fox_method)
                kind, theta, a = config.fox_kind, config.theta, config.fox_a
            value = mpmath.mpc(value)
            values.append(value)
            records.append({"kind": kind, "theta": float(theta), "a": float(a),
                            "z_re": decimal_string(mpmath.mpf(complex(x).real), ctx),
                            "z_im": decimal_string(mpmath.mpf(complex(x).imag), ctx),
                            "value_re": decimal_string(value.real, ctx),
                            "value_im": decimal_string(value.imag, ctx)})
    if config.wright is not None:
        label = "J_{%g,%g}" % tuple(config.wright)
    else:
        label = f"I{config.fox_kind}_(theta={config.theta:g}, a={config.fox_a:g})"
    shown = ", ".join(mpmath.nstr(v.real if v.imag == 0 else v, 15) for v in values)
    return Outcome(name="specfun", summary=f"{label}({', '.join(_format_complex(x) for x in config.x)}) = {shown}",
                   records=records, schema_provider="get_specfun_schema", result={"values": records})


def _as_mp(x):
    x = complex(x)
    return mpmath.mpf(x.real) if x.imag == 0 else mpmath.mpc(x)


def _format_complex(x) -> str:
    x = complex(x)
    return f"{x.real:g}" if x.imag == 0 else f"{x.real:g}{x.imag:+g}i"


def _grid_rows(config: RunConfig) -> List[Dict[str, float]]:
    if config.grid is None:
        return [{"theta": config.theta, "alpha": config.alpha}]
    provider = provider_for(config.backend)
    frame = provider.load_json_as_dataframe(config.grid, provider.get_grid_schema)
    return nw.from_native(frame, eager_only=True).select("theta", "alpha").rows(named=True)


def run_parametrix_check(config: RunConfig, ctx: PrecisionContext) -> Outcome:
    records = []
    result = []
    worst_deviation = mpmath.mpf(0)
    worst_spread = mpmath.mpf(0)
    for row in _grid_rows(config):
        theta, alpha = float(row["theta"]), float(row["alpha"])
        with ctx.workprec():
            matrices = {radius: biorthogonality_matrix(config.jmax, radius, theta, alpha, ctx, family=config.family)
                        for radius in config.radii}
            deviation = max(max_biorthogonality_deviation(m) for m in matrices.values())
            reference = matrices[config.radii[0]]
            spread = max((abs(m[key] - reference[key]) for m in matrices.values() for key in reference),
                         default=mpmath.mpf(0))
            for radius, matrix in matrices.items():
                for (j, k), value in sorted(matrix.items()):
                    records.append({"theta": repr(theta), "alpha": repr(alpha), "radius": repr(float(radius)),
                                    "j": j, "k": k, "value_re": decimal_string(value.real, ctx),
                                    "value_im": decimal_string(value.imag, ctx)})
        logger.info("parametrix theta=%g alpha=%g: deviation=%s radius spread=%s", theta, alpha,
                    mpmath.nstr(deviation, 3), mpmath.nstr(spread, 3))
        worst_deviation = max(worst_deviation, deviation)
        worst_spread = max(worst_spread, spread)
        result.append({"theta": theta, "alpha": alpha, "max_deviation": float(deviation),
                       "radius_spread": float(spread)})
    passed = worst_deviation <= config.tolerance and worst_spread <= config.tolerance
    summary = (f"parametrix-check jmax={config.jmax}: max |<G,H> - delta| = {mpmath.nstr(worst_deviation, 3)}, "
               f"radius spread = {mpmath.nstr(worst_spread, 3)} ({'ok' if passed else 'FAILED'})")
    return Outcome(name="parametrix", summary=summary, records=records, schema_provider="get_matrix_schema",
                   result={"rows": result, "tolerance": config.tolerance}, passed=passed)


def run_equilibrium(config: RunConfig, ctx: PrecisionContext) -> Outcome:
    eq = solve_for(config)
    records = [{"x": float(x), "psi": float(p)} for x, p in zip(eq.grid, eq.psi)]
    result = eq.as_dict()
    result["virial_residual"] = virial_residual(eq)
    passed = abs(eq.mass - 1) <= 1e-10 and eq.el_residual <= 1e-6
    summary = (f"equilibrium theta={config.theta:g}: b={eq.b:.10g} d1={eq.d1:.10g} rho={eq.rho:.10g} "
               f"ell={eq.lagrange_ell:.10g} EL residual={eq.el_residual:.2e} ({'ok' if passed else 'FAILED'})")
    return Outcome(name="equilibrium", summary=summary, records=records, schema_provider="get_equilibrium_schema",
                   result=result, passed=passed)


def run_biortho(config: RunConfig, ctx: PrecisionContext) -> Outcome:
    bound = mpmath.mpf(10) ** (-(config.mantissa_bits / 4))
    records = []
    details = []
    passed = True
    for system in build_systems(config):
        with mpmath.workprec(system.work_bits):
            residual = biorthogonality_residual(system)
            consistency = direct_kappa(system, system.n, ctx) / system.kappas[system.n]
            kappas = [decimal_string(k, ctx) for k in system.kappas]
        passed = passed and residual <= bound
        records.append({"n": system.n, "error": decimal_string(residual, ctx),
                        "ratio": decimal_string(consistency, ctx)})
        details.append({"n": system.n, "degree": system.degree, "work_bits": system.work_bits, "kappas": kappas})
    summary = (f"biortho n={','.join(map(str, config.n_list))}: max residual "
               f"{max(float(r['error']) for r in records):.3e} ({'ok' if passed else 'FAILED'})")
    return Outcome(name="biortho", summary=summary, records=records, schema_provider="get_convergence_schema",
                   result={"systems": details, "residual_bound": float(bound)}, passed=passed)


def run_kernel(config: RunConfig, ctx: PrecisionContext) -> Outcome:
    eq = solve_for(config)
    constants = hard_edge_constants(eq)
    targets = [kernel_target(x, y, config.alpha, config.theta, constants, ctx) for x, y in config.points]
    records = []
    for system in build_systems(config):
        for (x, y), target in zip(config.points, targets):
            value = scaled_kernel(system, constants, x, y)
            records.append({"n": system.n, "x": repr(x), "y": repr(y), "scaled": decimal_string(value, ctx),
                            "target": decimal_string(target, ctx),
                            "error": decimal_string(abs(value - target) / abs(target), ctx),
                            "ratio": decimal_string(value / target, ctx)})
    worst = max(float(r["error"]) for r in records if r["n"] == config.n_list[-1])
    summary = f"kernel n={config.n_list[-1]}: max relative deviation from the limit {worst:.3e}"

    def log_spread(frame):
        row = nw.from_native(summarize_column(frame, "error"), eager_only=True).rows(named=True)[0]
        logger.info("kernel relative deviations: min %.3e max %.3e mean %.3e", row["a_min"], row["a_max"],
                    row["a_mean"])

    return Outcome(name="kernel", summary=summary, records=records, schema_provider="get_convergence_schema",
                   result={"constants": constants}, frame_hook=log_spread)


def _report_for(config: RunConfig, eq: EquilibriumData, systems: Sequence[BiorthogonalSystem],
                ctx: PrecisionContext) -> ConvergenceReport:
    if config.target == "kappa":
        return verify_kappa(eq, systems)
    if config.target in ("p", "q"):
        return verify_pn_asymptotics(eq, systems, ctx=ctx, which=config.target)
    return verify_kernel_limit(eq, systems, points=config.points, ctx=ctx)


def run_verify(config: RunConfig, ctx: PrecisionContext) -> Outcome:
    eq = solve_for(config)
    systems = build_systems(config)
    try:
        report = _report_for(config, eq, systems, ctx)
    except PrecisionLoss as e:
        logger.warning("precision loss (%s); rebuilding systems at %d bits", e, 2 * config.mantissa_bits)
        ctx = ctx.escalated()
        report = _report_for(config, eq, build_systems(config, ctx.mantissa_bits), ctx)
    passed = report.rate_ok() and report.decreasing()
    summary = (f"verify {config.target}: n={','.join(map(str, report.n_values))} error[-1]={report.errors[-1]:.3e} "
               f"fitted rate {report.fitted_rate:.3f} vs predicted {report.predicted_rate:.3f} "
               f"({'ok' if passed else 'FAILED'})")

    def cross_check(frame):
        frame_rate = fit_log_log_rate(frame)
        if abs(frame_rate - report.fitted_rate) > 1e-9:
            logger.warning("frame rate %.6f differs from report rate %.6f", frame_rate, report.fitted_rate)
        if is_strictly_decreasing(frame) != report.decreasing():
            logger.warning("frame and report disagree on monotone decay")

    return Outcome(name=f"verify_{config.target}", summary=summary, records=report.to_records(),
                   schema_provider="get_convergence_schema", result=report.to_json_dict(), passed=passed,
                   frame_hook=cross_check)


RUNNERS: Dict[str, Callable[[RunConfig, PrecisionContext], Outcome]] = {
    "specfun": run_specfun,
    "parametrix-check": run_parametrix_check,
    "equilibrium": run_equilibrium,
    "biortho": run_biortho,
    "kernel": run_kernel,
    "verify": run_verify,
}


# emission


def report_document(config: RunConfig, ctx: PrecisionContext, outcome: Outcome) -> Dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": config.command,
        "config": config.canonical(),
        "config_hash": config_hash(config.canonical()),
        "precision": ctx.as_dict(),
        "passed": outcome.passed,
        "result": outcome.result,
    }


def emit(config: RunConfig, ctx: PrecisionContext, outcome: Outcome) -> Optional[str]:
    provider = provider_for(config.backend)
    frame = provider.from_records(outcome.records, getattr(provider, outcome.schema_provider))
    if outcome.frame_hook is not None:
        outcome.frame_hook(frame)
    if config.out is None:
        return None
    os.makedirs(config.out, exist_ok=True)
    csv_path = provider.write_csv(frame, os.path.join(config.out, f"{outcome.name}.csv"))
    with open(os.path.join(config.out, f"{outcome.name}.json"), "w", encoding="utf-8") as handle:
        json.dump(report_document(config, ctx, outcome), handle, sort_keys=True, indent=2)
        handle.write("\n")
    logger.info("report written to %s", csv_path)
    return csv_path


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        arguments = vars(parser.parse_args(argv))
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    command = arguments.pop("command")

    try:
        config = RunConfig.from_sources(command, arguments)
    except MalformedConfig as e:
        print(e, file=sys.stderr)
        return EXIT_USAGE
    except ConfigError as e:
        print(e, file=sys.stderr)
        return EXIT_VALIDATION
    configure_logging(config.log_level)

    ctx = config.precision()
    try:
        with ctx.workprec():
            outcome = RUNNERS[command](config, ctx)
        emit(config, ctx, outcome)
    except NONCONVERGENCE_ERRORS as e:
        print(e, file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except HardEdgeError as e:
        print(e, file=sys.stderr)
        return EXIT_VALIDATION

    print(outcome.summary)
    return EXIT_OK if outcome.passed else EXIT_VALIDATION


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
