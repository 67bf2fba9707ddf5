"""
Convergence experiments for the hard-edge asymptotics of p_n, q_n, κ_n and K_n.

Each experiment takes the equilibrium data of V and a list of biorthogonal systems
(one per n, each built with the weight e^{−nV}) and returns a ConvergenceReport.
"""

import logging
from typing import Dict, List, Optional, Sequence, Tuple

import mpmath

from biorthogonal import BiorthogonalSystem, kernel_n
from equilibrium import EquilibriumData, equilibrium_constants
from numeric_core import ConfigError, PrecisionContext, PrecisionLoss, error_message, quad_interval
from specfun import WrightParams, wright_bessel

from .limit import limit_kernel, limit_kernel_rescaled
from .report import ConvergenceReport

logger = logging.getLogger(__name__)

CONVENTIONS = ("theorem", "unscaled")
DEFAULT_KERNEL_POINTS = ((0.7, 1.1), (0.3, 0.3), (1.5, 0.9), (1.0, 2.0))


def default_z_samples() -> List[complex]:
    """Twelve points of the disk |z| ≤ 2, none on the negative axis."""
    return [r * mpmath.expjpi(f) for r in (0.5, 1.0, 1.5, 2.0) for f in (mpmath.mpf(-1) / 2, 0, mpmath.mpf(1) / 2)]


def hard_edge_constants(eq: EquilibriumData) -> Dict[str, float]:
    """ρ, c, ℓ, Re g₊(0), Re g̃₊(0) and m_θ, preferring Richardson estimates when present."""
    source = eq.extrapolated or {}
    b = source.get("b", eq.b)
    d1 = source.get("d1", eq.d1)
    constants = equilibrium_constants(b, d1, eq.theta)
    g0_re = source.get("g0_re", eq.g0_re)
    constants.update({
        "b": b,
        "d1": d1,
        "lagrange_ell": source.get("lagrange_ell", eq.lagrange_ell),
        "g0_re": g0_re,
        "gtilde0_re": eq.theta * g0_re,
    })
    return constants


def predicted_polynomial_rate(theta: float) -> float:
    m = min(1 + 1 / theta, 2.0)
    return (1 - m) / (1 + m)


def predicted_kappa_rate(theta: float) -> float:
    m = min(1 + 1 / theta, 2.0)
    return -m / (m + 1)


def p_prefactor(n: int, constants: Dict[str, float], alpha: float, theta: float):
    """C_n = √(2π) c^{(2(α+1)−θ)/(2(θ+1))} (ρn)^{(α+1)/θ − 1/2} e^{n Re g₊(0)}."""
    c, rho = mpmath.mpf(constants["c"]), mpmath.mpf(constants["rho"])
    return (mpmath.sqrt(2 * mpmath.pi) * mpmath.power(c, (2 * (alpha + 1) - theta) / (2 * (theta + 1)))
            * mpmath.power(rho * n, (alpha + 1) / theta - mpmath.mpf(1) / 2)
            * mpmath.exp(n * mpmath.mpf(constants["g0_re"])))


def q_prefactor(n: int, constants: Dict[str, float], alpha: float, theta: float):
    """C̃_n = √(2π) c^{(α+1/2)/(1+1/θ)} (θρn)^{α+1/2} e^{n Re g̃₊(0)}."""
    c, rho = mpmath.mpf(constants["c"]), mpmath.mpf(constants["rho"])
    half = mpmath.mpf(1) / 2
    return (mpmath.sqrt(2 * mpmath.pi) * mpmath.power(c, (alpha + half) / (1 + mpmath.mpf(1) / theta))
            * mpmath.power(theta * rho * n, alpha + half) * mpmath.exp(n * mpmath.mpf(constants["gtilde0_re"])))


def kappa_prefactor(n: int, constants: Dict[str, float], alpha: float, theta: float):
    """2π θ^{−1/2} c^{α+1} e^{nℓ}."""
    c = mpmath.mpf(constants["c"])
    return (2 * mpmath.pi / mpmath.sqrt(theta) * mpmath.power(c, alpha + 1)
            * mpmath.exp(n * mpmath.mpf(constants["lagrange_ell"])))


def _ordered(systems: Sequence[BiorthogonalSystem]) -> List[BiorthogonalSystem]:
    ordered = sorted(systems, key=lambda s: s.n)
    if any(b.n == a.n for a, b in zip(ordered, ordered[1:])):
        raise ConfigError(error_message("hardedge_verify", "one system per n is expected", "_ordered"))
    return ordered


def prefactor_table(systems: Sequence[BiorthogonalSystem], constants: Dict[str, float],
                    theta: float) -> Dict[str, Tuple[float, ...]]:
    """C_n, C̃_n and the κ_n prefactor for every system, in the order given."""
    table = {"C_n": [], "C_tilde_n": [], "kappa_prefactor": []}
    for system in systems:
        with mpmath.workprec(system.work_bits):
            table["C_n"].append(float(p_prefactor(system.n, constants, system.alpha, theta)))
            table["C_tilde_n"].append(float(q_prefactor(system.n, constants, system.alpha, theta)))
            table["kappa_prefactor"].append(float(kappa_prefactor(system.n, constants, system.alpha, theta)))
    return {name: tuple(values) for name, values in table.items()}


def _checked_polyval(coefficients, x, guard_bits: int):
    """Evaluate Σ c_k x^k, raising PrecisionLoss when cancellation eats more than `guard_bits`."""
    terms = [c * mpmath.power(x, k) for k, c in enumerate(coefficients)]
    value = mpmath.fsum(terms)
    largest = max(abs(t) for t in terms)
    if value != 0 and largest / abs(value) > mpmath.ldexp(1, guard_bits):
        raise PrecisionLoss(error_message("hardedge_verify", f"cancellation of {mpmath.nstr(largest / abs(value), 3)}"
                                          f" exceeds the {guard_bits}-bit guard", "_checked_polyval"))
    return value


def polynomial_error(system: BiorthogonalSystem, constants: Dict[str, float], z_samples: Sequence,
                     ctx: PrecisionContext, which: str = "p"):
    """sup_z |p_n(z/(ρn)^{1+1/θ}) / ((−1)^n C_n) − J_{(α+1)/θ,1/θ}(θz)|, or the q_n analogue."""
    n, theta, alpha = system.n, system.theta, system.alpha
    if system.degree < n:
        raise ConfigError(error_message("hardedge_verify", f"system of degree {system.degree} has no p_{n}",
                                        "polynomial_error"))
    spare_bits = system.work_bits - system.mantissa_bits
    with mpmath.workprec(system.work_bits):
        rho_n = mpmath.mpf(constants["rho"]) * n
        sign = (-1) ** n
        worst = mpmath.mpf(0)
        for z in z_samples:
            z = mpmath.mpc(z)
            if which == "p":
                point = z / mpmath.power(rho_n, 1 + mpmath.mpf(1) / theta)
                value = _checked_polyval(system.p_coeffs[n][:n + 1], point, spare_bits)
                scaled = value / (sign * p_prefactor(n, constants, alpha, theta))
                target = wright_bessel(WrightParams((alpha + 1) / theta, 1 / theta), theta * z, ctx)
            elif which == "q":
                point = mpmath.power(z, theta) / mpmath.power(rho_n, theta + 1)
                value = _checked_polyval(system.q_coeffs[n][:n + 1], point, spare_bits)
                scaled = value / (sign * q_prefactor(n, constants, alpha, theta))
                target = wright_bessel(WrightParams(alpha + 1, theta), mpmath.power(theta * z, theta), ctx)
            else:
                raise ValueError(error_message("hardedge_verify", f"which must be 'p' or 'q', got {which!r}",
                                               "polynomial_error"))
            worst = max(worst, abs(scaled - target))
    return worst


def verify_pn_asymptotics(eq: EquilibriumData, systems: Sequence[BiorthogonalSystem],
                          z_samples: Optional[Sequence] = None, ctx: Optional[PrecisionContext] = None,
                          which: str = "p") -> ConvergenceReport:
    """Plancherel–Rotach check of p_n (which="p") or q_n (which="q") at the hard edge."""
    ctx = ctx or PrecisionContext.from_env()
    samples = default_z_samples() if z_samples is None else list(z_samples)
    constants = hard_edge_constants(eq)
    ordered = _ordered(systems)
    errors = []
    for system in ordered:
        error = polynomial_error(system, constants, samples, ctx, which)
        logger.info("%s_n asymptotics n=%d error=%s", which, system.n, mpmath.nstr(error, 6))
        errors.append(float(error))
    return ConvergenceReport(quantity=f"{which}_n", n_values=tuple(s.n for s in ordered), errors=tuple(errors),
                             predicted_rate=predicted_polynomial_rate(eq.theta), constants_used=constants,
                             prefactors=prefactor_table(ordered, constants, eq.theta))


def verify_kappa(eq: EquilibriumData, systems: Sequence[BiorthogonalSystem]) -> ConvergenceReport:
    """κ_n / (2π θ^{−1/2} c^{α+1} e^{nℓ}) and its approach to 1."""
    constants = hard_edge_constants(eq)
    ordered = _ordered(systems)
    ratios = []
    for system in ordered:
        with mpmath.workprec(system.work_bits):
            ratio = system.kappas[system.n] / kappa_prefactor(system.n, constants, system.alpha, eq.theta)
        logger.info("kappa ratio n=%d: %s", system.n, mpmath.nstr(ratio, 10))
        ratios.append(float(ratio))
    return ConvergenceReport(quantity="kappa_n", n_values=tuple(s.n for s in ordered),
                             errors=tuple(abs(r - 1) for r in ratios), ratios=tuple(ratios),
                             predicted_rate=predicted_kappa_rate(eq.theta), constants_used=constants,
                             prefactors=prefactor_table(ordered, constants, eq.theta))


def scaled_kernel(system: BiorthogonalSystem, constants: Dict[str, float], x, y, convention: str = "theorem"):
    """
    "theorem":  θ^{−1} (ρn)^{−(1+1/θ)} K_n(x/(θ(ρn)^{1+1/θ}), y/(θ(ρn)^{1+1/θ}))
    "unscaled": n^{−(1+1/θ)} K_n(x/n^{1+1/θ}, y/n^{1+1/θ})
    """
    n, theta = system.n, system.theta
    with mpmath.workprec(system.work_bits):
        exponent = 1 + mpmath.mpf(1) / theta
        if convention == "theorem":
            scale = mpmath.power(mpmath.mpf(constants["rho"]) * n, exponent)
            return kernel_n(system, x / (theta * scale), y / (theta * scale)) / (theta * scale)
        if convention == "unscaled":
            scale = mpmath.power(n, exponent)
            return kernel_n(system, x / scale, y / scale) / scale
    raise ValueError(error_message("hardedge_verify", f"convention must be one of {CONVENTIONS}, got {convention!r}",
                                   "scaled_kernel"))


def kernel_target(x, y, alpha: float, theta: float, constants: Dict[str, float], ctx: PrecisionContext,
                  convention: str = "theorem"):
    """x^α times the limit kernel in the chosen convention; K_n carries the weight x^α."""
    with ctx.workprec():
        weight = mpmath.power(mpmath.mpf(x), alpha)
        if convention == "theorem":
            return weight * limit_kernel(x, y, alpha, theta, ctx)
        return weight * limit_kernel_rescaled(x, y, alpha, theta, constants["rho"], ctx)


def verify_kernel_limit(eq: EquilibriumData, systems: Sequence[BiorthogonalSystem],
                        points: Sequence[Tuple[float, float]] = DEFAULT_KERNEL_POINTS,
                        ctx: Optional[PrecisionContext] = None) -> ConvergenceReport:
    """
    Maximal relative error of the scaled K_n over `points`, in both argument conventions.

    `errors` follow the theorem convention; the other convention is reported in
    columns["error_unscaled"].
    """
    ctx = ctx or PrecisionContext.from_env()
    constants = hard_edge_constants(eq)
    ordered = _ordered(systems)
    targets = {convention: [kernel_target(x, y, ordered[0].alpha, eq.theta, constants, ctx, convention)
                            for x, y in points] for convention in CONVENTIONS}
    errors = {convention: [] for convention in CONVENTIONS}
    for system in ordered:
        for convention in CONVENTIONS:
            worst = max(abs(scaled_kernel(system, constants, x, y, convention) - target) / abs(target)
                        for (x, y), target in zip(points, targets[convention]))
            errors[convention].append(float(worst))
        logger.info("kernel limit n=%d: theorem=%.3e unscaled=%.3e", system.n, errors["theorem"][-1],
                    errors["unscaled"][-1])
    return ConvergenceReport(quantity="kernel", n_values=tuple(s.n for s in ordered), errors=tuple(errors["theorem"]),
                             predicted_rate=predicted_polynomial_rate(eq.theta), constants_used=constants,
                             columns={"error_unscaled": tuple(errors["unscaled"])},
                             prefactors=prefactor_table(ordered, constants, eq.theta))


def hard_edge_count(system: BiorthogonalSystem, constants: Dict[str, float], upper, ctx: PrecisionContext):
    """∫_0^M of the scaled diagonal (theorem convention): expected number of points near the hard edge."""
    work = system.context(ctx)
    with work.workprec():
        def diagonal(x):
            return scaled_kernel(system, constants, x, x)

        return quad_interval(diagonal, 0, upper, work)
