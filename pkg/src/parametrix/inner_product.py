"""
Contour pairing ⟨f, H^(ℓ)⟩ = (1/2πi) ∮_{|z|=R'} H^(ℓ)(z) f(z) dz/z and the checks built on it.
"""

import logging
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import mpmath

from numeric_core import NonConvergence, PrecisionContext, arc_nodes, circle_arcs, error_message, quad_circle
from numeric_core.quadrature import MAX_NODES

from .model import ModelFunction, g_model_polar, h_model_polar

logger = logging.getLogger(__name__)

PAIRINGS = {"plain": ("G", "H"), "tilde": ("G_tilde", "H_tilde")}


def _breakpoints(*functions: ModelFunction, extra: Iterable = ()) -> List:
    points = [mpmath.mpf(0), mpmath.pi]
    for function in functions:
        points.extend(function.rays)
    points.extend(extra)
    return points


def inner_product(f: Callable, ell: int, radius, theta, alpha, ctx: PrecisionContext, family: str = "plain",
                  gamma=0, breakpoints: Sequence = (), method: str = "auto") -> mpmath.mpc:
    """
    ⟨f, H^(ℓ)⟩ (family "plain") or ⟨f, H̃^(ℓ)⟩ (family "tilde") on the circle |z| = radius.

    The circle is cut at the rays of the pairing function, at 0 and π, and at any extra
    breakpoint angles of f, so every arc carries an analytic integrand.
    """
    pairing = ModelFunction(PAIRINGS[family][1], ell, theta, alpha, ctx, gamma=gamma, method=method)
    if isinstance(f, ModelFunction):
        breakpoints = list(breakpoints) + list(f.rays)
    return quad_circle(lambda z: pairing(z) * f(z), radius, ctx, breakpoints=_breakpoints(pairing,
                                                                                          extra=breakpoints))


def _needs_escalation(j: int, k: int, radius, ctx: PrecisionContext) -> bool:
    return abs(j - k) * abs(mpmath.log(radius, 2)) > ctx.mantissa_bits / 8


def biorthogonality_matrix(jmax: int, radius, theta, alpha, ctx: PrecisionContext, family: str = "plain",
                           gamma=0, method: str = "auto") -> Dict[Tuple[int, int], mpmath.mpc]:
    """
    All pairings ⟨G^(j), H^(−k)⟩ (or the tilde analogue) for 0 ≤ j, k ≤ jmax.

    Every function is tabulated once per node set; node sets are refined by doubling the
    Gauss–Legendre order on each arc until every entry is stable to rel_tol.
    """
    if any(_needs_escalation(j, k, radius, ctx) for j in range(jmax + 1) for k in range(jmax + 1)):
        ctx = ctx.escalated()
    first, second = PAIRINGS[family]
    lefts = [ModelFunction(first, j, theta, alpha, ctx, gamma=gamma, method=method) for j in range(jmax + 1)]
    rights = [ModelFunction(second, -k, theta, alpha, ctx, gamma=gamma, method=method) for k in range(jmax + 1)]

    with ctx.workprec(10):
        r = mpmath.mpf(radius)
        arcs = circle_arcs(_breakpoints(lefts[0], rights[0]))
        per_arc = max(ctx.quad_points_circle // (3 * len(arcs)), 1)
        degree = int(mpmath.ceil(mpmath.log(per_arc, 2))) + 1
        previous: Optional[Dict[Tuple[int, int], mpmath.mpc]] = None
        while 3 * 2 ** (degree - 1) * len(arcs) <= MAX_NODES:
            nodes = [node for start, stop in arcs for node in arc_nodes(start, stop, degree, mpmath.mp.prec + 20)]
            left_values = [[g.polar(r, angle) for angle, _ in nodes] for g in lefts]
            right_values = [[h.polar(r, angle) for angle, _ in nodes] for h in rights]
            current = {}
            scale = mpmath.mpf(0)
            for j, g_row in enumerate(left_values):
                for k, h_row in enumerate(right_values):
                    products = [w * gv * hv for (_, w), gv, hv in zip(nodes, g_row, h_row)]
                    current[(j, k)] = mpmath.fsum(products) / (2 * mpmath.pi)
                    scale = max(scale, max(abs(gv * hv) for gv, hv in zip(g_row, h_row)))
            if previous is not None:
                spread = max(abs(current[key] - previous[key]) for key in current)
                logger.debug("biorthogonality matrix degree=%d spread=%s", degree, mpmath.nstr(spread, 3))
                if spread <= ctx.rel_tol * max(scale, 1):
                    return {key: +value for key, value in current.items()}
            previous = current
            degree += 1
    raise NonConvergence(error_message("parametrix", f"pairing matrix did not stabilize (jmax={jmax}, "
                                                     f"radius={radius})", "biorthogonality_matrix"))


def max_biorthogonality_deviation(matrix: Dict[Tuple[int, int], mpmath.mpc]) -> mpmath.mpf:
    return max(abs(value - (1 if j == k else 0)) for (j, k), value in matrix.items())


def jump_residual_G(radius, lam, theta, alpha, ctx: PrecisionContext, ray: str = "upper", gamma=0,
                    method: str = "auto") -> mpmath.mpc:
    """
    Residual of the jump of G^model across one of its rays:

        upper: G₊ − G₋ + e^{−(2α+3)πi/(θ+1)} e^{2πiλ} G(z e^{−2πi/(θ+1)})
        lower: G₊ − G₋ − e^{(2α+3)πi/(θ+1)} e^{−2πiλ} G(z e^{2πi/(θ+1)})
    """
    with ctx.workprec(8):
        theta = mpmath.mpf(theta)
        sign = 1 if ray == "upper" else -1
        angle = sign * (mpmath.pi + gamma * theta) / (theta + 1)
        rotated = angle - sign * 2 * mpmath.pi / (theta + 1)

        def evaluate(a, side):
            return g_model_polar(radius, a, lam, theta, alpha, ctx, side=side, gamma=gamma, method=method)

        jump = evaluate(angle, "+") - evaluate(angle, "-")
        factor = mpmath.expjpi(-sign * (2 * mpmath.mpf(alpha) + 3) / (theta + 1)) * mpmath.expjpi(sign * 2 * lam)
        # the rotated point is the limit from inside the right sector
        target = evaluate(rotated, "+" if sign > 0 else "-")
        result = jump + sign * factor * target
    return +result


def jump_residual_H(radius, beta, theta, alpha, ctx: PrecisionContext, ray: str = "upper", gamma=0,
                    method: str = "auto") -> mpmath.mpc:
    """
    Residual of the jump of H^model across one of its rays:

        upper: H₊ − H₋ + e^{(2α+3)πi/(θ+1)} e^{−2πiβ} H(z e^{−2πi/(θ+1)})
        lower: H₊ − H₋ − e^{−(2α+3)πi/(θ+1)} e^{2πiβ} H(z e^{2πi/(θ+1)})
    """
    with ctx.workprec(8):
        theta = mpmath.mpf(theta)
        sign = 1 if ray == "upper" else -1
        angle = sign * (mpmath.pi - gamma * theta) / (theta + 1)
        rotated = angle - sign * 2 * mpmath.pi / (theta + 1)

        def evaluate(a, side):
            return h_model_polar(radius, a, beta, theta, alpha, ctx, side=side, gamma=gamma, method=method)

        jump = evaluate(angle, "+") - evaluate(angle, "-")
        factor = mpmath.expjpi(sign * (2 * mpmath.mpf(alpha) + 3) / (theta + 1)) * mpmath.expjpi(-sign * 2 * beta)
        # the rotated point is the limit from inside the left sector
        target = evaluate(rotated, "-" if sign > 0 else "+")
        result = jump + sign * factor * target
    return +result


def circle_bound_constant(ells: Sequence[int], radius, theta, alpha, ctx: PrecisionContext, samples: int = 32,
                          family: str = "G", method: str = "auto") -> Tuple[mpmath.mpf, Dict[int, mpmath.mpf]]:
    """
    Smallest C_r with max_{|z|=r} |F^(ℓ)(z)| ≤ C_r r^ℓ over the given ℓ, together with the per-ℓ ratios.
    Sample angles are offset by half a step so that no sample falls on a ray.
    """
    ratios = {}
    with ctx.workprec(8):
        r = mpmath.mpf(radius)
        angles = [mpmath.pi * (2 * s + 1) / samples - mpmath.pi for s in range(samples)]
        for ell in ells:
            function = ModelFunction(family, ell, theta, alpha, ctx, method=method)
            peak = max(abs(function.polar(r, angle)) for angle in angles)
            ratios[ell] = peak / r ** ell
    return max(ratios.values()), ratios
