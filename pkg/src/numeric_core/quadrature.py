"""
Quadrature engines: circle, line and semi-axis.

Every engine refines by doubling its node count (halving its step) until two
successive estimates agree to ctx.rel_tol, with a hard cap of MAX_NODES nodes.
Sums are accumulated in a fixed node order so that results are reproducible.
"""

import logging
from functools import lru_cache
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

import mpmath
from mpmath.calculus.quadrature import GaussLegendre

from .errors import EndpointSingularity, NonConvergence, error_message
from .precision import PrecisionContext

logger = logging.getLogger(__name__)

MAX_NODES = 2 ** 20
_DE_MAX_LEVEL = 12
_TAIL_HITS = 3


def _converged(previous, current, scale, ctx: PrecisionContext) -> bool:
    return abs(current - previous) <= ctx.rel_tol * max(abs(current), scale)


@lru_cache(maxsize=64)
def _gauss_legendre_nodes(degree: int, prec: int) -> Tuple[Tuple[mpmath.mpf, mpmath.mpf], ...]:
    rule = GaussLegendre(mpmath.mp)
    with mpmath.workprec(prec):
        return tuple(rule.calc_nodes(degree, prec))


def _circle_trapezoid(f: Callable, radius, ctx: PrecisionContext):
    n = ctx.quad_points_circle
    values = [f(radius * mpmath.expjpi(mpmath.mpf(2 * k) / n)) for k in range(n)]
    total = mpmath.fsum(values)
    scale = mpmath.fsum(abs(v) for v in values) / n
    estimate = total / n
    failures = 0
    while 2 * n <= MAX_NODES:
        odd = [f(radius * mpmath.expjpi(mpmath.mpf(2 * k + 1) / n)) for k in range(n)]
        total += mpmath.fsum(odd)
        scale = (scale * n + mpmath.fsum(abs(v) for v in odd)) / (2 * n)
        n *= 2
        refined = total / n
        logger.debug("circle trapezoid n=%d diff=%s", n, mpmath.nstr(abs(refined - estimate), 3))
        if _converged(estimate, refined, scale, ctx):
            return refined
        estimate = refined
        failures += 1
    raise NonConvergence(error_message("numeric_core", f"circle quadrature did not stabilize after {failures} "
                                                       f"doublings (radius={mpmath.nstr(radius, 6)})",
                                       "quad_circle"))


def arc_nodes(start, stop, degree: int, prec: int) -> List[Tuple[mpmath.mpf, mpmath.mpf]]:
    """Gauss–Legendre nodes (angle, weight) on the angular interval [start, stop]."""
    half = (stop - start) / 2
    mid = (stop + start) / 2
    return [(mid + half * x, half * w) for x, w in _gauss_legendre_nodes(degree, prec)]


def circle_arcs(breakpoints: Iterable) -> List[Tuple[mpmath.mpf, mpmath.mpf]]:
    """Split [−π, π] at the given angles (wrapped into (−π, π]) into consecutive arcs."""
    pi = mpmath.pi
    cuts = sorted({mpmath.mpf(b) - 2 * pi * mpmath.floor((mpmath.mpf(b) + pi) / (2 * pi)) for b in breakpoints})
    cuts = [c for c in cuts if -pi < c < pi]
    edges = [-pi] + cuts + [pi]
    return list(zip(edges[:-1], edges[1:]))


def _circle_arcs_gauss(f: Callable, radius, breakpoints, ctx: PrecisionContext):
    arcs = circle_arcs(breakpoints)
    per_arc = max(ctx.quad_points_circle // (3 * len(arcs)), 1)
    degree = int(mpmath.ceil(mpmath.log(per_arc, 2))) + 1
    prec = mpmath.mp.prec + 20
    estimate = None
    while 3 * 2 ** (degree - 1) * len(arcs) <= MAX_NODES:
        total = mpmath.mpc(0)
        scale = mpmath.mpf(0)
        count = 0
        for start, stop in arcs:
            for angle, weight in arc_nodes(start, stop, degree, prec):
                value = f(radius * mpmath.expj(angle))
                total += weight * value
                scale += abs(value)
                count += 1
        refined = total / (2 * mpmath.pi)
        scale /= count
        if estimate is not None:
            logger.debug("circle arcs degree=%d diff=%s", degree, mpmath.nstr(abs(refined - estimate), 3))
            if _converged(estimate, refined, scale, ctx):
                return refined
        estimate = refined
        degree += 1
    raise NonConvergence(error_message("numeric_core", f"arc-wise circle quadrature did not stabilize "
                                                       f"(radius={mpmath.nstr(radius, 6)}, arcs={len(arcs)})",
                                       "quad_circle"))


def quad_circle(f: Callable, radius, ctx: PrecisionContext, breakpoints: Optional[Sequence] = None):
    """
    Approximate (1/2πi)∮_{|z|=radius} f(z) dz/z.

    Without breakpoints the equispaced trapezoid rule is used (spectral for functions
    analytic near the circle). With breakpoint angles the circle is cut into arcs and
    each arc is integrated by Gauss–Legendre, so that piecewise-analytic integrands
    (one-sided branches on discontinuity rays) converge just as fast.
    """
    with ctx.workprec(10):
        r = mpmath.mpf(radius)
        if not r > 0:
            raise ValueError(error_message("numeric_core", f"radius must be positive, got {radius}", "quad_circle"))
        if breakpoints:
            result = _circle_arcs_gauss(f, r, breakpoints, ctx)
        else:
            result = _circle_trapezoid(f, r, ctx)
    return +result


def _scan_half_width(g: Callable, ctx: PrecisionContext, step=mpmath.mpf(0.5), limit: int = 4096):
    peak = abs(g(mpmath.mpf(0)))
    threshold_bits = ctx.mantissa_bits + 10
    t = mpmath.mpf(0)
    quiet = 0
    for _ in range(limit):
        t += step
        magnitude = max(abs(g(t)), abs(g(-t)))
        peak = max(peak, magnitude)
        if peak > 0 and magnitude < peak * mpmath.ldexp(1, -threshold_bits):
            quiet += 1
            if quiet >= _TAIL_HITS:
                return t, peak
        else:
            quiet = 0
    raise NonConvergence(error_message("numeric_core", "line integrand does not decay on the scanned range",
                                       "quad_line"))


def quad_line(g: Callable, ctx: PrecisionContext, half_width=None, scale=None):
    """
    ∫_{−∞}^{∞} g(t) dt for an integrand analytic in a strip and decaying faster than any
    exponential, by the truncated trapezoid rule with step halving.
    """
    with ctx.workprec(10):
        if half_width is None:
            half_width, peak = _scan_half_width(g, ctx)
        else:
            half_width = mpmath.mpf(half_width)
            peak = abs(g(mpmath.mpf(0))) if scale is None else mpmath.mpf(scale)
        n = ctx.quad_points_line
        h = 2 * half_width / n
        total = mpmath.fsum(g(-half_width + k * h) for k in range(n + 1))
        estimate = total * h
        while 2 * n <= MAX_NODES:
            total += mpmath.fsum(g(-half_width + (2 * k + 1) * h / 2) for k in range(n))
            n *= 2
            h /= 2
            refined = total * h
            logger.debug("line trapezoid n=%d diff=%s", n, mpmath.nstr(abs(refined - estimate), 3))
            if _converged(estimate, refined, peak * half_width, ctx):
                return +refined
            estimate = refined
    raise NonConvergence(error_message("numeric_core", f"line quadrature did not stabilize below {MAX_NODES} nodes",
                                       "quad_line"))


def _exp_sinh(scale, shift):
    half_pi = mpmath.pi / 2

    def transform(t):
        e = half_pi * mpmath.sinh(t)
        x = scale * mpmath.exp(e)
        return shift + x, x * half_pi * mpmath.cosh(t)
    return transform


def _tanh_sinh(left, right):
    half_pi = mpmath.pi / 2
    width = right - left

    def transform(t):
        u = half_pi * mpmath.sinh(t)
        # distance to the nearer endpoint is computed without cancellation
        if u >= 0:
            x = right - width / (1 + mpmath.exp(2 * u))
        else:
            x = left + width / (1 + mpmath.exp(-2 * u))
        return x, width * half_pi * mpmath.cosh(t) / (2 * mpmath.cosh(u) ** 2)
    return transform


def _de_sum(f: Callable, transform: Callable, h, ctx: PrecisionContext, offset: bool):
    threshold = mpmath.ldexp(1, -(ctx.mantissa_bits + 10))
    total = mpmath.mpf(0)
    peak = mpmath.mpf(0)
    start = mpmath.mpf(1) / 2 if offset else mpmath.mpf(0)
    if not offset:
        x, dx = transform(mpmath.mpf(0))
        term = f(x) * dx
        total += term
        peak = abs(term)
    for direction in (1, -1):
        quiet = 0
        k = 0
        while quiet < _TAIL_HITS:
            k += 1
            t = direction * (k - 1 + start if offset else k) * h
            x, dx = transform(t)
            if dx == 0 or not mpmath.isfinite(x):
                break
            term = f(x) * dx
            if not mpmath.isfinite(abs(term)):
                break
            total += term
            peak = max(peak, abs(term))
            quiet = quiet + 1 if abs(term) <= threshold * peak else 0
            if k > MAX_NODES // 4:
                break
    return total, peak


def _de_integrate(f: Callable, transform: Callable, ctx: PrecisionContext):
    h = mpmath.mpf(1) / 2
    total, peak = _de_sum(f, transform, h, ctx, offset=False)
    estimate = total * h
    for level in range(_DE_MAX_LEVEL):
        extra, extra_peak = _de_sum(f, transform, h, ctx, offset=True)
        total += extra
        peak = max(peak, extra_peak)
        h /= 2
        refined = total * h
        logger.debug("double-exponential level=%d diff=%s", level, mpmath.nstr(abs(refined - estimate), 3))
        if level >= 1 and _converged(estimate, refined, peak * h, ctx):
            return refined
        estimate = refined
    raise NonConvergence(error_message("numeric_core", "semi-axis quadrature did not stabilize", "quad_semiaxis"))


def quad_semiaxis(f: Callable, decay_scale, ctx: PrecisionContext, alpha=None,
                  breakpoints: Optional[Sequence] = None):
    """
    ∫_0^∞ f(x) dx for integrands with an x^α endpoint singularity and super-polynomial decay.

    The logarithmic substitution log(x/decay_scale) = (π/2) sinh t turns both ends into
    double-exponentially decaying tails; the trapezoid rule in t is refined by halving.
    Breakpoints split the axis so that near-singular points become interval endpoints
    (tanh-sinh on the finite pieces, shifted exp-sinh on the last one).

    :param decay_scale: Typical location of the integrand's bulk (e.g. its peak).
    :param alpha: Exponent of the endpoint singularity, if known; α ≤ −1 is rejected.
    """
    if alpha is not None and alpha <= -1:
        raise EndpointSingularity(error_message("numeric_core", f"x^alpha with alpha={alpha} is not integrable at 0",
                                                "quad_semiaxis"))
    with ctx.workprec(10):
        scale = mpmath.mpf(decay_scale)
        if not scale > 0:
            raise ValueError(error_message("numeric_core", f"decay_scale must be positive, got {decay_scale}",
                                           "quad_semiaxis"))
        cuts = sorted(mpmath.mpf(b) for b in (breakpoints or ()) if b > 0)
        if not cuts:
            result = _de_integrate(f, _exp_sinh(scale, 0), ctx)
        else:
            pieces = []
            left = mpmath.mpf(0)
            for cut in cuts:
                pieces.append(_de_integrate(f, _tanh_sinh(left, cut), ctx))
                left = cut
            pieces.append(_de_integrate(f, _exp_sinh(max(scale, left) / 4, left), ctx))
            result = mpmath.fsum(pieces)
    return +result


def quad_interval(f: Callable, left, right, ctx: PrecisionContext):
    """∫_left^right f(x) dx by tanh-sinh with step halving (endpoint singularities allowed)."""
    with ctx.workprec(10):
        result = _de_integrate(f, _tanh_sinh(mpmath.mpf(left), mpmath.mpf(right)), ctx)
    return +result


def _de_sum_many(f: Callable, count: int, transform: Callable, h, ctx: PrecisionContext, offset: bool):
    threshold = mpmath.ldexp(1, -(ctx.mantissa_bits + 10))
    totals = [mpmath.mpf(0)] * count
    peaks = [mpmath.mpf(0)] * count

    def accumulate(t) -> bool:
        x, dx = transform(t)
        if dx == 0 or not mpmath.isfinite(x):
            return False
        quiet = True
        for i, value in enumerate(f(x)):
            term = value * dx
            totals[i] += term
            peaks[i] = max(peaks[i], abs(term))
            quiet = quiet and abs(term) <= threshold * peaks[i]
        return quiet

    start = mpmath.mpf(1) / 2 if offset else mpmath.mpf(0)
    if not offset:
        accumulate(mpmath.mpf(0))
    for direction in (1, -1):
        quiet = 0
        k = 0
        while quiet < _TAIL_HITS and k <= MAX_NODES // 4:
            k += 1
            t = direction * (k - 1 + start if offset else k) * h
            quiet = quiet + 1 if accumulate(t) else 0
    return totals, peaks


def quad_semiaxis_many(f: Callable, count: int, decay_scale, ctx: PrecisionContext) -> List:
    """
    ∫_0^∞ f(x) dx for a vector-valued f returning `count` values, on one shared exp-sinh rule.

    Each component must converge to ctx.rel_tol; the node set is refined for all of them
    together, so f is evaluated once per node.
    """
    with ctx.workprec(10):
        transform = _exp_sinh(mpmath.mpf(decay_scale), 0)
        h = mpmath.mpf(1) / 2
        totals, peaks = _de_sum_many(f, count, transform, h, ctx, offset=False)
        estimates = [t * h for t in totals]
        for level in range(_DE_MAX_LEVEL):
            extra, extra_peaks = _de_sum_many(f, count, transform, h, ctx, offset=True)
            totals = [a + b for a, b in zip(totals, extra)]
            peaks = [max(a, b) for a, b in zip(peaks, extra_peaks)]
            h /= 2
            refined = [t * h for t in totals]
            worst = max(abs(r - e) / max(abs(r), p * h) for r, e, p in zip(refined, estimates, peaks))
            logger.debug("vector double-exponential level=%d worst=%s", level, mpmath.nstr(worst, 3))
            if level >= 1 and worst <= ctx.rel_tol:
                return [+r for r in refined]
            estimates = refined
    raise NonConvergence(error_message("numeric_core", "vector semi-axis quadrature did not stabilize",
                                       "quad_semiaxis_many"))
