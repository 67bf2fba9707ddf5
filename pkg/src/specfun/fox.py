"""
The Fox-H-type functions I⁽¹⁾, I⁽²⁾, I⁽³⁾ with u = u_scale·z:

    I⁽¹⁾(z) = (1/2πi) ∫_L Γ(1/2 − a − θv/(θ+1)) / Γ(1 − a + v/(θ+1)) u^v dv
    I⁽²⁾(z) = (1/2πi) ∫_L Γ(1/2 − a − θv/(θ+1)) Γ(a − v/(θ+1)) u^v dv
    I⁽³⁾(z) = (1/2πi) ∫_L Γ(a − v/(θ+1)) / Γ(1/2 + a + θv/(θ+1)) u^v dv

L comes from +∞, encircles the poles once in the negative direction and returns to +∞.
Numerically L is the parabola v(t) = σ0 + t² + iκt, t ∈ ℝ, with σ0 left of every pole.
"""

import logging
from dataclasses import replace
from typing import Callable, List, Tuple

import mpmath

from numeric_core import (ContourNonConvergence, DomainError, NonConvergence, PrecisionContext, SectorError,
                          error_message, log_gamma, quad_line, to_complex)

from .params import FoxIParams, WrightParams
from .wright import wright_bessel

logger = logging.getLogger(__name__)

KINDS = (1, 2, 3)
METHODS = ("mellin_barnes", "wright", "residue")
ASYMPTOTIC_EPS = 0.05
RESONANCE_SEPARATION = 1e-3
CONTOUR_OPENING = 1
_SCAN_BITS = 64
_SCAN_STEP = mpmath.mpf(0.25)
_SCAN_LIMIT = 4000
_LOG2_E = 1.4426950408889634


def _check_kind(kind: int):
    if kind not in KINDS:
        raise DomainError(error_message("specfun", f"kind must be one of {KINDS}, got {kind}", "fox_I"))


def _log_u(p: FoxIParams, z) -> mpmath.mpc:
    w = to_complex(z, "fox_I")
    if w.imag == 0 and w.real <= 0:
        raise DomainError(error_message("specfun", f"z={mpmath.nstr(w, 8)} lies on the cut (-inf, 0]", "fox_I"))
    return mpmath.log(p.u_scale) + mpmath.log(w)


def pole_lattices(kind: int, p: FoxIParams) -> List[Tuple[mpmath.mpf, mpmath.mpf]]:
    """(first pole, spacing) of each Gamma factor in the numerator of the integrand."""
    theta = mpmath.mpf(p.theta)
    half_minus_a = mpmath.mpf(0.5) - p.a
    lattices = []
    if kind in (1, 2):
        lattices.append(((theta + 1) * half_minus_a / theta, (theta + 1) / theta))
    if kind in (2, 3):
        lattices.append(((theta + 1) * mpmath.mpf(p.a), theta + 1))
    return lattices


def pole_separation(p: FoxIParams, terms: int = 64) -> mpmath.mpf:
    """Smallest distance between the two pole lattices of I⁽²⁾ among the first `terms` poles of each."""
    theta = mpmath.mpf(p.theta)
    half_minus_a = mpmath.mpf(0.5) - p.a
    best = mpmath.inf
    for k in range(terms):
        position = (half_minus_a + k) / theta - p.a
        nearest = min(max(int(mpmath.nint(position)), 0), terms - 1)
        best = min(best, (theta + 1) * abs(position - nearest))
    return best


def is_resonant(p: FoxIParams) -> bool:
    return pole_separation(p) < RESONANCE_SEPARATION


def _integrand(kind: int, p: FoxIParams, log_u, ctx: PrecisionContext) -> Callable:
    theta = mpmath.mpf(p.theta)
    q = theta / (theta + 1)
    r = 1 / (theta + 1)
    a = mpmath.mpf(p.a)
    half_minus_a = mpmath.mpf(0.5) - a

    if kind == 1:
        def f(v):
            return mpmath.exp(log_gamma(half_minus_a - q * v, ctx) + v * log_u) * mpmath.rgamma(1 - a + r * v)
    elif kind == 2:
        def f(v):
            return mpmath.exp(log_gamma(half_minus_a - q * v, ctx) + log_gamma(a - r * v, ctx) + v * log_u)
    else:
        def f(v):
            return mpmath.exp(log_gamma(a - r * v, ctx) + v * log_u) * mpmath.rgamma(mpmath.mpf(0.5) + a + q * v)
    return f


def _log_magnitude(kind: int, p: FoxIParams, log_u, v) -> mpmath.mpf:
    """log|integrand(v)| at scan precision; −inf where a reciprocal Gamma vanishes."""
    theta = mpmath.mpf(p.theta)
    q = theta / (theta + 1)
    r = 1 / (theta + 1)
    a = mpmath.mpf(p.a)
    half_minus_a = mpmath.mpf(0.5) - a
    value = mpmath.re(v * log_u)
    try:
        if kind in (1, 2):
            value += mpmath.re(mpmath.loggamma(half_minus_a - q * v))
        if kind in (2, 3):
            value += mpmath.re(mpmath.loggamma(a - r * v))
        if kind == 1:
            value -= mpmath.re(mpmath.loggamma(1 - a + r * v))
        if kind == 3:
            value -= mpmath.re(mpmath.loggamma(mpmath.mpf(0.5) + a + q * v))
    except (ValueError, ZeroDivisionError):
        return -mpmath.inf
    return value


def _contour(kind: int, p: FoxIParams):
    lattices = pole_lattices(kind, p)
    first = min(start for start, _ in lattices)
    spacing = min(step for _, step in lattices)
    sigma0 = first - spacing / 2
    kappa = mpmath.mpf(CONTOUR_OPENING)

    def v_of(t):
        return sigma0 + t * t + 1j * kappa * t

    def dv_of(t):
        return 2 * t + 1j * kappa
    return v_of, dv_of


def _scan_contour(kind: int, p: FoxIParams, z, ctx: PrecisionContext):
    """Half width of the truncated contour and the guard bits needed against cancellation."""
    with mpmath.workprec(_SCAN_BITS):
        log_u = _log_u(p, z)
        v_of, dv_of = _contour(kind, p)
        size_bits = int(mpmath.ceil(_LOG2_E * abs(mpmath.mpc(z)))) + 16

        def log2_mag(t):
            return (_log_magnitude(kind, p, log_u, v_of(t)) + mpmath.log(abs(dv_of(t)))) / mpmath.log(2)

        peak = log2_mag(mpmath.mpf(0))
        t = mpmath.mpf(0)
        quiet = 0
        for _ in range(_SCAN_LIMIT):
            t += _SCAN_STEP
            magnitude = max(log2_mag(t), log2_mag(-t))
            peak = max(peak, magnitude)
            guard = (max(0, int(mpmath.ceil(peak))) if mpmath.isfinite(peak) else 0) + size_bits
            if magnitude < peak - (ctx.mantissa_bits + guard):
                quiet += 1
                if quiet >= 3:
                    return t, guard
            else:
                quiet = 0
    raise ContourNonConvergence(error_message("specfun", f"Mellin-Barnes integrand does not decay (kind={kind}, "
                                                         f"theta={p.theta}, a={p.a})", "fox_I"))


def _fox_mellin_barnes(kind: int, p: FoxIParams, z, ctx: PrecisionContext) -> mpmath.mpc:
    half_width, guard = _scan_contour(kind, p, z, ctx)
    guarded = replace(ctx, mantissa_bits=ctx.mantissa_bits + guard, rel_tol=ctx.rel_tol)
    logger.debug("mellin-barnes kind=%d |z|=%s half_width=%s guard=%d", kind, mpmath.nstr(abs(mpmath.mpc(z)), 5),
                 mpmath.nstr(half_width, 4), guard)
    with guarded.workprec():
        log_u = _log_u(p, z)
        f = _integrand(kind, p, log_u, guarded)
        v_of, dv_of = _contour(kind, p)
        try:
            integral = quad_line(lambda t: f(v_of(t)) * dv_of(t), guarded, half_width=half_width, scale=0)
        except NonConvergence as e:
            raise ContourNonConvergence(str(e))
        result = integral / (2j * mpmath.pi)
    return +result


def _fox_wright(kind: int, p: FoxIParams, z, ctx: PrecisionContext) -> mpmath.mpc:
    if kind == 2:
        raise DomainError(error_message("specfun", "the Wright representation exists for kinds 1 and 3 only",
                                        "fox_I"))
    if kind == 3:
        return _fox_wright(1, p.dual(), z, ctx)
    with ctx.workprec(16):
        log_u = _log_u(p, z)
        theta = mpmath.mpf(p.theta)
        half_minus_a = mpmath.mpf(0.5) - p.a
        exponent = 1 + 1 / theta
        wright = WrightParams(a1=half_minus_a / theta + 1 - p.a, a2=1 / theta)
        series = wright_bessel(wright, mpmath.exp(exponent * log_u), ctx)
        result = exponent * mpmath.exp(exponent * half_minus_a * log_u) * series
    return +result


def _residue_log_bits(p: FoxIParams, log_u, terms: int) -> int:
    with mpmath.workprec(_SCAN_BITS):
        theta = mpmath.mpf(p.theta)
        a = mpmath.mpf(p.a)
        half_minus_a = mpmath.mpf(0.5) - a
        peak = mpmath.mpf(0)
        for k in range(terms):
            for argument, power in ((a - (half_minus_a + k) / theta, (theta + 1) * (half_minus_a + k) / theta),
                                    (half_minus_a - theta * (a + k), (theta + 1) * (a + k))):
                try:
                    value = mpmath.re(mpmath.loggamma(argument)) - mpmath.loggamma(k + 1) + power * mpmath.re(log_u)
                except (ValueError, ZeroDivisionError):
                    continue
                peak = max(peak, value)
        return int(mpmath.ceil(2 * peak / mpmath.log(2)))


def _fox_residue(p: FoxIParams, z, ctx: PrecisionContext) -> mpmath.mpc:
    separation = pole_separation(p)
    if separation < RESONANCE_SEPARATION:
        raise DomainError(error_message("specfun", f"pole lattices collide (separation {mpmath.nstr(separation, 3)});"
                                                   f" use the Mellin-Barnes method", "fox_I"))
    with mpmath.workprec(_SCAN_BITS):
        log_u_scan = _log_u(p, z)
        onset = int(4 + (mpmath.mpf(p.theta) + 1) * abs(mpmath.exp(log_u_scan)))
    guard = (_residue_log_bits(p, log_u_scan, onset + 8) + int(_LOG2_E * abs(mpmath.mpc(z)))
             + int(mpmath.ceil(-mpmath.log(separation, 2))) + 16)
    with ctx.workprec(guard):
        log_u = _log_u(p, z)
        theta = mpmath.mpf(p.theta)
        a = mpmath.mpf(p.a)
        half_minus_a = mpmath.mpf(0.5) - a
        total = mpmath.mpc(0)
        quiet = 0
        for k in range(ctx.max_series_terms):
            sign_over_factorial = (-1) ** k / mpmath.factorial(k)
            term = sign_over_factorial * (
                mpmath.gamma(a - (half_minus_a + k) / theta) * mpmath.exp((theta + 1) * (half_minus_a + k) / theta
                                                                          * log_u) / theta
                + mpmath.gamma(half_minus_a - theta * (a + k)) * mpmath.exp((theta + 1) * (a + k) * log_u))
            total += term
            if k > onset and abs(term) <= ctx.rel_tol / 16 * abs(total):
                quiet += 1
                if quiet >= 3:
                    return +((theta + 1) * total)
            else:
                quiet = 0
    raise NonConvergence(error_message("specfun", "residue series did not converge", "fox_I"))


def fox_I(kind: int, p: FoxIParams, z, ctx: PrecisionContext, method: str = "mellin_barnes") -> mpmath.mpc:
    """
    Evaluate I⁽ᵏⁱⁿᵈ⁾_{θ,a}(z) for z off (−∞, 0].

    :param method: "mellin_barnes" (any kind), "wright" (kinds 1, 3) or "residue" (kind 2, non-resonant).
    :raises DomainError: for z on the cut, an unsupported method/kind pair or resonant residue requests.
    :raises ContourNonConvergence: when the truncated loop integral does not settle.
    """
    _check_kind(kind)
    if method == "mellin_barnes":
        return _fox_mellin_barnes(kind, p, z, ctx)
    if method == "wright":
        return _fox_wright(kind, p, z, ctx)
    if method == "residue":
        if kind != 2:
            raise DomainError(error_message("specfun", "the residue series is implemented for kind 2", "fox_I"))
        return _fox_residue(p, z, ctx)
    raise DomainError(error_message("specfun", f"unknown method {method!r}; expected one of {METHODS}", "fox_I"))


def fox_I_fast(kind: int, p: FoxIParams, z, ctx: PrecisionContext) -> mpmath.mpc:
    """Series representation when it is safe (Wright for kinds 1/3, residues off resonance), otherwise the loop."""
    if kind in (1, 3):
        return _fox_wright(kind, p, z, ctx)
    if not is_resonant(p):
        return _fox_residue(p, z, ctx)
    return _fox_mellin_barnes(kind, p, z, ctx)


def asymptotic_threshold(theta) -> mpmath.mpf:
    return 30 * (mpmath.mpf(theta) + 1)


def asymptotic_sector(kind: int, theta, eps=ASYMPTOTIC_EPS) -> List[Tuple[mpmath.mpf, mpmath.mpf]]:
    """Open argument intervals on which fox_I_asymptotic applies."""
    _check_kind(kind)
    theta = mpmath.mpf(theta)
    pi = mpmath.pi
    if kind == 2:
        return [(-pi + eps, pi - eps)]
    edge = theta * pi / (theta + 1) if kind == 1 else pi / (theta + 1)
    return [(mpmath.mpf(eps), edge), (-edge, -mpmath.mpf(eps))]


def fox_I_asymptotic(kind: int, p: FoxIParams, z, ctx: PrecisionContext) -> mpmath.mpc:
    """
    Leading exponential behaviour of I⁽ᵏⁱⁿᵈ⁾ for large |z|.

    kind 2:      I⁽²⁾ ≈ √(2π(θ+1)) θ^{−a} e^{−z}
    kind 1, 3:   I ≈ √(θ+1)/(√(2π) θ^a) · e^{±iπc} · exp(−z e^{±iπω}), upper/lower half-sector,
                 with (c, ω) = (1/2 − a, 1/(θ+1)) for kind 1 and (a, θ/(θ+1)) for kind 3.

    :raises SectorError: when arg z is outside asymptotic_sector(kind, θ).
    """
    _check_kind(kind)
    with ctx.workprec(16):
        w = to_complex(z, "fox_I_asymptotic")
        theta = mpmath.mpf(p.theta)
        a = mpmath.mpf(p.a)
        angle = mpmath.arg(w)
        sectors = asymptotic_sector(kind, theta)
        branch = next((i for i, (lo, hi) in enumerate(sectors) if lo < angle < hi), None)
        if branch is None:
            raise SectorError(error_message("specfun", f"arg z={mpmath.nstr(angle, 6)} outside the asymptotic sector "
                                                       f"of kind {kind}", "fox_I_asymptotic"))
        if abs(w) < asymptotic_threshold(theta):
            logger.warning("asymptotic form of kind %d used at |z|=%s below threshold %s", kind,
                           mpmath.nstr(abs(w), 5), mpmath.nstr(asymptotic_threshold(theta), 5))
        if kind == 2:
            result = mpmath.sqrt(2 * mpmath.pi * (theta + 1)) * theta ** (-a) * mpmath.exp(-w)
        else:
            phase, omega = (mpmath.mpf(0.5) - a, 1 / (theta + 1)) if kind == 1 else (a, theta / (theta + 1))
            sign = 1 if branch == 0 else -1
            prefactor = mpmath.sqrt(theta + 1) / (mpmath.sqrt(2 * mpmath.pi) * theta ** a)
            result = prefactor * mpmath.expjpi(sign * phase) * mpmath.exp(-w * mpmath.expjpi(sign * omega))
    return +result


def asymptotic_accuracy_map(kind: int, p: FoxIParams, radius, angles, ctx: PrecisionContext,
                            method: str = "mellin_barnes") -> List[Tuple[mpmath.mpf, mpmath.mpf]]:
    """Relative error of fox_I_asymptotic against fox_I on a circle, for angles inside the sector."""
    rows = []
    for angle in angles:
        z = mpmath.mpf(radius) * mpmath.expj(angle)
        try:
            approximation = fox_I_asymptotic(kind, p, z, ctx)
        except SectorError:
            continue
        exact = fox_I(kind, p, z, ctx, method=method)
        rows.append((mpmath.mpf(angle), abs(exact - approximation) / abs(exact)))
    return rows
