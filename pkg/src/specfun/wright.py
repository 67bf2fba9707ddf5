"""
Wright's generalized Bessel function J_{a1,a2}(x) = Σ_j (−x)^j / (j! Γ(a1 + j a2)).

Terms at poles of Γ(a1 + j a2) vanish (1/Γ is entire). Before summing, the term
magnitudes are scanned at double precision so that the working precision can be
raised by the number of bits lost to cancellation.
"""

import logging

import mpmath

from numeric_core import NonConvergence, PrecisionContext, error_message, to_complex

from .params import WrightParams

logger = logging.getLogger(__name__)

_SCAN_BITS = 53


def _log_term_magnitude(j: int, log_abs_x, a1, a2):
    argument = a1 + j * a2
    if argument <= 0 and argument == mpmath.floor(argument):
        return None
    log_gamma_abs = mpmath.re(mpmath.loggamma(argument))
    return j * log_abs_x - mpmath.loggamma(j + 1) - log_gamma_abs


def cancellation_bits(p: WrightParams, x, ctx: PrecisionContext) -> int:
    """Estimate of the bits lost when summing the series at x (log2 of the largest term, doubled)."""
    with mpmath.workprec(_SCAN_BITS):
        magnitude = abs(mpmath.mpc(x))
        if magnitude == 0:
            return 0
        log_abs_x = mpmath.log(magnitude)
        a1, a2 = mpmath.mpf(p.a1), mpmath.mpf(p.a2)
        peak = mpmath.mpf(0)
        previous = None
        for j in range(ctx.max_series_terms):
            value = _log_term_magnitude(j, log_abs_x, a1, a2)
            if value is None:
                continue
            peak = max(peak, value)
            if previous is not None and value < previous and value < peak - 40:
                break
            previous = value
        return int(mpmath.ceil(2 * peak / mpmath.log(2))) if peak > 0 else 0


def wright_bessel(p: WrightParams, x, ctx: PrecisionContext) -> mpmath.mpc:
    """
    Evaluate J_{a1,a2}(x) for complex x.

    :raises NonConvergence: when ctx.max_series_terms terms do not reach rel_tol.
    """
    guard = cancellation_bits(p, x, ctx) + 16
    with ctx.workprec(guard):
        z = to_complex(x, "wright_bessel")
        a1, a2 = mpmath.mpf(p.a1), mpmath.mpf(p.a2)
        factor = mpmath.mpc(1)
        total = mpmath.rgamma(a1)
        running_max = abs(total)
        tolerance = ctx.rel_tol / 16
        quiet = 0
        # terms only decrease for good once j! Γ(a1 + j a2) outgrows |x|^j
        onset = int(2 + abs(z) ** (1 / (1 + a2)))
        for j in range(1, ctx.max_series_terms):
            factor *= -z / j
            term = factor * mpmath.rgamma(a1 + j * a2)
            total += term
            magnitude = abs(term)
            running_max = max(running_max, magnitude)
            if j > onset and a1 + j * a2 > 0 and magnitude <= tolerance * (abs(total) if total != 0 else running_max):
                quiet += 1
                if quiet >= 2:
                    return +total
            else:
                quiet = 0
    raise NonConvergence(error_message("specfun", f"Wright series did not converge within {ctx.max_series_terms} "
                                                  f"terms (a1={p.a1}, a2={p.a2}, |x|={mpmath.nstr(abs(z), 6)})",
                                       "wright_bessel"))
