"""
Principal-branch complex log-gamma by Spouge's approximation.

The Spouge parameter a is chosen from the working precision so that the
truncation bound a^{-1/2} (2π)^{-(a+1/2)} stays below 2^{-bits}. Arguments with
small real part are shifted upward with log Γ(v) = log Γ(v+m) − Σ log(v+k),
which holds exactly for the principal branch off the negative real axis.
"""

import logging
from functools import lru_cache
from typing import Tuple

import mpmath

from .errors import PoleError, error_message
from .precision import PrecisionContext, to_complex

logger = logging.getLogger(__name__)

_SHIFT_TARGET = 1


@lru_cache(maxsize=32)
def _spouge_coefficients(bits: int) -> Tuple[int, Tuple[mpmath.mpf, ...]]:
    a = int(mpmath.ceil(bits * mpmath.log(2) / mpmath.log(2 * mpmath.pi))) + 2
    with mpmath.workprec(bits + 32):
        coefficients = [mpmath.sqrt(2 * mpmath.pi)]
        factorial = mpmath.mpf(1)
        for k in range(1, a):
            if k > 1:
                factorial *= (k - 1)
            c_k = (-1) ** (k - 1) / factorial * mpmath.power(a - k, k - mpmath.mpf(0.5)) * mpmath.exp(a - k)
            coefficients.append(c_k)
    logger.debug("spouge coefficients prepared for %d bits (a=%d)", bits, a)
    return a, tuple(coefficients)


def _stirling_estimate(s: mpmath.mpc) -> mpmath.mpc:
    """Low-order Stirling value of log Γ(s) for Re s ≥ 1, accurate well inside ±π."""
    with mpmath.workprec(64):
        s = mpmath.mpc(s)
        return ((s - mpmath.mpf(0.5)) * mpmath.log(s) - s + mpmath.log(2 * mpmath.pi) / 2
                + 1 / (12 * s) - 1 / (360 * s ** 3))


def _nearest_nonpositive_integer(v: mpmath.mpc):
    if v.real > mpmath.mpf(0.5):
        return None
    return mpmath.nint(v.real)


def log_gamma(v, ctx: PrecisionContext) -> mpmath.mpc:
    """
    Principal branch of log Γ(v).

    :param v: Complex argument; must not be a non-positive integer.
    :param ctx: Precision settings; the relative error is kept below ctx.rel_tol.
    :raises PoleError: when v lies within rel_tol of 0, −1, −2, ...
    """
    with ctx.workprec(24):
        z = to_complex(v, "log_gamma")
        k = _nearest_nonpositive_integer(z)
        if k is not None and abs(z - k) <= ctx.rel_tol * max(1, abs(k)):
            raise PoleError(error_message("numeric_core", f"log_gamma evaluated at pole v={mpmath.nstr(z, 10)}",
                                          "log_gamma"))

        shift = mpmath.mpf(0)
        m = 0
        while z.real + m < _SHIFT_TARGET:
            shift += mpmath.log(z + m)
            m += 1
        w = z + m - 1

        a, coefficients = _spouge_coefficients(ctx.mantissa_bits + 24)
        series = coefficients[0]
        for j in range(1, a):
            series += coefficients[j] / (w + j)
        shifted = (w + mpmath.mpf(0.5)) * mpmath.log(w + a) - (w + a) + mpmath.log(series)
        # log(series) wraps once |Im w| grows; pin the branch to the Stirling continuation
        winding = mpmath.nint((shifted.imag - _stirling_estimate(w + 1).imag) / (2 * mpmath.pi))
        if winding:
            shifted -= 2j * mpmath.pi * winding
        result = shifted - shift

    return +result
