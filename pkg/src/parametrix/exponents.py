"""Leading small-z powers of the G family, predicted and fitted."""

from typing import Sequence

import mpmath

from numeric_core import PrecisionContext
from specfun import small_z_exponent

from .index import index_for, t_shift
from .model import ModelFunction

DEFAULT_RADII = (1e-4, 3e-4, 1e-3, 3e-3, 1e-2)


def expected_small_z_exponent_G(ell: int, theta, alpha, sector: str = "right") -> mpmath.mpf:
    """
    Power of z leading G^(ℓ) as z → 0.

    In the left sectors only the I⁽¹⁾ lattice contributes; in the right sector the two
    pole lattices of I⁽²⁾ compete and the smaller exponent wins.
    """
    theta = mpmath.mpf(theta)
    T = t_shift(index_for(ell, theta).R_lambda, theta, alpha)
    first = (1 + 1 / theta) * (mpmath.mpf(0.5) - T)
    if sector == "right":
        return ell + min(first, (theta + 1) * T)
    return ell + first


def small_z_exponent_G(ell: int, theta, alpha, ctx: PrecisionContext, angle,
                       radii: Sequence = DEFAULT_RADII, method: str = "auto") -> float:
    function = ModelFunction("G", ell, theta, alpha, ctx, method=method)
    return small_z_exponent(function, angle, radii)
