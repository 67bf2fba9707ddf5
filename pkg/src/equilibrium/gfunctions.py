"""
The g-functions of the equilibrium measure and the Joukowsky-type map J_c.

g(z) = ∫ log(z − y) ψ(y) dy is exact for the piecewise-constant density. g̃ is split as
g(z) + ∫ log((z^θ − y^θ)/(z − y)) ψ(y) dy, whose second integrand is smooth, except on
the sector boundary and the second sheet where the logarithm of z^θ − y^θ is summed
directly from polar coordinates.
"""

import cmath
import math
from typing import Optional

import mpmath
import numpy as np

from numeric_core import BranchCutError, CutError, error_message

from .kernels import cell_nodes, gauss_rule
from .solver import EquilibriumData

SIDES = ("+", "-")


def _complex_point(z, side: Optional[str]) -> complex:
    point = complex(z)
    if side is None:
        return point
    if side not in SIDES:
        raise ValueError(error_message("gfunctions", f"side must be one of {SIDES}, got {side!r}"))
    return complex(point.real, 0.0 if side == "+" else -0.0)


def _log_antiderivative(u: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        values = u * np.log(u) - u
    return np.where(u == 0, 0.0, values)


def _g_sum(eq: EquilibriumData, point: complex) -> complex:
    left = point - eq.edges[:-1].astype(complex)
    right = point - eq.edges[1:].astype(complex)
    densities = eq.weights / eq.widths
    return complex(np.sum(densities * (_log_antiderivative(left) - _log_antiderivative(right))))


def g_eval(eq: EquilibriumData, z, side: Optional[str] = None) -> complex:
    """
    g(z) off (−∞, b]. On the cut pass side="+" or "-" for the boundary value from
    the upper or lower half plane.
    """
    point = _complex_point(z, side)
    if side is None and point.imag == 0 and point.real <= eq.b:
        raise BranchCutError(error_message("gfunctions", f"g is cut along (-inf, b], got z={point}", "g_eval"))
    return _g_sum(eq, point)


def _ratio_sum(eq: EquilibriumData, point: complex) -> complex:
    _, weights = gauss_rule()
    y = cell_nodes(eq.edges)
    power = point ** eq.theta
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = (power - y ** eq.theta) / (point - y)
    return complex(np.sum(eq.weights[:, None] * weights[None, :] * np.log(ratio)))


def _polar_sum(eq: EquilibriumData, modulus: float, arg: float) -> complex:
    _, weights = gauss_rule()
    powers = cell_nodes(eq.edges) ** eq.theta
    phase = eq.theta * arg
    radius = modulus ** eq.theta
    real = radius * math.cos(phase) - powers
    imag = np.full_like(powers, radius * math.sin(phase))
    logs = 0.5 * np.log(real * real + imag * imag) + 1j * np.arctan2(imag, real)
    return complex(np.sum(eq.weights[:, None] * weights[None, :] * logs))


def gtilde_eval(eq: EquilibriumData, z, arg: Optional[float] = None, side: Optional[str] = None) -> complex:
    """
    g̃(z) = ∫ log(z^θ − y^θ) ψ(y) dy on H_θ = {|arg z| < min(π, π/θ)}.

    `arg` selects the argument of z explicitly, which reaches the boundary rays
    arg z = ±π/θ and, for θ < 1, the part of H_θ beyond the negative axis.
    """
    theta = eq.theta
    if arg is not None:
        modulus = abs(complex(z))
        if abs(arg) > math.pi / theta * (1 + 1e-14):
            raise BranchCutError(error_message("gfunctions", f"arg={arg} is outside |arg z| <= pi/theta",
                                               "gtilde_eval"))
        if abs(arg) >= math.pi or abs(arg) * theta >= math.pi:
            return _polar_sum(eq, modulus, arg)
        point = cmath.rect(modulus, arg)
    else:
        point = _complex_point(z, side)
        angle = cmath.phase(point)
        if point.imag == 0 and point.real < 0:
            raise BranchCutError(error_message("gfunctions", "pass arg=±pi for points on the negative axis",
                                               "gtilde_eval"))
        if abs(angle) * theta >= math.pi:
            raise BranchCutError(error_message("gfunctions", f"z={point} lies outside the sector |arg z| < pi/theta",
                                               "gtilde_eval"))
        if side is None and point.imag == 0 and 0 <= point.real <= eq.b:
            raise BranchCutError(error_message("gfunctions", f"g-tilde is cut along [0, b], got z={point}",
                                               "gtilde_eval"))
    return _g_sum(eq, point) + _ratio_sum(eq, point)


def phi_eval(eq: EquilibriumData, z, side: Optional[str] = None) -> complex:
    """φ(z) = g(z) + g̃(z) − V(z) − ℓ for z in the principal sheet off the cuts."""
    point = _complex_point(z, side)
    if side is None and point.imag == 0 and point.real <= eq.b:
        raise BranchCutError(error_message("gfunctions", f"phi is cut along (-inf, b], got z={point}", "phi_eval"))
    return g_eval(eq, point, side) + gtilde_eval(eq, point, side=side) - complex(eq.potential.value(point)) \
        - eq.lagrange_ell


def jc_map(s, c: float, theta: float):
    """J_c(s) = c(s + 1)((s + 1)/s)^{1/θ}, principal power, so J_c(s) ~ cs at infinity."""
    s = mpmath.mpmathify(s)
    if mpmath.im(s) == 0 and -1 < mpmath.re(s) <= 0:
        raise CutError(error_message("gfunctions", f"J_c is cut along [-1, 0], got s={s}", "jc_map"))
    if s == -1:
        return mpmath.mpf(0)
    return c * (s + 1) * mpmath.power((s + 1) / s, mpmath.mpf(1) / theta)
