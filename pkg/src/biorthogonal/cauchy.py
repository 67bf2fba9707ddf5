"""
Cauchy transforms of p_n and q_n against the weight, and the residuals of their jump
and tail relations.

    Cp(z) = (1/2πi) ∫ p(x) w(x) / (x^θ − z^θ) dx,   z in H_θ off [0, ∞)
    Cq(z) = (1/2πi) ∫ q(x^θ) w(x) / (x − z) dx,     z off [0, ∞)

Boundary values on the positive axis are taken at z = x e^{±iδ} with δ = 2^{−bits/4}.
"""

import logging
from typing import Optional

import mpmath

from numeric_core import AxisError, PrecisionContext, error_message, quad_semiaxis

from .moments import bulk_scale
from .system import BiorthogonalSystem

logger = logging.getLogger(__name__)

SIDES = ("+", "-")


def _boundary_point(x, side: str, bits: int):
    if side not in SIDES:
        raise ValueError(error_message("biorthogonal", f"side must be one of {SIDES}, got {side!r}",
                                       "_boundary_point"))
    x = mpmath.mpf(x)
    if not x > 0:
        raise AxisError(error_message("biorthogonal", f"boundary values need x > 0, got {x}", "_boundary_point"))
    delta = mpmath.ldexp(1, -(bits // 4))
    return x * mpmath.expjpi(delta / mpmath.pi if side == "+" else -delta / mpmath.pi)


def _resolve_point(z, side: Optional[str], bits: int):
    if side is not None:
        return _boundary_point(mpmath.re(z), side, bits), mpmath.re(z)
    z = mpmath.mpc(z)
    if mpmath.im(z) == 0 and mpmath.re(z) >= 0:
        raise AxisError(error_message("biorthogonal", f"z={z} lies on [0, inf); pass side='+' or '-'",
                                      "cauchy_transform"))
    return z, None


def cauchy_transform_p(system: BiorthogonalSystem, z, j: Optional[int] = None, side: Optional[str] = None,
                       ctx: Optional[PrecisionContext] = None):
    """Cp_j(z) for j defaulting to the model's n; side='+'/'-' gives the boundary value at real z > 0."""
    j = system.n if j is None else j
    work = system.context(ctx)
    with work.workprec():
        point, axis = _resolve_point(z, side, work.mantissa_bits)
        if abs(mpmath.arg(point)) * system.theta >= mpmath.pi:
            raise AxisError(error_message("biorthogonal", f"z={point} lies outside the sector |arg z| < pi/theta",
                                          "cauchy_transform_p"))
        target = mpmath.power(point, system.theta)

        def integrand(x):
            return system.p_eval(j, x) * system.weight(x) / (mpmath.power(x, system.theta) - target)

        breakpoints = [axis] if axis is not None else None
        scale = bulk_scale(system.alpha + j, system.params)
        return quad_semiaxis(integrand, scale, work, alpha=system.alpha, breakpoints=breakpoints) / (2j * mpmath.pi)


def cauchy_transform_q(system: BiorthogonalSystem, z, k: Optional[int] = None, side: Optional[str] = None,
                       ctx: Optional[PrecisionContext] = None):
    """Cq_k(z); side='+'/'-' gives the boundary value at real z > 0."""
    k = system.n if k is None else k
    work = system.context(ctx)
    with work.workprec():
        point, axis = _resolve_point(z, side, work.mantissa_bits)

        def integrand(x):
            return system.q_eval_x(k, x) * system.weight(x) / (x - point)

        breakpoints = [axis] if axis is not None else None
        scale = bulk_scale(system.alpha + system.theta * k, system.params)
        return quad_semiaxis(integrand, scale, work, alpha=system.alpha, breakpoints=breakpoints) / (2j * mpmath.pi)


def jump_residual_p(system: BiorthogonalSystem, x, j: Optional[int] = None, ctx: Optional[PrecisionContext] = None):
    """|Cp₊(x) − Cp₋(x) − p_j(x) w(x)/(θ x^{θ−1})|."""
    j = system.n if j is None else j
    work = system.context(ctx)
    with work.workprec():
        x = mpmath.mpf(x)
        jump = cauchy_transform_p(system, x, j, "+", ctx) - cauchy_transform_p(system, x, j, "-", ctx)
        expected = system.p_eval(j, x) * system.weight(x) / (system.theta * mpmath.power(x, system.theta - 1))
        return abs(jump - expected)


def jump_residual_q(system: BiorthogonalSystem, x, k: Optional[int] = None, ctx: Optional[PrecisionContext] = None):
    """|Cq₊(x) − Cq₋(x) − q_k(x^θ) w(x)|."""
    k = system.n if k is None else k
    work = system.context(ctx)
    with work.workprec():
        x = mpmath.mpf(x)
        jump = cauchy_transform_q(system, x, k, "+", ctx) - cauchy_transform_q(system, x, k, "-", ctx)
        return abs(jump - system.q_eval_x(k, x) * system.weight(x))


def tail_ratio_p(system: BiorthogonalSystem, z, j: Optional[int] = None, ctx: Optional[PrecisionContext] = None):
    """−2πi z^{(j+1)θ} Cp_j(z) / κ_j, which tends to 1 as |z| → ∞."""
    j = system.n if j is None else j
    work = system.context(ctx)
    with work.workprec():
        z = mpmath.mpc(z)
        value = cauchy_transform_p(system, z, j, ctx=ctx)
        return -2j * mpmath.pi * mpmath.power(z, (j + 1) * system.theta) * value / system.kappas[j]


def tail_ratio_q(system: BiorthogonalSystem, z, k: Optional[int] = None, ctx: Optional[PrecisionContext] = None):
    """−2πi z^{k+1} Cq_k(z) / κ_k, which tends to 1 as |z| → ∞."""
    k = system.n if k is None else k
    work = system.context(ctx)
    with work.workprec():
        z = mpmath.mpc(z)
        value = cauchy_transform_q(system, z, k, ctx=ctx)
        return -2j * mpmath.pi * mpmath.power(z, k + 1) * value / system.kappas[k]


def conjugation_residual(system: BiorthogonalSystem, z, j: Optional[int] = None,
                         ctx: Optional[PrecisionContext] = None):
    """|Cp(z̄) − conj(Cp(z))|."""
    with system.context(ctx).workprec():
        z = mpmath.mpc(z)
        return abs(cauchy_transform_p(system, mpmath.conj(z), j, ctx=ctx)
                   - mpmath.conj(cauchy_transform_p(system, z, j, ctx=ctx)))
