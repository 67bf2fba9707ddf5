"""
Mixed moments M_jk = ∫ x^{j+θk} x^α e^{−nV(x)} dx on the positive axis.
"""

import logging
from dataclasses import replace
from typing import List

import mpmath
import numpy as np

from equilibrium import ModelParams
from numeric_core import PrecisionContext, quad_semiaxis, quad_semiaxis_many

logger = logging.getLogger(__name__)

GUARD_BITS_PER_DEGREE = 24
MIN_GUARD_BITS = 32


def working_context(ctx: PrecisionContext, degree: int) -> PrecisionContext:
    """Context for a degree-N construction: guard bits grow with N, tolerance tracks the working bits."""
    bits = max(ctx.mantissa_bits, GUARD_BITS_PER_DEGREE * degree) + MIN_GUARD_BITS
    return replace(ctx.with_bits(bits), rel_tol=mpmath.ldexp(1, -(bits - 16)))


def bulk_scale(power: float, params: ModelParams) -> float:
    """Location of the maximum of x^{power+1} e^{−nV(x)}, the bulk of the moment integrand in log x."""
    x = np.logspace(-6, 6, 2401)
    with np.errstate(over="ignore", invalid="ignore"):
        log_density = (power + 1) * np.log(x) - params.n * np.asarray(params.potential.value(x), dtype=float)
    log_density = np.where(np.isfinite(log_density), log_density, -np.inf)
    return float(x[int(np.argmax(log_density))])


def weight(x, params: ModelParams):
    """x^α e^{−nV(x)} at the current mpmath precision."""
    return mpmath.power(x, params.alpha) * mpmath.exp(-params.n * params.potential.value(x))


def mixed_moment(j: int, k: int, params: ModelParams, ctx: PrecisionContext):
    if j < 0 or k < 0:
        raise ValueError(f"moment indices must be nonnegative, got ({j}, {k})")
    with ctx.workprec():
        power = j + mpmath.mpf(params.theta) * k
        exponent = power + params.alpha

        def integrand(x):
            return mpmath.power(x, exponent) * mpmath.exp(-params.n * params.potential.value(x))

        return quad_semiaxis(integrand, bulk_scale(float(exponent), params), ctx, alpha=exponent)


def moment_matrix(params: ModelParams, degree: int, ctx: PrecisionContext) -> List[List[mpmath.mpf]]:
    """
    (N+1) × (N+1) table of mixed moments at the precision of ctx.

    All entries share one quadrature rule: the weight is evaluated once per node and
    the powers x^j, x^{θk} are built by multiplication.
    """
    size = degree + 1
    with ctx.workprec():
        theta = mpmath.mpf(params.theta)

        def integrands(x):
            base = weight(x, params)
            t = mpmath.power(x, theta)
            values = []
            row = base
            for _ in range(size):
                entry = row
                for _ in range(size):
                    values.append(entry)
                    entry *= t
                row *= x
            return values

        middle = params.alpha + degree * (1 + params.theta) / 2
        flat = quad_semiaxis_many(integrands, size * size, bulk_scale(middle, params), ctx)
    logger.debug("computed %d mixed moments at %d bits", size * size, ctx.mantissa_bits)
    return [flat[j * size:(j + 1) * size] for j in range(size)]
