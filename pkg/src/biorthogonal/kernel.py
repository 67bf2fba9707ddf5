import logging
from typing import Optional

import mpmath

from numeric_core import DegreeTooLow, DomainError, PrecisionContext, error_message, quad_semiaxis

from .moments import bulk_scale
from .system import BiorthogonalSystem

logger = logging.getLogger(__name__)


def _check_rank(system: BiorthogonalSystem, n: Optional[int]) -> int:
    n = system.n if n is None else int(n)
    if n < 1 or system.degree < n - 1:
        raise DegreeTooLow(error_message("biorthogonal", f"kernel of rank {n} needs degree >= {n - 1}, "
                                         f"system has {system.degree}", "kernel_n"))
    return n


def _check_positive(*points):
    for point in points:
        if not point > 0:
            raise DomainError(error_message("biorthogonal", f"kernel arguments must be positive, got {point}",
                                            "kernel_n"))


def kernel_n(system: BiorthogonalSystem, x, y, n: Optional[int] = None):
    """
    K_n(x, y) = x^α e^{−nV(x)} Σ_{j<n} p_j(x) q_j(y^θ)/κ_j.

    `n` is the number of terms and defaults to the model's n; the weight always uses the
    model's n.
    """
    n = _check_rank(system, n)
    with mpmath.workprec(system.work_bits):
        x, y = mpmath.mpf(x), mpmath.mpf(y)
        _check_positive(x, y)
        t = mpmath.power(y, system.theta)
        total = mpmath.fsum(system.p_eval(j, x) * system.q_eval(j, t) / system.kappas[j] for j in range(n))
        return system.weight(x) * total


def trace_residual(system: BiorthogonalSystem, n: Optional[int] = None, ctx: Optional[PrecisionContext] = None):
    """∫ K_n(x, x) dx − n."""
    n = _check_rank(system, n)
    work = system.context(ctx)
    with work.workprec():
        def diagonal(x):
            return kernel_n(system, x, x, n)

        integral = quad_semiaxis(diagonal, bulk_scale(system.alpha + (n - 1) * (1 + system.theta), system.params),
                                 work, alpha=system.alpha)
        residual = integral - n
    logger.debug("trace residual for n=%d: %s", n, mpmath.nstr(residual, 5))
    return residual


def reproducing_residual(system: BiorthogonalSystem, x, y, n: Optional[int] = None,
                         ctx: Optional[PrecisionContext] = None):
    """∫ K_n(x, t) K_n(t, y) dt − K_n(x, y)."""
    n = _check_rank(system, n)
    work = system.context(ctx)
    with work.workprec():
        x, y = mpmath.mpf(x), mpmath.mpf(y)
        _check_positive(x, y)
        left = [system.weight(x) * system.p_eval(j, x) / system.kappas[j] for j in range(n)]
        right = [system.q_eval_x(k, y) / system.kappas[k] for k in range(n)]

        def product(t):
            first = mpmath.fsum(left[j] * system.q_eval_x(j, t) for j in range(n))
            second = mpmath.fsum(system.p_eval(k, t) * right[k] for k in range(n))
            return first * second * system.weight(t)

        scale = bulk_scale(system.alpha + (n - 1) * (1 + system.theta), system.params)
        return quad_semiaxis(product, scale, work, alpha=system.alpha) - kernel_n(system, x, y, n)
