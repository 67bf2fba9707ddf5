"""
The hard-edge limit kernel

    K(x, y) = θ ∫_0^1 J_{(α+1)/θ, 1/θ}(xu) J_{α+1, θ}((yu)^θ) u^α du,

its rank-one building block k(x, y), the rescaled integral form and the classical
Bessel kernel used as an independent oracle at θ = 1.
"""

import logging
from functools import lru_cache
from typing import Tuple

import mpmath

from numeric_core import NonConvergence, PrecisionContext, error_message
from specfun import WrightParams, wright_bessel
from specfun.wright import cancellation_bits

logger = logging.getLogger(__name__)

METHODS = ("auto", "gauss_jacobi", "series")
INITIAL_NODES = 16
MAX_NODES = 512


@lru_cache(maxsize=32)
def gauss_jacobi_rule(count: int, alpha: float, prec: int) -> Tuple[Tuple[mpmath.mpf, mpmath.mpf], ...]:
    """
    Nodes and weights on [0, 1] for the weight u^α (Golub–Welsch on the Jacobi matrix
    of (1 − t)^0 (1 + t)^α, mapped by u = (1 + t)/2).
    """
    with mpmath.workprec(prec):
        a, b = mpmath.mpf(0), mpmath.mpf(alpha)
        jacobi = mpmath.zeros(count, count)
        for k in range(count):
            h = 2 * k + a + b
            jacobi[k, k] = (b - a) / (a + b + 2) if k == 0 else (b * b - a * a) / (h * (h + 2))
            if k < count - 1:
                off = 2 / (h + 2) * mpmath.sqrt((k + 1) * (k + 1 + a + b) * (k + 1 + a) * (k + 1 + b)
                                                / ((h + 1) * (h + 3)))
                jacobi[k, k + 1] = jacobi[k + 1, k] = off
        eigenvalues, eigenvectors = mpmath.eigsy(jacobi)
        mass = 1 / (b + 1)
        return tuple(((1 + eigenvalues[i]) / 2, mass * eigenvectors[0, i] ** 2) for i in range(count))


def _is_integer(theta: float) -> bool:
    return abs(theta - round(theta)) < 1e-12 and round(theta) >= 1


def _real_wright(a1, a2, x, ctx: PrecisionContext):
    return mpmath.re(wright_bessel(WrightParams(a1, a2), x, ctx))


def _limit_gauss_jacobi(x, y, alpha: float, theta: float, ctx: PrecisionContext):
    first, second = WrightParams((alpha + 1) / theta, 1 / theta), WrightParams(alpha + 1, theta)
    guard = cancellation_bits(first, x, ctx) + cancellation_bits(second, mpmath.power(y, theta), ctx) + 16

    def integrand(u):
        return mpmath.re(wright_bessel(first, x * u, ctx) * wright_bessel(second, mpmath.power(y * u, theta), ctx))

    with ctx.workprec(guard):
        count = INITIAL_NODES
        previous = None
        while count <= MAX_NODES:
            rule = gauss_jacobi_rule(count, float(alpha), ctx.mantissa_bits + guard)
            value = theta * mpmath.fsum(w * integrand(u) for u, w in rule)
            if previous is not None and abs(value - previous) <= ctx.rel_tol * max(abs(value), 1):
                return +value
            logger.debug("Gauss-Jacobi count=%d value=%s", count, mpmath.nstr(value, 12))
            previous = value
            count *= 2
    raise NonConvergence(error_message("hardedge_verify", f"Gauss-Jacobi rule did not stabilize at {MAX_NODES} "
                                       "nodes", "limit_kernel"))


def _wright_terms(a1, a2, z, ctx: PrecisionContext):
    terms = []
    factor = mpmath.mpf(1)
    peak = mpmath.mpf(0)
    onset = int(2 + abs(z) ** (1 / (1 + a2)))
    for j in range(ctx.max_series_terms):
        if j:
            factor *= -z / j
        term = factor * mpmath.rgamma(a1 + j * a2)
        terms.append(term)
        peak = max(peak, abs(term))
        if j > onset and a1 + j * a2 > 0 and abs(term) <= ctx.rel_tol * peak / 1024:
            return terms
    raise NonConvergence(error_message("hardedge_verify", "Wright term sequence did not decay", "_wright_terms"))


def _limit_series(x, y, alpha: float, theta: float, ctx: PrecisionContext):
    first, second = WrightParams((alpha + 1) / theta, 1 / theta), WrightParams(alpha + 1, theta)
    guard = cancellation_bits(first, x, ctx) + cancellation_bits(second, mpmath.power(y, theta), ctx) + 16
    with ctx.workprec(guard):
        a, t = mpmath.mpf(alpha), mpmath.mpf(theta)
        left = _wright_terms((a + 1) / t, 1 / t, mpmath.mpf(x), ctx)
        right = _wright_terms(a + 1, t, mpmath.power(y, t), ctx)
        total = mpmath.fsum(left[j] * right[k] / (a + 1 + j + t * k)
                            for j in range(len(left)) for k in range(len(right)))
        return +(t * total)


def limit_kernel(x, y, alpha: float, theta: float, ctx: PrecisionContext, method: str = "auto"):
    """
    K^{(α,θ)}(x, y) for x, y ≥ 0.

    "gauss_jacobi" integrates with a u^α Gauss–Jacobi rule and needs a smooth integrand
    (integer θ); "series" integrates the double Wright series term by term and works for
    every θ > 0. "auto" picks the first for integer θ.
    """
    if method not in METHODS:
        raise ValueError(error_message("hardedge_verify", f"method must be one of {METHODS}, got {method!r}",
                                       "limit_kernel"))
    if alpha <= -1 or theta <= 0 or x < 0 or y < 0:
        raise ValueError(error_message("hardedge_verify", f"need x, y >= 0, alpha > -1, theta > 0; got "
                                       f"x={x}, y={y}, alpha={alpha}, theta={theta}", "limit_kernel"))
    if method == "auto":
        method = "gauss_jacobi" if _is_integer(theta) else "series"
    with ctx.workprec():
        x, y = mpmath.mpf(x), mpmath.mpf(y)
        if method == "gauss_jacobi":
            return _limit_gauss_jacobi(x, y, alpha, theta, ctx)
        return _limit_series(x, y, alpha, theta, ctx)


def limit_kernel_rescaled(x, y, alpha: float, theta: float, rho, ctx: PrecisionContext, method: str = "auto"):
    """
    θ² ∫_0^{ρ^{1+1/θ}} u^α k(ux, uy) du, reduced to θ^{1+α} U^{α+1} K(θUx, θUy) with U = ρ^{1+1/θ}.
    """
    with ctx.workprec():
        scale = mpmath.power(mpmath.mpf(rho), 1 + mpmath.mpf(1) / theta)
        prefactor = mpmath.power(theta, 1 + alpha) * mpmath.power(scale, alpha + 1)
        return prefactor * limit_kernel(theta * scale * x, theta * scale * y, alpha, theta, ctx, method)


def k_product(x, y, alpha: float, theta: float, ctx: PrecisionContext):
    """k(x, y) = θ^α J_{(α+1)/θ, 1/θ}(θx) J_{α+1, θ}((θy)^θ)."""
    with ctx.workprec():
        x, y = mpmath.mpf(x), mpmath.mpf(y)
        return (mpmath.power(theta, alpha) * _real_wright((alpha + 1) / theta, 1 / theta, theta * x, ctx)
                * _real_wright(alpha + 1, theta, mpmath.power(theta * y, theta), ctx))


def bessel_hard_edge_kernel(x, y, alpha: float, ctx: PrecisionContext):
    """
    Classical Bessel kernel
    [J_α(√x) √y J_α′(√y) − √x J_α′(√x) J_α(√y)] / (2(x − y)), with its diagonal limit.
    """
    with ctx.workprec(16):
        x, y = mpmath.mpf(x), mpmath.mpf(y)
        sx, sy = mpmath.sqrt(x), mpmath.sqrt(y)
        if abs(x - y) <= ctx.rel_tol * max(x, y):
            return (mpmath.besselj(alpha, sx) ** 2
                    - mpmath.besselj(alpha + 1, sx) * mpmath.besselj(alpha - 1, sx)) / 4
        numerator = (mpmath.besselj(alpha, sx) * sy * mpmath.besselj(alpha, sy, derivative=1)
                     - sx * mpmath.besselj(alpha, sx, derivative=1) * mpmath.besselj(alpha, sy))
        return numerator / (2 * (x - y))


def bessel_limit_oracle(x, y, alpha: float, ctx: PrecisionContext):
    """The θ = 1 limit kernel through the Bessel kernel: 4 (xy)^{−α/2} K_Bessel(4x, 4y)."""
    with ctx.workprec(16):
        x, y = mpmath.mpf(x), mpmath.mpf(y)
        return 4 * mpmath.power(x * y, -mpmath.mpf(alpha) / 2) * bessel_hard_edge_kernel(4 * x, 4 * y, alpha, ctx)
