"""
Model functions G^model(z; λ), H^model(z; β) and the ℓ-indexed families built from them.

With T = T(λ) (resp. T(β)) and rays at ±ω_G = ±(π + γθ)/(θ+1) (resp. ±ω_H = ±(π − γθ)/(θ+1)):

    G^model = √(2π) θ^T/√(θ+1) ×  (1/2π) I⁽²⁾_{θ,T}(z)                          |arg z| < ω_G
                                   −i e^{Tπi} I⁽¹⁾_{θ,T}((−z) e^{θπi/(θ+1)})        upper left
                                   i e^{−Tπi} I⁽¹⁾_{θ,T}((−z) e^{−θπi/(θ+1)})       lower left

    H^model = √(2π) θ^{−T}/√(θ+1) × (1/2π) I⁽²⁾_{θ,−T}(−z)                         |arg z| > ω_H
                                   e^{Tπi} I⁽³⁾_{θ,−T}(z e^{πi/(θ+1)})              −ω_H < arg z < 0
                                   e^{−Tπi} I⁽³⁾_{θ,−T}(z e^{−πi/(θ+1)})            0 ≤ arg z < ω_H

Rays are oriented from 0 to ∞; the "+" side is the one with the larger argument.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional, Tuple

import mpmath

from numeric_core import PrecisionContext, RayError, error_message
from specfun import FoxIParams, fox_I, fox_I_fast

from .index import index_for, t_shift

logger = logging.getLogger(__name__)

FAMILIES = ("G", "H", "G_tilde", "H_tilde")
SIDES = ("+", "-")
RAY_TOLERANCE = mpmath.mpf("1e-15")


def _evaluate_fox(kind: int, p: FoxIParams, w, ctx: PrecisionContext, method: str):
    if method == "auto":
        return fox_I_fast(kind, p, w, ctx)
    return fox_I(kind, p, w, ctx, method=method)


def _polar(z):
    z = mpmath.mpc(z)
    return abs(z), mpmath.arg(z)


def _wrap(angle):
    """Map an angle into (−π, π]."""
    pi = mpmath.pi
    wrapped = angle - 2 * pi * mpmath.floor((angle + pi) / (2 * pi))
    return pi if wrapped == -pi else wrapped


def _ray_side(angle, ray, side: Optional[str], owner: str):
    """+1 / −1 when angle sits on the ray (using the side tag), None otherwise."""
    if abs(angle - ray) > RAY_TOLERANCE * max(1, abs(ray)):
        return None
    if side not in SIDES:
        raise RayError(error_message(owner, f"arg z={mpmath.nstr(angle, 12)} lies on the discontinuity ray "
                                            f"{mpmath.nstr(ray, 12)}; pass side='+' or side='-'"))
    return 1 if side == "+" else -1


def g_model_polar(radius, angle, lam, theta, alpha, ctx: PrecisionContext, side: Optional[str] = None,
                  gamma=0, method: str = "auto") -> mpmath.mpc:
    with ctx.workprec(8):
        theta = mpmath.mpf(theta)
        angle = _wrap(mpmath.mpf(angle))
        radius = mpmath.mpf(radius)
        T = t_shift(mpmath.mpf(lam), theta, alpha)
        p = FoxIParams(theta=theta, a=T)
        prefactor = mpmath.sqrt(2 * mpmath.pi) * theta ** T / mpmath.sqrt(theta + 1)
        ray = (mpmath.pi + gamma * theta) / (theta + 1)

        on_upper = _ray_side(angle, ray, side, "G_model")
        on_lower = _ray_side(angle, -ray, side, "G_model")
        if on_upper is not None:
            region = "upper" if on_upper > 0 else "right"
        elif on_lower is not None:
            region = "right" if on_lower > 0 else "lower"
        elif abs(angle) < ray:
            region = "right"
        else:
            region = "upper" if angle > 0 else "lower"

        if region == "right":
            value = _evaluate_fox(2, p, radius * mpmath.expj(angle), ctx, method) / (2 * mpmath.pi)
        else:
            sign = 1 if region == "upper" else -1
            # (−z) e^{±θπi/(θ+1)} built from the polar form so that no branch is crossed
            w = radius * mpmath.expj(angle - sign * mpmath.pi + sign * theta * mpmath.pi / (theta + 1))
            value = -sign * 1j * mpmath.expjpi(sign * T) * _evaluate_fox(1, p, w, ctx, method)
        result = prefactor * value
    return +result


def h_model_polar(radius, angle, beta, theta, alpha, ctx: PrecisionContext, side: Optional[str] = None,
                  gamma=0, method: str = "auto") -> mpmath.mpc:
    with ctx.workprec(8):
        theta = mpmath.mpf(theta)
        angle = _wrap(mpmath.mpf(angle))
        radius = mpmath.mpf(radius)
        T = t_shift(mpmath.mpf(beta), theta, alpha)
        p = FoxIParams(theta=theta, a=-T)
        prefactor = mpmath.sqrt(2 * mpmath.pi) * theta ** (-T) / mpmath.sqrt(theta + 1)
        ray = (mpmath.pi - gamma * theta) / (theta + 1)

        on_upper = _ray_side(angle, ray, side, "H_model")
        on_lower = _ray_side(angle, -ray, side, "H_model")
        if on_upper is not None:
            region = "left" if on_upper > 0 else "right_upper"
        elif on_lower is not None:
            region = "right_lower" if on_lower > 0 else "left"
        elif abs(angle) > ray:
            region = "left"
        else:
            region = "right_upper" if angle >= 0 else "right_lower"

        if region == "left":
            minus_angle = angle - mpmath.pi if angle > 0 else angle + mpmath.pi
            value = _evaluate_fox(2, p, radius * mpmath.expj(minus_angle), ctx, method) / (2 * mpmath.pi)
        else:
            sign = 1 if region == "right_lower" else -1
            w = radius * mpmath.expj(angle + sign * mpmath.pi / (theta + 1))
            value = mpmath.expjpi(sign * T) * _evaluate_fox(3, p, w, ctx, method)
        result = prefactor * value
    return +result


def G_model(z, lam, theta, alpha, ctx: PrecisionContext, side: Optional[str] = None, gamma=0,
            method: str = "auto") -> mpmath.mpc:
    """
    G^model(z; λ) for the parameters (θ, α).

    :param side: "+" or "−", required only when z lies on a discontinuity ray.
    :param gamma: opening parameter of the rays (0 places them at ±π/(θ+1)).
    :param method: fox_I evaluation method, or "auto" for the fastest safe representation.
    :raises RayError: on a ray without a side tag.
    """
    radius, angle = _polar(z)
    return g_model_polar(radius, angle, lam, theta, alpha, ctx, side=side, gamma=gamma, method=method)


def H_model(z, beta, theta, alpha, ctx: PrecisionContext, side: Optional[str] = None, gamma=0,
            method: str = "auto") -> mpmath.mpc:
    """H^model(z; β) for the parameters (θ, α); see G_model for the keyword arguments."""
    radius, angle = _polar(z)
    return h_model_polar(radius, angle, beta, theta, alpha, ctx, side=side, gamma=gamma, method=method)


@dataclass(frozen=True)
class ModelFunction:
    """
    One member of the ℓ-indexed families

        G^(ℓ) = G^model(·; R^λ(ℓ)) z^ℓ      H^(ℓ) = H^model(·; R^β(ℓ)) z^ℓ
        G̃^(ℓ) = H^model(·; R̃^β(ℓ)) z^ℓ     H̃^(ℓ) = G^model(·; R̃^λ(ℓ)) z^ℓ
    """
    family: str
    ell: int
    theta: float
    alpha: float
    ctx: PrecisionContext = field(compare=False)
    gamma: float = 0
    method: str = "auto"

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(error_message(self, f"family must be one of {FAMILIES}, got {self.family!r}"))

    @property
    def uses_g_model(self) -> bool:
        return self.family in ("G", "H_tilde")

    @property
    def parameter(self) -> mpmath.mpf:
        index = index_for(self.ell, self.theta)
        return {
            "G": index.R_lambda,
            "H": index.R_beta,
            "G_tilde": index.R_tilde_beta,
            "H_tilde": index.R_tilde_lambda,
        }[self.family]

    @property
    def rays(self) -> Tuple[mpmath.mpf, mpmath.mpf]:
        theta = mpmath.mpf(self.theta)
        opening = self.gamma * theta if self.uses_g_model else -self.gamma * theta
        ray = (mpmath.pi + opening) / (theta + 1)
        return ray, -ray

    def polar(self, radius, angle, side: Optional[str] = None) -> mpmath.mpc:
        evaluate = g_model_polar if self.uses_g_model else h_model_polar
        with self.ctx.workprec(8):
            value = evaluate(radius, angle, self.parameter, self.theta, self.alpha, self.ctx, side=side,
                             gamma=self.gamma, method=self.method)
            result = value * (mpmath.mpf(radius) * mpmath.expj(angle)) ** self.ell
        return +result

    def __call__(self, z, side: Optional[str] = None) -> mpmath.mpc:
        radius, angle = _polar(z)
        return self.polar(radius, angle, side=side)


def G_ell(ell: int, z, theta, alpha, ctx: PrecisionContext, **kwargs) -> mpmath.mpc:
    return ModelFunction("G", ell, theta, alpha, ctx, **_family_kwargs(kwargs))(z, side=kwargs.get("side"))


def H_ell(ell: int, z, theta, alpha, ctx: PrecisionContext, **kwargs) -> mpmath.mpc:
    return ModelFunction("H", ell, theta, alpha, ctx, **_family_kwargs(kwargs))(z, side=kwargs.get("side"))


def G_tilde_ell(ell: int, z, theta, alpha, ctx: PrecisionContext, **kwargs) -> mpmath.mpc:
    return ModelFunction("G_tilde", ell, theta, alpha, ctx, **_family_kwargs(kwargs))(z, side=kwargs.get("side"))


def H_tilde_ell(ell: int, z, theta, alpha, ctx: PrecisionContext, **kwargs) -> mpmath.mpc:
    return ModelFunction("H_tilde", ell, theta, alpha, ctx, **_family_kwargs(kwargs))(z, side=kwargs.get("side"))


def _family_kwargs(kwargs: dict) -> dict:
    return {key: kwargs[key] for key in ("gamma", "method") if key in kwargs}
