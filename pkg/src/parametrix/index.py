"""
Index arithmetic of the model families.

For every integer ℓ the four fractional parameters

    R^λ(ℓ)  = θℓ/(θ+1) + m_ℓ          ∈ (0, 1]
    R^β(ℓ)  = −θℓ/(θ+1) − n_ℓ         ∈ (−θ/(θ+1), 1/(θ+1)]
    R̃^λ(ℓ)  = (1 + θℓ)/(θ+1) + m̃_ℓ    ∈ (0, 1]
    R̃^β(ℓ)  = (1 − θℓ)/(θ+1) − ñ_ℓ    ∈ (−θ/(θ+1), 1/(θ+1)]

fix the integer offsets uniquely.
"""

from dataclasses import dataclass

import mpmath

_CEIL_SLACK = mpmath.mpf("1e-9")


def _ceil(x) -> int:
    # exact rationals like 1/2·2 must not be pushed to the next integer by rounding
    return int(mpmath.ceil(x - _CEIL_SLACK * max(1, abs(x))))


@dataclass(frozen=True)
class ParametrixIndex:
    ell: int
    theta: mpmath.mpf
    m_ell: int
    n_ell: int
    m_tilde_ell: int
    n_tilde_ell: int

    @property
    def R_lambda(self) -> mpmath.mpf:
        return self.theta * self.ell / (self.theta + 1) + self.m_ell

    @property
    def R_beta(self) -> mpmath.mpf:
        return -self.theta * self.ell / (self.theta + 1) - self.n_ell

    @property
    def R_tilde_lambda(self) -> mpmath.mpf:
        return (1 + self.theta * self.ell) / (self.theta + 1) + self.m_tilde_ell

    @property
    def R_tilde_beta(self) -> mpmath.mpf:
        return (1 - self.theta * self.ell) / (self.theta + 1) - self.n_tilde_ell


def index_for(ell: int, theta) -> ParametrixIndex:
    theta = mpmath.mpf(theta)
    step = theta * ell / (theta + 1)
    return ParametrixIndex(
        ell=int(ell),
        theta=theta,
        m_ell=1 - _ceil(step),
        n_ell=_ceil(-step - 1 / (theta + 1)),
        m_tilde_ell=1 - _ceil((1 + theta * ell) / (theta + 1)),
        n_tilde_ell=_ceil(-step),
    )


def t_shift(lam, theta, alpha) -> mpmath.mpf:
    """T(λ) = −(α + 3/2)/(θ + 1) + λ."""
    return -(mpmath.mpf(alpha) + mpmath.mpf(1.5)) / (mpmath.mpf(theta) + 1) + lam
