from dataclasses import dataclass

import mpmath

from numeric_core import DomainError, error_message


@dataclass(frozen=True)
class WrightParams:
    """Parameters (a1, a2) of J_{a1,a2}(x) = Σ (−x)^j / (j! Γ(a1 + j a2))."""
    a1: float
    a2: float

    def __post_init__(self):
        if not self.a2 > 0:
            raise DomainError(error_message(self, f"a2 must be positive, got {self.a2}"))


@dataclass(frozen=True)
class FoxIParams:
    theta: float
    a: float

    def __post_init__(self):
        if not (self.theta > 0 and mpmath.isfinite(self.theta)):
            raise DomainError(error_message(self, f"theta must be positive and finite, got {self.theta}"))

    @property
    def u_scale(self) -> mpmath.mpf:
        theta = mpmath.mpf(self.theta)
        return (theta / (theta + 1)) ** (theta / (theta + 1)) * (1 / (theta + 1)) ** (1 / (theta + 1))

    def dual(self) -> "FoxIParams":
        """(θ, a) ↦ (1/θ, 1/2 − a), the substitution relating I⁽³⁾ to I⁽¹⁾."""
        return FoxIParams(theta=1 / mpmath.mpf(self.theta), a=mpmath.mpf(0.5) - self.a)
