from dataclasses import dataclass
from typing import Any, Dict

from numeric_core import ConfigError, error_message

from .potential import Potential
from .solver import EquilibriumData, equilibrium_constants


@dataclass(frozen=True)
class ModelParams:
    """(θ, α, n, V) of one Muttalib–Borodin ensemble."""
    theta: float
    alpha: float
    n: int
    potential: Potential

    def __post_init__(self):
        if self.theta <= 0:
            raise ConfigError(error_message(self, f"theta must be positive, got {self.theta}"))
        if self.alpha <= -1:
            raise ConfigError(error_message(self, f"alpha must exceed -1, got {self.alpha}"))
        if self.n < 1:
            raise ConfigError(error_message(self, f"n must be positive, got {self.n}"))

    @staticmethod
    def from_dict(values: Dict[str, Any]) -> "ModelParams":
        try:
            return ModelParams(theta=float(values["theta"]), alpha=float(values.get("alpha", 0.0)),
                               n=int(values.get("n", 1)),
                               potential=Potential.from_descriptor(values.get("potential", {"type": "linear"})))
        except (KeyError, TypeError) as e:
            raise ConfigError(error_message(ModelParams, f"malformed model parameters: {e}", "from_dict"))

    def derived(self, eq: EquilibriumData) -> Dict[str, float]:
        """Equilibrium constants of this model: b, d1, c, ρ, ϱ, m_θ and ℓ."""
        constants = {"b": eq.b, "d1": eq.d1, "lagrange_ell": eq.lagrange_ell}
        constants.update(equilibrium_constants(eq.b, eq.d1, self.theta))
        return constants
