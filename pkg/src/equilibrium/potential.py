"""
External fields V on [0, ∞).

Potentials evaluate on floats, numpy arrays (real or complex) and mpmath numbers alike,
so the same object drives the float equilibrium solver and the arbitrary-precision
moment integrals.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Dict, Tuple

import numpy as np

from numeric_core import ConfigError, error_message

logger = logging.getLogger(__name__)

GROWTH_SAMPLES = (1e2, 1e4, 1e6)


class Potential(ABC):

    @abstractmethod
    def value(self, x):
        pass

    @abstractmethod
    def first_derivative(self, x):
        pass

    @abstractmethod
    def second_derivative(self, x):
        pass

    @abstractmethod
    def descriptor(self) -> Dict[str, Any]:
        pass

    def __call__(self, x):
        return self.value(x)

    def growth_ok(self) -> bool:
        """V(x)/log x sampled at 1e2, 1e4, 1e6 must increase and end well above 1."""
        ratios = [float(self.value(x)) / np.log(x) for x in GROWTH_SAMPLES]
        return all(r2 > r1 for r1, r2 in zip(ratios, ratios[1:])) and ratios[-1] > 10

    @staticmethod
    def from_descriptor(descriptor: Dict[str, Any]) -> "Potential":
        """
        Build a potential from {"type": "linear"}, {"type": "monomial", "r": int} or
        {"type": "series", "coeffs": [c1, c2, ...]} (V = Σ_{k≥1} c_k x^k).
        """
        try:
            kind = descriptor["type"]
            if kind == "linear":
                return LinearPotential()
            if kind == "monomial":
                return MonomialPotential(r=int(descriptor["r"]))
            if kind == "series":
                return SeriesPotential(coeffs=tuple(float(c) for c in descriptor["coeffs"]))
        except (KeyError, TypeError, ValueError) as e:
            raise ConfigError(error_message(Potential, f"malformed potential descriptor {descriptor!r}: {e}",
                                            "from_descriptor"))
        raise ConfigError(error_message(Potential, f"unknown potential type {descriptor.get('type')!r}",
                                        "from_descriptor"))


@dataclass(frozen=True)
class LinearPotential(Potential):

    def value(self, x):
        return x

    def first_derivative(self, x):
        return x * 0 + 1

    def second_derivative(self, x):
        return x * 0

    def descriptor(self) -> Dict[str, Any]:
        return {"type": "linear"}


@dataclass(frozen=True)
class MonomialPotential(Potential):
    r: int

    def __post_init__(self):
        if self.r < 1:
            raise ConfigError(error_message(self, f"monomial degree must be >= 1, got {self.r}"))

    def value(self, x):
        return x ** self.r

    def first_derivative(self, x):
        return self.r * x ** (self.r - 1)

    def second_derivative(self, x):
        return self.r * (self.r - 1) * x ** (self.r - 2) if self.r > 1 else x * 0

    def descriptor(self) -> Dict[str, Any]:
        return {"type": "monomial", "r": self.r}


@dataclass(frozen=True)
class SeriesPotential(Potential):
    """V(x) = Σ_{k≥1} coeffs[k−1] x^k."""
    coeffs: Tuple[float, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise ConfigError(error_message(self, "a series potential needs at least one coefficient"))

    @staticmethod
    def _horner(coefficients, x):
        total = x * 0
        for c in reversed(coefficients):
            total = total * x + c
        return total

    @property
    def _powers(self):
        return [0.0, *self.coeffs]

    def value(self, x):
        return self._horner(self._powers, x)

    def first_derivative(self, x):
        return self._horner([k * c for k, c in enumerate(self._powers)][1:], x)

    def second_derivative(self, x):
        derived = [k * (k - 1) * c for k, c in enumerate(self._powers)][2:]
        return self._horner(derived, x) if derived else x * 0

    def descriptor(self) -> Dict[str, Any]:
        return {"type": "series", "coeffs": list(self.coeffs)}


def check_one_cut_sufficient(V: Potential, xmax: float, points: int = 1000) -> bool:
    """True iff x V″(x) + V′(x) > 0 on a log-spaced grid of `points` values in (0, xmax]."""
    x = np.logspace(np.log10(xmax) - 8, np.log10(xmax), max(points, 1000))
    values = x * np.asarray(V.second_derivative(x), dtype=float) + np.asarray(V.first_derivative(x), dtype=float)
    ok = bool(np.all(values > 0))
    logger.debug("one-cut sufficient condition on (0, %g]: %s", xmax, ok)
    return ok
