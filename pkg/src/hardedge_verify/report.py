import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from data_providers import provider_for
from numeric_core import ConfigError, FitFailure, error_message

RATE_TOLERANCE = 0.35


def fit_rate(n_values: Sequence[int], errors: Sequence[float], fraction: float = 0.5) -> float:
    """Least-squares slope of log error against log n over the last ⌈fraction · len⌉ points (at least two)."""
    count = max(2, math.ceil(fraction * len(n_values)))
    n = np.asarray(n_values[-count:], dtype=float)
    e = np.asarray(errors[-count:], dtype=float)
    if len(n) < 2 or np.any(e <= 0):
        raise FitFailure(error_message("hardedge_verify", f"cannot fit a rate to {len(n)} points with errors {e}",
                                       "fit_rate"))
    slope, _ = np.polyfit(np.log(n), np.log(e), 1)
    return float(slope)


@dataclass(frozen=True)
class ConvergenceReport:
    quantity: str
    n_values: Tuple[int, ...]
    errors: Tuple[float, ...]
    predicted_rate: float
    constants_used: Dict[str, float]
    ratios: Optional[Tuple[float, ...]] = None
    columns: Dict[str, Tuple[float, ...]] = field(default_factory=dict)
    prefactors: Dict[str, Tuple[float, ...]] = field(default_factory=dict)
    fitted_rate: float = field(init=False)

    def __post_init__(self):
        if len(self.n_values) != len(self.errors) or (self.ratios is not None and len(self.ratios) != len(self.errors)):
            raise ConfigError(error_message(self, "n_values, errors and ratios must have equal lengths"))
        if any(len(values) != len(self.n_values) for values in self.prefactors.values()):
            raise ConfigError(error_message(self, "every prefactor needs one value per n"))
        if any(b <= a for a, b in zip(self.n_values, self.n_values[1:])):
            raise ConfigError(error_message(self, f"n_values must increase strictly, got {self.n_values}"))
        if any(not e > 0 for e in self.errors):
            raise ConfigError(error_message(self, f"errors must be positive, got {self.errors}"))
        rate = fit_rate(self.n_values, self.errors) if len(self.n_values) >= 2 else float("nan")
        object.__setattr__(self, "fitted_rate", rate)

    def rate_ok(self, tolerance: float = RATE_TOLERANCE) -> bool:
        """The fitted exponent lies within `tolerance` (relative) of the predicted one, from either side."""
        return abs(self.fitted_rate - self.predicted_rate) <= tolerance * abs(self.predicted_rate)

    def decreasing(self, burn_in: int = 0) -> bool:
        tail = self.errors[burn_in:]
        return all(b < a for a, b in zip(tail, tail[1:]))

    def to_records(self) -> List[Dict[str, Any]]:
        records = []
        for i, (n, error) in enumerate(zip(self.n_values, self.errors)):
            record = {"n": n, "error": repr(float(error)),
                      "ratio": repr(float(self.ratios[i])) if self.ratios is not None else ""}
            record.update({name: repr(float(values[i])) for name, values in self.columns.items()})
            records.append(record)
        return records

    def to_frame(self, backend: str = "pandas"):
        provider = provider_for(backend)
        return provider.from_records(self.to_records(), provider.get_convergence_schema)

    def to_json_dict(self) -> Dict[str, Any]:
        return {
            "quantity": self.quantity,
            "n_values": list(self.n_values),
            "errors": [float(e) for e in self.errors],
            "ratios": [float(r) for r in self.ratios] if self.ratios is not None else None,
            "columns": {name: [float(v) for v in values] for name, values in self.columns.items()},
            "fitted_rate": self.fitted_rate,
            "predicted_rate": self.predicted_rate,
            "rate_ok": self.rate_ok(),
            "decreasing": self.decreasing(),
            "constants_used": {name: float(v) for name, v in self.constants_used.items()},
            "prefactors": {name: [float(v) for v in values] for name, values in self.prefactors.items()},
        }
