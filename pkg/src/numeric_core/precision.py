"""
Precision settings consumed by every numeric routine.

A PrecisionContext is immutable; code that needs more bits derives a new one with
with_bits()/escalated() and evaluates inside ctx.workprec().
"""

import logging
import os
from dataclasses import dataclass, field, replace
from typing import Optional

import mpmath

from .errors import ConfigError, DomainError, error_message

logger = logging.getLogger(__name__)

PRECISION_ENV_VAR = "MB_PREC_BITS"
DEFAULT_MANTISSA_BITS = 128


@dataclass(frozen=True)
class PrecisionContext:
    mantissa_bits: int = DEFAULT_MANTISSA_BITS
    rel_tol: Optional[float] = field(default=None)
    max_series_terms: int = 20000
    quad_points_circle: int = 64
    quad_points_line: int = 128

    def __post_init__(self):
        if int(self.mantissa_bits) != self.mantissa_bits or self.mantissa_bits < 64:
            raise ConfigError(error_message(self, f"mantissa_bits must be an integer >= 64, got {self.mantissa_bits}"))
        if self.rel_tol is None:
            object.__setattr__(self, "rel_tol", mpmath.ldexp(1, -(self.mantissa_bits // 2)))
        tol = mpmath.mpf(self.rel_tol)
        if not tol > 0 or tol < mpmath.ldexp(1, -self.mantissa_bits):
            raise ConfigError(error_message(self, f"rel_tol must lie in [2^-mantissa_bits, inf), got {self.rel_tol}"))
        object.__setattr__(self, "rel_tol", tol)
        if self.max_series_terms < 1 or self.quad_points_circle < 4 or self.quad_points_line < 4:
            raise ConfigError(error_message(self, "series and quadrature sizes must be positive"))

    @classmethod
    def from_env(cls, **overrides) -> "PrecisionContext":
        raw = os.environ.get(PRECISION_ENV_VAR)
        if raw is not None and "mantissa_bits" not in overrides:
            try:
                overrides["mantissa_bits"] = int(raw)
            except ValueError as e:
                raise ConfigError(error_message(cls, f"{PRECISION_ENV_VAR}={raw!r} is not an integer: {e}",
                                                "from_env"))
        return cls(**overrides)

    def workprec(self, extra_bits: int = 0):
        return mpmath.workprec(self.mantissa_bits + max(0, int(extra_bits)))

    def with_bits(self, mantissa_bits: int) -> "PrecisionContext":
        return replace(self, mantissa_bits=int(mantissa_bits), rel_tol=None)

    def escalated(self, factor: int = 2) -> "PrecisionContext":
        logger.debug("escalating precision from %d to %d bits", self.mantissa_bits, self.mantissa_bits * factor)
        return self.with_bits(self.mantissa_bits * factor)

    @property
    def decimal_digits(self) -> int:
        return int(self.mantissa_bits * 0.30103) + 1

    def as_dict(self) -> dict:
        return {
            "mantissa_bits": self.mantissa_bits,
            "rel_tol": mpmath.nstr(self.rel_tol, 6),
            "max_series_terms": self.max_series_terms,
            "quad_points_circle": self.quad_points_circle,
            "quad_points_line": self.quad_points_line,
        }


def to_complex(value, owner="numeric_core") -> mpmath.mpc:
    """Convert to an mpmath complex at the current precision, rejecting NaN and infinities."""
    v = mpmath.mpc(value)
    if not (mpmath.isfinite(v.real) and mpmath.isfinite(v.imag)):
        raise DomainError(error_message(owner, f"non-finite complex value {v}", "to_complex"))
    return v


def decimal_string(value, ctx: PrecisionContext) -> str:
    """Full-precision decimal rendering used for CSV/JSON output."""
    return mpmath.nstr(value, ctx.decimal_digits, strip_zeros=False)
