"""
Run configuration for the command-line front end.

Values are merged in increasing priority: dataclass defaults, a JSON document passed
with --config (loaded through the data providers) and explicit flags.
"""

import json
from dataclasses import asdict, dataclass, field, fields
from typing import Any, Dict, Optional, Tuple

from data_providers import BACKENDS, load_run_config
from equilibrium import ModelParams, Potential
from numeric_core import ConfigError, PrecisionContext, error_message

COMMANDS = ("specfun", "parametrix-check", "equilibrium", "biortho", "kernel", "verify")
TARGETS = ("kappa", "p", "q", "kernel")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")

# runtime knobs that never change a result and stay out of the config hash
RUNTIME_KEYS = ("backend", "jobs", "cache_dir", "out", "log_level", "config")


class MalformedConfig(ConfigError):
    """An unreadable config file, unknown keys or values of the wrong type."""


def _default_bits() -> int:
    return PrecisionContext.from_env().mantissa_bits


@dataclass(frozen=True)
class RunConfig:
    command: str
    theta: float = 1.0
    alpha: float = 0.0
    potential: Dict[str, Any] = field(default_factory=lambda: {"type": "linear"})
    n_list: Tuple[int, ...] = (8, 12, 16, 24)
    mantissa_bits: int = field(default_factory=_default_bits)
    target: str = "kappa"

    # specfun
    wright: Optional[Tuple[float, float]] = None
    fox_kind: Optional[int] = None
    fox_a: float = 0.0
    fox_method: str = "mellin_barnes"
    x: Tuple[complex, ...] = (1.0,)

    # parametrix-check
    jmax: int = 6
    radii: Tuple[float, ...] = (0.5, 1.0, 2.0)
    family: str = "plain"
    grid: Optional[str] = None
    tolerance: float = 1e-10

    # equilibrium / verify
    grid_size: int = 400
    extrapolate: bool = False
    points: Tuple[Tuple[float, float], ...] = ((0.7, 1.1), (0.3, 0.3), (1.5, 0.9))

    backend: str = "pandas"
    jobs: int = 1
    cache_dir: Optional[str] = None
    out: Optional[str] = None
    log_level: str = "WARNING"
    config: Optional[str] = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(error_message(self, f"command must be one of {COMMANDS}, got {self.command!r}"))
        if not self.theta > 0:
            raise ConfigError(error_message(self, f"theta must be positive, got {self.theta}"))
        if not self.alpha > -1:
            raise ConfigError(error_message(self, f"alpha must exceed -1, got {self.alpha}"))
        if self.mantissa_bits < 64:
            raise ConfigError(error_message(self, f"mantissa_bits must be at least 64, got {self.mantissa_bits}"))
        if not self.n_list or any(n < 1 for n in self.n_list):
            raise ConfigError(error_message(self, f"n_list must be a nonempty list of positive integers, "
                                                  f"got {self.n_list}"))
        if any(b <= a for a, b in zip(self.n_list, self.n_list[1:])):
            raise ConfigError(error_message(self, f"n_list must be increasing, got {self.n_list}"))
        if self.target not in TARGETS:
            raise ConfigError(error_message(self, f"target must be one of {TARGETS}, got {self.target!r}"))
        if self.backend not in BACKENDS:
            raise ConfigError(error_message(self, f"backend must be one of {BACKENDS}, got {self.backend!r}"))
        if self.jobs < 1 or self.jmax < 0 or self.grid_size < 1:
            raise ConfigError(error_message(self, "jobs, jmax and grid_size must be positive"))
        if not self.radii or any(r <= 0 for r in self.radii):
            raise ConfigError(error_message(self, f"radii must be positive, got {self.radii}"))
        if self.wright is not None and len(self.wright) != 2:
            raise ConfigError(error_message(self, f"wright takes two parameters a1,a2, got {self.wright}"))
        if not self.x or not self.points:
            raise ConfigError(error_message(self, "x and points must be nonempty"))
        if self.log_level.upper() not in LOG_LEVELS:
            raise ConfigError(error_message(self, f"log_level must be one of {LOG_LEVELS}, got {self.log_level!r}"))
        # raises ConfigError on a malformed descriptor
        Potential.from_descriptor(self.potential)

    @staticmethod
    def from_sources(command: str, flags: Dict[str, Any]) -> "RunConfig":
        """
        Merge the file named by flags["config"] (if any) with the explicit flags.

        :raises MalformedConfig: on an unreadable file, unknown keys or mistyped values.
        :raises ConfigError: on values violating the invariants.
        """
        values: Dict[str, Any] = {}
        if flags.get("config"):
            try:
                values.update(load_run_config(flags["config"]))
            except ConfigError as e:
                raise MalformedConfig(str(e))
            values.pop("command", None)
        values.update({key: value for key, value in flags.items() if value is not None})
        known = {f.name for f in fields(RunConfig)}
        unknown = sorted(set(values) - known)
        if unknown:
            raise MalformedConfig(error_message(RunConfig, f"unknown configuration keys {unknown}", "from_sources"))
        try:
            return RunConfig(command=command, **_normalized(values))
        except (TypeError, ValueError) as e:
            if isinstance(e, ConfigError):
                raise
            raise MalformedConfig(error_message(RunConfig, f"malformed configuration value: {e}", "from_sources"))

    @property
    def potential_object(self) -> Potential:
        return Potential.from_descriptor(self.potential)

    def precision(self) -> PrecisionContext:
        return PrecisionContext(mantissa_bits=self.mantissa_bits)

    def model_params(self, n: int) -> ModelParams:
        return ModelParams(theta=self.theta, alpha=self.alpha, n=n, potential=self.potential_object)

    def canonical(self) -> Dict[str, Any]:
        """JSON-ready settings that determine the result; runtime knobs are left out."""
        values = asdict(self)
        for key in RUNTIME_KEYS:
            values.pop(key)
        values["x"] = [_render_complex(value) for value in self.x]
        return json.loads(json.dumps(values))


def _render_complex(value) -> Any:
    value = complex(value)
    return value.real if value.imag == 0 else [value.real, value.imag]


def _normalized(values: Dict[str, Any]) -> Dict[str, Any]:
    """Lists from JSON become tuples so that the frozen config stays comparable."""
    out = dict(values)
    for key in ("n_list", "radii"):
        if key in out:
            out[key] = tuple(out[key])
    if "x" in out:
        out["x"] = tuple(complex(*v) if isinstance(v, (list, tuple)) else v for v in out["x"])
    if "points" in out:
        out["points"] = tuple(tuple(float(c) for c in point) for point in out["points"])
    if out.get("wright") is not None:
        out["wright"] = tuple(float(v) for v in out["wright"])
    if "log_level" in out:
        out["log_level"] = str(out["log_level"]).upper()
    return out
