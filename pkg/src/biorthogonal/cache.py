import hashlib
import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Union

from equilibrium import ModelParams
from numeric_core import ConfigError, PrecisionContext, error_message

from .system import BiorthogonalSystem, build_system, system_key

logger = logging.getLogger(__name__)


def config_hash(config: Dict[str, Any]) -> str:
    """sha256 of the canonical JSON rendering (sorted keys, no whitespace)."""
    canonical = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


class SystemCache:
    """On-disk cache of biorthogonal systems, one JSON document per configuration hash."""

    def __init__(self, directory: Union[str, Path]):
        self.directory = Path(directory)

    def path_for(self, params: ModelParams, degree: int, mantissa_bits: int) -> Path:
        return self.directory / f"{config_hash(system_key(params, degree, mantissa_bits))}.json"

    def load(self, params: ModelParams, degree: int, mantissa_bits: int) -> Optional[BiorthogonalSystem]:
        path = self.path_for(params, degree, mantissa_bits)
        if not path.exists():
            logger.debug("cache miss %s", path.name)
            return None
        try:
            with open(path, "r", encoding="utf-8") as handle:
                document = json.load(handle)
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(error_message(self, f"unreadable cache entry {path}: {e}"))
        logger.debug("cache hit %s", path.name)
        return BiorthogonalSystem.from_json(document)

    def store(self, system: BiorthogonalSystem) -> Path:
        self.directory.mkdir(parents=True, exist_ok=True)
        path = self.path_for(system.params, system.degree, system.mantissa_bits)
        with open(path, "w", encoding="utf-8") as handle:
            json.dump(system.to_json(), handle, sort_keys=True, indent=1)
        return path

    def get_or_build(self, params: ModelParams, degree: int, ctx: PrecisionContext) -> BiorthogonalSystem:
        system = self.load(params, degree, ctx.mantissa_bits)
        if system is None:
            system = build_system(params, degree, ctx)
            self.store(system)
        return system
