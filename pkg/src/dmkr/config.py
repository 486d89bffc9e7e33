"""Model and solver parameters, plus the JSON config parser.

A config is one JSON object with flat keys and a single nested
``arnoldi`` object::

    {"K": 2.0, "h_eff": 0.031, "gamma": 0.2, "N": 128,
     "arnoldi": {"k": 10, "krylov_dim": 40}}

Only ``K`` is required.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

FORCE_VARIANTS = ("potential", "printed")
OBSERVABLES = ("exp_iq", "p")


class ConfigError(ValueError):
    """Raised for malformed or out-of-range configuration values."""


@dataclass(frozen=True)
class ArnoldiOptions:
    k: int = 10
    krylov_dim: int = 40
    tol: float = 1e-10
    max_restarts: int = 300
    buffer: int = 10

    def validate(self, N: int) -> None:
        if self.k < 1:
            raise ConfigError("arnoldi.k must be positive")
        if not self.k < self.krylov_dim <= N * N:
            raise ConfigError(
                f"need arnoldi.k < arnoldi.krylov_dim <= N^2, got k={self.k}, "
                f"krylov_dim={self.krylov_dim}, N^2={N * N}"
            )
        if self.tol <= 0:
            raise ConfigError("arnoldi.tol must be positive")
        if self.max_restarts < 0 or self.buffer < 0:
            raise ConfigError("arnoldi.max_restarts and arnoldi.buffer must be >= 0")


@dataclass(frozen=True)
class ModelParams:
    """Physical and numerical parameters of one DMKR run.

    ``k`` (bare kick strength K / h_eff) and ``g`` (Lindblad coupling
    sqrt(-ln gamma)) are derived and not settable.
    """

    K: float
    h_eff: float = 0.031
    gamma: float = 0.2
    a: float = 0.5
    phi: float = math.pi / 2
    N: int = 1024
    q0: float = math.pi
    p0: float = 0.0
    seed: int = 0
    force_variant: str = "potential"
    observable_a: str = "exp_iq"
    observable_b: str = "p"
    arnoldi: ArnoldiOptions = field(default_factory=ArnoldiOptions)

    def __post_init__(self) -> None:
        # K = 0 (free rotor) is allowed in-process; parse_config requires K > 0
        if not self.K >= 0:
            raise ConfigError("K must be non-negative")
        if not 0 < self.gamma <= 1:
            raise ConfigError("gamma must lie in (0,1]")
        if not self.h_eff > 0:
            raise ConfigError("h_eff must be positive")
        if isinstance(self.N, bool) or int(self.N) != self.N or self.N <= 0 or self.N % 2:
            raise ConfigError("N must be a positive even integer")
        if self.force_variant not in FORCE_VARIANTS:
            raise ConfigError(f"force_variant must be one of {FORCE_VARIANTS}")
        for name in (self.observable_a, self.observable_b):
            if name not in OBSERVABLES:
                raise ConfigError(f"observables must be one of {OBSERVABLES}, got {name!r}")
        self.arnoldi.validate(self.N)

    @property
    def k(self) -> float:
        return self.K / self.h_eff

    @property
    def g(self) -> float:
        # abs() keeps gamma == 1 at +0.0 rather than -0.0
        return math.sqrt(abs(-math.log(self.gamma)))

    def replace(self, **changes: Any) -> "ModelParams":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict[str, Any]:
        """Plain dict including the derived ``k`` and ``g``."""
        out = dataclasses.asdict(self)
        out["k"] = self.k
        out["g"] = self.g
        return out


_TOP_KEYS = {f.name for f in dataclasses.fields(ModelParams)}
_ARNOLDI_KEYS = {f.name for f in dataclasses.fields(ArnoldiOptions)}


def params_from_dict(data: dict[str, Any]) -> ModelParams:
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(data) - _TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    if "K" not in data:
        raise ConfigError("missing required key 'K'")
    if not isinstance(data["K"], (int, float)) or not data["K"] > 0:
        raise ConfigError("K must be positive")
    kwargs = dict(data)
    arn = kwargs.pop("arnoldi", {})
    if not isinstance(arn, dict):
        raise ConfigError("'arnoldi' must be an object")
    unknown = set(arn) - _ARNOLDI_KEYS
    if unknown:
        raise ConfigError(f"unknown arnoldi keys: {sorted(unknown)}")
    try:
        opts = ArnoldiOptions(**arn)
        return ModelParams(arnoldi=opts, **kwargs)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def parse_config(text: str) -> ModelParams:
    """Parse a JSON config document into validated :class:`ModelParams`."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed config: {exc}") from exc
    return params_from_dict(data)


# Fixed spawn keys: each stochastic consumer gets its own PCG64 stream
# derived from the single config seed.
RNG_STREAMS = {"arnoldi_right": 0, "arnoldi_left": 1, "classical": 2}


def rng_for(seed: int, purpose: str) -> np.random.Generator:
    """numpy PCG64 generator for ``purpose``, seeded by SeedSequence(seed, spawn_key)."""
    key = RNG_STREAMS[purpose]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(key,))))
