"""Spectral analysis of OTOCs in the dissipative modified kicked rotator."""

from dmkr.config import ArnoldiOptions, ConfigError, ModelParams, parse_config
from dmkr.hilbert import HilbertSpace, build_space, coherent_state
from dmkr.liouvillian import PropagatorAction

__version__ = "0.1.0"

__all__ = [
    "ArnoldiOptions",
    "ConfigError",
    "HilbertSpace",
    "ModelParams",
    "PropagatorAction",
    "build_space",
    "coherent_state",
    "parse_config",
]
