"""DSR with optional OCEAN cooperation enforcement, as a Python module.

Scenarios are dicts of setting name to value; anything left out keeps its
default. See ``default_scenario()`` for the full list.
"""

from ._core import (
    ConfigError,
    __version__,
    compare_dsr,
    crossover_distance,
    default_scenario,
    describe,
    nominal_range,
    parse_scenario,
    received_power,
    resolve_scenario,
    run,
    sweep_malicious,
    sweep_threshold,
    validate,
)

__all__ = [
    "ConfigError",
    "__version__",
    "compare_dsr",
    "crossover_distance",
    "default_scenario",
    "describe",
    "nominal_range",
    "parse_scenario",
    "received_power",
    "resolve_scenario",
    "run",
    "sweep_malicious",
    "sweep_threshold",
    "validate",
]
