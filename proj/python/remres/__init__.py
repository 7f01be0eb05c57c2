"""Relational-event network simulation and resilience analysis.

Thin package over the compiled core. All operations are file-driven and
deterministic in their seeds; see the README for the file formats.
"""

from ._core import (
    SimulationError,
    ValidationError,
    __version__,
    load_roster,
    metrics,
    run_experiment,
    simulate,
    summarize,
    theil,
    welch,
)

__all__ = [
    "SimulationError",
    "ValidationError",
    "__version__",
    "load_roster",
    "metrics",
    "run_experiment",
    "simulate",
    "summarize",
    "theil",
    "welch",
]
