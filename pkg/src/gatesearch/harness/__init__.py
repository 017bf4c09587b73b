"""Experiment harness: configs, seeded runs, CSV metrics, plots, search oracle."""

from .config import ConfigError, RunConfig, TARGET_PRESETS, resolve_target
from .oracle import CircuitProgram, brute_force_search
from .runner import ExperimentResult, ReplayReport, replay_circuit, run_experiment

__all__ = [
    "CircuitProgram",
    "ConfigError",
    "ExperimentResult",
    "ReplayReport",
    "RunConfig",
    "TARGET_PRESETS",
    "brute_force_search",
    "replay_circuit",
    "resolve_target",
    "run_experiment",
]
