"""Experiment harness: specs, runners, reporting, CLI."""

from .experiment import PRESETS, Arm, ExperimentSpec, preset
from .report import aggregate
from .runner import (
    run_classification,
    run_spec,
    run_sweep,
    run_toy,
    toy_reach_fractions,
    train_classifier,
)

__all__ = [
    "ExperimentSpec",
    "Arm",
    "preset",
    "PRESETS",
    "run_spec",
    "run_toy",
    "run_classification",
    "run_sweep",
    "train_classifier",
    "toy_reach_fractions",
    "aggregate",
]
