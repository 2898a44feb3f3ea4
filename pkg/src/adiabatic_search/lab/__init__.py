"""Experiment driver: sweeps, smoothing, figure data, acceptance checks."""

from .sweep import SweepResult, SweepSpec, oscillation_pattern, run_sweep, smooth, smooth_series

__all__ = ["SweepResult", "SweepSpec", "oscillation_pattern", "run_sweep", "smooth", "smooth_series"]
