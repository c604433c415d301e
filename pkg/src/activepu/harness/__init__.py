"""Experiment configuration, execution, output and CLI."""

from .config import ALGORITHMS, ExperimentConfig, load_config, parse_config, parse_distribution
from .emit import COLUMNS, SCHEMA_VERSION, emit, read_csv, to_csv, to_json
from .runner import TrialRecord, run_experiment, run_trial, summarize

__all__ = [
    "ALGORITHMS", "COLUMNS", "SCHEMA_VERSION", "ExperimentConfig", "TrialRecord", "emit",
    "load_config", "parse_config", "parse_distribution", "read_csv", "run_experiment",
    "run_trial", "summarize", "to_csv", "to_json",
]
