"""Configuration, orchestration, reports and the command line."""

from .config import CHECKS, ExperimentConfig, config_from_dict, load_config, parse_kv
from .report import CSV_COLUMNS, ExperimentReport, Record, dumps, emit, loads
from .run import run

__all__ = [
    "CHECKS", "ExperimentConfig", "config_from_dict", "load_config", "parse_kv",
    "CSV_COLUMNS", "ExperimentReport", "Record", "dumps", "emit", "loads", "run",
]
