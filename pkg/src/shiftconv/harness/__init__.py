from .config import ConfigError, HarnessConfig, load_config
from .report import ExperimentReport, format_number
from .selftest import CRITERIA, CriterionResult, run_selftest

__all__ = ["ConfigError", "HarnessConfig", "load_config", "ExperimentReport", "format_number", "CRITERIA",
           "CriterionResult", "run_selftest"]
