"""Config ingestion, pipeline orchestration, fixture checks and report emission."""
from .analysis import AnalysisReport, run_analysis, verify_identity
from .config import ConfigError, TheoryConfig, load_config, parse_config
from .emit import emit_report, parse_report

__all__ = ["AnalysisReport", "ConfigError", "TheoryConfig", "emit_report", "load_config", "parse_config",
           "parse_report", "run_analysis", "verify_identity"]
