"""Experiment harness: full protocol runs, report rendering and published-statistics checks."""

from .protocol import CellResult, ExperimentReport, ProtocolConfig, load_dataset, run_protocol
from .report import FORMATS, emit_report, load_report, top_models
from .verify import VerificationReport, verify_paper_stats

__all__ = [
    "FORMATS",
    "CellResult",
    "ExperimentReport",
    "ProtocolConfig",
    "VerificationReport",
    "emit_report",
    "load_dataset",
    "load_report",
    "run_protocol",
    "top_models",
    "verify_paper_stats",
]
