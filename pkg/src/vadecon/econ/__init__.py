"""Econometric tests: OLS, correlation, rank tests, ADF and structural breaks."""

from .adf import AdfResult, Deterministic, adf_test, schwert_max_lags
from .breaks import BreakModelConfig, BreakResult, detect_breaks
from .ols import OlsFit, ols
from .stats import TestResult, mann_whitney_u, pearson

__all__ = [
    "AdfResult",
    "BreakModelConfig",
    "BreakResult",
    "Deterministic",
    "OlsFit",
    "TestResult",
    "adf_test",
    "detect_breaks",
    "mann_whitney_u",
    "ols",
    "pearson",
    "schwert_max_lags",
]
