"""Augmented Dickey-Fuller unit-root test."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike

from ..errors import DegenerateError, InsufficientDataError, SingularDesignError
from .critical_values import ADF_CRITICAL_VALUES, LEVELS
from .ols import OlsFit, ols


class Deterministic(str, enum.Enum):
    CONSTANT = "constant"
    CONSTANT_TREND = "constant_trend"


@dataclass(frozen=True)
class AdfResult:
    tau_statistic: float
    lags_used: int
    deterministic_spec: Deterministic
    rejected_at: frozenset[str]
    critical_values: dict[str, float]
    nobs: int
    max_lags: int

    @property
    def stationary_at_5pct(self) -> bool:
        return "5%" in self.rejected_at

    def to_dict(self) -> dict:
        return {
            "tau_statistic": self.tau_statistic,
            "lags_used": self.lags_used,
            "deterministic_spec": self.deterministic_spec.value,
            "rejected_at": [lv for lv in LEVELS if lv in self.rejected_at],
            "critical_values": dict(self.critical_values),
            "nobs": self.nobs,
            "max_lags": self.max_lags,
        }


def schwert_max_lags(nobs: int) -> int:
    """``floor(12 * (T / 100) ** 0.25)``."""
    return int(math.floor(12 * (nobs / 100.0) ** 0.25))


def adf_design(
    y: np.ndarray, spec: Deterministic, lags: int, first: int | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """Regressand and design of the ADF regression.

    Rows are ``dy[t]`` for ``t = first .. T-2`` where ``dy[t] = y[t+1] - y[t]``
    (``first`` defaults to ``lags``).  Columns: intercept, optional linear
    trend, lagged level ``y[t]``, then ``dy[t-1] .. dy[t-lags]``.
    The lagged level is always column ``1`` (``CONSTANT``) or ``2``.
    """
    dy = np.diff(y)
    first = lags if first is None else first
    rows = np.arange(first, dy.size)
    cols = [np.ones(rows.size)]
    if spec is Deterministic.CONSTANT_TREND:
        cols.append(rows + 1.0)
    cols.append(y[rows])
    for i in range(1, lags + 1):
        cols.append(dy[rows - i])
    return np.column_stack(cols), dy[rows]


def _level_column(spec: Deterministic) -> int:
    return 2 if spec is Deterministic.CONSTANT_TREND else 1


def _fit(y, spec, lags, first=None) -> OlsFit:
    X, dy = adf_design(y, spec, lags, first)
    try:
        return ols(X, dy)
    except SingularDesignError as exc:
        raise DegenerateError(f"ADF regression is degenerate: {exc}") from None


def adf_test(
    xs: ArrayLike,
    spec: Deterministic | str = Deterministic.CONSTANT,
    max_lags: int | None = None,
) -> AdfResult:
    """ADF test with AIC lag selection.

    The lag order is chosen by minimum AIC over ``0..max_lags`` on a common
    estimation sample, then the chosen model is refit on all usable
    observations.  ``tau`` is the t-statistic of the lagged level.  Rejection
    (stationarity) is decided against asymptotic critical values; no p-value
    is computed.

    Raises
    ------
    InsufficientDataError
        ``len(xs) < 15 + max_lags``.
    DegenerateError
        The regression is singular (e.g. a constant series).
    """
    y = np.asarray(xs, dtype=float).ravel()
    if not np.isfinite(y).all():
        raise ValueError("ADF input must not contain missing values")
    spec = Deterministic(spec)
    T = y.size
    if max_lags is None:
        max_lags = schwert_max_lags(T)
    if max_lags < 0:
        raise ValueError("max_lags must be >= 0")
    if T < 15 + max_lags:
        raise InsufficientDataError(f"ADF needs at least {15 + max_lags} observations, got {T}")

    best_lag, best_aic = 0, math.inf
    for k in range(max_lags + 1):
        fit = _fit(y, spec, k, first=max_lags)
        if fit.ssr <= 0:
            aic = -math.inf
        else:
            aic = fit.n * math.log(fit.ssr / fit.n) + 2 * fit.k
        if aic < best_aic:
            best_lag, best_aic = k, aic

    fit = _fit(y, spec, best_lag)
    tau = float(fit.tvalues[_level_column(spec)])
    if not math.isfinite(tau):
        raise DegenerateError("ADF tau statistic is not finite (perfect fit)")
    cvs = ADF_CRITICAL_VALUES[spec.value]
    rejected = frozenset(lv for lv in LEVELS if tau < cvs[lv])
    return AdfResult(tau, best_lag, spec, rejected, dict(cvs), fit.n, max_lags)
