import numpy as np
import pytest

from vadecon.econ import ols
from vadecon.econ.adf import Deterministic, adf_test, schwert_max_lags
from vadecon.econ.critical_values import ADF_CRITICAL_VALUES
from vadecon.errors import DegenerateError, InsufficientDataError


def _manual_tau(y, lags, trend):
    """Literal loop construction of the ADF regression."""
    rows, resp = [], []
    for t in range(lags + 1, len(y)):
        row = [1.0]
        if trend:
            row.append(float(t))
        row.append(y[t - 1])
        row += [y[t - i] - y[t - i - 1] for i in range(1, lags + 1)]
        rows.append(row)
        resp.append(y[t] - y[t - 1])
    X, d = np.array(rows), np.array(resp)
    beta = np.linalg.solve(X.T @ X, X.T @ d)
    e = d - X @ beta
    s2 = e @ e / (len(d) - X.shape[1])
    cov = s2 * np.linalg.inv(X.T @ X)
    j = 2 if trend else 1
    return beta[j] / np.sqrt(cov[j, j])


@pytest.mark.parametrize("spec", list(Deterministic))
@pytest.mark.parametrize("lags", [0, 1, 3])
def test_tau_matches_hand_regression(spec, lags):
    y = np.cumsum(np.random.default_rng(lags).normal(size=120)) * 0.3
    res = adf_test(y, spec, max_lags=lags)
    # force the lag to compare: with max_lags = lags the chosen lag may be lower
    tau = _manual_tau(y, res.lags_used, spec is Deterministic.CONSTANT_TREND)
    assert res.tau_statistic == pytest.approx(tau, rel=1e-9, abs=1e-9)


def test_critical_values_table():
    assert ADF_CRITICAL_VALUES["constant"]["5%"] == -2.86154
    assert ADF_CRITICAL_VALUES["constant_trend"]["1%"] == -3.95877


def test_schwert():
    assert schwert_max_lags(100) == 12
    assert schwert_max_lags(200) == 14


def test_constant_series_degenerate():
    with pytest.raises(DegenerateError):
        adf_test(np.full(100, 2.0))


def test_short_series():
    with pytest.raises(InsufficientDataError):
        adf_test(np.arange(10.0), max_lags=2)


def test_ar1_rejects_walk_does_not():
    rng = np.random.default_rng(3)
    e = rng.normal(size=400)
    assert adf_test(e).stationary_at_5pct
    assert not adf_test(np.cumsum(e)).stationary_at_5pct


def test_result_dict_fields():
    d = adf_test(np.random.default_rng(0).normal(size=80), "constant_trend").to_dict()
    assert set(d) == {"tau_statistic", "lags_used", "deterministic_spec", "rejected_at",
                      "critical_values", "nobs", "max_lags"}
    assert d["deterministic_spec"] == "constant_trend"


@pytest.mark.slow
def test_small_monte_carlo():
    rng = np.random.default_rng(11)
    wn = sum(adf_test(rng.normal(size=200)).stationary_at_5pct for _ in range(100))
    rw = sum(adf_test(np.cumsum(rng.normal(size=200))).stationary_at_5pct for _ in range(100))
    assert wn >= 85 and rw <= 15
