import datetime as dt
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vadecon.errors import DegenerateError, EmptyInputError, InsufficientDataError, ValidationError
from vadecon.lexicon import VadVector
from vadecon.scorer import ScoredCorpus, ScoredRow
from vadecon.series import (
    MonthlySeries,
    Provenance,
    aggregate_quarterly,
    build_monthly,
    detrend,
    difference,
    impute_by_regression,
    interpolate_linear,
    zscore,
)

P = Provenance


def _scored(items):
    return ScoredCorpus([ScoredRow(f"d{i}", src, dt.date.fromisoformat(d), VadVector(v, 5, 5), 1.0)
                         for i, (src, d, v) in enumerate(items)])


def test_build_monthly_direct_mapping():
    sc = _scored([("ECB", f"2019-{m:02d}-10", float(m)) for m in range(1, 13)])
    s = build_monthly(sc, "ECB", "V")
    assert len(s) == 12 and s.n_observed == 12 and s.missing_fraction == 0
    assert s.start == (2019, 1)


def test_build_monthly_averages_same_month():
    sc = _scored([("ECB", "2019-06-06", 6.0), ("ECB", "2019-06-20", 6.4)])
    s = build_monthly(sc, "ECB", "valence")
    assert s.values[0] == pytest.approx(6.2)


def test_build_monthly_gaps_and_source_filter():
    sc = _scored([("ECB", "2019-01-10", 1.0), ("ECB", "2019-04-10", 4.0), ("FED", "2019-02-10", 9.0)])
    s = build_monthly(sc, "ECB", "V")
    assert s.provenance == (P.OBSERVED, P.MISSING, P.MISSING, P.OBSERVED)
    assert s.missing_fraction == 0.5
    with pytest.raises(EmptyInputError):
        build_monthly(sc, "BoE", "V")


def test_series_invariants():
    with pytest.raises(ValidationError):
        MonthlySeries((2019, 1), np.array([1.0, np.nan]), (P.OBSERVED, P.OBSERVED))
    with pytest.raises(ValidationError):
        MonthlySeries((2019, 1), np.array([]), ())


def test_interpolate_midpoint():
    s = interpolate_linear(MonthlySeries.from_values((2019, 1), [1, None, 3]))
    assert list(s.values) == [1, 2, 3]
    assert s.provenance[1] is P.LINEAR_INTERP


def test_interpolate_identity_and_no_extrapolation():
    full = MonthlySeries.from_values((2019, 1), [1, 2, 3])
    same = interpolate_linear(full)
    assert np.array_equal(same.values, full.values) and same.provenance == full.provenance
    s = interpolate_linear(MonthlySeries.from_values((2019, 1), [None, 2, 4, None]))
    assert s.provenance == (P.MISSING, P.OBSERVED, P.OBSERVED, P.MISSING)
    with pytest.raises(InsufficientDataError):
        interpolate_linear(MonthlySeries.from_values((2019, 1), [None, 2, None]))


@settings(max_examples=200)
@given(
    a=st.floats(-100, 100), b=st.floats(-10, 10),
    mask=st.lists(st.booleans(), min_size=3, max_size=80),
)
def test_interpolation_recovers_affine(a, b, mask):
    n = len(mask)
    mask[0] = mask[-1] = True
    truth = a + b * np.arange(n)
    s = MonthlySeries.from_values((2000, 1), [v if keep else None for v, keep in zip(truth, mask)])
    out = interpolate_linear(s)
    assert np.allclose(out.values, truth, atol=1e-9, rtol=0)
    obs = s.observed_mask
    assert np.array_equal(out.values[obs], s.values[obs])
    assert out.observed_mask.tolist() == obs.tolist()


def _ref(values, start=(2019, 1), label="x"):
    return MonthlySeries.from_values(start, values, label)


def test_regression_imputation_exact():
    x = _ref([1, 2, 3, 4, 5])
    y = MonthlySeries.from_values((2019, 1), [2, 4, None, 8, 10])
    out, diag = impute_by_regression(y, {"x": x}, ["x"])
    assert out.values[2] == pytest.approx(6.0, abs=1e-12)
    assert out.provenance[2] is P.REGRESSION_IMPUTED
    assert diag.r_squared == pytest.approx(1.0)
    assert diag.n_observed == 4


def test_regression_fills_edges_and_uses_window():
    x = _ref(list(range(10)), start=(2018, 12))
    y = MonthlySeries.from_values((2019, 1), [None, 3, 5, None, 9, None])
    out, _ = impute_by_regression(y, {"x": x}, ["x"])
    assert out.values == pytest.approx([1, 3, 5, 7, 9, 11])
    assert out.provenance[0] is P.REGRESSION_IMPUTED


def test_regression_full_target_unchanged():
    y = MonthlySeries.from_values((2019, 1), [1.0, 3.0, 2.0, 5.0])
    out, diag = impute_by_regression(y, {"x": _ref([1, 2, 3, 4])}, ["x"])
    assert np.array_equal(out.values, y.values)
    assert diag.n_imputed == 0 and 0 <= diag.r_squared <= 1


def test_regression_insufficient():
    y = MonthlySeries.from_values((2019, 1), [1, 2, 3, None, None])
    refs = {"x": _ref([1, 2, 3, 4, 5]), "z": _ref([5, 1, 4, 2, 3])}
    with pytest.raises(InsufficientDataError):
        impute_by_regression(y, refs, ["x", "z"])


def test_regression_reference_must_cover_window():
    y = MonthlySeries.from_values((2019, 1), [1, 2, None, 4])
    with pytest.raises(ValidationError):
        impute_by_regression(y, {"x": _ref([1, 2, 3])}, ["x"])


@settings(max_examples=100)
@given(
    coefs=st.tuples(st.floats(-5, 5), st.floats(-3, 3), st.floats(-3, 3)),
    mask=st.lists(st.booleans(), min_size=12, max_size=40),
    seed=st.integers(0, 10_000),
)
def test_regression_recovers_exact_affine_target(coefs, mask, seed):
    n = len(mask)
    rng = np.random.default_rng(seed)
    x1, x2 = rng.normal(size=n), rng.normal(size=n)
    truth = coefs[0] + coefs[1] * x1 + coefs[2] * x2
    mask[:4] = [True] * 4
    y = MonthlySeries.from_values((2001, 5), [v if k else None for v, k in zip(truth, mask)])
    out, diag = impute_by_regression(y, {"a": _ref(x1, (2001, 5)), "b": _ref(x2, (2001, 5))}, ["a", "b"])
    assert np.allclose(out.values, truth, atol=1e-9, rtol=0)
    assert diag.r_squared == pytest.approx(1.0, abs=1e-9)
    obs = y.observed_mask
    assert np.array_equal(out.values[obs], y.values[obs])


def test_quarterly():
    s = MonthlySeries.from_values((2019, 1), [1, 2, 3, None, None, None, 4, None, None])
    q = aggregate_quarterly(s)
    assert q.start == (2019, 1)
    assert q.values[0] == 2.0
    assert math.isnan(q.values[1])
    assert q.values[2] == 4.0


def test_quarterly_partial_first_quarter():
    q = aggregate_quarterly(MonthlySeries.from_values((2019, 2), [2, 4, 6]))
    assert q.quarters == [(2019, 1), (2019, 2)]
    assert list(q.values) == [3.0, 6.0]


@given(st.lists(st.one_of(st.none(), st.floats(-10, 10)), min_size=2, max_size=40).filter(
    lambda v: sum(x is not None for x in v) >= 2))
def test_quarterly_ignores_interpolation(values):
    s = MonthlySeries.from_values((2010, 2), values)
    a = aggregate_quarterly(s)
    b = aggregate_quarterly(interpolate_linear(s))
    assert np.array_equal(a.values, b.values, equal_nan=True)


def test_zscore_examples():
    assert zscore([1, 2, 3]) == pytest.approx([-1, 0, 1], abs=1e-15)
    with pytest.raises(DegenerateError):
        zscore([5, 5, 5])
    with pytest.raises(InsufficientDataError):
        zscore([1])


@given(st.lists(st.floats(-1e3, 1e3), min_size=2, max_size=200).filter(lambda v: np.ptp(v) > 1e-3))
def test_zscore_moments_and_idempotence(xs):
    z = zscore(xs)
    assert abs(z.mean()) < 1e-12
    assert abs(z.std(ddof=1) - 1) < 1e-12
    assert np.allclose(zscore(z), z, atol=1e-12, rtol=0)


def test_detrend_examples():
    assert detrend([2, 4, 6]) == pytest.approx([0, 0, 0], abs=1e-12)
    assert detrend([1, 2, 4]) == pytest.approx([1 / 6, -1 / 3, 1 / 6], abs=1e-12)
    assert detrend([3, 3, 3, 3]) == pytest.approx([0, 0, 0, 0], abs=1e-12)
    with pytest.raises(InsufficientDataError):
        detrend([1, 2])


@given(st.lists(st.floats(-1e3, 1e3), min_size=3, max_size=300))
def test_detrend_orthogonality(xs):
    r = detrend(xs)
    t = np.arange(len(xs))
    assert abs(r.sum()) < 1e-9
    assert abs(r @ t) < 1e-9 * max(1.0, len(xs))


def test_difference_examples():
    assert difference([1, 2, 4]) == [1, 2]
    assert difference([3, 3, 3]) == [0, 0]
    assert difference([1, None, 4]) == [None, None]
    assert difference([1.0, math.nan, 4.0]) == [None, None]
    with pytest.raises(InsufficientDataError):
        difference([1])


@given(st.floats(-5, 5), st.floats(-5, 5), st.integers(0, 1000))
def test_difference_of_detrended_is_centered(a, b, seed):
    rng = np.random.default_rng(seed)
    x = a + b * np.arange(50) + rng.normal(size=50)
    d = difference(detrend(x))
    # mean of differences telescopes to (r[-1] - r[0]) / (n - 1)
    r = detrend(x)
    assert np.mean(d) == pytest.approx((r[-1] - r[0]) / 49, abs=1e-9)


def test_csv_roundtrip(tmp_path):
    s = interpolate_linear(MonthlySeries.from_values((2019, 11), [None, 1.5, None, 3.5, None], "x"))
    s.to_csv(tmp_path / "s.csv")
    t = MonthlySeries.from_csv(tmp_path / "s.csv", label="x")
    assert t.start == s.start and t.provenance == s.provenance
    assert np.array_equal(t.values, s.values, equal_nan=True)
    lines = (tmp_path / "s.csv").read_text().splitlines()
    assert lines[0] == "month,value,provenance"
    assert lines[1] == "2019-11,,MISSING"
    assert lines[3] == "2020-01,2.5,LINEAR_INTERP"
