import numpy as np
import pytest

from oracles import exhaustive_breaks, segment_ssr_direct
from vadecon.econ.breaks import BreakModelConfig, detect_breaks, segment_ssr_matrix
from vadecon.errors import InsufficientDataError, ValidationError


@pytest.mark.parametrize("p", [0, 1])
def test_segment_ssr_matches_lstsq(p):
    y = np.random.default_rng(p).normal(size=30)
    cost = segment_ssr_matrix(y, p, 5)
    for i in range(0, 26):
        for j in range(i + 5, 31):
            assert cost[i, j] == pytest.approx(segment_ssr_direct(y, i, j, p), abs=1e-9)
    assert np.isinf(cost[0, 4])


@pytest.mark.parametrize("p", [0, 1])
@pytest.mark.parametrize("seed", range(4))
def test_dp_matches_exhaustive(p, seed):
    rng = np.random.default_rng(seed)
    T = int(rng.integers(24, 41))
    y = rng.normal(size=T) + np.where(np.arange(T) > T // 2, 1.0, 0.0)
    cfg = BreakModelConfig(max_breaks=2, trim_fraction=0.15, ar_order=p)
    res = detect_breaks(y, cfg)
    h = res.min_segment
    for m in (0, 1, 2):
        ssr, bks = exhaustive_breaks(y, m, h, p)
        assert res.ssr_by_m[m] == pytest.approx(ssr, abs=1e-9)
        assert res.breaks_by_m[m] == bks


def test_noiseless_step():
    y = np.r_[np.zeros(60), np.ones(60)]
    res = detect_breaks(y, BreakModelConfig(max_breaks=3, ar_order=0))
    assert res.break_indices == [60]
    assert res.n_breaks == 1


def test_constant_series_no_breaks():
    res = detect_breaks(np.full(60, 4.2))
    assert res.n_breaks == 0 and res.break_indices == []


def test_scale_invariance_and_dates():
    rng = np.random.default_rng(9)
    y = rng.normal(size=120) + np.where(np.arange(120) >= 70, 2.0, 0.0)
    a = detect_breaks(y, start_month=(2000, 1))
    b = detect_breaks(1000 * y - 7, start_month=(2000, 1))
    assert a.break_indices == b.break_indices
    assert a.break_dates == [(2000 + i // 12, i % 12 + 1) for i in a.break_indices]


def test_invariants():
    rng = np.random.default_rng(2)
    y = np.cumsum(rng.normal(size=150)) * 0.1 + rng.normal(size=150)
    res = detect_breaks(y)
    h = res.min_segment
    bounds = [0, *res.break_indices, len(y)]
    assert all(b - a >= h for a, b in zip(bounds[:-1], bounds[1:]))
    # near the trimming limit an optimal partition may not be refinable
    ssrs = [res.ssr_by_m[m] for m in range(4)]
    assert all(x >= y_ - 1e-9 for x, y_ in zip(ssrs[:-1], ssrs[1:]))
    assert len(res.segment_fits) == res.n_breaks + 1
    assert res.to_dict()["n_breaks"] == res.n_breaks
    assert res.table_csv().startswith("m,bic,ssr\n")


def test_config_validation():
    with pytest.raises(ValidationError):
        BreakModelConfig(trim_fraction=0.6)
    with pytest.raises(InsufficientDataError):
        detect_breaks(np.arange(10.0))
