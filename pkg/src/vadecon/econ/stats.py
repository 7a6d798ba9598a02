"""Correlation and two-sample rank tests."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from functools import lru_cache

import numpy as np
from numpy.typing import ArrayLike
from scipy import stats as sps

from ..errors import DegenerateError, InsufficientDataError

# exact Mann-Whitney distribution is used up to this sample size (tie-free)
EXACT_MAX_N = 8


@dataclass(frozen=True)
class TestResult:
    statistic: float
    p_value: float
    method: str
    n1: int
    n2: int
    exact: bool

    __test__ = False  # not a pytest class

    def to_dict(self) -> dict:
        return asdict(self)


def _as_float(x: ArrayLike) -> np.ndarray:
    # None marks a missing slot
    return np.array([np.nan if v is None else v for v in np.asarray(x, dtype=object).ravel()], dtype=float)


def pearson(x: ArrayLike, y: ArrayLike) -> float:
    """Sample Pearson correlation over pairwise-complete observations.

    Slots where either side is NaN or ``None`` are dropped.

    Raises
    ------
    InsufficientDataError
        Fewer than 3 complete pairs.
    DegenerateError
        One side is constant over the complete pairs.
    """
    x = _as_float(x)
    y = _as_float(y)
    if x.shape != y.shape:
        raise ValueError(f"length mismatch: {x.size} vs {y.size}")
    ok = np.isfinite(x) & np.isfinite(y)
    if ok.sum() < 3:
        raise InsufficientDataError(f"pearson needs >= 3 complete pairs, got {int(ok.sum())}")
    xc = x[ok] - x[ok].mean()
    yc = y[ok] - y[ok].mean()
    sxx = float(xc @ xc)
    syy = float(yc @ yc)
    if sxx == 0 or syy == 0:
        raise DegenerateError("pearson correlation undefined for constant input")
    r = float(xc @ yc) / math.sqrt(sxx * syy)
    return min(1.0, max(-1.0, r))


@lru_cache(maxsize=None)
def _u_counts(n1: int, n2: int) -> tuple[int, ...]:
    """Number of rank arrangements giving each U in 0..n1*n2 (no ties)."""
    if n1 == 0 or n2 == 0:
        return (1,)
    # last (largest) observation belongs to sample a -> contributes n2 to U
    with_a = _u_counts(n1 - 1, n2)
    with_b = _u_counts(n1, n2 - 1)
    out = [0] * (n1 * n2 + 1)
    for u, c in enumerate(with_a):
        out[u + n2] += c
    for u, c in enumerate(with_b):
        out[u] += c
    return tuple(out)


def _exact_p(u: float, n1: int, n2: int) -> float:
    counts = _u_counts(n1, n2)
    total = sum(counts)
    k = int(round(u))
    lower = sum(counts[: k + 1])
    upper = sum(counts[k:])
    return min(1.0, 2 * min(lower, upper) / total)


def mann_whitney_u(a: ArrayLike, b: ArrayLike, method: str = "auto") -> TestResult:
    """Two-sided Mann-Whitney U test; the statistic is U for sample ``a``.

    ``U_a`` counts pairs with ``a_i > b_j`` (ties count one half), so
    ``U_a + U_b = n1 * n2``.  With ``method="auto"`` the exact null
    distribution is used when ``max(n1, n2) <= 8`` and there are no ties;
    otherwise the normal approximation with tie and continuity corrections.
    """
    a = np.asarray(a, dtype=float).ravel()
    b = np.asarray(b, dtype=float).ravel()
    n1, n2 = a.size, b.size
    if n1 == 0 or n2 == 0:
        raise InsufficientDataError("Mann-Whitney U needs two non-empty samples")
    if not (np.isfinite(a).all() and np.isfinite(b).all()):
        raise ValueError("samples must be finite")

    ranks = sps.rankdata(np.concatenate([a, b]))
    u_a = float(ranks[:n1].sum() - n1 * (n1 + 1) / 2)
    _, tie_counts = np.unique(ranks, return_counts=True)
    has_ties = bool((tie_counts > 1).any())

    if method == "auto":
        method = "exact" if max(n1, n2) <= EXACT_MAX_N and not has_ties else "asymptotic"
    if method == "exact":
        if has_ties:
            raise ValueError("exact Mann-Whitney distribution requires tie-free samples")
        p = _exact_p(u_a, n1, n2)
        return TestResult(u_a, p, "mann-whitney-exact", n1, n2, True)
    if method != "asymptotic":
        raise ValueError(f"unknown method {method!r}")

    n = n1 + n2
    tie_term = float((tie_counts**3 - tie_counts).sum()) / (n * (n - 1)) if n > 1 else 0.0
    var = n1 * n2 / 12.0 * ((n + 1) - tie_term)
    mu = n1 * n2 / 2.0
    if var <= 0:
        p = 1.0
    else:
        z = max(abs(u_a - mu) - 0.5, 0.0) / math.sqrt(var)
        p = min(1.0, 2 * float(sps.norm.sf(z)))
    return TestResult(u_a, p, "mann-whitney-normal", n1, n2, False)
