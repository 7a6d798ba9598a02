"""Endogenous multiple structural-break detection.

Global minimisation of the total sum of squared residuals over all
partitions into ``m + 1`` contiguous regimes (Bai & Perron 2003), computed
by dynamic programming, with the number of breaks chosen by BIC.  Each
regime is an intercept plus AR(p) regression estimated on its own data:
the first ``p`` observations of a regime only serve as lags.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np
from numpy.typing import ArrayLike

from ..errors import InsufficientDataError, ValidationError
from .ols import ols

# sigma^2 floor (standardized units) so exact fits compare through the penalty
_VAR_FLOOR = 1e-12


@dataclass(frozen=True)
class BreakModelConfig:
    max_breaks: int = 5
    trim_fraction: float = 0.15
    ar_order: int = 1

    def __post_init__(self):
        if not 0 < self.trim_fraction < 0.5:
            raise ValidationError(f"trim_fraction must be in (0, 0.5), got {self.trim_fraction}")
        if self.max_breaks < 0:
            raise ValidationError("max_breaks must be >= 0")
        if self.ar_order < 0:
            raise ValidationError("ar_order must be >= 0")

    def min_segment(self, nobs: int) -> int:
        return max(math.ceil(self.trim_fraction * nobs), self.ar_order + 2)

    def n_params(self, m: int) -> int:
        """Regime coefficients plus the ``m`` estimated break dates."""
        return (m + 1) * (self.ar_order + 1) + m


@dataclass
class BreakResult:
    break_indices: list[int]
    break_dates: list[tuple[int, int]] | None
    n_breaks: int
    ssr_by_m: dict[int, float]
    bic_by_m: dict[int, float]
    breaks_by_m: dict[int, list[int]]
    segment_fits: list[dict]
    config_echo: BreakModelConfig
    nobs: int
    min_segment: int = field(default=0)

    def to_dict(self) -> dict:
        return {
            "n_breaks": self.n_breaks,
            "break_indices": list(self.break_indices),
            "break_months": [f"{y:04d}-{m:02d}" for y, m in self.break_dates] if self.break_dates else None,
            "ssr_by_m": {str(k): v for k, v in self.ssr_by_m.items()},
            "bic_by_m": {str(k): v for k, v in self.bic_by_m.items()},
            "breaks_by_m": {str(k): v for k, v in self.breaks_by_m.items()},
            "segment_fits": self.segment_fits,
            "config": asdict(self.config_echo),
            "nobs": self.nobs,
            "min_segment": self.min_segment,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def table_csv(self) -> str:
        lines = ["m,bic,ssr"]
        lines += [f"{m},{self.bic_by_m[m]!r},{self.ssr_by_m[m]!r}" for m in sorted(self.ssr_by_m)]
        lines.append("")
        lines.append("break_index,break_month")
        months = self.break_dates or [None] * len(self.break_indices)
        for idx, ym in zip(self.break_indices, months):
            lines.append(f"{idx},{'' if ym is None else f'{ym[0]:04d}-{ym[1]:02d}'}")
        return "\n".join(lines) + "\n"


def _regressors(y: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Rows ``t = p .. T-1``: response ``y[t]`` and ``[1, y[t-1], .., y[t-p]]``."""
    T = y.size
    t = np.arange(p, T)
    Z = np.column_stack([np.ones(t.size)] + [y[t - i] for i in range(1, p + 1)])
    return Z, y[t]


def segment_ssr_matrix(y: ArrayLike, ar_order: int, min_segment: int) -> np.ndarray:
    """SSR of every admissible regime ``[i, j)``; ``inf`` where inadmissible.

    Entry ``[i, j]`` is the residual sum of squares of an intercept + AR(p)
    regression fit to ``y[i+p : j]`` with lags drawn from inside ``[i, j)``.
    """
    y = np.asarray(y, dtype=float)
    T, p = y.size, ar_order
    Z, r = _regressors(y, p)
    k = Z.shape[1]
    # prefix sums indexed by time: P[t] = sum over rows s < t
    zz = np.zeros((T + 1, k, k))
    zy = np.zeros((T + 1, k))
    yy = np.zeros(T + 1)
    zz[p + 1 :] = np.cumsum(Z[:, :, None] * Z[:, None, :], axis=0)
    zy[p + 1 :] = np.cumsum(Z * r[:, None], axis=0)
    yy[p + 1 :] = np.cumsum(r * r)

    ii, jj = np.nonzero(np.subtract.outer(np.arange(T + 1), np.arange(T + 1)).T >= min_segment)
    # pairs (i, j) with j - i >= min_segment, i < T
    A = zz[jj] - zz[ii + p]
    b = zy[jj] - zy[ii + p]
    c = yy[jj] - yy[ii + p]
    coef = np.einsum("nij,nj->ni", np.linalg.pinv(A, hermitian=True), b)
    ssr = np.maximum(c - np.einsum("ni,ni->n", coef, b), 0.0)

    out = np.full((T + 1, T + 1), np.inf)
    out[ii, jj] = ssr
    return out


def _partition_dp(cost: np.ndarray, T: int, max_breaks: int, h: int):
    """Optimal partitions for every break count 0..max_breaks.

    Backward recursion ``tail[s][i]`` = minimal SSR of ``y[i:]`` split into
    ``s`` regimes, so the forward reconstruction can take the earliest
    minimising break at each step (lexicographically earliest partition).
    """
    inf = np.inf
    tail = [None] * (max_breaks + 2)
    tail[1] = cost[:, T].copy()
    for s in range(2, max_breaks + 2):
        cur = np.full(T + 1, inf)
        for i in range(0, T - s * h + 1):
            js = np.arange(i + h, T - (s - 1) * h + 1)
            cur[i] = np.min(cost[i, js] + tail[s - 1][js])
        tail[s] = cur

    ssr_by_m, breaks_by_m = {}, {}
    for m in range(max_breaks + 1):
        segs = m + 1
        total = tail[segs][0]
        breaks = []
        i = 0
        for s in range(segs, 1, -1):
            js = np.arange(i + h, T - (s - 1) * h + 1)
            vals = cost[i, js] + tail[s - 1][js]
            j = int(js[np.flatnonzero(vals == vals.min())[0]])
            breaks.append(j)
            i = j
        ssr_by_m[m] = float(total)
        breaks_by_m[m] = breaks
    return ssr_by_m, breaks_by_m


def _add_months(start: tuple[int, int], n: int) -> tuple[int, int]:
    idx = start[0] * 12 + (start[1] - 1) + n
    return (idx // 12, idx % 12 + 1)


def detect_breaks(
    xs: ArrayLike,
    config: BreakModelConfig | None = None,
    start_month: tuple[int, int] | None = None,
) -> BreakResult:
    """Estimate structural breaks in ``xs``.

    For every ``m`` in ``0..max_breaks`` the SSR-minimising partition into
    ``m + 1`` regimes of at least ``min_segment`` observations is found by
    dynamic programming.  The number of breaks minimises::

        BIC(m) = T_eff * ln(SSR_m / T_eff) + q_m * ln(T_eff)

    with ``T_eff = T - (m + 1) * p`` residual observations and
    ``q_m = (m + 1) * (p + 1) + m`` parameters (regime coefficients and break
    dates).  BIC is evaluated on the series standardized to unit sample
    variance, which makes the choice invariant to rescaling the input.
    Ties go to fewer breaks.

    ``break_indices`` are the first observation of each new regime.  When
    ``start_month`` is given, ``break_dates`` holds the matching
    ``(year, month)``.
    """
    config = config or BreakModelConfig()
    y = np.asarray(xs, dtype=float).ravel()
    if not np.isfinite(y).all():
        raise ValueError("break detection input must not contain missing values")
    T, p, M = y.size, config.ar_order, config.max_breaks
    h = config.min_segment(T)
    if T < (M + 1) * h:
        raise InsufficientDataError(
            f"series of length {T} too short for {M} breaks with minimum segment {h}"
        )

    scale = float(np.std(y, ddof=1)) if T > 1 else 0.0
    z = (y - y.mean()) / scale if scale > 0 else y - y.mean()
    cost = segment_ssr_matrix(z, p, h)
    ssr_std, breaks_by_m = _partition_dp(cost, T, M, h)

    bic_by_m, ssr_by_m = {}, {}
    for m in range(M + 1):
        t_eff = T - (m + 1) * p
        sigma2 = max(ssr_std[m] / t_eff, _VAR_FLOOR)
        bic_by_m[m] = t_eff * math.log(sigma2) + config.n_params(m) * math.log(t_eff)
        ssr_by_m[m] = ssr_std[m] * scale**2 if scale > 0 else ssr_std[m]
    n_breaks = min(bic_by_m, key=lambda m: (bic_by_m[m], m))
    chosen = breaks_by_m[n_breaks]

    bounds = [0, *chosen, T]
    segment_fits = []
    for a, b in zip(bounds[:-1], bounds[1:]):
        Z, r = _regressors(y[a:b], p)
        fit = ols(Z, r, check_rank=False)
        info = fit.summary()
        info.update(start=a, stop=b)
        segment_fits.append(info)

    dates = [_add_months(start_month, i) for i in chosen] if start_month else None
    return BreakResult(
        break_indices=list(chosen),
        break_dates=dates,
        n_breaks=n_breaks,
        ssr_by_m=ssr_by_m,
        bic_by_m=bic_by_m,
        breaks_by_m=breaks_by_m,
        segment_fits=segment_fits,
        config_echo=config,
        nobs=T,
        min_segment=h,
    )
