"""Monthly emotion series with per-slot provenance.

A :class:`MonthlySeries` has one slot per consecutive calendar month.  Each
slot records where its value came from, so filled-in values can always be
told apart from observations.
"""

from __future__ import annotations

import csv
import enum
import math
from collections import defaultdict
from dataclasses import dataclass, field
from os import PathLike
from typing import Iterable, Mapping, Sequence

import numpy as np
from numpy.typing import ArrayLike

from .econ.ols import ols
from .errors import (
    DegenerateError,
    EmptyInputError,
    FormatError,
    InsufficientDataError,
    NumericalError,
    SingularDesignError,
    ValidationError,
)
from .scorer import ScoredCorpus

DIMENSIONS = {"V": "valence", "A": "arousal", "D": "dominance"}


class Provenance(str, enum.Enum):
    OBSERVED = "OBSERVED"
    LINEAR_INTERP = "LINEAR_INTERP"
    REGRESSION_IMPUTED = "REGRESSION_IMPUTED"
    MISSING = "MISSING"


def month_index(ym: tuple[int, int]) -> int:
    return ym[0] * 12 + ym[1] - 1


def index_month(i: int) -> tuple[int, int]:
    return (i // 12, i % 12 + 1)


def parse_month(text: str) -> tuple[int, int]:
    try:
        y, m = text.strip().split("-")
        ym = (int(y), int(m))
    except ValueError:
        raise ValidationError(f"bad month {text!r} (expected YYYY-MM)") from None
    if not 1 <= ym[1] <= 12:
        raise ValidationError(f"bad month {text!r}")
    return ym


def format_month(ym: tuple[int, int]) -> str:
    return f"{ym[0]:04d}-{ym[1]:02d}"


@dataclass(frozen=True)
class MonthlySeries:
    """Missing-aware monthly series.

    ``values`` holds NaN exactly where ``provenance`` is ``MISSING``.
    """

    start: tuple[int, int]
    values: np.ndarray
    provenance: tuple[Provenance, ...]
    label: str = ""

    def __post_init__(self):
        vals = np.array(self.values, dtype=float)
        vals.setflags(write=False)
        prov = tuple(Provenance(p) for p in self.provenance)
        if vals.ndim != 1 or vals.size < 1 or vals.size != len(prov):
            raise ValidationError("values and provenance must have equal length >= 1")
        missing = np.array([p is Provenance.MISSING for p in prov])
        if (np.isnan(vals) != missing).any():
            raise ValidationError("a slot must be NaN if and only if its provenance is MISSING")
        if np.isinf(vals).any():
            raise ValidationError("series values must be finite")
        if not 1 <= self.start[1] <= 12:
            raise ValidationError(f"bad start month {self.start}")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "provenance", prov)
        object.__setattr__(self, "start", (int(self.start[0]), int(self.start[1])))

    @classmethod
    def from_values(
        cls, start: tuple[int, int], values: Sequence[float | None], label: str = ""
    ) -> "MonthlySeries":
        """Build from raw values; ``None``/NaN slots are MISSING, others OBSERVED."""
        vals = np.array([np.nan if v is None else v for v in values], dtype=float)
        prov = [Provenance.MISSING if math.isnan(v) else Provenance.OBSERVED for v in vals]
        return cls(start, vals, tuple(prov), label)

    def __len__(self) -> int:
        return self.values.size

    @property
    def months(self) -> list[tuple[int, int]]:
        s = month_index(self.start)
        return [index_month(s + i) for i in range(len(self))]

    @property
    def end(self) -> tuple[int, int]:
        return index_month(month_index(self.start) + len(self) - 1)

    @property
    def observed_mask(self) -> np.ndarray:
        return np.array([p is Provenance.OBSERVED for p in self.provenance])

    @property
    def missing_mask(self) -> np.ndarray:
        return np.isnan(self.values)

    @property
    def missing_fraction(self) -> float:
        return float(self.missing_mask.mean())

    @property
    def n_observed(self) -> int:
        return int(self.observed_mask.sum())

    def replace(self, values=None, provenance=None, label=None) -> "MonthlySeries":
        return MonthlySeries(
            self.start,
            self.values if values is None else values,
            self.provenance if provenance is None else provenance,
            self.label if label is None else label,
        )

    def window(self, start: tuple[int, int], end: tuple[int, int]) -> "MonthlySeries":
        """Slice to the inclusive month range ``[start, end]``."""
        a = month_index(start) - month_index(self.start)
        b = month_index(end) - month_index(self.start) + 1
        if a < 0 or b > len(self) or a >= b:
            raise ValidationError(
                f"{self.label or 'series'} does not cover {format_month(start)}..{format_month(end)}"
            )
        return MonthlySeries(index_month(month_index(self.start) + a), self.values[a:b], self.provenance[a:b], self.label)

    def trimmed(self) -> "MonthlySeries":
        """Drop leading and trailing MISSING slots."""
        ok = np.flatnonzero(~self.missing_mask)
        if ok.size == 0:
            raise EmptyInputError(f"{self.label or 'series'} has no values")
        s = month_index(self.start)
        return self.window(index_month(s + ok[0]), index_month(s + ok[-1]))

    def to_csv(self, path: str | PathLike) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["month", "value", "provenance"])
            for ym, v, p in zip(self.months, self.values, self.provenance):
                w.writerow([format_month(ym), "" if math.isnan(v) else repr(float(v)), p.value])

    @classmethod
    def from_csv(cls, path: str | PathLike, label: str = "") -> "MonthlySeries":
        """Read a ``month,value,provenance`` or ``month,value`` CSV.

        Months must be consecutive.  Without a provenance column, empty
        values are MISSING and the rest OBSERVED.
        """
        with open(path, encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            header = [h.strip().lstrip("﻿").lower() for h in next(reader, [])]
            if header not in (["month", "value", "provenance"], ["month", "value"]):
                raise FormatError(f"{path}: expected header 'month,value[,provenance]', got {header}")
            months, vals, prov = [], [], []
            for lineno, row in enumerate(reader, start=2):
                if not row or all(not c.strip() for c in row):
                    continue
                if len(row) != len(header):
                    raise FormatError(f"{path}:{lineno}: expected {len(header)} fields")
                try:
                    months.append(parse_month(row[0]))
                    v = float(row[1]) if row[1].strip() else math.nan
                except ValueError:
                    raise FormatError(f"{path}:{lineno}: non-numeric value {row[1]!r}") from None
                vals.append(v)
                if len(header) == 3:
                    try:
                        prov.append(Provenance(row[2].strip()))
                    except ValueError:
                        raise FormatError(f"{path}:{lineno}: bad provenance {row[2]!r}") from None
                else:
                    prov.append(Provenance.MISSING if math.isnan(v) else Provenance.OBSERVED)
        if not months:
            raise EmptyInputError(f"{path}: no rows")
        idx = [month_index(m) for m in months]
        if idx != list(range(idx[0], idx[0] + len(idx))):
            raise ValidationError(f"{path}: months are not consecutive")
        try:
            return cls(months[0], np.array(vals), tuple(prov), label)
        except ValidationError as exc:
            raise ValidationError(f"{path}: {exc}") from None


IndicatorSet = Mapping[str, MonthlySeries]


def load_indicators(paths: Mapping[str, str | PathLike]) -> dict[str, MonthlySeries]:
    """Read ``month,value`` indicator CSVs keyed by indicator name."""
    return {name: MonthlySeries.from_csv(p, label=name) for name, p in paths.items()}


def build_monthly(
    scored: ScoredCorpus, source: str | None, dimension: str
) -> MonthlySeries:
    """Monthly mean of one VAD dimension for one source.

    Covers every month from the first to the last document month; months
    without a document are MISSING.
    """
    dim = DIMENSIONS.get(dimension.upper(), dimension.lower())
    if dim not in DIMENSIONS.values():
        raise ValidationError(f"unknown dimension {dimension!r}")
    rows = scored.select(source)
    if not rows:
        raise EmptyInputError(f"no scored documents for source {source!r}")

    by_month: dict[int, list[float]] = defaultdict(list)
    for r in sorted(rows, key=lambda r: (r.date, r.id)):
        by_month[month_index((r.date.year, r.date.month))].append(getattr(r, dim))
    first, last = min(by_month), max(by_month)
    values, prov = [], []
    for i in range(first, last + 1):
        xs = by_month.get(i)
        if xs:
            values.append(math.fsum(xs) / len(xs))
            prov.append(Provenance.OBSERVED)
        else:
            values.append(math.nan)
            prov.append(Provenance.MISSING)
    label = f"{source or 'ALL'}:{dim}"
    return MonthlySeries(index_month(first), np.array(values), tuple(prov), label)


def interpolate_linear(s: MonthlySeries) -> MonthlySeries:
    """Fill interior gaps on the straight line between the nearest values.

    Leading and trailing gaps stay MISSING.  Existing values are untouched.
    """
    known = np.flatnonzero(~s.missing_mask)
    if s.n_observed < 2:
        raise InsufficientDataError(f"{s.label or 'series'}: linear interpolation needs >= 2 observed slots")
    values = s.values.copy()
    prov = list(s.provenance)
    for a, b in zip(known[:-1], known[1:]):
        if b - a < 2:
            continue
        va, vb = values[a], values[b]
        for t in range(a + 1, b):
            w = (t - a) / (b - a)
            values[t] = va + w * (vb - va)
            prov[t] = Provenance.LINEAR_INTERP
    return s.replace(values, tuple(prov))


@dataclass(frozen=True)
class ImputationDiagnostics:
    coefficients: dict[str, float]
    r_squared: float
    n_observed: int
    n_imputed: int

    def to_dict(self) -> dict:
        return {
            "coefficients": dict(self.coefficients),
            "r_squared": self.r_squared,
            "n_observed": self.n_observed,
            "n_imputed": self.n_imputed,
        }


def impute_by_regression(
    s: MonthlySeries, refs: IndicatorSet, selected: Sequence[str]
) -> tuple[MonthlySeries, ImputationDiagnostics]:
    """Fill gaps with fitted values from an OLS regression on complete
    reference series.

    The observed slots of ``s`` are regressed on an intercept and the
    ``selected`` references over the same months.  Every MISSING slot,
    including leading and trailing ones, receives its fitted value.
    """
    selected = list(selected)
    if not selected:
        raise ValidationError("select at least one reference series")
    cols = []
    for name in selected:
        if name not in refs:
            raise ValidationError(f"unknown reference series {name!r}")
        ref = refs[name].window(s.start, s.end)
        if ref.missing_mask.any():
            raise ValidationError(f"reference {name!r} has missing values over {format_month(s.start)}..{format_month(s.end)}")
        cols.append(ref.values)
    X = np.column_stack([np.ones(len(s)), *cols])

    obs = s.observed_mask
    n_obs = int(obs.sum())
    if n_obs < len(selected) + 2:
        raise InsufficientDataError(
            f"{s.label or 'series'}: {n_obs} observed slots, need >= {len(selected) + 2}"
        )
    try:
        fit = ols(X[obs], s.values[obs])
    except SingularDesignError as exc:
        raise SingularDesignError(f"imputation design for {s.label or 'series'}: {exc}") from None

    values = s.values.copy()
    prov = list(s.provenance)
    gaps = np.flatnonzero(s.missing_mask)
    values[gaps] = X[gaps] @ fit.coefficients
    for t in gaps:
        prov[t] = Provenance.REGRESSION_IMPUTED
    coefs = dict(zip(["intercept", *selected], (float(c) for c in fit.coefficients)))
    diag = ImputationDiagnostics(coefs, fit.r_squared, n_obs, int(gaps.size))
    return s.replace(values, tuple(prov)), diag


@dataclass(frozen=True)
class QuarterlySeries:
    """Quarterly series; ``start`` is ``(year, quarter)``."""

    start: tuple[int, int]
    values: np.ndarray
    provenance: tuple[Provenance, ...]
    label: str = ""

    def __len__(self) -> int:
        return len(self.values)

    @property
    def quarters(self) -> list[tuple[int, int]]:
        base = self.start[0] * 4 + self.start[1] - 1
        return [((base + i) // 4, (base + i) % 4 + 1) for i in range(len(self))]

    @property
    def missing_mask(self) -> np.ndarray:
        return np.isnan(self.values)

    def to_csv(self, path: str | PathLike) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["quarter", "value", "provenance"])
            for (y, q), v, p in zip(self.quarters, self.values, self.provenance):
                w.writerow([f"{y:04d}-Q{q}", "" if math.isnan(v) else repr(float(v)), p.value])


def aggregate_quarterly(s: MonthlySeries) -> QuarterlySeries:
    """Mean of the OBSERVED months in each calendar quarter.

    Interpolated or imputed months are ignored; a quarter without observed
    months is MISSING.
    """
    buckets: dict[int, list[float]] = defaultdict(list)
    s0 = month_index(s.start)
    q_first = s0 // 3
    q_last = (s0 + len(s) - 1) // 3
    for i, (v, p) in enumerate(zip(s.values, s.provenance)):
        if p is Provenance.OBSERVED:
            buckets[(s0 + i) // 3].append(float(v))
    values, prov = [], []
    for q in range(q_first, q_last + 1):
        xs = buckets.get(q)
        if xs:
            values.append(math.fsum(xs) / len(xs))
            prov.append(Provenance.OBSERVED)
        else:
            values.append(math.nan)
            prov.append(Provenance.MISSING)
    arr = np.array(values)
    arr.setflags(write=False)
    return QuarterlySeries((q_first // 4, q_first % 4 + 1), arr, tuple(prov), s.label)


def zscore(xs: ArrayLike) -> np.ndarray:
    """Center to mean 0 and scale to unit sample (n-1) standard deviation."""
    x = np.asarray(xs, dtype=float).ravel()
    if x.size < 2:
        raise InsufficientDataError("zscore needs at least 2 values")
    if not np.isfinite(x).all():
        raise ValueError("zscore input must be finite")
    mu = math.fsum(x) / x.size
    xc = x - mu
    sd = math.sqrt(math.fsum(xc * xc) / (x.size - 1))
    if sd == 0 or not math.isfinite(sd):
        raise DegenerateError("zscore undefined for constant input")
    z = xc / sd
    # second pass removes the rounding residue of the first
    z -= math.fsum(z) / z.size
    z /= math.sqrt(math.fsum(z * z) / (z.size - 1))
    return z


def detrend(xs: ArrayLike) -> np.ndarray:
    """Residuals of an OLS fit on intercept and linear time index."""
    x = np.asarray(xs, dtype=float).ravel()
    if x.size < 3:
        raise InsufficientDataError("detrend needs at least 3 values")
    if not np.isfinite(x).all():
        raise ValueError("detrend input must be finite")
    t = np.arange(x.size, dtype=float)
    t -= t.mean()
    try:
        fit = ols(np.column_stack([np.ones(x.size), t]), x)
    except NumericalError as exc:  # pragma: no cover - design is always full rank
        raise DegenerateError(str(exc)) from None
    e = fit.residuals.copy()
    # columns are orthogonal, so re-projecting the rounding residue is exact enough
    tt = math.fsum(t * t)
    for _ in range(2):
        e -= math.fsum(e) / e.size
        e -= t * (math.fsum(e * t) / tt)
    return e


def difference(xs: Iterable[float | None]) -> list[float | None]:
    """First differences; a difference touching a missing slot is missing."""
    x = [None if v is None or (isinstance(v, float) and math.isnan(v)) else float(v) for v in xs]
    if len(x) < 2:
        raise InsufficientDataError("difference needs at least 2 values")
    return [None if a is None or b is None else b - a for a, b in zip(x[:-1], x[1:])]
