"""End-to-end analysis run: corpus -> scores -> monthly series -> tests.

All artifacts are written to a staging directory next to the requested
output directory and moved into place only when every stage succeeded, so
a failed run never leaves a half-written bundle behind.
"""

from __future__ import annotations

import csv
import datetime as dt
import hashlib
import itertools
import json
import logging
import os
import shutil
import tempfile
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Mapping

import numpy as np

from . import __version__
from .corpus import ingest_corpus, read_manifest, summarize
from .econ import BreakModelConfig, Deterministic, adf_test, detect_breaks, mann_whitney_u, pearson
from .errors import DataError, NumericalError, ValidationError, VadEconError
from .lexicon import load_lexicon
from .plot import Annotation, emit_plot
from .scorer import OovMode, ScoredCorpus, score_corpus
from .series import (
    DIMENSIONS,
    MonthlySeries,
    aggregate_quarterly,
    build_monthly,
    detrend,
    difference,
    impute_by_regression,
    interpolate_linear,
    load_indicators,
    index_month,
    month_index,
    zscore,
)

logger = logging.getLogger(__name__)

INTERP_MODES = ("linear", "regression", "none_quarterly")
MANIFEST_NAME = "run_manifest.json"


class StageError(VadEconError):
    """Wraps an error with the pipeline stage it occurred in."""

    def __init__(self, stage: str, cause: VadEconError):
        super().__init__(f"[{stage}] {cause}")
        self.stage = stage
        self.cause = cause
        self.exit_code = cause.exit_code


@dataclass
class RunConfig:
    corpus_root: str
    manifest: str
    lexicon: str
    out: str
    scale_min: float = 1.0
    scale_max: float = 9.0
    sources: list[str] | None = None
    oov: str = "neutral"
    interpolation: dict[str, str] = field(default_factory=dict)
    default_interpolation: str = "linear"
    # {source: {indicator: csv path}}; key "*" applies to every source
    indicators: dict[str, dict[str, str]] = field(default_factory=dict)
    regression_refs: list[str] | None = None
    max_breaks: int = 5
    trim: float = 0.15
    ar_order: int = 1
    break_on_differences: bool = True
    adf_max_lags: int | None = None
    annotations: list[dict] = field(default_factory=list)
    workers: int | None = None

    @classmethod
    def from_file(cls, path: str | os.PathLike, **overrides) -> "RunConfig":
        """Load a JSON config; relative paths resolve against its directory."""
        path = Path(path)
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise ValidationError(f"config file not found: {path}") from None
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: invalid JSON: {exc}") from None
        base = path.parent
        for key in ("corpus_root", "manifest", "lexicon", "out"):
            if key in data and not os.path.isabs(data[key]):
                data[key] = str(base / data[key])
        inds = data.get("indicators") or {}
        data["indicators"] = {
            src: {k: (v if os.path.isabs(v) else str(base / v)) for k, v in m.items()}
            for src, m in _nest_indicators(inds).items()
        }
        data.update({k: v for k, v in overrides.items() if v is not None})
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise ValidationError(f"{path}: unknown config keys {sorted(unknown)}")
        try:
            return cls(**data)
        except TypeError as exc:
            raise ValidationError(f"{path}: {exc}") from None

    def break_config(self) -> BreakModelConfig:
        return BreakModelConfig(self.max_breaks, self.trim, self.ar_order)

    def interp_for(self, source: str) -> str:
        return self.interpolation.get(source, self.default_interpolation)

    def indicators_for(self, source: str) -> dict[str, str]:
        merged = dict(self.indicators.get("*", {}))
        merged.update(self.indicators.get(source, {}))
        return merged

    def validate(self) -> None:
        """Fail fast on anything checkable without doing work."""
        for label, p in (("corpus root", self.corpus_root),):
            if not Path(p).is_dir():
                raise ValidationError(f"{label} is not a directory: {p}")
        for label, p in (("manifest", self.manifest), ("lexicon", self.lexicon)):
            if not Path(p).is_file():
                raise ValidationError(f"{label} not found: {p}")
        for src, m in self.indicators.items():
            for name, p in m.items():
                if not Path(p).is_file():
                    raise ValidationError(f"indicator {src}:{name} not found: {p}")
        if not self.scale_min < self.scale_max:
            raise ValidationError("scale_min must be < scale_max")
        try:
            OovMode(self.oov)
        except ValueError:
            raise ValidationError(f"oov must be one of {[m.value for m in OovMode]}") from None
        for mode in [self.default_interpolation, *self.interpolation.values()]:
            if mode not in INTERP_MODES:
                raise ValidationError(f"interpolation mode {mode!r} not in {INTERP_MODES}")
        self.break_config()
        for a in self.annotations:
            try:
                Annotation.parse(a)
            except (KeyError, ValueError) as exc:
                raise ValidationError(f"bad annotation {a!r}: {exc}") from None
        out = Path(self.out)
        parent = out.parent if out.parent != Path("") else Path(".")
        if not parent.exists() or not os.access(parent, os.W_OK):
            raise ValidationError(f"output location not writable: {parent}")
        if out.exists() and (not out.is_dir() or (any(out.iterdir()) and not (out / MANIFEST_NAME).exists())):
            raise ValidationError(f"output directory {out} exists and is not a previous run bundle")

    def echo(self) -> dict:
        return asdict(self)


def _nest_indicators(inds: Mapping[str, Any]) -> dict[str, dict[str, str]]:
    # flat {name: path} means "all sources"
    if all(isinstance(v, str) for v in inds.values()):
        return {"*": dict(inds)} if inds else {}
    return {src: dict(m) for src, m in inds.items()}


def sha256_file(path: str | os.PathLike) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def _dump_json(obj, path: Path) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True, allow_nan=True) + "\n", encoding="utf-8")


@dataclass
class ReportBundle:
    out: Path
    files: dict[str, str]
    manifest: dict

    def path(self, name: str) -> Path:
        return self.out / name


class _Run:
    def __init__(self, cfg: RunConfig, stage_dir: Path):
        self.cfg = cfg
        self.dir = stage_dir
        self.written: list[str] = []

    def path(self, rel: str) -> Path:
        p = self.dir / rel
        p.parent.mkdir(parents=True, exist_ok=True)
        self.written.append(rel)
        return p


def _stage(name: str):
    def wrap(fn):
        def inner(*args, **kwargs):
            try:
                return fn(*args, **kwargs)
            except StageError:
                raise
            except VadEconError as exc:
                raise StageError(name, exc) from exc

        return inner

    return wrap


@_stage("score")
def _score(run: _Run):
    cfg = run.cfg
    lex = load_lexicon(cfg.lexicon, cfg.scale_min, cfg.scale_max)
    docs = ingest_corpus(cfg.corpus_root, cfg.manifest, workers=cfg.workers)
    if cfg.sources:
        docs = [d for d in docs if d.source in cfg.sources]
        if not docs:
            raise DataError(f"no documents for sources {cfg.sources}")
    scored = score_corpus(docs, lex, oov=OovMode(cfg.oov), workers=cfg.workers)
    scored.to_csv(run.path("scored.csv"))
    with open(run.path("exclusions.csv"), "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["id", "source", "date", "reason"])
        w.writerows([e.id, e.source, e.date.isoformat(), e.reason] for e in scored.exclusions)
    summary = summarize(docs)
    return lex, docs, scored, {
        "documents": summary.n_documents,
        "mean_tokens": summary.mean_tokens,
        "lexicon_size": lex.size,
        "lexicon_duplicates": lex.n_duplicates,
        "excluded": len(scored.exclusions),
    }


def _analysis_values(s: MonthlySeries) -> tuple[np.ndarray, tuple[int, int]]:
    """Longest leading/trailing-trimmed stretch without gaps."""
    t = s.trimmed()
    if t.missing_mask.any():
        raise DataError(f"{s.label}: interior gaps remain after interpolation")
    return t.values, t.start


@_stage("series")
def _series(run: _Run, scored: ScoredCorpus, indicators: dict[str, dict[str, MonthlySeries]]):
    cfg = run.cfg
    out: dict[tuple[str, str], dict] = {}
    diagnostics = {}
    for src in scored.sources():
        mode = cfg.interp_for(src)
        for dim in DIMENSIONS.values():
            raw = build_monthly(scored, src, dim)
            raw.to_csv(run.path(f"series/{src}_{dim}_observed.csv"))
            entry = {"observed": raw, "mode": mode, "missing_fraction": raw.missing_fraction}
            if mode == "linear":
                filled = interpolate_linear(raw)
                filled.to_csv(run.path(f"series/{src}_{dim}.csv"))
                vals, start = _analysis_values(filled)
                entry.update(series=filled, values=vals, start=start, freq="M")
            elif mode == "regression":
                refs = indicators.get(src, {})
                names = cfg.regression_refs or sorted(refs)
                if not names:
                    raise ValidationError(f"regression imputation for {src} needs indicator series")
                filled, diag = impute_by_regression(raw, refs, names)
                filled.to_csv(run.path(f"series/{src}_{dim}.csv"))
                diagnostics[f"{src}_{dim}"] = diag.to_dict()
                entry.update(series=filled, values=filled.values, start=filled.start, freq="M")
            else:
                q = aggregate_quarterly(raw)
                q.to_csv(run.path(f"series/{src}_{dim}_quarterly.csv"))
                ok = np.flatnonzero(~q.missing_mask)
                first, last = int(ok[0]), int(ok[-1])
                # interior empty quarters stay NaN; tests on such series are skipped
                vals = q.values[first : last + 1]
                qy, qq = q.quarters[first]
                entry.update(series=raw, values=vals, start=(qy, 3 * qq - 2), freq="Q", quarterly=q)
            out[(src, dim)] = entry
    summary = {
        f"{src}_{dim}": {"interpolation": e["mode"], "missing_fraction": e["missing_fraction"], "months": len(e["observed"])}
        for (src, dim), e in out.items()
    }
    _dump_json({"series": summary, "imputation": diagnostics}, run.path("series/summary.json"))
    return out


@_stage("correlate")
def _correlate(run: _Run, series: dict, indicators: dict[str, dict[str, MonthlySeries]]):
    lines = ["source,dimension,indicator,r,n"]
    table = {}
    for (src, dim), e in series.items():
        if e["freq"] != "M":
            continue
        s: MonthlySeries = e["series"]
        for name, ind in sorted(indicators.get(src, {}).items()):
            lo = max(month_index(s.start), month_index(ind.start))
            hi = min(month_index(s.end), month_index(ind.end))
            if hi - lo + 1 < 3:
                lines.append(f"{src},{dim},{name},,0")
                continue
            a = s.window(index_month(lo), index_month(hi)).values
            b = ind.window(index_month(lo), index_month(hi)).values
            n = int((np.isfinite(a) & np.isfinite(b)).sum())
            try:
                r = pearson(a, b)
            except (DataError, NumericalError) as exc:
                logger.warning("correlation %s/%s vs %s skipped: %s", src, dim, name, exc)
                lines.append(f"{src},{dim},{name},,{n}")
                continue
            table[(src, dim, name)] = r
            lines.append(f"{src},{dim},{name},{r!r},{n}")
    run.path("correlations.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    return table


@_stage("compare")
def _compare(run: _Run, scored: ScoredCorpus):
    rows = scored.rows
    report: dict[str, Any] = {"n_documents": len(rows)}
    dims = list(DIMENSIONS.values())
    cols = {d: np.array([getattr(r, d) for r in rows]) for d in dims}
    try:
        report["valence_dominance_r"] = pearson(cols["valence"], cols["dominance"])
    except (DataError, NumericalError) as exc:
        report["valence_dominance_r"] = None
        report["valence_dominance_note"] = str(exc)

    z = {}
    for d in dims:
        try:
            z[d] = zscore(cols[d])
        except (DataError, NumericalError):
            z[d] = np.zeros(len(rows))
    with open(run.path("scatter_zscored.csv"), "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["id", "source", "z_valence", "z_arousal", "z_dominance"])
        for i, r in enumerate(rows):
            w.writerow([r.id, r.source, *(repr(float(z[d][i])) for d in dims)])

    sources = scored.sources()
    report["per_source"] = {
        s: {d: {"mean": float(np.mean([getattr(r, d) for r in scored.select(s)])),
                "median": float(np.median([getattr(r, d) for r in scored.select(s)]))} for d in dims}
        for s in sources
    }
    tests = {}
    for a, b in itertools.combinations(sources, 2):
        for d in dims:
            xa = [getattr(r, d) for r in scored.select(a)]
            xb = [getattr(r, d) for r in scored.select(b)]
            res = mann_whitney_u(xa, xb)
            tests[f"{a}_vs_{b}:{d}"] = {
                **res.to_dict(),
                "direction": "higher" if np.median(xa) > np.median(xb) else "lower" if np.median(xa) < np.median(xb) else "equal",
            }
    report["mann_whitney"] = tests
    _dump_json(report, run.path("comparison.json"))
    return report


def _adf_or_skip(values: np.ndarray, spec: Deterministic, max_lags: int | None) -> dict:
    if not np.isfinite(values).all():
        return {"status": "skipped", "reason": "series has missing values"}
    try:
        return {"status": "ok", **adf_test(values, spec, max_lags).to_dict()}
    except (DataError, NumericalError) as exc:
        return {"status": "skipped", "reason": str(exc)}


@_stage("adf")
def _adf(run: _Run, series: dict):
    cfg = run.cfg
    out = {}
    for (src, dim), e in series.items():
        vals = e["values"]
        diffs = np.array(difference(vals), dtype=float) if vals.size >= 2 else np.array([])
        out[f"{src}_{dim}"] = {
            "levels_constant": _adf_or_skip(vals, Deterministic.CONSTANT, cfg.adf_max_lags),
            "levels_constant_trend": _adf_or_skip(vals, Deterministic.CONSTANT_TREND, cfg.adf_max_lags),
            "differences_constant": _adf_or_skip(diffs, Deterministic.CONSTANT, cfg.adf_max_lags),
        }
    _dump_json(out, run.path("adf.json"))
    return out


def _offset_dates(start: tuple[int, int], idx: list[int], freq: str) -> list[tuple[int, int]]:
    step = 3 if freq == "Q" else 1
    base = month_index(start)
    return [index_month(base + step * i) for i in idx]


@_stage("breaks")
def _breaks(run: _Run, series: dict):
    cfg = run.cfg
    bcfg = cfg.break_config()
    results = {}
    for (src, dim), e in series.items():
        variants = {"detrended": (detrend, 0)}
        if cfg.break_on_differences:
            variants["differenced"] = (lambda v: np.array(difference(v), dtype=float), 1)
        for name, (transform, shift) in variants.items():
            key = f"{src}_{dim}_{name}"
            try:
                if not np.isfinite(e["values"]).all():
                    raise DataError("series has missing values")
                x = transform(e["values"])
                res = detect_breaks(x, bcfg)
            except (DataError, NumericalError) as exc:
                _dump_json({"status": "skipped", "reason": str(exc)}, run.path(f"breaks/{key}.json"))
                results[key] = None
                continue
            # a difference at position i belongs to the later month i + 1
            res.break_dates = _offset_dates(e["start"], [i + shift for i in res.break_indices], e["freq"])
            _dump_json({"status": "ok", **res.to_dict()}, run.path(f"breaks/{key}.json"))
            run.path(f"breaks/{key}.csv").write_text(res.table_csv(), encoding="utf-8")
            results[key] = res
    return results


@_stage("plot")
def _plots(run: _Run, series: dict, breaks: dict):
    anns_all = [(a.get("source"), Annotation.parse(a)) for a in run.cfg.annotations]
    for (src, dim), e in series.items():
        s: MonthlySeries = e["series"]
        anns = [a for owner, a in anns_all if owner in (None, src)]
        res = breaks.get(f"{src}_{dim}_detrended")
        idx = []
        if res is not None and res.break_dates:
            idx = [month_index(d) - month_index(s.start) for d in res.break_dates]
        emit_plot(s, idx, anns, run.path(f"plots/{src}_{dim}.svg"), title=f"{src} {dim}")


def run_pipeline(cfg: RunConfig, timestamp: str | None = None) -> ReportBundle:
    """Execute the whole analysis and write the report bundle to ``cfg.out``."""
    cfg.validate()
    out = Path(cfg.out)
    parent = out.parent if str(out.parent) else Path(".")
    stage_dir = Path(tempfile.mkdtemp(prefix=f".{out.name}.", dir=parent))
    run = _Run(cfg, stage_dir)
    try:
        _, docs, scored, corpus_info = _score(run)
        try:
            indicators = {
                src: load_indicators(cfg.indicators_for(src)) for src in scored.sources()
            }
        except VadEconError as exc:
            raise StageError("indicators", exc) from exc
        series = _series(run, scored, indicators)
        correlations = _correlate(run, series, indicators)
        comparison = _compare(run, scored)
        _adf(run, series)
        breaks = _breaks(run, series)
        _plots(run, series, breaks)

        inputs = {"lexicon": sha256_file(cfg.lexicon), "manifest": sha256_file(cfg.manifest)}
        for row in read_manifest(cfg.manifest):
            inputs[f"doc:{row.file}"] = sha256_file(Path(cfg.corpus_root) / row.file)
        for src, m in sorted(cfg.indicators.items()):
            for name, p in sorted(m.items()):
                inputs[f"indicator:{src}:{name}"] = sha256_file(p)
        files = {rel: sha256_file(stage_dir / rel) for rel in sorted(set(run.written))}
        manifest = {
            "software": {"name": "vadecon", "version": __version__},
            "config": _portable_config(cfg),
            "inputs": inputs,
            "outputs": files,
            "corpus": corpus_info,
            "status": "complete",
            "timestamp": timestamp or dt.datetime.now(dt.timezone.utc).isoformat(timespec="seconds"),
        }
        _dump_json(manifest, stage_dir / MANIFEST_NAME)
    except BaseException:
        shutil.rmtree(stage_dir, ignore_errors=True)
        raise

    if out.exists():
        shutil.rmtree(out)
    os.replace(stage_dir, out)
    logger.info("wrote %d files to %s", len(files) + 1, out)
    return ReportBundle(out, files, manifest)


def _portable_config(cfg: RunConfig) -> dict:
    """Config echo with paths relative to the output directory's parent when possible."""
    echo = cfg.echo()
    base = Path(cfg.out).resolve().parent

    def rel(p: str) -> str:
        try:
            return os.path.relpath(Path(p).resolve(), base)
        except ValueError:
            return p

    for key in ("corpus_root", "manifest", "lexicon", "out"):
        echo[key] = rel(echo[key])
    echo["indicators"] = {s: {k: rel(v) for k, v in m.items()} for s, m in echo["indicators"].items()}
    return echo
