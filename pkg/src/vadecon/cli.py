"""Command line front end.

Exit codes: 0 success, 2 validation error, 3 data error, 4 numerical error.
Logs go to stderr; results go to files.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .corpus import ingest_corpus
from .econ import BreakModelConfig, Deterministic, adf_test, detect_breaks, mann_whitney_u, pearson
from .errors import ValidationError, VadEconError
from .lexicon import load_lexicon
from .pipeline import RunConfig, run_pipeline
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
    index_month,
    interpolate_linear,
    load_indicators,
    month_index,
)

log = logging.getLogger("vadecon")


def _indicator_args(values: list[str] | None) -> dict[str, dict[str, str]]:
    """Parse ``[SOURCE:]name=path`` items."""
    out: dict[str, dict[str, str]] = {}
    for item in values or []:
        if "=" not in item:
            raise ValidationError(f"--indicators expects [SOURCE:]name=path, got {item!r}")
        key, path = item.split("=", 1)
        src, _, name = key.rpartition(":")
        out.setdefault(src or "*", {})[name] = path
    return out


def _interp_arg(value: str | None) -> tuple[str | None, dict[str, str]]:
    """``linear`` or ``ECB=linear,FED=regression``."""
    if value is None:
        return None, {}
    if "=" not in value:
        return value.lower(), {}
    per = {}
    for part in value.split(","):
        src, mode = part.split("=", 1)
        per[src.strip().upper()] = mode.strip().lower()
    return None, per


def _write_json(obj, path: str | None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _load_series(path: str) -> MonthlySeries:
    return MonthlySeries.from_csv(path, label=Path(path).stem)


def _complete_values(s: MonthlySeries) -> tuple[np.ndarray, tuple[int, int]]:
    t = s.trimmed()
    if t.missing_mask.any():
        raise ValidationError(f"{s.label}: interior missing values; interpolate first")
    return t.values, t.start


def cmd_score(args) -> None:
    lex = load_lexicon(args.lexicon, args.scale_min, args.scale_max)
    docs = ingest_corpus(args.corpus, args.manifest, workers=args.workers)
    scored = score_corpus(docs, lex, oov=OovMode(args.oov), workers=args.workers)
    scored.to_csv(args.out)
    log.info("scored %d documents (%d excluded) -> %s", len(scored), len(scored.exclusions), args.out)


def cmd_series(args) -> None:
    scored = ScoredCorpus.from_csv(args.scored)
    s = build_monthly(scored, args.source, args.dimension)
    log.info("%s: %d months, missing fraction %.3f", s.label, len(s), s.missing_fraction)
    if args.quarterly or args.interp == "none_quarterly":
        aggregate_quarterly(s).to_csv(args.out)
        return
    if args.interp == "linear":
        s = interpolate_linear(s)
    elif args.interp == "regression":
        refs = load_indicators(_indicator_args(args.indicators).get("*", {}))
        names = args.refs.split(",") if args.refs else sorted(refs)
        s, diag = impute_by_regression(s, refs, names)
        log.info("imputation: %s", json.dumps(diag.to_dict(), sort_keys=True))
    s.to_csv(args.out)


def cmd_correlate(args) -> None:
    inds = load_indicators(_indicator_args(args.indicators).get("*", {}))
    lines = ["series,indicator,r,n"]
    for path in args.series:
        s = _load_series(path)
        for name, ind in sorted(inds.items()):
            lo = max(month_index(s.start), month_index(ind.start))
            hi = min(month_index(s.end), month_index(ind.end))
            a = s.window(index_month(lo), index_month(hi)).values
            b = ind.window(index_month(lo), index_month(hi)).values
            n = int((np.isfinite(a) & np.isfinite(b)).sum())
            lines.append(f"{s.label},{name},{pearson(a, b)!r},{n}")
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_compare(args) -> None:
    scored = ScoredCorpus.from_csv(args.scored)
    srcs = scored.sources()
    a, b = (args.a, args.b) if args.a else (srcs + [None, None])[:2]
    if a is None or b is None:
        raise ValidationError("compare needs two sources")
    out = {}
    for dim in DIMENSIONS.values():
        xa = [getattr(r, dim) for r in scored.select(a)]
        xb = [getattr(r, dim) for r in scored.select(b)]
        out[dim] = mann_whitney_u(xa, xb).to_dict()
    out["valence_dominance_r"] = pearson([r.valence for r in scored.rows], [r.dominance for r in scored.rows])
    _write_json({"a": a, "b": b, "tests": out}, args.out)


def cmd_adf(args) -> None:
    vals, _ = _complete_values(_load_series(args.series))
    if args.difference:
        vals = np.array(difference(vals), dtype=float)
    _write_json(adf_test(vals, Deterministic(args.spec), args.max_lags).to_dict(), args.out)


def cmd_breaks(args) -> None:
    s = _load_series(args.series)
    vals, start = _complete_values(s)
    shift = 0
    if args.transform == "detrend":
        vals = detrend(vals)
    elif args.transform == "difference":
        vals = np.array(difference(vals), dtype=float)
        shift = 1
    cfg = BreakModelConfig(args.max_breaks, args.trim, args.ar_order)
    res = detect_breaks(vals, cfg, start_month=index_month(month_index(start) + shift))
    _write_json(res.to_dict(), args.out)
    if args.csv:
        Path(args.csv).write_text(res.table_csv(), encoding="utf-8")


def cmd_plot(args) -> None:
    s = _load_series(args.series)
    idx: list[int] = []
    if args.breaks:
        data = json.loads(Path(args.breaks).read_text(encoding="utf-8"))
        months = data.get("break_months") or []
        base = month_index(s.start)
        idx = [month_index((int(m[:4]), int(m[5:7]))) - base for m in months]
    anns = []
    if args.annotations:
        anns = [Annotation.parse(a) for a in json.loads(Path(args.annotations).read_text(encoding="utf-8"))]
    emit_plot(s, idx, anns, args.out, title=args.title)


def cmd_report(args) -> None:
    interp_default, interp_per = _interp_arg(args.interp)
    overrides = dict(
        corpus_root=args.corpus,
        manifest=args.manifest,
        lexicon=args.lexicon,
        out=args.out,
        scale_min=args.scale_min,
        scale_max=args.scale_max,
        oov=args.oov,
        max_breaks=args.max_breaks,
        trim=args.trim,
        ar_order=args.ar_order,
        default_interpolation="none_quarterly" if args.quarterly else interp_default,
        interpolation=interp_per or None,
        indicators=_indicator_args(args.indicators) or None,
    )
    if args.config:
        cfg = RunConfig.from_file(args.config, **overrides)
    else:
        missing = [k for k in ("corpus_root", "manifest", "lexicon", "out") if overrides[k] is None]
        if missing:
            raise ValidationError(f"without --config these flags are required: {missing}")
        cfg = RunConfig(**{k: v for k, v in overrides.items() if v is not None})
    bundle = run_pipeline(cfg)
    log.info("report bundle written to %s", bundle.out)


def _common_scoring(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("--corpus", required=required, help="directory holding the document files")
    p.add_argument("--manifest", required=required, help="CSV with header file,date,source")
    p.add_argument("--lexicon", required=required, help="CSV with header word,valence,arousal,dominance")
    p.add_argument("--scale-min", type=float, default=None if not required else 1.0)
    p.add_argument("--scale-max", type=float, default=None if not required else 9.0)
    p.add_argument("--oov", choices=[m.value for m in OovMode], default=None if not required else "neutral")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vadecon", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("score", help="score documents -> scored CSV")
    _common_scoring(p)
    p.add_argument("--out", required=True)
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("series", help="monthly series for one source and dimension")
    p.add_argument("--scored", required=True)
    p.add_argument("--source", required=True)
    p.add_argument("--dimension", required=True, help="V, A, D or full name")
    p.add_argument("--interp", choices=["none", "linear", "regression", "none_quarterly"], default="linear")
    p.add_argument("--quarterly", action="store_true")
    p.add_argument("--indicators", nargs="*", help="name=path indicator CSVs (regression mode)")
    p.add_argument("--refs", help="comma-separated indicator names for regression imputation")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("correlate", help="Pearson r of series vs indicators")
    p.add_argument("--series", nargs="+", required=True)
    p.add_argument("--indicators", nargs="+", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_correlate)

    p = sub.add_parser("compare", help="Mann-Whitney comparison of two sources")
    p.add_argument("--scored", required=True)
    p.add_argument("--a")
    p.add_argument("--b")
    p.add_argument("--out")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("adf", help="augmented Dickey-Fuller test on a series CSV")
    p.add_argument("--series", required=True)
    p.add_argument("--spec", choices=[d.value for d in Deterministic], default="constant")
    p.add_argument("--max-lags", type=int)
    p.add_argument("--difference", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_adf)

    p = sub.add_parser("breaks", help="structural break detection on a series CSV")
    p.add_argument("--series", required=True)
    p.add_argument("--transform", choices=["detrend", "difference", "none"], default="detrend")
    p.add_argument("--max-breaks", type=int, default=5)
    p.add_argument("--trim", type=float, default=0.15)
    p.add_argument("--ar-order", type=int, default=1)
    p.add_argument("--out")
    p.add_argument("--csv")
    p.set_defaults(func=cmd_breaks)

    p = sub.add_parser("report", help="run the full pipeline")
    p.add_argument("--config", help="JSON run config; flags override its values")
    _common_scoring(p, required=False)
    p.add_argument("--indicators", nargs="*", help="[SOURCE:]name=path")
    p.add_argument("--interp", help="linear | regression | none_quarterly, or SRC=mode,...")
    p.add_argument("--quarterly", action="store_true", default=None)
    p.add_argument("--max-breaks", type=int)
    p.add_argument("--trim", type=float)
    p.add_argument("--ar-order", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("plot", help="SVG chart of a series with breaks and annotations")
    p.add_argument("--series", required=True)
    p.add_argument("--breaks", help="breaks JSON written by the breaks subcommand")
    p.add_argument("--annotations", help="JSON list of {date, label, style[, end]}")
    p.add_argument("--title")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        args.func(args)
    except VadEconError as exc:
        log.error("%s", exc)
        return exc.exit_code
    except (FileNotFoundError, PermissionError, IsADirectoryError) as exc:
        log.error("%s", exc)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
