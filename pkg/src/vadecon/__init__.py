"""Lexicon-based Valence-Arousal-Dominance scoring of dated documents and
econometric analysis of the resulting monthly emotion series."""

__version__ = "0.1.0"

from .corpus import Document, ingest_corpus, tokenize
from .errors import VadEconError
from .lexicon import EmotionLexicon, VadVector, load_lexicon, lookup, save_lexicon
from .scorer import OovMode, ScoredCorpus, Weighting, score_corpus, score_document
from .series import (
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

__all__ = [
    "Document",
    "EmotionLexicon",
    "MonthlySeries",
    "OovMode",
    "Provenance",
    "ScoredCorpus",
    "VadEconError",
    "VadVector",
    "Weighting",
    "aggregate_quarterly",
    "build_monthly",
    "detrend",
    "difference",
    "impute_by_regression",
    "ingest_corpus",
    "interpolate_linear",
    "load_lexicon",
    "lookup",
    "save_lexicon",
    "score_corpus",
    "score_document",
    "tokenize",
    "zscore",
]
