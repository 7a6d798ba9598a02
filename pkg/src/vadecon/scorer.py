"""Document-level VAD scores.

The score of a document is the weighted average of the lexicon vectors of
its words, with absolute term frequency as the weight::

    score(d) = sum_w tf(w, d) * e(w) / sum_w tf(w, d)

Out-of-vocabulary words contribute the neutral midpoint vector (``NEUTRAL``,
the default) or are left out of both sums (``SKIP``).
"""

from __future__ import annotations

import csv
import datetime as dt
import enum
import logging
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from os import PathLike
from typing import Iterable, Sequence

from .corpus import Document
from .errors import EmptyInputError, FormatError, UnscorableDocumentError
from .lexicon import EmotionLexicon, VadVector

logger = logging.getLogger(__name__)

SCORED_HEADER = ("id", "source", "date", "valence", "arousal", "dominance", "coverage")


class Weighting(str, enum.Enum):
    ABSOLUTE_TF = "absolute_tf"


class OovMode(str, enum.Enum):
    NEUTRAL = "neutral"
    SKIP = "skip"


def _term_weights(tokens: Sequence[str], weighting: Weighting) -> Counter:
    if weighting is Weighting.ABSOLUTE_TF:
        return Counter(tokens)
    raise ValueError(f"unsupported weighting {weighting!r}")


def score_document(
    doc: Document | Sequence[str],
    lexicon: EmotionLexicon,
    weighting: Weighting = Weighting.ABSOLUTE_TF,
    oov: OovMode = OovMode.NEUTRAL,
) -> tuple[VadVector, float]:
    """Weighted-average VAD vector of a document and its lexicon coverage.

    ``doc`` may also be a bare token sequence. Coverage is the share of
    token occurrences found in the lexicon.

    Raises
    ------
    UnscorableDocumentError
        No tokens, or (under ``SKIP``) no in-vocabulary tokens.
    """
    tokens = doc.tokens if isinstance(doc, Document) else doc
    weighting = Weighting(weighting)
    oov = OovMode(oov)
    if not tokens:
        raise UnscorableDocumentError(f"{_doc_name(doc)}: document has no tokens")

    entries = lexicon.entries
    neutral = lexicon.neutral
    num = [0.0, 0.0, 0.0]
    den = 0.0
    n_tokens = 0
    n_known = 0
    # sorted word types: accumulation order independent of token order
    weights = _term_weights(tokens, weighting)
    for word in sorted(weights):
        lam = weights[word]
        n_tokens += lam
        vec = entries.get(word)
        if vec is None:
            if oov is OovMode.SKIP:
                continue
            vec = neutral
        else:
            n_known += lam
        num[0] += lam * vec[0]
        num[1] += lam * vec[1]
        num[2] += lam * vec[2]
        den += lam

    if den == 0:
        raise UnscorableDocumentError(
            f"{_doc_name(doc)}: no in-vocabulary tokens under oov=skip"
        )
    lo, hi = lexicon.scale_min, lexicon.scale_max
    # clamp guards the last ulp of rounding against the scale cube
    score = VadVector(*(min(max(v / den, lo), hi) for v in num))
    return score, n_known / n_tokens


def _doc_name(doc) -> str:
    return f"document {doc.id!r}" if isinstance(doc, Document) else "token list"


@dataclass(frozen=True)
class ScoredRow:
    id: str
    source: str
    date: dt.date
    vad: VadVector
    coverage: float

    @property
    def valence(self) -> float:
        return self.vad.valence

    @property
    def arousal(self) -> float:
        return self.vad.arousal

    @property
    def dominance(self) -> float:
        return self.vad.dominance


@dataclass(frozen=True)
class Exclusion:
    id: str
    source: str
    date: dt.date
    reason: str


@dataclass
class ScoredCorpus:
    rows: list[ScoredRow]
    exclusions: list[Exclusion] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.rows)

    def sources(self) -> list[str]:
        return sorted({r.source for r in self.rows})

    def select(self, source: str | None = None) -> list[ScoredRow]:
        return [r for r in self.rows if source is None or r.source == source]

    def to_csv(self, path: str | PathLike) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(SCORED_HEADER)
            for r in self.rows:
                w.writerow(
                    [r.id, r.source, r.date.isoformat(), *(repr(float(v)) for v in r.vad), repr(r.coverage)]
                )

    @classmethod
    def from_csv(cls, path: str | PathLike) -> "ScoredCorpus":
        rows = []
        with open(path, encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None or tuple(h.strip() for h in header) != SCORED_HEADER:
                raise FormatError(f"{path}: expected header {','.join(SCORED_HEADER)!r}")
            for lineno, rec in enumerate(reader, start=2):
                if not rec:
                    continue
                try:
                    rows.append(
                        ScoredRow(
                            rec[0],
                            rec[1],
                            dt.date.fromisoformat(rec[2]),
                            VadVector(float(rec[3]), float(rec[4]), float(rec[5])),
                            float(rec[6]),
                        )
                    )
                except (ValueError, IndexError):
                    raise FormatError(f"{path}:{lineno}: malformed row {rec!r}") from None
        if not rows:
            raise EmptyInputError(f"{path}: no scored rows")
        return cls(rows)


def score_corpus(
    corpus: Iterable[Document],
    lexicon: EmotionLexicon,
    weighting: Weighting = Weighting.ABSOLUTE_TF,
    oov: OovMode = OovMode.NEUTRAL,
    workers: int | None = None,
) -> ScoredCorpus:
    """Score every document, keeping input order.

    Unscorable documents are listed in ``exclusions`` instead of aborting.
    """
    docs = list(corpus)
    if not docs:
        raise EmptyInputError("cannot score an empty corpus")

    def one(doc: Document):
        try:
            return score_document(doc, lexicon, weighting, oov)
        except UnscorableDocumentError as exc:
            return exc

    if workers and workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(one, docs))
    else:
        results = [one(d) for d in docs]

    rows, excluded = [], []
    for doc, res in zip(docs, results):
        if isinstance(res, Exception):
            excluded.append(Exclusion(doc.id, doc.source, doc.date, str(res)))
            logger.warning("excluded %s", res)
        else:
            rows.append(ScoredRow(doc.id, doc.source, doc.date, res[0], res[1]))
    if not rows:
        raise EmptyInputError(f"all {len(docs)} documents are unscorable")
    return ScoredCorpus(rows, excluded)
