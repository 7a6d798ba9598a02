"""VAD emotion lexicons.

A lexicon maps lowercase word forms to a (valence, arousal, dominance)
rating on a caller-declared bipolar scale.  Words that are not covered
resolve to the neutral vector, i.e. the scale midpoint on every axis.

File format (UTF-8 CSV)::

    word,valence,arousal,dominance
    good,7.0,5.0,6.0
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, field
from os import PathLike
from types import MappingProxyType
from typing import Mapping, NamedTuple

from .errors import EmptyInputError, FormatError, ValidationError

logger = logging.getLogger(__name__)

HEADER = ("word", "valence", "arousal", "dominance")


class VadVector(NamedTuple):
    """Valence, arousal and dominance in lexicon scale units."""

    valence: float
    arousal: float
    dominance: float

    def in_scale(self, scale_min: float, scale_max: float) -> bool:
        return all(math.isfinite(v) and scale_min <= v <= scale_max for v in self)


@dataclass(frozen=True)
class EmotionLexicon:
    """Immutable word -> :class:`VadVector` mapping with scale metadata.

    Parameters
    ----------
    entries : mapping
        Lowercase, whitespace-free keys to vectors inside the scale cube.
    scale_min, scale_max : float
        Bounds of the rating scale, ``scale_min < scale_max``.
    n_duplicates : int
        Number of rows dropped at load time because the word was already
        present (first occurrence wins).
    """

    entries: Mapping[str, VadVector]
    scale_min: float
    scale_max: float
    n_duplicates: int = 0
    midpoint: float = field(init=False)

    def __post_init__(self):
        if not (math.isfinite(self.scale_min) and math.isfinite(self.scale_max)):
            raise ValidationError("scale bounds must be finite")
        if not self.scale_min < self.scale_max:
            raise ValidationError(
                f"scale_min ({self.scale_min}) must be < scale_max ({self.scale_max})"
            )
        entries = {}
        for word, vec in self.entries.items():
            _check_key(word)
            vec = VadVector(*(float(v) for v in vec))
            if not vec.in_scale(self.scale_min, self.scale_max):
                raise ValidationError(
                    f"entry {word!r} = {tuple(vec)} outside scale "
                    f"[{self.scale_min}, {self.scale_max}]"
                )
            entries[word] = vec
        object.__setattr__(self, "entries", MappingProxyType(entries))
        object.__setattr__(self, "midpoint", (self.scale_min + self.scale_max) / 2)

    @property
    def size(self) -> int:
        return len(self.entries)

    @property
    def neutral(self) -> VadVector:
        m = self.midpoint
        return VadVector(m, m, m)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, word: object) -> bool:
        return word in self.entries

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EmotionLexicon):
            return NotImplemented
        return (
            self.scale_min == other.scale_min
            and self.scale_max == other.scale_max
            and dict(self.entries) == dict(other.entries)
        )

    def __hash__(self):
        return hash((self.scale_min, self.scale_max, len(self.entries)))

    def lookup(self, token: str) -> tuple[VadVector, bool]:
        return lookup(self, token)


def _check_key(word: str) -> None:
    if not isinstance(word, str) or not word:
        raise ValidationError("lexicon keys must be non-empty strings")
    if word != word.lower():
        raise ValidationError(f"lexicon key {word!r} is not lowercase")
    if any(ch.isspace() for ch in word):
        raise ValidationError(f"lexicon key {word!r} contains whitespace")


def load_lexicon(
    path: str | PathLike, scale_min: float, scale_max: float
) -> EmotionLexicon:
    """Read a ``word,valence,arousal,dominance`` CSV file.

    Keys are lowercased. When a word appears more than once the first row is
    kept and the rest are counted in ``n_duplicates``.

    Raises
    ------
    FormatError
        Header missing or not exactly the four expected columns.
    ValidationError
        Non-numeric or out-of-scale value, bad key, or bad scale. The message
        names the offending line.
    EmptyInputError
        The file has a header but no data rows.
    """
    if not scale_min < scale_max:
        raise ValidationError(f"scale_min ({scale_min}) must be < scale_max ({scale_max})")

    entries: dict[str, VadVector] = {}
    n_dup = 0
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyInputError(f"{path}: empty lexicon file") from None
        header = [h.strip().lstrip("﻿").lower() for h in header]
        if tuple(header) != HEADER:
            raise FormatError(
                f"{path}: expected header {','.join(HEADER)!r}, got {','.join(header)!r}"
            )
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 4:
                raise ValidationError(f"{path}:{lineno}: expected 4 fields, got {len(row)}")
            word = row[0].strip().lower()
            try:
                _check_key(word)
            except ValidationError as exc:
                raise ValidationError(f"{path}:{lineno}: {exc}") from None
            try:
                vec = VadVector(*(float(c) for c in row[1:]))
            except ValueError:
                raise ValidationError(
                    f"{path}:{lineno}: non-numeric value in {row!r}"
                ) from None
            if not vec.in_scale(scale_min, scale_max):
                raise ValidationError(
                    f"{path}:{lineno}: {word!r} value {tuple(vec)} outside "
                    f"scale [{scale_min}, {scale_max}]"
                )
            if word in entries:
                n_dup += 1
                continue
            entries[word] = vec

    if not entries:
        raise EmptyInputError(f"{path}: lexicon has no data rows")
    if n_dup:
        logger.warning("%s: %d duplicate word(s) ignored (first occurrence kept)", path, n_dup)
    return EmotionLexicon(entries, float(scale_min), float(scale_max), n_duplicates=n_dup)


def save_lexicon(lexicon: EmotionLexicon, path: str | PathLike) -> None:
    """Write ``lexicon`` in the format read by :func:`load_lexicon`."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(HEADER)
        for word, vec in lexicon.entries.items():
            writer.writerow([word, *(repr(float(v)) for v in vec)])


def lookup(lexicon: EmotionLexicon, token: str) -> tuple[VadVector, bool]:
    """Return ``(vector, in_vocabulary)`` for a lowercase token.

    Tokens outside the lexicon map to the neutral (midpoint) vector.
    """
    if token != token.lower():
        raise ValidationError(f"token {token!r} must be lowercase; normalize before lookup")
    vec = lexicon.entries.get(token)
    if vec is None:
        return lexicon.neutral, False
    return vec, True
