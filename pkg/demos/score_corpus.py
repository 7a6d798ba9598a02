"""
Scoring a small corpus
======================

Each document gets the term-frequency weighted mean of the VAD ratings of its
words.  Words missing from the lexicon pull the score toward the scale
midpoint unless they are skipped.
"""

from pathlib import Path

import vadecon
from vadecon import corpus, lexicon, scorer

fixtures = Path(vadecon.__file__).parent / "fixtures" / "demo"

lex = lexicon.load_lexicon(fixtures / "lexicon.csv", 1, 9)
print(f"{lex.size} words, neutral vector {tuple(lex.neutral)}")

###############################################################################
# Ingest the documents listed in the manifest.  They come back sorted by
# source, date and file name.
docs = corpus.ingest_corpus(fixtures, fixtures / "manifest.csv")
print(corpus.summarize(docs))

###############################################################################
# One document, both ways of treating unknown words
doc = docs[0]
for mode in scorer.OovMode:
    vec, cov = scorer.score_document(doc, lex, oov=mode)
    print(f"{mode.value:8s} V={vec.valence:.3f} A={vec.arousal:.3f} "
          f"D={vec.dominance:.3f} coverage={cov:.2f}")

###############################################################################
# The whole corpus, and a per-source look at the means
scored = scorer.score_corpus(docs, lex)
for src in scored.sources():
    rows = scored.select(src)
    mean_v = sum(r.valence for r in rows) / len(rows)
    mean_d = sum(r.dominance for r in rows) / len(rows)
    print(f"{src}: {len(rows)} documents, mean V={mean_v:.3f} D={mean_d:.3f}")
