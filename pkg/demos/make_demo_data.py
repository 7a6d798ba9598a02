"""
Generate the synthetic demo corpus bundled in ``vadecon/fixtures/demo``
======================================================================

Two fictional sources, ``ECB`` and ``FED``, publish statements from 2002
through 2013.  A latent "confidence" path with a slump in late 2008 drives
which emotionally loaded words appear, and the same path feeds three
indicator series per source.  The ECB-like source publishes nearly every
month with long statements; the FED-like one publishes in about two thirds
of the months with short statements.

Run from the repository root::

    python demos/make_demo_data.py
"""

import csv
from pathlib import Path

import numpy as np

OUT = Path(__file__).resolve().parents[1] / "src" / "vadecon" / "fixtures" / "demo"
rng = np.random.default_rng(20190606)

# word, valence, arousal, dominance on a 1-9 scale
LEXICON = [
    ("growth", 7.2, 5.6, 6.8), ("recovery", 7.0, 5.2, 6.4), ("stable", 6.4, 3.2, 6.6),
    ("strong", 7.1, 5.9, 7.4), ("confidence", 7.3, 5.0, 7.2), ("improve", 7.0, 5.1, 6.5),
    ("robust", 6.9, 5.0, 7.0), ("solid", 6.5, 4.0, 6.9), ("favourable", 7.0, 4.2, 6.3),
    ("expansion", 6.6, 5.4, 6.2), ("support", 6.8, 3.9, 6.0), ("gain", 7.0, 5.6, 6.6),
    ("firm", 6.2, 4.4, 7.0), ("success", 7.9, 6.1, 7.2), ("steady", 6.3, 3.0, 6.4),
    ("risk", 3.2, 6.4, 3.8), ("crisis", 2.3, 7.0, 3.2), ("decline", 3.0, 4.6, 3.7),
    ("weak", 2.9, 3.8, 2.9), ("uncertainty", 3.3, 5.6, 3.4), ("downturn", 2.8, 5.2, 3.6),
    ("threat", 2.4, 6.9, 3.3), ("tension", 3.0, 6.6, 4.0), ("stress", 2.5, 6.8, 3.5),
    ("fall", 3.6, 4.8, 4.0), ("loss", 2.4, 5.2, 3.6), ("shock", 3.1, 7.0, 3.4),
    ("vulnerable", 3.3, 5.1, 2.8), ("fragile", 3.5, 4.9, 3.0), ("protectionism", 3.9, 4.7, 4.2),
    ("inflation", 3.8, 5.3, 4.5), ("price", 5.3, 4.0, 5.5), ("rate", 5.1, 3.5, 5.4),
    ("policy", 5.4, 3.4, 5.9), ("outlook", 5.6, 4.0, 5.6), ("market", 5.4, 4.3, 5.5),
    ("bank", 5.2, 3.9, 5.7), ("council", 5.5, 3.6, 6.0), ("committee", 5.3, 3.4, 5.8),
    ("decision", 5.8, 4.6, 6.4), ("data", 5.5, 3.3, 5.7), ("economy", 5.6, 4.1, 5.9),
]
FILLER = ("the of and to in for on with at by from as is was be are that this "
          "which will have has its over percent euro area quarter year monetary").split()
POSITIVE = [w for w, v, *_ in LEXICON if v >= 6]
NEGATIVE = [w for w, v, *_ in LEXICON if v <= 4]
NEUTRAL_WORDS = [w for w, v, *_ in LEXICON if 4 < v < 6]


def latent_path(months):
    t = np.arange(months)
    base = np.where(t < 81, 0.6, np.where(t < 118, -0.7, -0.1 + 0.004 * (t - 118)))
    ar = np.zeros(months)
    e = rng.normal(0, 0.15, months)
    for i in range(1, months):
        ar[i] = 0.6 * ar[i - 1] + e[i]
    return base + ar


def statement(conf, n_tokens, calm):
    p_pos = 1 / (1 + np.exp(-2.5 * conf))
    words = []
    for _ in range(n_tokens):
        u = rng.random()
        if u < 0.45:
            words.append(rng.choice(FILLER))
        elif u < 0.45 + 0.25 * calm:
            words.append(rng.choice(NEUTRAL_WORDS))
        else:
            pool = POSITIVE if rng.random() < p_pos else NEGATIVE
            words.append(rng.choice(pool))
    if rng.random() < 0.3:
        words.insert(rng.integers(len(words)), f"{rng.integers(1, 40) / 10:.1f}")
    sentences, i = [], 0
    while i < len(words):
        k = int(rng.integers(8, 20))
        chunk = words[i : i + k]
        sentences.append(chunk[0].capitalize() + " " + " ".join(chunk[1:]) + ".")
        i += k
    return "\n".join(" ".join(sentences[j : j + 4]) for j in range(0, len(sentences), 4)) + "\n"


def main():
    (OUT / "docs").mkdir(parents=True, exist_ok=True)
    with open(OUT / "lexicon.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["word", "valence", "arousal", "dominance"])
        w.writerows(LEXICON)

    start_year, months = 2002, 144
    conf = latent_path(months)
    rows = []
    for src, p_pub, length, calm in (("ECB", 0.89, 100, 0.9), ("FED", 0.66, 40, 0.4)):
        for m in range(months):
            if rng.random() > p_pub:
                continue
            year, month = start_year + m // 12, m % 12 + 1
            n_docs = 2 if rng.random() < 0.1 else 1
            for k in range(n_docs):
                day = 8 + 14 * k + int(rng.integers(0, 5))
                name = f"docs/{src.lower()}_{year}{month:02d}{day:02d}.txt"
                n_tok = max(20, int(rng.normal(length, length * 0.1)))
                (OUT / name).write_text(statement(conf[m], n_tok, calm), encoding="utf-8")
                rows.append((name, f"{year}-{month:02d}-{day:02d}", src))
        # indicators cover one extra year on both sides
        t = np.arange(-12, months + 12)
        c = np.interp(t, np.arange(months), conf)
        noise = lambda s: rng.normal(0, s, t.size)
        series = {
            "production": 100 + 4 * c + np.cumsum(noise(0.2)),
            "inflation": 2 + 0.8 * c + noise(0.3),
            "unemployment": 8 - 1.5 * c + noise(0.2),
        }
        for name, vals in series.items():
            with open(OUT / f"{src.lower()}_{name}.csv", "w", newline="") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(["month", "value"])
                for i, v in zip(t, vals):
                    y, mo = start_year + (i // 12), i % 12 + 1
                    w.writerow([f"{y:04d}-{mo:02d}", f"{v:.4f}"])

    rows.sort()
    with open(OUT / "manifest.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["file", "date", "source"])
        w.writerows(rows)
    print(f"wrote {len(rows)} documents to {OUT}")


if __name__ == "__main__":
    main()
