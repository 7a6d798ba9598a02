"""
Structural breaks in the dominance series
=========================================

Breaks are searched on the detrended series with an AR(1) model per regime.
The number of breaks is chosen by BIC.  The result is drawn as an SVG with
the breaks as solid lines, two leadership changes as dotted lines and a
recession as a shaded band.
"""

import sys
from pathlib import Path

import vadecon
from vadecon import corpus, lexicon, scorer, series
from vadecon.econ import BreakModelConfig, detect_breaks
from vadecon.plot import Annotation, AnnotationStyle, emit_plot

fixtures = Path(vadecon.__file__).parent / "fixtures" / "demo"
lex = lexicon.load_lexicon(fixtures / "lexicon.csv", 1, 9)
scored = scorer.score_corpus(corpus.ingest_corpus(fixtures, fixtures / "manifest.csv"), lex)
dom = series.interpolate_linear(series.build_monthly(scored, "ECB", "D")).trimmed()

res = detect_breaks(series.detrend(dom.values), BreakModelConfig(max_breaks=5), dom.start)
for m in sorted(res.bic_by_m):
    flag = "<-" if m == res.n_breaks else ""
    print(f"m={m} BIC={res.bic_by_m[m]:9.2f} breaks={res.breaks_by_m[m]} {flag}")
print("break months:", [series.format_month(d) for d in res.break_dates])

###############################################################################
# Draw it
notes = [
    Annotation((2003, 11), "new president", AnnotationStyle.PRESIDENCY_DOTTED),
    Annotation((2011, 11), "new president", AnnotationStyle.PRESIDENCY_DOTTED),
    Annotation((2008, 4), "recession", AnnotationStyle.RECESSION_SHADED, end=(2009, 6)),
]
out = Path(sys.argv[1] if len(sys.argv) > 1 else "ecb_dominance.svg")
emit_plot(dom, res, notes, out, title="ECB dominance")
print("wrote", out)
