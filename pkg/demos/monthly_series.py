"""
From documents to monthly series, and some tests on them
========================================================

Months without a statement are gaps.  We fill interior gaps linearly, check
the relation to an indicator, compare the two sources with a rank test and
look for unit roots.
"""

from pathlib import Path

import numpy as np

import vadecon
from vadecon import corpus, lexicon, scorer, series
from vadecon.econ import adf_test, mann_whitney_u, pearson

fixtures = Path(vadecon.__file__).parent / "fixtures" / "demo"
lex = lexicon.load_lexicon(fixtures / "lexicon.csv", 1, 9)
scored = scorer.score_corpus(corpus.ingest_corpus(fixtures, fixtures / "manifest.csv"), lex)

###############################################################################
# Monthly dominance for each source
for src in ("ECB", "FED"):
    s = series.build_monthly(scored, src, "D")
    print(f"{s.label}: {len(s)} months, {s.missing_fraction:.1%} missing")

ecb = series.interpolate_linear(series.build_monthly(scored, "ECB", "D"))
fed_raw = series.build_monthly(scored, "FED", "D")

###############################################################################
# The sparser source can instead be filled from indicators.  Edge gaps get
# fitted values too.
refs = series.load_indicators({
    "production": fixtures / "fed_production.csv",
    "unemployment": fixtures / "fed_unemployment.csv",
})
fed, diag = series.impute_by_regression(fed_raw, refs, ["production", "unemployment"])
print("imputation r2 = %.3f, %d slots filled" % (diag.r_squared, diag.n_imputed))

###############################################################################
# Correlation with the ECB-area unemployment series over the same months
ind = series.load_indicators({"u": fixtures / "ecb_unemployment.csv"})["u"]
ind = ind.window(ecb.start, ecb.end)
print("r(ECB dominance, unemployment) = %.3f" % pearson(ecb.values, ind.values))

###############################################################################
# Rank comparison of document-level valence
a = [r.valence for r in scored.select("ECB")]
b = [r.valence for r in scored.select("FED")]
res = mann_whitney_u(a, b)
print(f"Mann-Whitney U={res.statistic:.0f} p={res.p_value:.3g} ({res.method})")

###############################################################################
# Unit roots in levels and in first differences
x = ecb.trimmed().values
print("levels      tau=%.2f" % adf_test(x, "constant").tau_statistic)
print("differences tau=%.2f" % adf_test(np.diff(x)).tau_statistic)
