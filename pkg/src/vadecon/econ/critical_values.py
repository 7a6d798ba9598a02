"""Asymptotic Dickey-Fuller critical values.

Source: J. G. MacKinnon (2010), "Critical Values for Cointegration Tests",
Queen's Economics Department Working Paper No. 1227, Table 2, N = 1,
asymptotic (T = infinity) coefficients. Finite-sample response-surface
terms are not used.
"""

ADF_CRITICAL_VALUES = {
    "constant": {"1%": -3.43035, "5%": -2.86154, "10%": -2.56677},
    "constant_trend": {"1%": -3.95877, "5%": -3.41049, "10%": -3.12705},
}

LEVELS = ("1%", "5%", "10%")
