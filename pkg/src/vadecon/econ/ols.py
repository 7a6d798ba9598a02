"""Ordinary least squares core shared by detrending, imputation, ADF and
break estimation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..errors import InsufficientDataError, SingularDesignError


@dataclass(frozen=True)
class OlsFit:
    """Least-squares fit of ``y`` on the columns of a design matrix.

    Attributes
    ----------
    coefficients : ndarray, shape (k,)
    residuals : ndarray, shape (n,)
    ssr : float
        Sum of squared residuals.
    r_squared : float
        Centered R^2 (1.0 when ``y`` has no variation and the fit is exact).
    n, k : int
        Observations and parameters.
    std_errors : ndarray, shape (k,)
        Classical standard errors ``sqrt(diag(s^2 (X'X)^-1))``, NaN when
        ``n == k`` or the design is rank deficient.
    fitted : ndarray, shape (n,)
    """

    coefficients: NDArray[np.float64]
    residuals: NDArray[np.float64]
    ssr: float
    r_squared: float
    n: int
    k: int
    std_errors: NDArray[np.float64]
    fitted: NDArray[np.float64]

    @property
    def df_resid(self) -> int:
        return self.n - self.k

    @property
    def sigma2(self) -> float:
        return self.ssr / self.df_resid if self.df_resid > 0 else float("nan")

    @property
    def tvalues(self) -> NDArray[np.float64]:
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.coefficients / self.std_errors

    def aic(self) -> float:
        return self.n * np.log(self.ssr / self.n) + 2 * self.k

    def summary(self) -> dict:
        return {
            "coefficients": [float(c) for c in self.coefficients],
            "std_errors": [float(s) for s in self.std_errors],
            "ssr": float(self.ssr),
            "r_squared": float(self.r_squared),
            "n": self.n,
            "k": self.k,
        }


def ols(design: ArrayLike, y: ArrayLike, check_rank: bool = True) -> OlsFit:
    """Fit ``y = design @ b + e`` by least squares.

    ``design`` should contain an intercept column when one is wanted; none
    is added.  With ``check_rank=False`` a rank-deficient design is solved
    with the minimum-norm solution instead of raising.

    Raises
    ------
    InsufficientDataError
        Fewer than ``k + 1`` observations.
    SingularDesignError
        Design lacks full column rank (only when ``check_rank``).
    """
    X = np.asarray(design, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    n, k = X.shape
    if y.shape != (n,):
        raise ValueError(f"design has {n} rows but y has shape {y.shape}")
    if check_rank and n < k + 1:
        raise InsufficientDataError(f"need at least {k + 1} observations for {k} regressors, got {n}")

    beta, _, rank, sv = np.linalg.lstsq(X, y, rcond=None)
    if check_rank and rank < k:
        raise SingularDesignError(f"design matrix has rank {rank} < {k} columns")

    fitted = X @ beta
    resid = y - fitted
    ssr = float(resid @ resid)
    yc = y - y.mean()
    tss = float(yc @ yc)
    yy = float(y @ y)
    # a constant y leaves only rounding noise in tss
    if tss > 1e-24 * yy:
        r2 = min(max(1.0 - ssr / tss, 0.0), 1.0)
    else:
        r2 = 1.0 if ssr <= 1e-20 * yy else 0.0

    if n > k and rank == k:
        xtx_inv = np.linalg.inv(X.T @ X)
        se = np.sqrt(np.maximum(np.diag(xtx_inv) * (ssr / (n - k)), 0.0))
    else:
        se = np.full(k, np.nan)
    return OlsFit(beta, resid, ssr, r2, n, k, se, fitted)
