import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vadecon.econ import ols
from vadecon.errors import InsufficientDataError, SingularDesignError


def test_intercept_only_mean_fit():
    fit = ols(np.ones((5, 1)), np.full(5, 3.5))
    assert fit.coefficients == pytest.approx([3.5])
    assert np.allclose(fit.residuals, 0)


def test_exact_line():
    x = np.arange(4.0)
    fit = ols(np.column_stack([np.ones(4), x]), 2 * x + 1)
    assert fit.coefficients == pytest.approx([1, 2], abs=1e-12)
    assert fit.ssr == pytest.approx(0, abs=1e-20)
    assert fit.r_squared == pytest.approx(1)


def test_duplicated_column_is_singular():
    x = np.arange(6.0)
    with pytest.raises(SingularDesignError):
        ols(np.column_stack([np.ones(6), x, x]), x**2)


def test_too_few_rows():
    with pytest.raises(InsufficientDataError):
        ols(np.column_stack([np.ones(2), [0.0, 1.0]]), [1.0, 2.0])


def test_standard_errors_match_textbook():
    rng = np.random.default_rng(1)
    X = np.column_stack([np.ones(50), rng.normal(size=(50, 2))])
    y = X @ [1, 2, -1] + rng.normal(size=50)
    fit = ols(X, y)
    s2 = fit.ssr / 47
    se = np.sqrt(np.diag(s2 * np.linalg.inv(X.T @ X)))
    assert fit.std_errors == pytest.approx(se, rel=1e-10)


@settings(max_examples=100)
@given(n=st.integers(5, 60), k=st.integers(1, 4), seed=st.integers(0, 10_000))
def test_residual_invariants(n, k, seed):
    if n < k + 1:
        return
    rng = np.random.default_rng(seed)
    X = np.column_stack([np.ones(n), rng.normal(size=(n, k - 1))])
    y = rng.normal(size=n) * 3 + 1
    fit = ols(X, y)
    assert np.all(np.abs(X.T @ fit.residuals) <= 1e-8 * n)
    assert fit.ssr == pytest.approx(float(fit.residuals @ fit.residuals), rel=1e-9)
    assert 0 <= fit.r_squared <= 1
