import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import minimize

from dirichlet_opa.errors import ConditioningError, SingularSystemError
from dirichlet_opa.opa_solver import (
    build_gram,
    kernel_norm_squared,
    noncyclic_lower_bound,
    opa,
    opa_sequence,
)
from dirichlet_opa.series_core import PowerSeries, build_geometric, inner_product, multiply, norm, shift

from .conftest import ALPHAS, random_series, series

P = PowerSeries.from_coeffs


def test_gram_examples():
    for alpha in ALPHAS:
        g = build_gram(P([1]), 2, alpha)
        np.testing.assert_allclose(g.matrix, np.diag([1, 2 ** alpha, 3 ** alpha]), rtol=1e-15)
        np.testing.assert_array_equal(g.rhs, [1, 0, 0])
    g = build_gram(P([1, -1]), 1, 0)
    np.testing.assert_allclose(g.matrix, [[2, -1], [-1, 2]], atol=1e-15)
    np.testing.assert_array_equal(g.rhs, [1, 0])


def test_gram_entries_are_shift_inner_products(rng):
    # oracle: m_{j,k} = <S^k f, S^j f> entry by entry
    for alpha in ALPHAS:
        f = random_series(rng, 5)
        d = 4
        M = build_gram(f, d, alpha).matrix
        for j in range(d + 1):
            for k in range(d + 1):
                expect = inner_product(shift(f, k), shift(f, j), alpha)
                assert M[j, k] == pytest.approx(expect, rel=1e-13, abs=1e-13)


def test_gram_toeplitz_at_alpha_zero(rng):
    f = random_series(rng, 6)
    M = build_gram(f, 5, 0).matrix
    for j in range(6):
        for k in range(6):
            if j > 0 and k > 0:
                assert M[j, k] == pytest.approx(M[j - 1, k - 1], abs=1e-13)


@settings(max_examples=150, deadline=None)
@given(series(max_degree=6, nonzero=True), st.integers(0, 12), st.sampled_from([-2.0, -1.0, 0.0, 1.0, 2.0]))
def test_gram_hermitian_positive_definite(f, d, alpha):
    g = build_gram(f, d, alpha)
    M = g.matrix
    np.testing.assert_array_equal(M, M.conj().T)
    assert np.all(g.rhs[1:] == 0)
    assert g.rhs[0] == np.conj(f.coeffs[0])
    assert np.linalg.eigvalsh(M).min() > 0


def test_zero_function_rejected():
    with pytest.raises(SingularSystemError):
        build_gram(P([0, 0]), 2, 0)
    with pytest.raises(SingularSystemError):
        opa_sequence(P([0]), 3, 1)
    with pytest.raises(ValueError):
        build_gram(P([1]), -1, 0)


def test_constant_one_is_its_own_approximant():
    for alpha in ALPHAS:
        for r in opa_sequence(P([1]), 4, alpha):
            expect = np.zeros(r.degree + 1)
            expect[0] = 1
            np.testing.assert_allclose(r.coefficients, expect, atol=1e-15)
            assert r.residual == 0


def test_one_minus_z_closed_form():
    r = opa(P([1, -1]), 1, 0)
    np.testing.assert_allclose(r.coefficients, [2 / 3, 1 / 3], atol=1e-14)
    assert r.residual ** 2 == pytest.approx(1 / 3, abs=1e-14)
    for d in range(0, 11):
        r = opa(P([1, -1]), d, 0)
        # the optimum is c_k = 1 - (k+1)/(d+2)
        np.testing.assert_allclose(r.coefficients, 1 - np.arange(1, d + 2) / (d + 2), atol=1e-12)
        assert r.residual ** 2 == pytest.approx(1 / (d + 2), abs=1e-12)
        assert r.residual_projection ** 2 == pytest.approx(1 / (d + 2), abs=1e-12)


def test_one_minus_z_grid_oracle():
    # brute-force minimization of ||(c0 + c1 z)(1 - z) - 1||_0^2 over a grid
    c0, c1 = np.meshgrid(np.linspace(0, 1, 601), np.linspace(0, 1, 601), indexing="ij")
    val = (c0 - 1) ** 2 + (c1 - c0) ** 2 + c1 ** 2
    i, j = np.unravel_index(np.argmin(val), val.shape)
    assert c0[i, j] == pytest.approx(2 / 3, abs=2e-3)
    assert c1[i, j] == pytest.approx(1 / 3, abs=2e-3)
    assert val.min() == pytest.approx(1 / 3, abs=1e-5)


def _lstsq_opa(f, d, alpha):
    """Independent oracle: weighted least squares on the coefficients of p f - 1."""
    N = f.degree + d
    w = np.sqrt((np.arange(N + 1) + 1.0) ** alpha)
    A = np.zeros((N + 1, d + 1), dtype=complex)
    for k in range(d + 1):
        A[k : k + f.degree + 1, k] = f.coeffs
    e = np.zeros(N + 1)
    e[0] = 1
    c, *_ = np.linalg.lstsq(w[:, None] * A, w * e, rcond=None)
    return c, float(np.linalg.norm(w * (A @ c - e)))


def test_least_squares_oracle(rng):
    for trial in range(40):
        alpha = ALPHAS[trial % len(ALPHAS)]
        f = random_series(rng, int(rng.integers(0, 5)))
        d = int(rng.integers(0, 4))
        r = opa(f, d, alpha)
        c, res = _lstsq_opa(f, d, alpha)
        np.testing.assert_allclose(r.coefficients, c, atol=1e-6)
        assert r.residual == pytest.approx(res, abs=1e-6)


def test_direct_minimization_oracle(rng):
    # derivative-free minimization over real and imaginary parts, d <= 2
    for alpha in (-1.0, 0.0, 1.0):
        f = random_series(rng, 3)
        d = 2

        def obj(x):
            p = PowerSeries(x[: d + 1] + 1j * x[d + 1 :])
            return norm(multiply(p, f, f.degree + d) - 1, alpha) ** 2

        best = minimize(obj, np.zeros(2 * (d + 1)), method="BFGS", options={"gtol": 1e-12})
        r = opa(f, d, alpha)
        assert r.residual ** 2 == pytest.approx(best.fun, abs=1e-8)


@settings(max_examples=100, deadline=None)
@given(
    series(max_degree=5, nonzero=True),
    st.integers(0, 6),
    st.sampled_from(ALPHAS),
    st.complex_numbers(min_magnitude=0.1, max_magnitude=10, allow_nan=False, allow_infinity=False),
)
def test_scaling_covariance(f, d, alpha, lam):
    try:
        r = opa(f, d, alpha)
        rl = opa(f * lam, d, alpha)
    except ConditioningError:
        return
    scale = max(1.0, float(np.max(np.abs(r.coefficients))))
    tol = 1e-12 * max(r.cond, 1.0) * scale
    np.testing.assert_allclose(rl.coefficients, r.coefficients / lam, atol=tol * 10 / abs(lam))
    assert rl.residual == pytest.approx(r.residual, abs=1e-12 * max(r.cond, 1.0))


@settings(max_examples=100, deadline=None)
@given(series(max_degree=5, nonzero=True), st.sampled_from(ALPHAS))
def test_residuals_monotone_and_projection_identity(f, alpha):
    try:
        seq = opa_sequence(f, 8, alpha)
    except ConditioningError:
        return
    res = [r.residual for r in seq]
    for a, b in zip(res, res[1:]):
        assert b <= a + 1e-12 * max(r.cond for r in seq)
    for r in seq:
        assert r.residual <= 1 + 1e-12
        assert r.consistent


def test_projection_identity_relative(rng):
    for alpha in ALPHAS:
        f = random_series(rng, 4)
        for d in range(6):
            r = opa(f, d, alpha)
            proj2 = 1 - np.real(np.vdot(build_gram(f, d, alpha).rhs, r.coefficients))
            assert abs(r.residual ** 2 - proj2) <= 1e-8 * r.residual ** 2 + 1e-13


def test_f_vanishing_at_origin():
    r = opa(P([0, 1]), 3, 0)
    np.testing.assert_array_equal(r.coefficients, 0)
    assert r.residual == 1
    assert "f_vanishes_at_origin" in r.flags


def test_conditioning_error_carries_estimate():
    # (1-z)^8 has a high-order boundary zero; its shifted copies are nearly dependent
    f = P(np.polynomial.polynomial.polypow([1, -1], 8))
    with pytest.raises(ConditioningError) as info:
        opa(f, 40, 0)
    assert info.value.cond > 1e12


def test_residual_tail_bound_from_series():
    f = build_geometric(2, 40)
    r = opa(f, 2, 0)
    assert r.residual_tail_bound is not None
    assert r.residual_tail_bound < 1e-10


def test_noncyclic_bound_examples():
    for alpha in ALPHAS:
        assert noncyclic_lower_bound(0, alpha) == 1
    assert noncyclic_lower_bound(0.9, 0) == pytest.approx(math.sqrt(0.19), rel=1e-14)
    assert noncyclic_lower_bound(0.5, 0) == pytest.approx(math.sqrt(3) / 2, rel=1e-14)
    for r in (0.3, 0.7, 0.95):
        # Dirichlet space: ||k_z||^2 = log(1/(1-|z|^2)) / |z|^2
        expect = r / math.sqrt(-math.log(1 - r * r))
        assert noncyclic_lower_bound(r, 1) == pytest.approx(expect, rel=1e-13)
        assert noncyclic_lower_bound(r * 1j, 1) == pytest.approx(expect, rel=1e-13)
    with pytest.raises(ValueError):
        noncyclic_lower_bound(1.0, 0)


def test_kernel_norm_bracket():
    for alpha in ALPHAS:
        s, tail = kernel_norm_squared(0.99, alpha)
        assert tail >= 0
        assert tail <= 1e-15 * s
    s, tail = kernel_norm_squared(0.9, 0)
    assert s - 1e-14 <= 1 / 0.19 <= s + tail + 1e-14


def test_noncyclic_floor_holds_for_zero_inside_disk():
    floor = noncyclic_lower_bound(0.5, 0)
    res = [r.residual for r in opa_sequence(P([0.5, -1]), 20, 0)]
    assert min(res) >= floor - 1e-12
    # the floor is sharp: residuals approach it
    assert res[-1] - floor < 1e-5


def test_one_minus_z_residuals_strictly_decrease():
    res = [r.residual for r in opa_sequence(P([1, -1]), 15, 0)]
    assert np.all(np.diff(res) < 0)
