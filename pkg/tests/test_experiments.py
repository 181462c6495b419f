import math

import mpmath
import numpy as np
import pytest
from scipy.integrate import trapezoid

from dirichlet_opa.errors import TruncationError
from dirichlet_opa.experiments import (
    EXPERIMENTS,
    certified_singular_inner,
    exp_linear_families,
    exp_prop45_geometric,
    exp_prop45_kernel,
    exp_singular_inner,
    interior_grid,
    polylog,
    singular_inner_distance,
)
from dirichlet_opa.series_core import build_singular_inner, evaluate


def test_polylog_closed_forms():
    v, tail = polylog(-1, 0.25)
    assert v == pytest.approx(4 / 9, rel=1e-14)
    assert tail < 1e-14
    for x in (0.1, 0.5, 0.9, 0.99):
        assert polylog(0, x)[0] == pytest.approx(x / (1 - x), rel=1e-13)
    assert polylog(-2, 0.5)[0] == pytest.approx(6, rel=1e-14)
    with pytest.raises(ValueError):
        polylog(-1, 1.0)


@pytest.mark.parametrize("order", [-2.0, -1.5, -1.0, -0.5, 0.5, 1.0, 2.0])
@pytest.mark.parametrize("x", [0.05, 0.5, 0.98])
def test_polylog_matches_mpmath(order, x):
    v, tail = polylog(order, x)
    ref = float(mpmath.polylog(order, x))
    assert abs(v - ref) <= 1e-13 * abs(ref) + tail


def test_singular_inner_norm_approaches_one():
    # ||g||_0 = 1 because g is inner; partial sums increase toward 1 slowly
    g = build_singular_inner(1.0, 1 << 14).coeffs
    partial = np.cumsum(np.abs(g) ** 2)
    assert np.all(np.diff(partial) >= 0)
    assert partial[-1] < 1
    assert 1 - partial[-1] < 0.02


def test_singular_inner_distance_against_boundary_quadrature():
    # ||g_5 - g||_0^2 = (1/2pi) int |g_5 - g|^2 on the circle, where |g| = 1 a.e.
    c = 1.2
    t = np.linspace(0, 2 * np.pi, 400001)[1:-1]
    z = np.exp(1j * t)
    vals = np.abs(np.exp(-(1 + z) / (c - z)) - np.exp(-(1 + z) / (1 - z))) ** 2
    quad = math.sqrt(trapezoid(vals, t) / (2 * np.pi))
    gn = certified_singular_inner(c)
    g = build_singular_inner(1.0, gn.degree).coeffs
    h2, lo, up = singular_inner_distance(gn, g, -1)
    assert h2 == pytest.approx(quad, abs=1e-4)
    assert h2 == pytest.approx(0.45408, abs=1e-5)
    assert lo <= up <= h2


def test_certified_truncation():
    gn = certified_singular_inner(1.5, tol=1e-10)
    assert gn.tail_bound <= 1e-11
    with pytest.raises(TruncationError):
        certified_singular_inner(1.0001, tol=1e-12, N_cap=1024)
    with pytest.raises(ValueError):
        certified_singular_inner(1.0)


def test_interior_grid():
    z = interior_grid()
    assert z.size == 200
    assert np.abs(z).max() < 1
    assert np.abs(z).min() > 0


def test_singular_inner_report():
    rep = exp_singular_inner(alpha=-1, n_values=[1, 2, 5, 10])
    assert rep.passed
    for r in rep.records:
        assert r["g_n_at_0"] == pytest.approx(math.exp(-1 / (1 + 1 / r["n"])), abs=1e-14)
        assert r["dist_alpha_upper"] <= r["dist_h2"]
        assert r["grid_floor"] <= r["grid_min_modulus"] and r["grid_max_modulus"] < 1
    with pytest.raises(ValueError):
        exp_singular_inner(alpha=0.5)
    with pytest.raises(TruncationError):
        exp_singular_inner(alpha=0, n_values=[50], N=64)


def test_singular_inner_grid_values_match_closed_form():
    for n in (1, 4):
        gn = certified_singular_inner(1 + 1 / n)
        for z in interior_grid()[::7]:
            assert evaluate(gn, z) == pytest.approx(np.exp(-(1 + z) / (1 + 1 / n - z)), abs=1e-10)


def test_singular_inner_distance_decays_slowly():
    # the decay is close to n^{-1/4}, too slow to halve between n = 5 and n = 50
    rep = exp_singular_inner(alpha=0, n_values=[5, 10, 20, 50])
    h2 = rep.column("dist_h2")
    assert np.all(np.diff(h2) < 0)
    slope = np.polyfit(np.log([5, 10, 20, 50]), np.log(h2), 1)[0]
    assert -0.3 < slope < -0.2
    assert h2[-1] / h2[0] > 0.5


def test_linear_families_report():
    rep = exp_linear_families(alpha=0, n_max=4, d_max=10)
    assert rep.passed
    limit = rep.column("residual", family="limit")
    assert limit[1] ** 2 == pytest.approx(1 / 3, abs=1e-14)
    floors = rep.column("floor", family="minus", n=2)
    assert floors[0] == pytest.approx(math.sqrt(3) / 2, rel=1e-14)
    for fam in ("minus", "plus"):
        for n in range(1, 5):
            assert rep.column("f_diff", family=fam, n=n)[0] == pytest.approx(1 / n, abs=1e-15)
    rep2 = exp_linear_families(alpha=2, n_max=2, d_max=5)
    assert "limit_residuals_decreasing" not in rep2.verdict


def test_prop45_kernel_values():
    rep = exp_prop45_kernel(alpha=0, a_seq=[2.0])
    r = rep.records[0]
    assert r["kernel_norm_sq"] == pytest.approx(4 / 3, rel=1e-14)
    assert r["cross_sq"] == pytest.approx(1 / 4, rel=1e-13)
    assert r["Minv_fro_sq_lower"] == pytest.approx(1.5 / 14.0625, rel=1e-15)
    assert r["Minv_fro_sq"] >= r["Minv_fro_sq_lower"]


def test_prop45_kernel_divergence():
    rep = exp_prop45_kernel(alpha=0)
    assert rep.passed
    inv = rep.column("Minv_fro")
    assert np.all(np.diff(inv) > 0)
    assert rep.records[-1]["Minv_fro_sq"] > 1e3
    for alpha in (-1.0, -2.0):
        assert exp_prop45_kernel(alpha=alpha, a_seq=[1 + 1 / n for n in range(1, 60)]).passed
    with pytest.raises(ValueError):
        exp_prop45_kernel(alpha=0.5)
    with pytest.raises(ValueError):
        exp_prop45_kernel(a_seq=[1.0])


def test_prop45_geometric_values():
    rep = exp_prop45_geometric(alpha=1, a_seq=[2.0])
    r = rep.records[0]
    assert r["norm_sq"] == pytest.approx(16 / 9, rel=1e-14)
    assert r["shift_norm_sq"] == pytest.approx(28 / 9, rel=1e-14)
    assert r["polylog"] == pytest.approx(4 / 9, rel=1e-14)
    # the displayed a^4/(a^2-1) lower estimate is evaluated but fails here
    assert r["polylog_displayed_lower"] == pytest.approx(16 / 3)
    assert not r["displayed_lower_holds"]
    assert rep.verdict["polylog_displayed_lower_near_one"]


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
def test_prop45_geometric_identities(alpha):
    rep = exp_prop45_geometric(alpha=alpha, a_seq=[1.01, 1.1, 2.0, 5.0])
    for key in ("norm_polylog_identity", "shift_norm_identity", "cross_identity", "normalized_identities", "polylog_geometric_lower"):
        assert rep.verdict[key], key


def test_prop45_geometric_divergence():
    rep = exp_prop45_geometric(alpha=1)
    assert rep.passed
    assert np.all(np.diff(rep.column("Minv_fro")) > 0)
    with pytest.raises(ValueError):
        exp_prop45_geometric(alpha=0)


def test_reports_are_deterministic():
    for name, fn in EXPERIMENTS.items():
        a = fn().to_dict()
        b = fn().to_dict()
        assert repr(a) == repr(b), name
