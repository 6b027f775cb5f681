"""Pointwise geometry: metrics, symbols, curvature, range scans."""

from __future__ import annotations

import math

import numpy as np
import pytest

import pinchlab as pl
from oracles import christoffel_fd, random_gplane, sectional_fd


def _samplers():
    """(name, model, point sampler) triples for the oracle comparisons."""
    def uhs_pt(rng):
        return np.array([rng.uniform(-2, 2), rng.uniform(-2, 2),
                         math.exp(rng.uniform(-1.0, 1.5))])

    def warped_pt(rng):
        return np.array([rng.uniform(-2, 2), math.exp(rng.uniform(-1.0, 1.5)),
                         rng.uniform(-2, 2)])

    def cone_pt(rng):
        return np.array([rng.uniform(0.4, 7.0), rng.uniform(-3, 3),
                         rng.uniform(-2, 2), math.exp(rng.uniform(-1.0, 1.2))])

    return [
        ("uhs", pl.UpperHalfSpace(3, 1.3), uhs_pt),
        ("warped", pl.WarpedSlice(pl.UpperHalfSpace(2, 1.0), pl.CoshWarp(1.0)), warped_pt),
        ("warped-rate", pl.WarpedSlice(pl.UpperHalfSpace(2, 1.3), pl.CoshWarp(1.3)), warped_pt),
        ("cone-gt", pl.ConeChart(2, pl.GTProfile(2.0, 1.5, 6.0)), cone_pt),
    ]


# ---------------------------------------------------------------------------
# worked examples with pinned values
# ---------------------------------------------------------------------------

def test_half_plane_metric_is_identity_at_unit_height():
    m = pl.UpperHalfSpace(2, 1.0)
    g = pl.metric_at(m, np.array([0.0, 1.0]))
    assert np.allclose(g, np.eye(2), atol=1e-15)


def test_half_plane_symbols_at_unit_height():
    m = pl.UpperHalfSpace(2, 1.0)
    G = pl.christoffel_at(m, np.array([0.0, 1.0]))
    assert G[1, 0, 0] == pytest.approx(1.0, abs=1e-14)   # y-component of x,x
    assert G[0, 0, 1] == pytest.approx(-1.0, abs=1e-14)  # x-component of x,y
    assert G[1, 1, 1] == pytest.approx(-1.0, abs=1e-14)  # y-component of y,y
    # symbols do not depend on the curvature scale
    G13 = pl.christoffel_at(pl.UpperHalfSpace(2, 1.3), np.array([0.0, 1.0]))
    assert np.allclose(G, G13, atol=1e-14)


def test_cone_symbols_match_profile_products():
    # values frozen from exact symbolic differentiation of sinh products
    cone = pl.ConeChart(1, pl.SinhProfile())
    G = pl.christoffel_at(cone, np.array([1.0, 0.2, 0.5]))
    assert G[0, 1, 1] == pytest.approx(-1.813430203923509383834, rel=1e-13)
    assert G[1, 0, 1] == pytest.approx(1.313035285499331303636, rel=1e-13)
    assert G[1, 1, 0] == G[1, 0, 1]


def test_flat_double_symbols_vanish():
    flat = pl.CustomMetricModel(3, lambda x: np.eye(3))
    G = pl.christoffel_at(flat, np.array([0.3, -0.7, 2.0]))
    assert np.max(np.abs(G)) < 1e-9


def test_custom_model_fd_fallback_matches_closed_form():
    target = pl.UpperHalfSpace(3, 1.0)
    double = pl.CustomMetricModel(3, target.metric,
                                  domain_fn=lambda x: x[2] > 0)
    x = np.array([0.4, -1.1, 1.7])
    assert np.allclose(double.christoffel(x), target.christoffel(x),
                       rtol=0, atol=1e-8)


# ---------------------------------------------------------------------------
# finite-difference oracle agreement
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("name,model,sampler", _samplers())
def test_closed_symbols_match_fd_oracle(name, model, sampler):
    rng = np.random.default_rng(11)
    for _ in range(25):
        x = sampler(rng)
        got = model.christoffel(x)
        ref = christoffel_fd(model.metric, x)
        scale = np.maximum(1.0, np.abs(ref))
        assert np.max(np.abs(got - ref) / scale) < 1e-6, f"{name} at {x}"


@pytest.mark.parametrize("name,model,sampler", _samplers())
def test_sectional_matches_fd_oracle_on_random_planes(name, model, sampler):
    rng = np.random.default_rng(23)
    for _ in range(100):
        x = sampler(rng)
        g = model.metric(x)
        u, v = random_gplane(rng, g, model.dim)
        got = pl.sectional_curvature(model, pl.TangentPlane(x, u, v))
        ref = sectional_fd(model.metric, x, u, v)
        assert abs(got - ref) / max(1.0, abs(ref)) < 1e-4, f"{name} at {x}"


# ---------------------------------------------------------------------------
# constant-curvature invariants
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("b", [1.0, 1.3])
def test_half_space_curvature_is_constant(b):
    model = pl.UpperHalfSpace(3, b)
    rng = np.random.default_rng(7)
    for _ in range(50):
        x = np.array([rng.uniform(-3, 3), rng.uniform(-3, 3),
                      math.exp(rng.uniform(-2, 2))])
        u, v = random_gplane(rng, model.metric(x), 3)
        kappa = pl.sectional_curvature(model, pl.TangentPlane(x, u, v))
        assert abs(kappa + b * b) < 1e-8


def test_sinh_cone_curvature_is_minus_one():
    model = pl.ConeChart(2, pl.SinhProfile())
    rng = np.random.default_rng(5)
    for _ in range(50):
        x = np.array([rng.uniform(0.2, 6), rng.uniform(-3, 3),
                      rng.uniform(-2, 2), math.exp(rng.uniform(-1, 1))])
        u, v = random_gplane(rng, model.metric(x), 4)
        kappa = pl.sectional_curvature(model, pl.TangentPlane(x, u, v))
        assert abs(kappa + 1.0) < 1e-8


def test_cosh_warped_slice_recovers_ambient_curvature():
    rng = np.random.default_rng(3)
    for b in (1.0, 1.3):
        model = pl.WarpedSlice(pl.UpperHalfSpace(2, b), pl.CoshWarp(b))
        for _ in range(30):
            x = np.array([rng.uniform(-2, 2), math.exp(rng.uniform(-1, 1)),
                          rng.uniform(-3, 3)])
            u, v = random_gplane(rng, model.metric(x), 3)
            kappa = pl.sectional_curvature(model, pl.TangentPlane(x, u, v))
            assert abs(kappa + b * b) < 1e-8


def test_scan_on_rescaled_half_space():
    model = pl.UpperHalfSpace(4, 1.3)
    grid = pl.GridSpec(
        axes=(np.linspace(-1, 1, 3), np.linspace(-1, 1, 3),
              np.linspace(-0.5, 0.5, 2), np.geomspace(0.5, 2.0, 3)),
        n_random_planes=8,
        seed=42,
    )
    scan = pl.curvature_range_scan(model, grid)
    assert abs(scan.kappa_min + 1.69) < 1e-8
    assert abs(scan.kappa_max + 1.69) < 1e-8


# ---------------------------------------------------------------------------
# scan behaviour
# ---------------------------------------------------------------------------

def _small_cone_grid(seed=0):
    return pl.GridSpec(
        axes=(np.linspace(0.5, 7.0, 7), np.array([0.0]),
              np.array([0.2]), np.array([1.0])),
        n_random_planes=4,
        seed=seed,
    )


def test_scan_is_deterministic():
    model = pl.ConeChart(2, pl.GTProfile(2.0, 1.5, 6.0))
    a = pl.curvature_range_scan(model, _small_cone_grid())
    b = pl.curvature_range_scan(model, _small_cone_grid())
    assert a.kappa_min == b.kappa_min and a.kappa_max == b.kappa_max
    assert all(ka == kb for (_, ka, _), (_, kb, _) in zip(a.samples, b.samples))
    ks_a = [k for _, _, k in a.samples]
    c = pl.curvature_range_scan(model, _small_cone_grid(seed=99))
    ks_c = [k for _, _, k in c.samples]
    assert ks_a != ks_c  # random planes actually depend on the seed


def test_scan_tracks_extrema_locations_and_plane_table():
    model = pl.ConeChart(2, pl.GTProfile(2.0, 1.5, 6.0))
    scan = pl.curvature_range_scan(model, _small_cone_grid())
    assert scan.kappa_min <= scan.kappa_max < 0
    assert model.in_domain(scan.argmin_point) and model.in_domain(scan.argmax_point)
    # recomputing at the recorded argmin reproduces the extreme value
    u, v = scan.argmin_plane
    again = pl.sectional_curvature(model, pl.TangentPlane(scan.argmin_point, u, v))
    assert again == pytest.approx(scan.kappa_min, rel=1e-12)
    assert "c01" in scan.plane_table and "random" in scan.plane_table
    # the (r, x) coordinate planes stay at curvature -1 for every profile
    lo, hi = scan.plane_table["c02"]
    assert abs(lo + 1.0) < 1e-8 and abs(hi + 1.0) < 1e-8


def test_scan_rejects_empty_grid():
    with pytest.raises(pl.ConfigError):
        pl.GridSpec(axes=(np.array([]), np.array([1.0])))


def test_product_warp_reaches_zero_curvature():
    # warp = 1 gives a metric product; planes containing the line are flat
    model = pl.WarpedSlice(pl.UpperHalfSpace(2, 1.0), pl.ConstantProfile(1.0))
    grid = pl.GridSpec(
        axes=(np.linspace(-1, 1, 3), np.geomspace(0.5, 2, 3), np.linspace(-1, 1, 3)),
        n_random_planes=4,
        seed=1,
    )
    scan = pl.curvature_range_scan(model, grid)
    assert abs(scan.kappa_max) < 1e-10
    assert abs(scan.kappa_min + 1.0) < 1e-10


# ---------------------------------------------------------------------------
# errors and domains
# ---------------------------------------------------------------------------

def test_domain_errors():
    m = pl.UpperHalfSpace(2, 1.0)
    with pytest.raises(pl.DomainError):
        pl.metric_at(m, np.array([0.0, 0.0]))
    with pytest.raises(pl.DomainError):
        pl.metric_at(m, np.array([0.0, -1.0]))
    with pytest.raises(pl.DomainError):
        pl.metric_at(m, np.array([0.0, 1.0, 2.0]))
    cone = pl.ConeChart(1, pl.SinhProfile(), r_max=10.0, r_eps=1e-3)
    with pytest.raises(pl.DomainError):
        pl.metric_at(cone, np.array([5e-4, 0.0, 0.0]))
    with pytest.raises(pl.DomainError):
        pl.metric_at(cone, np.array([11.0, 0.0, 0.0]))


def test_degenerate_plane_raises():
    m = pl.UpperHalfSpace(2, 1.0)
    u = np.array([1.0, 2.0])
    with pytest.raises(pl.DegeneratePlaneError):
        pl.sectional_curvature(m, pl.TangentPlane(np.array([0.0, 1.0]), u, 3.0 * u))


def test_metric_positive_definite_check():
    bad = pl.CustomMetricModel(2, lambda x: np.array([[1.0, 0.0], [0.0, -1.0]]))
    with pytest.raises(pl.DomainError):
        pl.metric_at(bad, np.array([0.0, 0.0]))


# ---------------------------------------------------------------------------
# profiles
# ---------------------------------------------------------------------------

def test_profile_derivatives_match_centered_differences():
    pts = np.linspace(0.3, 7.0, 41)
    for fn in (pl.SinhProfile(), pl.CoshWarp(1.0), pl.CoshWarp(1.3),
               pl.GTProfile(2.0, 1.5, 6.0), pl.GTProfile(4.0, 0.5, 2.0)):
        assert pl.functions.check_derivative_consistency(fn, pts) < 1e-6


def test_gt_profile_outer_branches_are_exact():
    prof = pl.GTProfile(2.0, 1.5, 6.0)
    for r in (0.3, 1.0, 1.5):
        assert prof.value(r) == math.sinh(r)
        assert prof.deriv(r) == math.cosh(r)
    for r in (6.0, 7.5, 10.0):
        assert prof.value(r) == 2.0 * math.sinh(r)
        assert prof.deriv(r) == 2.0 * math.cosh(r)
    assert pl.GTProfile(1.0, 1.0, 2.0).value(1.5) == math.sinh(1.5)


def test_gt_profile_matches_symbolic_reference():
    # frozen from exact symbolic differentiation (k=2, r0=1.5, rho=6)
    prof = pl.GTProfile(2.0, 1.5, 6.0)
    expected = {
        2.0: (3.655969447740551673741, 3.957186938005623916927, 4.582074468292751415586),
        3.5: (21.77806654323254240301, 27.95322923872452482885, 37.02685753026845191674),
        5.0: (140.7507294061332063858, 160.1934246427423756428, 154.5392661218773868230),
    }
    for r, (v, d1, d2) in expected.items():
        assert prof.value(r) == pytest.approx(v, rel=1e-13)
        assert prof.deriv(r) == pytest.approx(d1, rel=1e-13)
        assert prof.deriv2(r) == pytest.approx(d2, rel=1e-13)


def test_gt_profile_validation():
    with pytest.raises(ValueError):
        pl.GTProfile(0.5, 1.0, 2.0)
    with pytest.raises(ValueError):
        pl.GTProfile(2.0, 3.0, 2.0)


# ---------------------------------------------------------------------------
# scaled models
# ---------------------------------------------------------------------------

def test_scaled_model_divides_curvature_and_keeps_symbols():
    inner = pl.WarpedSlice(pl.UpperHalfSpace(2, 1.0), pl.CoshWarp(1.0))
    model = pl.ScaledModel(inner, 4.0)
    x = np.array([0.1, 0.9, 0.7])
    assert np.allclose(model.metric(x), 4.0 * inner.metric(x))
    assert np.allclose(model.christoffel(x), inner.christoffel(x))
    u, v = np.array([1.0, 0.0, 0.2]), np.array([0.0, 1.0, -0.1])
    k_in = pl.sectional_curvature(inner, pl.TangentPlane(x, u, v))
    k_sc = pl.sectional_curvature(model, pl.TangentPlane(x, u, v))
    assert k_sc == pytest.approx(k_in / 4.0, rel=1e-12)
    kind, params = model.pack()
    _, inner_params = inner.pack()
    assert params[2] == pytest.approx(4.0 * inner_params[2])
