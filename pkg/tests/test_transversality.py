import math

import numpy as np
import pytest

from curveproj import (
    GeodesicAngle,
    SurfaceModel,
    SurfacePoint,
    analytic_constant_bounds,
    check_definition,
    decomposition,
    distance,
    estimate_constants,
    pair_geometry,
    phi,
    phi_derivative,
    projection_values,
    sample_domain_pairs,
)

# frozen from the closed forms (evaluated independently before the build)
HYP_LOWER_M2 = 0.04995767735009566     # 1 / (sqrt(2) cosh^2 2)
HYP_UPPER_M2 = 1.8134302039235095      # sqrt(2) sqrt(cosh 4 - 1) / 4
SPH_LOWER_M12 = 0.776699238306022      # sqrt(2) sqrt(1 - cos 2.4) / 2.4
SPH_UPPER_M12 = 7.615963967207052      # 1 / cos^2(1.2)
SPH_PAIR_DIST = 1.2745557823062943     # arccos(cos^2 1)


def sample_point(rng, model):
    return SurfacePoint(rng.uniform(0.0, model.domain_radius), rng.uniform(0.0, 2 * math.pi))


def sample_pair(rng, model):
    while True:
        p1 = sample_point(rng, model)
        p2 = sample_point(rng, model)
        if distance(p1, p2, model) > 1e-3:
            return p1, p2


# --- pair geometry and the cosine decomposition -------------------------------


def test_diagonal_pairs_are_rejected():
    model = SurfaceModel(-1.0, 2.0)
    p = SurfacePoint(1.0, 0.0)
    with pytest.raises(ValueError):
        pair_geometry(p, SurfacePoint(1.0, 0.0), model)


def test_pair_with_base_point():
    model = SurfaceModel(-1.0, 2.0)
    g = pair_geometry(SurfacePoint(1.0, math.pi / 2), SurfacePoint(0.0), model)
    assert g.d1 == 1.0 and g.d2 == 0.0
    assert g.d == pytest.approx(1.0, rel=1e-15)
    assert g.td1 == pytest.approx(math.tanh(1.0), rel=1e-15)
    assert g.td2 == 0.0
    assert g.alpha0 == pytest.approx(math.pi / 2)


def test_pair_distance_on_sphere():
    model = SurfaceModel(1.0, 1.3)
    g = pair_geometry(SurfacePoint(1.0, 0.0), SurfacePoint(1.0, math.pi / 2), model)
    assert g.d == pytest.approx(SPH_PAIR_DIST, rel=1e-12)
    assert g.td1 == pytest.approx(math.tan(1.0), rel=1e-15)


def test_decomposition_reduces_to_single_point_for_base_pair():
    model = SurfaceModel(-1.0, 2.0)
    theta1 = 1.1
    g = pair_geometry(SurfacePoint(1.0, theta1), SurfacePoint(0.0), model)
    dec = decomposition(g)
    assert dec.D == pytest.approx(math.tanh(1.0), rel=1e-15)
    assert dec.theta_hat == pytest.approx(theta1, rel=1e-12)


def test_decomposition_symmetric_pair_small_angle():
    model = SurfaceModel(-1.0, 2.0)
    r, a0 = 0.9, 1e-4
    g = pair_geometry(SurfacePoint(r, a0), SurfacePoint(r, 0.0), model)
    dec = decomposition(g)
    assert abs(dec.A) <= math.tanh(r) * a0**2  # tanh r (cos a0 - 1) ~ -a0^2/2
    assert dec.B == pytest.approx(math.tanh(r) * a0, rel=1e-6)


def test_decomposition_phase_stays_in_half_open_interval():
    model = SurfaceModel(0.0, 2.0)
    # collinear pair on the reference ray: B == 0, A > 0 maps to alpha_hat = 2 pi
    g = pair_geometry(SurfacePoint(1.5, 0.0), SurfacePoint(0.5, 0.0), model)
    dec = decomposition(g)
    assert dec.alpha_hat == pytest.approx(2 * math.pi)
    assert 0.0 < dec.alpha_hat <= 2 * math.pi


def test_decomposition_identity_frozen_pair():
    model = SurfaceModel(-1.0, 2.0)
    p1 = SurfacePoint(1.0, math.pi / 3)
    p2 = SurfacePoint(0.5, 0.0)
    dec = decomposition(pair_geometry(p1, p2, model))
    thetas = np.linspace(1e-4, math.pi - 1e-4, 1000)
    x1 = projection_values(thetas, p1.r, p1.phi, model)[1]
    x2 = projection_values(thetas, p2.r, p2.phi, model)[1]
    residual = np.abs((x1 - x2) - dec.D * np.cos(thetas - dec.theta_hat))
    assert float(residual.max()) <= 1e-12


def test_decomposition_identity_sampled(model, rng):
    thetas = np.linspace(1e-4, math.pi - 1e-4, 100)
    worst = 0.0
    for _ in range(100):
        p1, p2 = sample_pair(rng, model)
        dec = decomposition(pair_geometry(p1, p2, model))
        x1 = projection_values(thetas, p1.r, p1.phi, model)[1]
        x2 = projection_values(thetas, p2.r, p2.phi, model)[1]
        residual = np.abs((x1 - x2) - dec.D * np.cos(thetas - dec.theta_hat))
        worst = max(worst, float(residual.max()))
    assert worst <= 1e-10


def test_amplitude_closed_form_hyperbolic(rng):
    model = SurfaceModel(-1.0, 2.0)
    for _ in range(200):
        p1, p2 = sample_pair(rng, model)
        g = pair_geometry(p1, p2, model)
        dec = decomposition(g)
        c1, c2, cd = math.cosh(g.d1), math.cosh(g.d2), math.cosh(g.d)
        want = (2 * cd * c1 * c2 - c1**2 - c2**2) / (c1**2 * c2**2)
        assert dec.A**2 + dec.B**2 == pytest.approx(want, rel=1e-10)


def test_amplitude_closed_form_spherical(rng):
    model = SurfaceModel(1.0, 1.3)
    for _ in range(200):
        p1, p2 = sample_pair(rng, model)
        g = pair_geometry(p1, p2, model)
        dec = decomposition(g)
        c1, c2, cd = math.cos(g.d1), math.cos(g.d2), math.cos(g.d)
        want = (c1**2 + c2**2 - 2 * cd * c1 * c2) / (c1**2 * c2**2)
        assert dec.A**2 + dec.B**2 == pytest.approx(want, rel=1e-10)


# --- the normalized difference Phi --------------------------------------------


def test_phi_peaks_at_the_phase_angle():
    model = SurfaceModel(-1.0, 2.0)
    p1 = SurfacePoint(1.0, 1.1)
    p2 = SurfacePoint(0.0)
    g = pair_geometry(p1, p2, model)
    dec = decomposition(g)
    assert 0.0 < dec.theta_hat < math.pi
    peak = phi(GeodesicAngle(dec.theta_hat), p1, p2, model)
    assert peak == pytest.approx(dec.D / g.d, rel=1e-12)
    assert peak == pytest.approx(math.tanh(1.0), rel=1e-12)  # d = 1 here
    zero = phi(GeodesicAngle((dec.theta_hat + math.pi / 2) % math.pi), p1, p2, model)
    assert abs(zero) <= 1e-12


def test_phi_matches_decomposition_everywhere(model, rng):
    for _ in range(100):
        p1, p2 = sample_pair(rng, model)
        g = pair_geometry(p1, p2, model)
        dec = decomposition(g)
        theta = GeodesicAngle(rng.uniform(0.0, math.pi))
        want = dec.D / g.d * math.cos(theta.theta - dec.theta_hat)
        assert phi(theta, p1, p2, model) == pytest.approx(want, abs=1e-12)


def test_phi_rejects_near_diagonal_pairs():
    model = SurfaceModel(0.0, 2.0)
    with pytest.raises(ValueError):
        phi(GeodesicAngle(1.0), SurfacePoint(1.0, 0.0), SurfacePoint(1.0, 1e-12), model)


def test_phi_derivative_at_the_peak():
    model = SurfaceModel(-1.0, 2.0)
    p1 = SurfacePoint(1.0, 1.1)
    p2 = SurfacePoint(0.3, 0.2)
    g = pair_geometry(p1, p2, model)
    dec = decomposition(g)
    theta = GeodesicAngle(dec.theta_hat % math.pi)
    sign = 1.0 if theta.theta == dec.theta_hat else -1.0  # wrapped by pi flips cos
    first = phi_derivative(theta, p1, p2, model, order=1)
    assert abs(first) <= 1e-12 * dec.D / g.d
    second = phi_derivative(theta, p1, p2, model, order=2)
    assert second == pytest.approx(-sign * dec.D / g.d, rel=1e-12)


def test_phi_derivative_cycles_with_period_four(model, rng):
    p1, p2 = sample_pair(rng, model)
    theta = GeodesicAngle(1.234)
    for order in (1, 2, 3, 4):
        assert phi_derivative(theta, p1, p2, model, order) == pytest.approx(
            phi_derivative(theta, p1, p2, model, order + 4), rel=1e-12
        )
    with pytest.raises(ValueError):
        phi_derivative(theta, p1, p2, model, order=0)


def test_phi_derivative_matches_finite_difference(model, rng):
    h = 1e-5
    for _ in range(200):
        p1, p2 = sample_pair(rng, model)
        g = pair_geometry(p1, p2, model)
        amplitude = decomposition(g).D / g.d
        t = rng.uniform(2 * h, math.pi - 2 * h)
        f = lambda x: phi(GeodesicAngle(x), p1, p2, model)
        fd1 = (f(t + h) - f(t - h)) / (2 * h)
        got1 = phi_derivative(GeodesicAngle(t), p1, p2, model, 1)
        assert abs(got1 - fd1) <= 1e-6 * amplitude
        fd2 = (f(t + h) - 2 * f(t) + f(t - h)) / h**2
        got2 = phi_derivative(GeodesicAngle(t), p1, p2, model, 2)
        assert abs(got2 - fd2) <= 1e-4 * amplitude  # second differences are noisier


# --- constants ----------------------------------------------------------------


def test_analytic_bounds_frozen_values():
    lo, hi = analytic_constant_bounds(SurfaceModel(-1.0, 2.0))
    assert lo == pytest.approx(HYP_LOWER_M2, rel=1e-12)
    assert hi == pytest.approx(HYP_UPPER_M2, rel=1e-12)
    lo, hi = analytic_constant_bounds(SurfaceModel(1.0, 1.2))
    assert lo == pytest.approx(SPH_LOWER_M12, rel=1e-12)
    assert hi == pytest.approx(SPH_UPPER_M12, rel=1e-12)
    assert analytic_constant_bounds(SurfaceModel(0.0, 2.0)) == (1.0, 1.0)


def test_analytic_bounds_scale_with_curvature():
    for k, m in ((-1.0, 2.0), (1.0, 1.2)):
        lo, hi = analytic_constant_bounds(SurfaceModel(k, m))
        for s in (0.5, 2.0):
            lo_s, hi_s = analytic_constant_bounds(SurfaceModel(k / s**2, m * s))
            assert lo_s == pytest.approx(lo / s, rel=1e-12)
            assert hi_s == pytest.approx(hi / s, rel=1e-12)


def test_euclidean_ratio_is_identically_one():
    report = estimate_constants(SurfaceModel(0.0, 2.0), 5000, seed=7)
    assert report.c_hat == pytest.approx(1.0, abs=1e-12)
    assert report.C_hat == pytest.approx(1.0, abs=1e-12)


def test_sampled_ratios_stay_inside_the_analytic_sandwich():
    for model in (SurfaceModel(-1.0, 2.0), SurfaceModel(1.0, 1.2)):
        report = estimate_constants(model, 5000, seed=11)
        assert report.c_analytic < report.c_hat <= report.C_hat < report.C_analytic
        assert report.c_prime < report.c_hat / 10.0
        assert report.sample_count == 5000 and report.seed == 11


def test_estimate_constants_is_deterministic():
    model = SurfaceModel(-1.0, 2.0)
    a = estimate_constants(model, 2000, seed=5)
    b = estimate_constants(model, 2000, seed=5)
    assert (a.c_hat, a.C_hat) == (b.c_hat, b.C_hat)
    c = estimate_constants(model, 2000, seed=6)
    assert (a.c_hat, a.C_hat) != (c.c_hat, c.C_hat)


def test_sampler_rejects_degenerate_domains():
    # every pair in a ball of radius 1e-15 sits below the diagonal cutoff
    with pytest.raises(ValueError):
        sample_domain_pairs(SurfaceModel(0.0, 1e-15), 10, np.random.default_rng(0))


def test_pair_sampler_respects_the_domain(model, rng):
    r1, f1, r2, f2, d = sample_domain_pairs(model, 500, rng)
    for arr in (r1, r2):
        assert float(arr.max()) <= model.domain_radius
        assert float(arr.min()) >= 0.0
    assert float(d.min()) >= 1e-9
    # triangle inequality in the triangle spanned with the base point
    assert np.all(np.abs(r1 - r2) <= d + 1e-12)
    assert np.all(d <= r1 + r2 + 1e-12)


# --- the definition scan -------------------------------------------------------


def test_scan_finds_no_violations(model):
    report = check_definition(model, 500, 200, max_order=4, seed=13)
    assert report.violations == ()
    assert report.theta_count == 200
    assert len(report.derivative_bounds) == 4
    for bound in report.derivative_bounds:
        assert bound <= report.C_hat + 1e-12


def test_transversality_margin_is_structural(model, rng):
    # |Phi| <= c' forces |cos| <= 1/10, hence |dPhi| >= c_hat sqrt(1 - 1/100) > c'
    report = estimate_constants(model, 1000, seed=3)
    floor = report.c_hat * math.sqrt(1.0 - 0.01)
    for _ in range(200):
        p1, p2 = sample_pair(rng, model)
        theta = GeodesicAngle(rng.uniform(0.0, math.pi))
        value = phi(theta, p1, p2, model)
        if abs(value) <= report.c_prime:
            slope = phi_derivative(theta, p1, p2, model, 1)
            assert abs(slope) >= floor > report.c_prime


def test_single_point_derivatives_stay_below_their_limits(model):
    report = check_definition(model, 500, 100, seed=17)
    assert report.point_tilde_derivative_sup <= report.point_tilde_derivative_limit * (1 + 1e-12)
    assert report.point_derivative_sup <= report.point_derivative_limit * (1 + 1e-12)


def test_scan_is_deterministic():
    model = SurfaceModel(1.0, 1.2)
    a = check_definition(model, 300, 100, seed=23)
    b = check_definition(model, 300, 100, seed=23)
    assert a == b
