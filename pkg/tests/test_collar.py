"""Collar metrics: shape operators, convexity, Riccati comparison, reflection norms."""

import numpy as np
import pytest

from collarext import (
    Box,
    DomainMismatchError,
    WarpedProfile,
    convexity_classify,
    cosh_collar,
    fermi_reflection_norm,
    flat_disk_collar,
    hessian_batch,
    hyperbolic_collar,
    normal_tube_profile,
    riccati_evolve,
    round_collar,
    shape_operator,
    shape_operator_batch,
    warped_reflection_norm,
)
from collarext.chart import ScalarField


def _circle_profile(f, df=None, s_range=(-0.6, 0.6), first_power=False):
    return WarpedProfile(
        s_range=s_range,
        cross_box=Box((0.1,), (6.1,)),
        cross_base=np.array([[1.0]]),
        profile=f,
        dprofile=df,
        first_power=first_power,
    )


def test_shape_eigenvalue_round_collar():
    prof = round_collar(1.0)
    s = np.array([0.0, 0.5, 2.0])
    assert np.allclose(prof.shape_eigenvalue(s), -1.0 / (1.0 + s), atol=1e-12)


def test_shape_eigenvalue_cosh_collar():
    prof = cosh_collar()
    s = np.linspace(-0.4, 2.5, 7)
    assert np.allclose(prof.shape_eigenvalue(s), -np.tanh(s + 1.0), atol=1e-12)


def test_shape_eigenvalue_first_power_halves():
    # h_s = e^{2s} g_b has constant principal curvature -1.
    prof = _circle_profile(lambda s: np.exp(2.0 * s), first_power=True)
    s = np.linspace(-0.5, 0.5, 5)
    assert np.allclose(prof.factor(s), np.exp(2.0 * s))
    assert np.allclose(prof.shape_eigenvalue(s), -1.0, atol=1e-12)


def test_shape_operator_batch_matches_warp_formula():
    collar = hyperbolic_collar()
    X = np.array([[1.0, 1.0], [2.0, 3.0], [0.7, 5.0]])
    for sv in (-0.3, 0.0, 1.5):
        eig = shape_operator_batch(collar, sv, X)
        assert eig.shape == (3, 2)
        # Both principal curvatures equal -coth(s + 1) for the sinh warp.
        assert np.max(np.abs(eig - (-1.0 / np.tanh(sv + 1.0)))) < 1e-6


def test_shape_operator_single_point():
    collar = round_collar(2.0).as_collar()
    spec = shape_operator(collar, 0.5, np.array([1.0]))
    assert spec.eigenvalues.shape == (1,)
    assert spec.max == pytest.approx(-1.0 / 2.5, abs=1e-8)
    assert spec.min == spec.max


def test_shape_operator_agrees_with_covariant_hessian():
    """Level-set shape data matches the tangential Hessian of the s coordinate."""
    g = round_collar(1.0).as_chart()
    P = np.array([[0.3, 1.0], [1.2, 4.0]])
    s_field = ScalarField.of_first_coordinate(g.domain, lambda s: s)
    H = hessian_batch(g, s_field, P)
    # Hess s(theta, theta) = r + s; dividing by h = (r+s)^2 gives 1/(r+s),
    # the negative of the shape eigenvalue.
    for i, p in enumerate(P):
        expect = 1.0 + p[0]
        assert H[i, 1, 1] == pytest.approx(expect, abs=1e-5)
        assert H[i, 0, 0] == pytest.approx(0.0, abs=1e-5)
        lam = float(round_collar(1.0).shape_eigenvalue(p[0]))
        assert H[i, 1, 1] / expect**2 == pytest.approx(-lam, abs=1e-5)


def test_convexity_classify_strict():
    collar = round_collar(1.0).as_collar()
    verdict = convexity_classify(collar, np.linspace(0.0, 2.0, 9))
    assert verdict.convex and verdict.strictly
    assert verdict.worst_eigenvalue == pytest.approx(-1.0 / 3.0, abs=1e-6)
    assert verdict.worst_s == pytest.approx(2.0)
    assert "strictly convex" in verdict.describe()


def test_convexity_classify_concave_side():
    collar = _circle_profile(lambda s: 2.0 - s,
                             lambda s: -np.ones_like(s)).as_collar()
    verdict = convexity_classify(collar, np.linspace(-0.5, 0.5, 5))
    assert not verdict.convex
    assert verdict.worst_eigenvalue > 0
    assert "not convex" in verdict.describe()


def test_convexity_classify_flat_cylinder_is_weakly_convex():
    collar = _circle_profile(lambda s: np.ones_like(np.asarray(s, dtype=float)),
                             lambda s: np.zeros_like(s)).as_collar()
    verdict = convexity_classify(collar, np.array([0.0, 0.25]))
    assert verdict.convex
    assert not verdict.strictly


def test_riccati_flat_closed_form():
    path = riccati_evolve(-1.0, lambda t: 0.0, T=3.0)
    assert not path.blew_up
    expect = -1.0 / (1.0 + path.t)
    assert np.max(np.abs(path.lam - expect)) < 1e-8


def test_riccati_hyperbolic_closed_form():
    s0 = 0.5
    path = riccati_evolve(-1.0 / np.tanh(s0), lambda t: -1.0, T=2.0)
    assert not path.blew_up
    expect = -1.0 / np.tanh(s0 + path.t)
    assert np.max(np.abs(path.lam - expect)) < 1e-8


def test_riccati_spherical_closed_form_and_blowup():
    # lam' = lam^2 + 1 from 0 is tan(t); finite-time blow-up at pi/2.
    path = riccati_evolve(0.0, lambda t: 1.0, T=1.5)
    assert not path.blew_up
    assert np.max(np.abs(path.lam - np.tan(path.t))) < 1e-8

    burst = riccati_evolve(0.0, lambda t: 1.0, T=2.0)
    assert burst.blew_up
    assert abs(burst.blowup_time - np.pi / 2) < 1e-3


def test_riccati_cap_controls_blowup_flag():
    tame = riccati_evolve(0.0, lambda t: 1.0, T=1.5, cap=10.0)
    assert tame.blew_up
    assert np.max(np.abs(tame.lam)) <= 10.0


def test_riccati_rejects_nonpositive_horizon():
    with pytest.raises(ValueError):
        riccati_evolve(0.0, lambda t: 0.0, T=-1.0)


def test_warped_reflection_norm_linear_profile():
    # f = 1 - s gives stretch (1+s)/(1-s), maximized at s_max.
    prof = _circle_profile(lambda s: 1.0 - np.asarray(s, dtype=float),
                           lambda s: -np.ones_like(s))
    assert warped_reflection_norm(prof, s_max=0.5) == pytest.approx(3.0, abs=1e-12)


def test_fermi_reflection_norm_matches_warped_closed_form():
    prof = _circle_profile(lambda s: 1.0 - np.asarray(s, dtype=float),
                           lambda s: -np.ones_like(s))
    direct = fermi_reflection_norm(prof.as_collar(), s_max=0.5)
    assert direct == pytest.approx(3.0, abs=1e-10)


def test_reflection_norm_symmetric_profile_is_isometry():
    prof = _circle_profile(lambda s: np.cosh(s), lambda s: np.sinh(s),
                           s_range=(-1.0, 1.0))
    assert warped_reflection_norm(prof) == pytest.approx(1.0, abs=1e-12)
    assert fermi_reflection_norm(prof.as_collar()) == pytest.approx(1.0, abs=1e-12)


def test_reflection_norm_flattening_family_tends_to_isometry():
    # Shrinking the slope drives the reflection toward an isometry from above.
    norms = []
    for k in range(1, 11):
        a = 2.0**-k
        prof = _circle_profile(lambda s, a=a: 1.0 - a * np.asarray(s, dtype=float),
                               lambda s, a=a: -a * np.ones_like(s))
        norms.append(warped_reflection_norm(prof, s_max=0.5))
    assert all(n > 1.0 for n in norms)
    assert all(n1 > n2 for n1, n2 in zip(norms, norms[1:]))
    assert norms[-1] == pytest.approx(1.0, abs=1e-3)


def test_reflection_norm_validation():
    prof = _circle_profile(lambda s: 1.0 - np.asarray(s, dtype=float),
                           s_range=(0.1, 0.9))
    with pytest.raises(ValueError):
        warped_reflection_norm(prof)
    wide = _circle_profile(lambda s: 1.0 - np.asarray(s, dtype=float))
    with pytest.raises(DomainMismatchError):
        fermi_reflection_norm(wide.as_collar(), s_max=0.7)


def test_normal_tube_profile_round_collar():
    # Flat ambient curvature: the tube eigenvalue follows -1/(r + s0 + t).
    path = normal_tube_profile(round_collar(1.0), s0=0.2, T=1.0)
    expect = -1.0 / (1.2 + path.t)
    assert np.max(np.abs(path.lam - expect)) < 1e-4


def test_normal_tube_profile_cosh_collar():
    path = normal_tube_profile(cosh_collar(), s0=0.0, T=1.5)
    expect = -np.tanh(1.0 + path.t)
    assert np.max(np.abs(path.lam - expect)) < 1e-4


def test_collar_chart_blocks():
    chart = hyperbolic_collar().as_chart()
    p = np.array([[0.7, 1.1, 2.0]])
    G = chart.eval(p)[0]
    w2 = np.sinh(0.7 + 1.0) ** 2
    assert G[0, 0] == pytest.approx(1.0, abs=1e-14)
    assert G[0, 1] == G[1, 0] == 0.0
    assert G[1, 1] == pytest.approx(w2, rel=1e-12)
    assert G[2, 2] == pytest.approx(w2 * np.sin(1.1) ** 2, rel=1e-12)


def test_warped_profile_validates_cross_base_shape():
    with pytest.raises(ValueError):
        WarpedProfile(
            s_range=(-0.5, 0.5),
            cross_box=Box((0.1,), (6.1,)),
            cross_base=np.eye(2),
            profile=lambda s: 1.0 + s,
        )


def test_flat_disk_collar_is_the_stock_convexify_input():
    prof = flat_disk_collar()
    assert prof.s_range == (-0.5, 0.5)
    verdict = convexity_classify(prof.as_collar(), np.array([0.0, 0.25]))
    assert verdict.strictly
