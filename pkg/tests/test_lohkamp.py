"""Conformal bump deformations pushing Ricci curvature below a negative target."""

import numpy as np
import pytest

from collarext import (
    LohkampBump,
    bump_profile,
    deformed_metric,
    lohkamp_ball,
    lohkamp_lower,
    lohkamp_lower_scalar,
)
from collarext.lohkamp import ratio_values


def test_bump_profile_values():
    # chi vanishes through r = 1, so the profile plateaus at s * e^{-d/5}.
    assert bump_profile(np.array([0.0]), 5.0, 1.0)[0] == pytest.approx(np.exp(-1.0), rel=1e-14)
    r = np.array([0.0, 0.5, 1.0])
    v = bump_profile(r, 3.0, 2.0)
    assert np.all(v == v[0])
    assert v[0] == pytest.approx(2.0 * np.exp(-3.0 / 5.0), rel=1e-14)


def test_bump_profile_vanishes_outside_support():
    r = np.array([5.0, 5.5, 100.0])
    assert np.all(bump_profile(r, 2.0, 1.0) == 0.0)
    # Approaching the support edge the value decays to zero smoothly.
    assert bump_profile(np.array([4.999]), 2.0, 1.0)[0] < 1e-300


def test_bump_profile_nonincreasing():
    r = np.linspace(0.0, 5.0, 400)
    v = bump_profile(r, 4.0, 1.0)
    assert np.all(np.diff(v) <= 1e-15)


def test_bump_parameters_validated():
    box = lohkamp_ball(3).domain
    with pytest.raises(ValueError):
        LohkampBump(0.0, 1.0, box)
    with pytest.raises(ValueError):
        LohkampBump(1.0, -1.0, box)


def _radial_oracle(r, d, s_amp, h=1e-5):
    """Ricci eigenvalues of e^{2u} delta on flat R^3 for radial u, via
    Ric'_rr = -2u'' - 2u'/r and Ric'_tan = -u'' - 3u'/r - u'^2, both then
    divided by e^{2u}."""
    u = bump_profile(np.asarray([r]), d, s_amp)[0]
    up = (bump_profile(np.asarray([r + h]), d, s_amp)[0]
          - bump_profile(np.asarray([r - h]), d, s_amp)[0]) / (2 * h)
    upp = (bump_profile(np.asarray([r + h]), d, s_amp)[0]
           - 2 * u
           + bump_profile(np.asarray([r - h]), d, s_amp)[0]) / h**2
    rad = -2 * upp - 2 * up / r
    tan = -upp - 3 * up / r - up**2
    return np.exp(-2 * u) * np.array([rad, tan]), u, up, upp


def test_single_bump_ricci_matches_radial_formula():
    base = lohkamp_ball(3)
    bump = LohkampBump(3.0, 0.5, base.domain)
    dirs = np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0],
                     [1.0, 1.0, 1.0] / np.sqrt(3)])
    for r in (2.2, 3.0, 3.8):
        P = r * dirs
        got = ratio_values(base, [bump], P, "ricci")
        eigs, _, _, _ = _radial_oracle(r, 3.0, 0.5)
        expect = np.max(eigs)
        assert np.max(np.abs(got - expect)) < 1e-4


def test_single_bump_scalar_matches_radial_formula():
    base = lohkamp_ball(3)
    bump = LohkampBump(3.0, 0.5, base.domain)
    P = np.array([[2.5, 0.0, 0.0], [0.0, 0.0, 3.2]])
    got = ratio_values(base, [bump], P, "scalar")
    for i, r in enumerate((2.5, 3.2)):
        _, u, up, upp = _radial_oracle(r, 3.0, 0.5)
        expect = np.exp(-2 * u) * (-4 * upp - 8 * up / r - 2 * up**2)
        assert got[i] == pytest.approx(expect, abs=1e-4)


def test_ratio_values_identity_without_bumps():
    base = lohkamp_ball(3)
    P = np.array([[1.0, 2.0, 0.0], [0.5, -1.0, 3.0]])
    assert np.max(np.abs(ratio_values(base, [], P, "ricci"))) < 1e-8
    assert np.max(np.abs(ratio_values(base, [], P, "scalar"))) < 1e-8


def test_deformed_metric_is_conformal_to_base():
    base = lohkamp_ball(3)
    bumps = [LohkampBump(2.0, 0.3, base.domain), LohkampBump(4.0, 0.7, base.domain)]
    g = deformed_metric(base, bumps)
    P = np.array([[1.0, 1.0, 1.0], [3.0, 0.0, 0.0]])
    r = np.linalg.norm(P, axis=-1)
    u = sum(bump_profile(r, b.d, b.s_amp) for b in bumps)
    expect = np.exp(2.0 * u)[:, None, None] * np.eye(3)[None]
    assert np.max(np.abs(g.eval(P) - expect)) < 1e-14


def test_lohkamp_lower_reaches_negative_target_on_flat_space():
    base = lohkamp_ball(3)
    res = lohkamp_lower(base, -0.1)
    assert res.worst_ratio < -0.1
    assert len(res.bumps) >= 1
    assert res.trace[-1].violations_after == 0
    # Each accepted round left the annulus no worse than the sampling noise.
    for rd in res.trace:
        assert rd.worst_after <= rd.worst_before + 1e-6
    # The returned metric reproduces the reported worst ratio.
    vals = ratio_values(base, list(res.bumps), res.annulus_points, "ricci")
    assert float(np.max(vals)) == pytest.approx(res.worst_ratio, abs=1e-12)
    assert np.all(vals < -0.1)


def test_lohkamp_lower_identity_when_target_already_met():
    base = lohkamp_ball(3)
    res = lohkamp_lower(base, 1.0)
    assert res.bumps == ()
    assert res.s_amp == 0.0
    assert abs(res.worst_ratio) < 1e-8
    assert res.metric is base


def test_lohkamp_lower_scalar_variant():
    base = lohkamp_ball(3)
    res = lohkamp_lower_scalar(base, -0.1)
    vals = ratio_values(base, list(res.bumps), res.annulus_points, "scalar")
    assert np.all(vals < -0.1)


def test_lohkamp_lower_validates_annulus():
    base = lohkamp_ball(3)
    with pytest.raises(ValueError):
        lohkamp_lower(base, -0.1, annulus=(4.0, 2.0))
