"""Boundary extensions: convexifying blend, negative-curvature conformal factor,
shell completion, and the curvature-decaying stretch."""

import numpy as np
import pytest

from collarext import (
    BlendSpec,
    Box,
    SearchFailureError,
    ShellPlan,
    WarpedProfile,
    convexify_extension,
    cosh_collar,
    default_negative_phi,
    flat_disk_collar,
    greene_stretch,
    hyperbolic_collar,
    negative_sect_extension,
    shape_operator_batch,
    shell_completion,
)


# ---------------------------------------------------------------------------
# blend partitions


def test_quintic_blend_validates():
    blend = BlendSpec.quintic(0.5)
    blend.validate()
    S = 0.5
    s = np.array([S / 8, S / 4, 3 * S / 8, S / 2, S])
    ph = blend.phi_h(s)
    assert ph[0] == pytest.approx(1.0, abs=1e-15)
    assert ph[1] == pytest.approx(1.0, abs=1e-15)
    assert ph[2] == pytest.approx(0.5, abs=1e-12)
    assert ph[3] == pytest.approx(0.0, abs=1e-15)
    assert ph[4] == pytest.approx(0.0, abs=1e-15)


def test_quintic_blend_flat_at_takeover_point():
    # The handover starts with vanishing slope: a 1e-6 step across S/4
    # moves the weights by far less than 1e-4.
    blend = BlendSpec.quintic(0.5)
    lo = float(blend.phi_h(np.array([0.125 - 1e-6]))[0])
    hi = float(blend.phi_h(np.array([0.125 + 1e-6]))[0])
    assert abs(lo - hi) < 1e-4
    assert abs(lo - 1.0) < 1e-4


def test_blend_validate_rejects_broken_partitions():
    with pytest.raises(ValueError):
        BlendSpec.quintic(0.0)
    bad_sum = BlendSpec(S=1.0, phi_h=lambda s: np.ones_like(s),
                        phi_j=lambda s: np.ones_like(s))
    with pytest.raises(ValueError):
        bad_sum.validate()
    # Correct sum but the head is not held at 1.
    bad_head = BlendSpec(
        S=1.0,
        phi_h=lambda s: np.clip(1.0 - np.asarray(s), 0.0, 1.0),
        phi_j=lambda s: 1.0 - np.clip(1.0 - np.asarray(s), 0.0, 1.0),
    )
    with pytest.raises(ValueError):
        bad_head.validate()


# ---------------------------------------------------------------------------
# convexifying extension


def test_convexify_flat_disk_finds_finite_cone():
    ext = convexify_extension(flat_disk_collar().as_collar())
    assert ext.verdict.strictly
    assert ext.k > 1.0
    ks = [k for k, _ in ext.trace]
    assert ks == sorted(ks)
    assert all(b == 2.0 * a for a, b in zip(ks, ks[1:]))
    # Every k before the accepted one failed the strict test.
    for _, worst in ext.trace[:-1]:
        assert worst > -1e-8
    assert ext.trace[-1][0] == ext.k


def test_convexify_pure_cone_region_matches_sinh_rate():
    ext = convexify_extension(flat_disk_collar().as_collar())
    rk = np.sqrt(ext.k)
    X = np.array([[1.0], [3.0]])
    for sv in (0.5, 1.0):
        # phi_j == 1 beyond S/2, so the slice metric is sinh(rk s)/rk * g_b
        # with the warp entering at first power.
        eig = shape_operator_batch(ext.collar, sv, X)
        expect = -0.5 * rk / np.tanh(rk * sv)
        assert np.max(np.abs(eig - expect)) < 1e-6 * max(1.0, abs(expect))


def test_convexify_rejects_one_sided_collar():
    prof = WarpedProfile(
        s_range=(0.1, 1.0),
        cross_box=Box((0.1,), (6.1,)),
        cross_base=np.array([[1.0]]),
        profile=lambda s: 1.0 + np.asarray(s, dtype=float),
    )
    with pytest.raises(ValueError):
        convexify_extension(prof.as_collar())


def test_convexify_rejects_mismatched_blend_depth():
    with pytest.raises(ValueError):
        convexify_extension(flat_disk_collar().as_collar(),
                            blend=BlendSpec.quintic(1.0))


def test_convexify_rejects_wrong_boundary_metric():
    with pytest.raises(ValueError):
        convexify_extension(flat_disk_collar().as_collar(),
                            boundary_metric=np.array([[5.0]]))


def test_convexify_search_failure_carries_trace():
    with pytest.raises(SearchFailureError) as exc:
        convexify_extension(flat_disk_collar().as_collar(), k_max=4.0)
    assert len(exc.value.trace) == 3
    assert exc.value.worst == exc.value.trace[-1][1]


# ---------------------------------------------------------------------------
# negatively curved conformal extension


def test_default_negative_phi_profile():
    phi = default_negative_phi(2.0)
    s = np.array([-1.0, 0.0, 0.5, 1.0, 1.5])
    v = phi(s)
    assert v[0] == 0.0 and v[1] == 0.0
    # Quarter and midpoint values are exp(tan(-pi/4)) and exp(0).
    assert v[2] == pytest.approx(np.exp(-1.0), rel=1e-12)
    assert v[3] == pytest.approx(1.0, rel=1e-12)
    assert np.all(np.diff(v) >= 0)
    with pytest.raises(ValueError):
        default_negative_phi(0.0)


def test_negative_sect_extension_verifies_on_hyperbolic_collar():
    ext = negative_sect_extension(hyperbolic_collar(), s_star=2.0)
    report = ext.verify(n_points=40, n_planes=4, seed=3)
    assert report.all_negative
    assert report.worst_sect < 0
    assert report.n_samples == 160
    assert report.divergence.verdict == "diverges"


def test_negative_sect_rejects_phi_violations():
    collar = hyperbolic_collar()
    with pytest.raises(ValueError, match="vanish"):
        negative_sect_extension(collar, 2.0, phi_of_s=lambda s: np.abs(s))
    with pytest.raises(ValueError, match="non-decreasing"):
        negative_sect_extension(collar, 2.0,
                                phi_of_s=lambda s: np.where(s > 0, -s, 0.0))
    with pytest.raises(ValueError, match="convex"):
        negative_sect_extension(collar, 2.0,
                                phi_of_s=lambda s: np.where(s > 0, np.sqrt(np.maximum(s, 0.0)), 0.0))


def test_negative_sect_rejects_positively_curved_base():
    prof = WarpedProfile(
        s_range=(-0.5, 0.5),
        cross_box=Box((0.1,), (6.1,)),
        cross_base=np.array([[1.0]]),
        profile=lambda s: np.cos(np.asarray(s, dtype=float)),
    )
    with pytest.raises(ValueError, match="not negatively curved"):
        negative_sect_extension(prof.as_collar(), s_star=0.4)


def test_negative_sect_rejects_bad_cut():
    with pytest.raises(ValueError):
        negative_sect_extension(hyperbolic_collar(), s_star=10.0)


# ---------------------------------------------------------------------------
# shell completion


def test_shell_completion_factors():
    plan = ShellPlan(((1.0, 0.5), (2.0, 2.0), (3.0, 0.1), (4.0, 0.25)))
    comp = shell_completion(plan)
    assert np.array_equal(comp.c, np.array([2.0, 1.0, 10.0, 4.0]))
    assert np.allclose(comp.crossing_lengths, np.array([1.0, 2.0, 1.0, 1.0]))
    assert comp.diverges_when_continued
    assert comp.series_verdict().verdict == "diverges"


def test_shell_completion_dyadic_gaps_exact():
    # Dyadic gaps hit the reciprocal exactly: every scaled crossing is 1.0.
    shells = tuple((float(j), 2.0**-j) for j in range(1, 12))
    comp = shell_completion(ShellPlan(shells))
    assert np.all(comp.crossing_lengths == 1.0)
    assert comp.diverges_when_continued


def test_shell_plan_validation():
    with pytest.raises(ValueError):
        ShellPlan(())
    with pytest.raises(ValueError):
        ShellPlan(((2.0, 0.5), (1.0, 0.5)))
    with pytest.raises(ValueError):
        ShellPlan(((1.0, 0.0),))
    plan = ShellPlan(((1.0, 0.5), (2.0, 0.25)))
    assert np.array_equal(plan.boundaries(0.0), np.array([0.0, 1.0, 2.0]))
    with pytest.raises(ValueError):
        plan.boundaries(1.5)


# ---------------------------------------------------------------------------
# curvature-decaying stretch


def test_greene_stretch_on_hyperbolic_shells():
    prof = cosh_collar()
    out = greene_stretch(prof, boundaries=(0.0, 1.0, 2.0, 2.9),
                         eps=(1.0, 0.1, 0.01))
    # |Sect| == 1 on each input shell, so the factors are ceil(1/sqrt(eps)).
    assert np.array_equal(out.c, np.array([1.0, 4.0, 10.0]))
    assert np.max(np.abs(out.boundary_ratios() - out.c)) < 1e-8
    ver = out.verify()
    assert ver.holds
    assert np.all(ver.per_shell_max <= out.eps * (1.0 + 1e-4) + 1e-6)


def test_greene_stretch_identity_when_targets_are_loose():
    prof = cosh_collar()
    out = greene_stretch(prof, boundaries=(0.0, 1.0, 2.0), eps=(2.0, 2.0))
    assert np.array_equal(out.c, np.array([1.0, 1.0]))
    assert np.allclose(out.boundaries_out, out.boundaries)
    s = np.linspace(0.05, 1.95, 31)
    assert np.max(np.abs(out.stretched.f(s) - prof.f(s))) < 1e-9


def test_greene_stretch_validation():
    prof = cosh_collar()
    with pytest.raises(ValueError):
        greene_stretch(prof, boundaries=(0.0, 1.0), eps=(0.1, 0.2))
    with pytest.raises(ValueError):
        greene_stretch(prof, boundaries=(1.0, 0.0), eps=(0.1,))
    with pytest.raises(ValueError):
        greene_stretch(prof, boundaries=(0.0, 5.0), eps=(0.1,))
    with pytest.raises(ValueError):
        greene_stretch(prof, boundaries=(0.0, 1.0), eps=(-0.1,))
    first = WarpedProfile(
        s_range=(-0.5, 3.0),
        cross_box=Box((0.1,), (6.1,)),
        cross_base=np.array([[1.0]]),
        profile=lambda s: np.exp(np.asarray(s, dtype=float)),
        first_power=True,
    )
    with pytest.raises(ValueError, match="squared"):
        greene_stretch(first, boundaries=(0.0, 1.0), eps=(0.1,))
