"""Geodesic integration against closed-form great circles and straight lines."""

import numpy as np
import pytest

from collarext import (
    connect_geodesic,
    curve_length,
    flat_box,
    shoot_batch,
    shoot_geodesic,
    sphere,
)


def test_flat_box_geodesics_are_straight_lines():
    g = flat_box(3, half=4.0)
    p0 = np.array([0.3, -0.2, 0.1])
    v0 = np.array([0.5, 0.25, -0.4])
    path = shoot_geodesic(g, p0, v0, T=2.0, step=1e-3)
    assert not path.exited
    expect = p0[None, :] + path.t[:, None] * v0[None, :]
    assert np.max(np.abs(path.points - expect)) < 1e-10
    assert np.max(np.abs(path.velocities - v0[None, :])) < 1e-12


def test_sphere_equator_is_a_geodesic():
    # Unit-speed start on the equator: phi advances linearly, theta stays put.
    g = sphere(1.0)
    p0 = np.array([np.pi / 2, 0.3])
    v0 = np.array([0.0, 1.0])
    path = shoot_geodesic(g, p0, v0, T=5.0, step=1e-3)
    assert not path.exited
    assert abs(path.points[-1, 0] - np.pi / 2) < 1e-6
    assert abs(path.points[-1, 1] - (0.3 + 5.0)) < 1e-6


def test_sphere_speed_is_conserved():
    g = sphere(2.0)
    p0 = np.array([1.1, 0.7])
    v0 = np.array([0.3, 0.4])
    path = shoot_geodesic(g, p0, v0, T=3.0, step=1e-3)
    speeds = path.speeds(g)
    assert np.max(np.abs(speeds - speeds[0])) < 1e-6


def test_sphere_meridian_exit_time():
    # A meridian leaves the chart at theta = pi - 0.25; the start sits at 0.5.
    g = sphere(1.0)
    path = shoot_geodesic(g, np.array([0.5, 1.0]), np.array([1.0, 0.0]), T=4.0, step=1e-3)
    assert path.exited
    assert path.exit_time == pytest.approx(np.pi - 0.75, abs=2e-3)
    # Recorded states freeze at the exit; none lie outside the chart.
    assert np.all(path.points[:, 0] <= np.pi - 0.25 + 1e-9)


def test_shoot_batch_matches_single_shot():
    g = sphere(1.0)
    P0 = np.array([[1.0, 1.0], [1.3, 2.0]])
    V0 = np.array([[0.2, 0.5], [-0.1, 0.3]])
    Q, V, exited, _ = shoot_batch(g, P0, V0, T=1.5, step=1e-3)
    assert not exited.any()
    for i in range(2):
        path = shoot_geodesic(g, P0[i], V0[i], T=1.5, step=1e-3)
        assert np.max(np.abs(path.points[-1] - Q[i])) < 1e-12
        assert np.max(np.abs(path.velocities[-1] - V[i])) < 1e-12


def test_record_every_thins_but_keeps_endpoint():
    g = flat_box(2, half=5.0)
    p0 = np.array([0.0, 0.0])
    v0 = np.array([1.0, 0.5])
    dense = shoot_geodesic(g, p0, v0, T=1.0, step=1e-3)
    thin = shoot_geodesic(g, p0, v0, T=1.0, step=1e-3, record_every=100)
    assert len(thin.t) < len(dense.t)
    assert np.allclose(thin.points[-1], dense.points[-1])


def test_shoot_geodesic_rejects_nonpositive_time():
    g = flat_box(2, half=1.0)
    with pytest.raises(ValueError):
        shoot_geodesic(g, np.zeros(2), np.ones(2), T=0.0)


def test_connect_geodesic_flat_is_exact():
    g = flat_box(3, half=4.0)
    p0 = np.array([-1.0, 0.5, 0.0])
    p1 = np.array([2.0, -0.5, 1.0])
    res = connect_geodesic(g, p0, p1, T=1.0)
    assert res.converged
    assert res.residual < 1e-8
    assert np.max(np.abs(res.v0 - (p1 - p0))) < 1e-6


def test_connect_geodesic_on_sphere_hits_target():
    g = sphere(1.0)
    p0 = np.array([1.2, 1.0])
    p1 = np.array([1.7, 1.8])
    res = connect_geodesic(g, p0, p1, T=1.0)
    assert res.converged
    assert np.max(np.abs(res.path.points[-1] - p1)) < 1e-6
    # The connecting arc is no shorter than the spherical distance between
    # the endpoints, and close to it for nearby points.
    def unit(p):
        th, ph = p
        return np.array([np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)])

    dist = np.arccos(np.clip(np.dot(unit(p0), unit(p1)), -1.0, 1.0))
    speeds = res.path.speeds(g)
    length = speeds[0] * 1.0
    assert length == pytest.approx(dist, abs=1e-5)


def test_curve_length_circle_arc():
    from collarext import flat_annulus

    g = flat_annulus(1.0)

    def curve(ts):
        return np.stack([np.full_like(ts, 1.5), ts], axis=-1)

    L = curve_length(g, curve, 0.2, 2.2)
    assert L == pytest.approx(1.5 * 2.0, abs=1e-8)


def test_curve_length_reparametrization_invariance():
    g = sphere(1.0)

    def slow(ts):
        return np.stack([np.full_like(ts, np.pi / 2), 0.3 + ts], axis=-1)

    def fast(ts):
        return np.stack([np.full_like(ts, np.pi / 2), 0.3 + ts**2], axis=-1)

    L1 = curve_length(g, slow, 0.0, 1.0)
    L2 = curve_length(g, fast, 0.0, 1.0)
    assert L1 == pytest.approx(1.0, abs=1e-8)
    assert L2 == pytest.approx(1.0, abs=1e-6)


def test_curve_length_rejects_bad_interval():
    g = flat_box(2, half=1.0)
    with pytest.raises(ValueError):
        curve_length(g, lambda ts: np.zeros((len(ts), 2)), 1.0, 1.0)
