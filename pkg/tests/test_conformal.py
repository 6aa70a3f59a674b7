"""Conformal change of metric: transformation-law path against direct curvature."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from collarext import (
    Box,
    ChartMetric,
    DegeneratePlaneError,
    DomainMismatchError,
    conformal_metric,
    conformal_sectional,
    conformal_sectional_batch,
    cosh_collar,
    riemann_batch,
    sectional_values,
    sphere,
)
from collarext.chart import ScalarField

from test_curvature import _bump_metric


def _bump_field(domain: Box, seed: int) -> ScalarField:
    rng = np.random.default_rng(seed)
    amp = rng.uniform(0.05, 0.3)
    freq = rng.uniform(0.5, 1.5, size=domain.dim)
    phase = rng.uniform(0.0, 2.0 * np.pi)
    return ScalarField(
        domain=domain,
        value=lambda P: amp * np.sin(P @ freq + phase),
    )


def _law_vs_direct(seed: int, dim: int) -> float:
    box = Box((0.0,) * dim, (1.0,) * dim)
    h = _bump_metric(box, seed, dim)
    phi = _bump_field(box, seed + 1)
    rng = np.random.default_rng(seed + 2)
    n = 6
    P = rng.uniform(0.25, 0.75, size=(n, dim))
    X = rng.standard_normal((n, dim))
    Y = rng.standard_normal((n, dim))
    law = conformal_sectional_batch(h, phi, P, X, Y)
    gp = conformal_metric(h, phi)
    R = riemann_batch(gp, P)
    direct = sectional_values(R, gp.eval(P), X, Y)
    return float(np.max(np.abs(law - direct)))


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), dim=st.sampled_from([2, 3]))
def test_conformal_law_matches_direct_curvature(seed, dim):
    assert _law_vs_direct(seed, dim) < 1e-4


def test_constant_factor_rescales_sectional():
    g = sphere(1.0)
    c = 0.4
    phi = ScalarField(domain=g.domain, value=lambda P: np.full(P.shape[0], c))
    P = np.array([[1.2, 1.0], [1.8, 3.0]])
    X = np.array([[1.0, 0.0], [0.3, 1.0]])
    Y = np.array([[0.0, 1.0], [1.0, 0.2]])
    vals = conformal_sectional_batch(g, phi, P, X, Y)
    # Scaling the metric by e^{2c} divides every sectional curvature by e^{2c}.
    assert np.max(np.abs(vals - np.exp(-2.0 * c) * 1.0)) < 1e-6


def test_conformal_metric_components():
    g = sphere(1.0)
    phi = ScalarField(domain=g.domain, value=lambda P: 0.1 * P[:, 0])
    gp = conformal_metric(g, phi)
    P = np.array([[1.0, 2.0], [0.8, 4.0]])
    expect = np.exp(0.2 * P[:, 0])[:, None, None] * g.eval(P)
    assert np.max(np.abs(gp.eval(P) - expect)) < 1e-14


def test_radial_conformal_factor_on_warped_collar():
    """For phi = phi(s) on ds^2 + f^2 dtheta^2 the radial plane obeys
    sect' = e^{-2 phi} (sect - phi'' - (f'/f) phi')."""
    chart = cosh_collar().as_chart()
    phi = ScalarField.of_first_coordinate(chart.domain, lambda s: 0.3 * s**2)
    svals = np.array([0.0, 0.8, 1.9])
    P = np.stack([svals, np.full_like(svals, 2.0)], axis=-1)
    X = np.tile(np.array([1.0, 0.0]), (3, 1))
    Y = np.tile(np.array([0.0, 1.0]), (3, 1))
    vals = conformal_sectional_batch(chart, phi, P, X, Y)
    dphi = 0.6 * svals
    d2phi = 0.6
    expect = np.exp(-0.6 * svals**2) * (-1.0 - d2phi - np.tanh(svals + 1.0) * dphi)
    assert np.max(np.abs(vals - expect)) < 1e-5


def test_conformal_sectional_single_point_wrapper():
    g = sphere(1.0)
    phi = ScalarField(domain=g.domain, value=lambda P: 0.2 * np.sin(P[:, 1]))
    p = np.array([1.3, 2.5])
    X = np.array([1.0, 0.0])
    Y = np.array([0.0, 1.0])
    one = conformal_sectional(g, phi, p, X, Y)
    batch = conformal_sectional_batch(g, phi, p[None, :], X[None, :], Y[None, :])
    assert one == pytest.approx(float(batch[0]), abs=1e-14)


def test_conformal_rejects_foreign_domain():
    g = sphere(1.0)
    other = Box((0.0, 0.0), (1.0, 1.0))
    phi = ScalarField(domain=other, value=lambda P: np.zeros(P.shape[0]))
    with pytest.raises(DomainMismatchError):
        conformal_metric(g, phi)


def test_conformal_rejects_degenerate_plane():
    g = sphere(1.0)
    phi = ScalarField(domain=g.domain, value=lambda P: np.zeros(P.shape[0]))
    P = np.array([[1.2, 2.0]])
    X = np.array([[1.0, 1.0]])
    with pytest.raises(DegeneratePlaneError):
        conformal_sectional_batch(g, phi, P, X, 2.0 * X)
