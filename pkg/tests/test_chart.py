import numpy as np
import pytest

from collarext.chart import (
    Box,
    ChartMetric,
    ScalarField,
    TangentVector,
    constant_metric,
    require_spd,
    vectorize_components,
)
from collarext.errors import ClearanceError, DefinitenessError


def test_box_basic_geometry():
    box = Box((0.0, -1.0), (2.0, 3.0))
    assert box.dim == 2
    assert np.allclose(box.sides, [2.0, 4.0])
    assert box.shortest_side == 2.0


def test_box_rejects_empty_interval():
    with pytest.raises(ValueError):
        Box((0.0, 1.0), (2.0, 1.0))
    with pytest.raises(ValueError):
        Box((0.0,), (1.0, 2.0))


def test_box_contains_with_margin():
    box = Box((0.0,), (1.0,))
    P = np.array([[0.05], [0.5], [0.95]])
    assert np.array_equal(box.contains(P), [True, True, True])
    assert np.array_equal(box.contains(P, margin=0.1), [False, True, False])


def test_require_clearance_raises_near_edge():
    box = Box((0.0, 0.0), (1.0, 1.0))
    with pytest.raises(ClearanceError):
        box.require_clearance(np.array([[0.999, 0.5]]), margin=0.01)
    box.require_clearance(np.array([[0.5, 0.5]]), margin=0.01)


def test_grid_points_row_major_order():
    box = Box((0.0, 10.0), (1.0, 11.0))
    P = box.grid_points((4, 3))
    # first axis varies slowest
    assert P.shape == (12, 2)
    assert np.all(np.diff(P[:3, 1]) > 0)
    assert P[0, 0] == P[1, 0]
    with pytest.raises(ValueError):
        box.grid_points((2, 5))


def test_grid_axes_margin_insets_endpoints():
    box = Box((0.0,), (1.0,))
    (ax,) = box.grid_axes(5, margin=0.1)
    assert ax[0] == pytest.approx(0.1)
    assert ax[-1] == pytest.approx(0.9)
    assert len(ax) == 5


def test_chart_metric_fd_step_uses_shortest_side():
    g = constant_metric(2, np.eye(2), Box((0.0, 0.0), (2.0, 5.0)))
    assert g.fd_step() == pytest.approx(1e-4 * 2.0)
    assert g.fd_step(1e-3) == 1e-3
    with pytest.raises(ValueError):
        g.fd_step(-1.0)


def test_chart_metric_eval_symmetrizes():
    box = Box((0.0, 0.0), (1.0, 1.0))

    def comps(P):
        G = np.zeros((P.shape[0], 2, 2))
        G[:, 0, 0] = 2.0
        G[:, 1, 1] = 3.0
        G[:, 0, 1] = 0.5  # deliberately one-sided
        return G

    g = ChartMetric(dim=2, domain=box, components=comps)
    M = g.at([0.5, 0.5])
    assert M[0, 1] == pytest.approx(0.25)
    assert M[1, 0] == pytest.approx(0.25)


def test_chart_metric_rejects_wrong_shape():
    box = Box((0.0,), (1.0,))
    g = ChartMetric(dim=1, domain=box, components=lambda P: np.ones((3, 3)))
    with pytest.raises(ValueError):
        g.eval(np.array([[0.5]]))


def test_chart_metric_domain_dim_mismatch():
    with pytest.raises(ValueError):
        ChartMetric(
            dim=2,
            domain=Box((0.0,), (1.0,)),
            components=lambda P: np.eye(2)[None],
        )


def test_require_spd_flags_indefinite():
    G = np.array([[[1.0, 0.0], [0.0, -1.0]]])
    with pytest.raises(DefinitenessError):
        require_spd(G, np.array([[0.0, 0.0]]))


def test_vectorize_components_wraps_single_point():
    box = Box((0.0,), (1.0,))
    comps = vectorize_components(lambda p: np.array([[1.0 + p[0]]]))
    g = ChartMetric(dim=1, domain=box, components=comps)
    M = g.eval(np.array([[0.25], [0.5]]))
    assert M[:, 0, 0] == pytest.approx([1.25, 1.5])


def test_scalar_field_of_first_coordinate():
    box = Box((0.0, 0.0), (1.0, 1.0))
    f = ScalarField.of_first_coordinate(box, lambda s: s**2)
    vals = f.eval(np.array([[0.5, 0.9], [0.2, 0.1]]))
    assert vals == pytest.approx([0.25, 0.04])
    assert f.at([0.3, 0.7]) == pytest.approx(0.09)


def test_tangent_vector_shape_validation():
    with pytest.raises(ValueError):
        TangentVector(base=np.zeros(2), comps=np.zeros(3))
