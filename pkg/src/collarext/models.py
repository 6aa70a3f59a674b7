"""Built-in model metrics, collars, and groups.

The identifiers here are the stable names accepted by the scenario
runner and printed by the command line catalog.  Chart models avoid
coordinate degeneracies (poles, seams) by construction, so curvature
stencils stay inside the box.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .chart import Box, ChartMetric, constant_metric
from .collar import CollarMetric, WarpedProfile
from .groups import GroupModel


def sphere(radius: float = 1.0) -> ChartMetric:
    """Round 2-sphere of the given radius in polar coordinates.

    Sectional curvature is 1/radius^2 at every point and plane.
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    box = Box((0.25, 0.1), (math.pi - 0.25, 2.0 * math.pi - 0.1))
    r2 = radius * radius

    def components(P):
        G = np.zeros((P.shape[0], 2, 2))
        G[:, 0, 0] = r2
        G[:, 1, 1] = r2 * np.sin(P[:, 0]) ** 2
        return G

    return ChartMetric(
        dim=2, domain=box, components=components, name=f"sphere(r={radius:g})"
    )


def flat_box(m: int = 2, half: float = 1.0) -> ChartMetric:
    """Euclidean identity metric on the cube (-half, half)^m."""
    if m < 2:
        raise ValueError("dimension must be at least 2")
    if half <= 0:
        raise ValueError("half width must be positive")
    box = Box((-half,) * m, (half,) * m)
    return constant_metric(m, np.eye(m), box, name=f"flat_box(m={m})")


def flat_annulus(radius: float = 1.0) -> ChartMetric:
    """Flat plane annulus radius < rho < 2 radius in polar coordinates."""
    if radius <= 0:
        raise ValueError("radius must be positive")
    box = Box((radius, 0.1), (2.0 * radius, 2.0 * math.pi - 0.1))

    def components(P):
        G = np.zeros((P.shape[0], 2, 2))
        G[:, 0, 0] = 1.0
        G[:, 1, 1] = P[:, 0] ** 2
        return G

    return ChartMetric(
        dim=2,
        domain=box,
        components=components,
        name=f"flat_annulus(r={radius:g})",
    )


def lohkamp_ball(m: int = 3) -> ChartMetric:
    """Euclidean chart large enough to hold the radius-5 support ball."""
    if m < 2:
        raise ValueError("dimension must be at least 2")
    box = Box((-5.5,) * m, (5.5,) * m)
    return constant_metric(m, np.eye(m), box, name=f"lohkamp_ball(m={m})")


def hyperbolic_collar() -> CollarMetric:
    """Warp sinh(s+1) over a unit-sphere cross section.

    This is a polar chart of hyperbolic 3-space, so every sectional
    curvature equals -1 exactly; the collar coordinate allows s < 0 so
    extension profiles vanishing on the inside can be tested on it.
    """
    cross = Box((0.25, 0.1), (math.pi - 0.25, 2.0 * math.pi - 0.1))

    def cross_metric(s, X):
        H = np.zeros((X.shape[0], 2, 2))
        w = np.sinh(s + 1.0) ** 2
        H[:, 0, 0] = w
        H[:, 1, 1] = w * np.sin(X[:, 0]) ** 2
        return H

    return CollarMetric(
        s_range=(-0.5, 2.5),
        cross_box=cross,
        cross_metric=cross_metric,
        name="hyperbolic_collar",
    )


def _circle_box() -> Box:
    return Box((0.1,), (6.1,))


def cosh_collar() -> WarpedProfile:
    """Warp cosh(s+1) over a circle; radial curvature -1 everywhere."""
    return WarpedProfile(
        s_range=(-0.5, 3.0),
        cross_box=_circle_box(),
        cross_base=np.array([[1.0]]),
        profile=lambda s: np.cosh(s + 1.0),
        dprofile=lambda s: np.sinh(s + 1.0),
        name="cosh_collar",
    )


def round_collar(radius: float = 1.0) -> WarpedProfile:
    """Warp radius + s over a circle; a flat annulus in collar form."""
    if radius <= 0:
        raise ValueError("radius must be positive")
    return WarpedProfile(
        s_range=(-0.5 * radius, 4.0 * radius),
        cross_box=_circle_box(),
        cross_base=np.array([[1.0]]),
        profile=lambda s: radius + np.asarray(s, dtype=float),
        dprofile=lambda s: np.ones_like(np.asarray(s, dtype=float)),
        name=f"round_collar(r={radius:g})",
    )


def flat_disk_collar() -> WarpedProfile:
    """Warp 1 + s over a circle on -0.5 < s < 0.5.

    Flat, with strictly convex level circles; the stock input for the
    convexifying extension search.
    """
    return WarpedProfile(
        s_range=(-0.5, 0.5),
        cross_box=_circle_box(),
        cross_base=np.array([[1.0]]),
        profile=lambda s: 1.0 + np.asarray(s, dtype=float),
        dprofile=lambda s: np.ones_like(np.asarray(s, dtype=float)),
        name="flat_disk_collar",
    )


@dataclass(frozen=True)
class ModelEntry:
    identifier: str
    kind: str
    description: str


CATALOG: tuple[ModelEntry, ...] = (
    ModelEntry("sphere(r)", "metric", "round 2-sphere of radius r, polar chart"),
    ModelEntry("flat_box(m)", "metric", "Euclidean metric on an m-cube"),
    ModelEntry(
        "flat_annulus(r)", "metric", "flat annulus r < rho < 2r, polar chart"
    ),
    ModelEntry(
        "lohkamp_ball(m)", "metric", "Euclidean chart holding the radius-5 ball"
    ),
    ModelEntry(
        "hyperbolic_collar",
        "collar",
        "sinh(s+1) warp over a unit sphere, curvature -1",
    ),
    ModelEntry(
        "cosh_collar", "profile", "cosh(s+1) warp over a circle, curvature -1"
    ),
    ModelEntry("round_collar(r)", "profile", "r+s warp over a circle, flat"),
    ModelEntry(
        "flat_disk_collar",
        "profile",
        "1+s warp over a circle on (-1/2, 1/2), convex boundary",
    ),
    ModelEntry("free(N)", "group", "free group of rank N"),
    ModelEntry("Zm(m)", "group", "free abelian group of rank m"),
    ModelEntry("heisenberg", "group", "integer Heisenberg group"),
)


_METRICS = {
    "sphere": (sphere, {"radius"}),
    "flat_box": (flat_box, {"m", "half"}),
    "flat_annulus": (flat_annulus, {"radius"}),
    "lohkamp_ball": (lohkamp_ball, {"m"}),
}

_COLLARS = {
    "hyperbolic_collar": (hyperbolic_collar, set()),
}

_PROFILES = {
    "cosh_collar": (cosh_collar, set()),
    "round_collar": (round_collar, {"radius"}),
    "flat_disk_collar": (flat_disk_collar, set()),
}

_GROUPS = {
    "free": (GroupModel.free, {"rank"}),
    "Zm": (GroupModel.abelian, {"rank"}),
    "heisenberg": (GroupModel.heisenberg, set()),
}


def _call(table, name, params, what):
    if name not in table:
        known = ", ".join(sorted(table))
        raise ValueError(f"unknown {what} model {name!r} (known: {known})")
    factory, allowed = table[name]
    extra = set(params) - allowed
    if extra:
        raise ValueError(
            f"model {name!r} does not take parameter(s) {sorted(extra)}"
        )
    return factory(**params)


def build_metric(name: str, **params) -> ChartMetric:
    """Build any chart-level model; collars and profiles are flattened."""
    if name in _METRICS:
        return _call(_METRICS, name, params, "metric")
    if name in _COLLARS:
        return _call(_COLLARS, name, params, "collar").as_chart()
    if name in _PROFILES:
        return _call(_PROFILES, name, params, "profile").as_chart()
    all_known = sorted({**_METRICS, **_COLLARS, **_PROFILES})
    raise ValueError(f"unknown metric model {name!r} (known: {', '.join(all_known)})")


def build_collar(name: str, **params) -> CollarMetric:
    if name in _COLLARS:
        return _call(_COLLARS, name, params, "collar")
    if name in _PROFILES:
        return _call(_PROFILES, name, params, "profile").as_collar()
    known = sorted({**_COLLARS, **_PROFILES})
    raise ValueError(f"unknown collar model {name!r} (known: {', '.join(known)})")


def build_profile(name: str, **params) -> WarpedProfile:
    return _call(_PROFILES, name, params, "profile")


def build_group(name: str, **params) -> GroupModel:
    return _call(_GROUPS, name, params, "group")


def list_models() -> tuple[ModelEntry, ...]:
    """Stable catalog of built-in identifiers; order never changes."""
    return CATALOG
