"""Coordinate boxes, chart metrics, tangent vectors, and scalar fields.

A metric is represented by its component matrix on an open coordinate box.
Component evaluators are vectorized: they receive an (N, m) array of points
and return (N, m, m) matrices.  Evaluation symmetrizes the result; positive
definiteness is checked by the operations that need it.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

import numpy as np

from .errors import ClearanceError, DefinitenessError, DomainMismatchError
from .util import FD_FRACTION, as_batch


@dataclass(frozen=True, eq=False)
class Box:
    """Open axis-aligned coordinate box (lo_i, hi_i)."""

    lo: Tuple[float, ...]
    hi: Tuple[float, ...]

    def __post_init__(self):
        lo = tuple(float(v) for v in self.lo)
        hi = tuple(float(v) for v in self.hi)
        if len(lo) != len(hi) or not lo:
            raise ValueError("box needs matching nonempty lo/hi tuples")
        for a, b in zip(lo, hi):
            if not np.isfinite(a) or not np.isfinite(b) or not a < b:
                raise ValueError(f"degenerate box side ({a}, {b})")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def dim(self) -> int:
        return len(self.lo)

    @property
    def lo_arr(self) -> np.ndarray:
        return np.asarray(self.lo, dtype=float)

    @property
    def hi_arr(self) -> np.ndarray:
        return np.asarray(self.hi, dtype=float)

    @property
    def sides(self) -> np.ndarray:
        return self.hi_arr - self.lo_arr

    @property
    def shortest_side(self) -> float:
        return float(np.min(self.sides))

    def contains(self, P, margin: float = 0.0) -> np.ndarray:
        """Boolean mask of points lying inside the box with the given clearance."""
        P = as_batch(P, self.dim)
        lo = self.lo_arr + margin
        hi = self.hi_arr - margin
        return np.all((P > lo) & (P < hi), axis=1)

    def require_clearance(self, P, margin: float, what: str = "stencil"):
        P = as_batch(P, self.dim)
        ok = self.contains(P, margin)
        if not np.all(ok):
            bad = P[~ok][0]
            raise ClearanceError(
                f"point {bad.tolist()} lacks the {margin:g} clearance needed by the {what}"
            )

    def grid_axes(self, resolution, margin: float = 0.0):
        """Per-axis sample positions, resolution points each, inset by margin."""
        if np.isscalar(resolution):
            resolution = (int(resolution),) * self.dim
        if len(resolution) != self.dim:
            raise ValueError("resolution must be scalar or one entry per axis")
        axes = []
        for i, n in enumerate(resolution):
            n = int(n)
            if n < 3:
                raise ValueError("grid resolution must be at least 3 per axis")
            axes.append(np.linspace(self.lo[i] + margin, self.hi[i] - margin, n))
        return axes

    def grid_points(self, resolution, margin: float = 0.0) -> np.ndarray:
        """Row-major flattening of the margin-inset grid, shape (prod(res), dim)."""
        axes = self.grid_axes(resolution, margin)
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.reshape(-1) for m in mesh], axis=1)


@dataclass(frozen=True, eq=False)
class ChartMetric:
    """Metric tensor on a coordinate box.

    components maps an (N, dim) array of points to (N, dim, dim) matrices.
    Use vectorize_components to wrap a single-point callable.
    """

    dim: int
    domain: Box
    components: Callable[[np.ndarray], np.ndarray]
    name: str = ""

    def __post_init__(self):
        if self.domain.dim != self.dim:
            raise ValueError("domain dimension disagrees with metric dimension")

    def fd_step(self, override: Optional[float] = None) -> float:
        if override is not None:
            if override <= 0:
                raise ValueError("fd_step must be positive")
            return float(override)
        return FD_FRACTION * self.domain.shortest_side

    def eval(self, P) -> np.ndarray:
        """Symmetrized component matrices at a batch of points, shape (N, dim, dim)."""
        P = as_batch(P, self.dim)
        G = np.asarray(self.components(P), dtype=float)
        if G.shape != (P.shape[0], self.dim, self.dim):
            raise ValueError(
                f"components returned shape {G.shape}, expected {(P.shape[0], self.dim, self.dim)}"
            )
        return 0.5 * (G + np.swapaxes(G, -1, -2))

    def at(self, p) -> np.ndarray:
        """Component matrix at a single point, shape (dim, dim)."""
        return self.eval(np.asarray(p, dtype=float)[None, :])[0]


def require_spd(G: np.ndarray, P: np.ndarray, context: str = "metric"):
    """Raise DefinitenessError when any matrix in the batch fails to be SPD."""
    eig = np.linalg.eigvalsh(G)
    mins = eig[..., 0]
    if np.any(mins <= 0.0):
        idx = int(np.argmin(mins))
        raise DefinitenessError(
            f"{context} is not positive definite at {P[idx].tolist()} "
            f"(smallest eigenvalue {mins[idx]:.3e})",
            point=P[idx].copy(),
            eigenvalue=float(mins[idx]),
        )


def vectorize_components(fn: Callable[[np.ndarray], np.ndarray]):
    """Wrap a single-point metric evaluator into the batched contract."""

    def batched(P):
        P = np.asarray(P, dtype=float)
        return np.stack([np.asarray(fn(p), dtype=float) for p in P], axis=0)

    return batched


def vectorize_scalar(fn: Callable[[np.ndarray], float]):
    """Wrap a single-point scalar evaluator into the batched contract."""

    def batched(P):
        P = np.asarray(P, dtype=float)
        return np.asarray([float(fn(p)) for p in P], dtype=float)

    return batched


def constant_metric(dim: int, matrix, domain: Box, name: str = "") -> ChartMetric:
    M = np.asarray(matrix, dtype=float)
    if M.shape != (dim, dim):
        raise ValueError("constant metric matrix has the wrong shape")

    def comps(P):
        return np.broadcast_to(M, (P.shape[0], dim, dim)).copy()

    return ChartMetric(dim=dim, domain=domain, components=comps, name=name)


@dataclass(frozen=True, eq=False)
class TangentVector:
    """Tangent vector attached to a base point of a chart."""

    base: np.ndarray
    comps: np.ndarray

    def __post_init__(self):
        base = np.asarray(self.base, dtype=float)
        comps = np.asarray(self.comps, dtype=float)
        if base.ndim != 1 or base.shape != comps.shape:
            raise ValueError("base point and components must be 1-d arrays of equal length")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "comps", comps)


def vector_components(X, p=None, dim=None) -> np.ndarray:
    """Coerce a TangentVector or array-like into a component array.

    When p is given, a TangentVector must be based at p.
    """
    if isinstance(X, TangentVector):
        if p is not None and not np.allclose(X.base, np.asarray(p, dtype=float)):
            raise DomainMismatchError("tangent vector is based at a different point")
        out = X.comps
    else:
        out = np.asarray(X, dtype=float)
    if dim is not None and out.shape != (dim,):
        raise ValueError(f"expected a vector of dimension {dim}")
    return out


@dataclass(frozen=True, eq=False)
class ScalarField:
    """Scalar function on a coordinate box; value maps (N, dim) -> (N,)."""

    domain: Box
    value: Callable[[np.ndarray], np.ndarray]
    name: str = ""

    def eval(self, P) -> np.ndarray:
        P = as_batch(P, self.domain.dim)
        v = np.asarray(self.value(P), dtype=float)
        if v.shape != (P.shape[0],):
            raise ValueError(f"scalar field returned shape {v.shape}, expected ({P.shape[0]},)")
        return v

    def at(self, p) -> float:
        return float(self.eval(np.asarray(p, dtype=float)[None, :])[0])

    @staticmethod
    def of_first_coordinate(domain: Box, f, name: str = "") -> "ScalarField":
        """Lift a function of the first coordinate to a field on the box."""

        def value(P):
            return np.asarray(f(P[:, 0]), dtype=float)

        return ScalarField(domain=domain, value=value, name=name)


def same_domain(a: Box, b: Box, tol: float = 0.0):
    if a.dim != b.dim or not (
        np.allclose(a.lo_arr, b.lo_arr, atol=tol) and np.allclose(a.hi_arr, b.hi_arr, atol=tol)
    ):
        raise DomainMismatchError(f"coordinate boxes differ: {a} vs {b}")
