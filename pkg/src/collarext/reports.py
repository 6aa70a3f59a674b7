"""Grid curvature reports: sweep a chart, sample planes, check bounds."""

import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .chart import ChartMetric
from .curvature import (
    plane_weights,
    relative_eigenvalues,
    ricci_batch,
    riemann_batch,
    sectional_values,
)
from .util import PLANE_TOL, as_batch, worker_count

_BOUND_RE = re.compile(
    r"^\s*(sect|ric|scal)\s*(<=|>=|<|>)\s*([-+]?[0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?)\s*$"
)


@dataclass(frozen=True)
class BoundSpec:
    """A pointwise curvature bound such as 'sect < 0' or 'ric >= -2'."""

    quantity: str  # sect | ric | scal
    op: str  # < | <= | > | >=
    threshold: float

    def __post_init__(self):
        if self.quantity not in ("sect", "ric", "scal"):
            raise ValueError(f"unknown bound quantity {self.quantity!r}")
        if self.op not in ("<", "<=", ">", ">="):
            raise ValueError(f"unknown bound operator {self.op!r}")

    @staticmethod
    def parse(text: str) -> "BoundSpec":
        m = _BOUND_RE.match(text)
        if not m:
            raise ValueError(f"cannot parse bound {text!r}; expected e.g. 'sect < 0'")
        return BoundSpec(m.group(1), m.group(2), float(m.group(3)))

    def describe(self) -> str:
        return f"{self.quantity} {self.op} {self.threshold:g}"

    def satisfied(self, values: np.ndarray) -> np.ndarray:
        if self.op == "<":
            return values < self.threshold
        if self.op == "<=":
            return values <= self.threshold
        if self.op == ">":
            return values > self.threshold
        return values >= self.threshold


@dataclass(frozen=True, eq=False)
class BoundVerdict:
    bound: BoundSpec
    holds: bool
    worst_value: float
    worst_point: np.ndarray

    def describe(self) -> str:
        state = "holds" if self.holds else "fails"
        return (
            f"bound '{self.bound.describe()}' {state} "
            f"(worst {self.worst_value:.6g} at {np.round(self.worst_point, 6).tolist()})"
        )


@dataclass(frozen=True, eq=False)
class GridSamples:
    """Per-grid-point aggregates retained for CSV emission (row-major order)."""

    points: np.ndarray  # (N, m)
    sect_lo: np.ndarray  # (N,) min over sampled planes at the point
    sect_hi: np.ndarray  # (N,)
    ric_lo: np.ndarray  # (N,) smallest Ricci eigenvalue relative to g
    ric_hi: np.ndarray  # (N,)
    scal: np.ndarray  # (N,)


@dataclass(frozen=True, eq=False)
class CurvatureReport:
    grid_shape: Tuple[int, ...]
    sect_min: float
    sect_max: float
    ric_eig_min: float
    ric_eig_max: float
    scal_min: float
    scal_max: float
    bound_verdicts: List[BoundVerdict]
    samples: GridSamples
    plane_samples: int
    seed: int

    def all_hold(self) -> bool:
        return all(v.holds for v in self.bound_verdicts)


def sample_planes(rng: np.random.Generator, n_points: int, n_planes: int, dim: int):
    """Euclidean-orthonormalized Gaussian pairs: uniform plane spans, (N, P, 2, m)."""
    raw = rng.standard_normal(size=(n_points, n_planes, 2, dim))
    X = raw[:, :, 0, :]
    Y = raw[:, :, 1, :]
    Xn = X / np.maximum(np.linalg.norm(X, axis=-1, keepdims=True), 1e-300)
    Y = Y - np.einsum("npi,npi->np", Y, Xn)[:, :, None] * Xn
    nY = np.linalg.norm(Y, axis=-1, keepdims=True)
    # A degenerate draw has probability zero; nudge deterministically if it happens.
    tiny = (nY[:, :, 0] < 1e-12)
    if np.any(tiny):
        bump = np.zeros((dim,))
        bump[-1] = 1.0
        Y[tiny] = bump - Xn[tiny] * Xn[tiny][:, -1:]
        nY = np.linalg.norm(Y, axis=-1, keepdims=True)
    Yn = Y / nY
    return np.stack([Xn, Yn], axis=2)


def _coordinate_planes(dim: int) -> List[Tuple[int, int]]:
    return [(i, j) for i in range(dim) for j in range(i + 1, dim)]


def _point_block(g: ChartMetric, P: np.ndarray, planes: np.ndarray, fd_step):
    """Sectional extrema over planes, Ricci eigenvalue range, scalar; one batch."""
    m = g.dim
    R = riemann_batch(g, P, fd_step)
    g0 = g.eval(P)
    ric = ricci_batch(g, P, fd_step)
    ginv = np.linalg.inv(g0)
    scal = np.einsum("njk,njk->n", ginv, ric)
    ric_eig = relative_eigenvalues(ric, g0)

    sect_all = []
    for (i, j) in _coordinate_planes(m):
        X = np.zeros((P.shape[0], m))
        Y = np.zeros((P.shape[0], m))
        X[:, i] = 1.0
        Y[:, j] = 1.0
        sect_all.append(sectional_values(R, g0, X, Y))
    if planes.size:
        nP = planes.shape[1]
        Rb = np.broadcast_to(R[:, None], (R.shape[0], nP) + R.shape[1:])
        gb = np.broadcast_to(g0[:, None], (g0.shape[0], nP) + g0.shape[1:])
        area2, xx, yy, _ = plane_weights(gb, planes[:, :, 0, :], planes[:, :, 1, :])
        ok = area2 > PLANE_TOL * np.maximum(xx * yy, 1e-300)
        num = np.einsum(
            "npijkl,npi,npj,npk,npl->np",
            Rb, planes[:, :, 0, :], planes[:, :, 1, :], planes[:, :, 1, :], planes[:, :, 0, :],
        )
        vals = np.where(ok, num / np.where(ok, area2, 1.0), np.nan)
        for q in range(nP):
            sect_all.append(vals[:, q])
    sect_stack = np.stack(sect_all, axis=1)
    sect_lo = np.nanmin(sect_stack, axis=1)
    sect_hi = np.nanmax(sect_stack, axis=1)
    return sect_lo, sect_hi, ric_eig[:, 0], ric_eig[:, -1], scal


def grid_curvature_report(
    g: ChartMetric,
    bounds: Sequence[Union[str, BoundSpec]],
    resolution: Union[int, Sequence[int]] = 33,
    plane_samples: int = 8,
    seed: int = 0,
    fd_step: Optional[float] = None,
    margin: Optional[float] = None,
    workers: Optional[int] = None,
) -> CurvatureReport:
    """Sweep a margin-inset grid; verify each bound at every sampled value.

    At each grid point the sampled sectional values cover all coordinate planes
    plus plane_samples random 2-planes (orthonormalized Gaussian pairs, seeded).
    'ric' bounds quantify over the eigenvalues of Ricci relative to g, 'scal'
    over scalar curvature.  A bound report names its worst sampled point: the
    extremal value on the side the bound constrains.
    """
    bound_specs = [b if isinstance(b, BoundSpec) else BoundSpec.parse(b) for b in bounds]
    if not bound_specs:
        raise ValueError("bound list is empty; nothing to verify")
    if plane_samples < 0:
        raise ValueError("plane_samples must be nonnegative")

    h = g.fd_step(fd_step)
    inset = margin if margin is not None else 3.5 * h
    axes = g.domain.grid_axes(resolution, inset)
    grid_shape = tuple(len(a) for a in axes)
    P = g.domain.grid_points([len(a) for a in axes], inset)
    n = P.shape[0]

    rng = np.random.default_rng(seed)
    planes = sample_planes(rng, n, plane_samples, g.dim) if plane_samples else np.empty((n, 0, 2, g.dim))

    nw = worker_count(workers)
    chunk = max(64, -(-n // max(nw, 1)))
    pieces = [(P[i:i + chunk], planes[i:i + chunk]) for i in range(0, n, chunk)]
    if nw > 1 and len(pieces) > 1:
        with ThreadPoolExecutor(max_workers=nw) as pool:
            blocks = list(pool.map(lambda t: _point_block(g, t[0], t[1], fd_step), pieces))
    else:
        blocks = [_point_block(g, Pp, pp, fd_step) for Pp, pp in pieces]

    sect_lo = np.concatenate([b[0] for b in blocks])
    sect_hi = np.concatenate([b[1] for b in blocks])
    ric_lo = np.concatenate([b[2] for b in blocks])
    ric_hi = np.concatenate([b[3] for b in blocks])
    scal = np.concatenate([b[4] for b in blocks])

    samples = GridSamples(points=P, sect_lo=sect_lo, sect_hi=sect_hi,
                          ric_lo=ric_lo, ric_hi=ric_hi, scal=scal)

    verdicts = []
    for spec in bound_specs:
        if spec.quantity == "sect":
            lo, hi = sect_lo, sect_hi
        elif spec.quantity == "ric":
            lo, hi = ric_lo, ric_hi
        else:
            lo, hi = scal, scal
        if spec.op in ("<", "<="):
            worst_idx = int(np.argmax(hi))
            worst_val = float(hi[worst_idx])
            holds = bool(np.all(spec.satisfied(hi)) and np.all(spec.satisfied(lo)))
        else:
            worst_idx = int(np.argmin(lo))
            worst_val = float(lo[worst_idx])
            holds = bool(np.all(spec.satisfied(lo)) and np.all(spec.satisfied(hi)))
        verdicts.append(
            BoundVerdict(bound=spec, holds=holds, worst_value=worst_val,
                         worst_point=P[worst_idx].copy())
        )

    return CurvatureReport(
        grid_shape=grid_shape,
        sect_min=float(np.min(sect_lo)),
        sect_max=float(np.max(sect_hi)),
        ric_eig_min=float(np.min(ric_lo)),
        ric_eig_max=float(np.max(ric_hi)),
        scal_min=float(np.min(scal)),
        scal_max=float(np.max(scal)),
        bound_verdicts=verdicts,
        samples=samples,
        plane_samples=plane_samples,
        seed=seed,
    )
