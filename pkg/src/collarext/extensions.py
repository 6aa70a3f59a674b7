"""Constructive boundary extensions.

Four recipes, each returning the new metric plus the data needed to verify it:

* convexify_extension: blend the collar slices with a sinh cone so that every
  level set of the boundary distance on the attached side becomes strictly
  convex; the cone stiffness k is found by doubling.
* negative_sect_extension: conformal factor e^{2 phi(s)} on a negatively
  curved collar, with phi convex, increasing, and non-integrable, so the
  result keeps Sect < 0 while the boundary recedes to infinite distance.
* shell_completion: per-shell conformal factors >= 1 that raise every shell
  crossing length to at least 1, forcing divergent path length.
* greene_stretch: per-shell linear stretch of a warped profile driving the
  sampled curvature under prescribed shell targets.
"""

import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .chart import Box, ChartMetric, ScalarField
from .collar import (CollarMetric, ConvexityVerdict, WarpedProfile,
                     convexity_classify, shape_operator_batch)
from .completeness import DivergenceVerdict, radial_length
from .curvature import conformal_metric, conformal_sectional_batch
from .errors import SearchFailureError
from .reports import (BoundSpec, CurvatureReport, _point_block,
                      grid_curvature_report, sample_planes)
from .util import HESS_TOL, K_MAX, quintic_step, quintic_step_integral


# ---------------------------------------------------------------------------
# blend cutoffs


@dataclass(frozen=True, eq=False)
class BlendSpec:
    """Partition of unity phi_h + phi_j = 1 on (0, inf) steering a collar blend.

    phi_h holds the original slices (== 1 up to S/4), phi_j hands over to the
    replacement family (== 1 from S/2 on); phi_h is non-increasing.
    """

    S: float
    phi_h: Callable[[np.ndarray], np.ndarray]
    phi_j: Callable[[np.ndarray], np.ndarray]

    @staticmethod
    def quintic(S: float) -> "BlendSpec":
        if S <= 0:
            raise ValueError("collar depth S must be positive")
        lo = S / 4.0
        width = S / 4.0

        def phi_j(s):
            s = np.asarray(s, dtype=float)
            return quintic_step((s - lo) / width)

        def phi_h(s):
            return 1.0 - phi_j(s)

        return BlendSpec(S=float(S), phi_h=phi_h, phi_j=phi_j)

    def validate(self, n: int = 512, tol: float = 1e-12):
        s = np.linspace(self.S * 1e-6, 2.0 * self.S, n)
        ph = np.asarray(self.phi_h(s), dtype=float)
        pj = np.asarray(self.phi_j(s), dtype=float)
        if np.max(np.abs(ph + pj - 1.0)) > tol:
            raise ValueError("phi_h + phi_j deviates from 1 beyond tolerance")
        if np.any(ph < -tol) or np.any(ph > 1.0 + tol):
            raise ValueError("phi_h leaves [0, 1]")
        head = s <= self.S / 4.0
        if np.any(np.abs(ph[head] - 1.0) > tol):
            raise ValueError("phi_h must be identically 1 on (0, S/4]")
        tail = s >= self.S / 2.0
        if np.any(np.abs(ph[tail]) > tol):
            raise ValueError("phi_h must vanish on [S/2, oo)")
        slopes = np.diff(ph) / np.diff(s)
        if np.any(slopes > 1e-9):
            raise ValueError("phi_h must be non-increasing")
        return self


# ---------------------------------------------------------------------------
# shell bookkeeping


@dataclass(frozen=True)
class ShellPlan:
    """Nested shells: (outer radius t_j, crossing gap q_j), radii increasing."""

    shells: Tuple[Tuple[float, float], ...]

    def __post_init__(self):
        sh = tuple((float(t), float(q)) for t, q in self.shells)
        object.__setattr__(self, "shells", sh)
        if not sh:
            raise ValueError("shell plan is empty")
        radii = [t for t, _ in sh]
        if any(b <= a for a, b in zip(radii, radii[1:])):
            raise ValueError("shell radii must be strictly increasing")
        if any(q <= 0 for _, q in sh):
            raise ValueError("shell gaps must be positive")

    @property
    def radii(self) -> np.ndarray:
        return np.asarray([t for t, _ in self.shells])

    @property
    def gaps(self) -> np.ndarray:
        return np.asarray([q for _, q in self.shells])

    def boundaries(self, start: float = 0.0) -> np.ndarray:
        r = self.radii
        if start >= r[0]:
            raise ValueError("start must lie below the first shell radius")
        return np.concatenate([[float(start)], r])


# ---------------------------------------------------------------------------
# convexifying extension


@dataclass(frozen=True, eq=False)
class ConvexifyExtension:
    collar: CollarMetric
    k: float
    S: float
    blend: BlendSpec
    verdict: ConvexityVerdict
    trace: Tuple[Tuple[float, float], ...]  # (k tried, worst shape eigenvalue)

    def as_chart(self) -> ChartMetric:
        return self.collar.as_chart()


def _blended_collar(collar: CollarMetric, blend: BlendSpec, k: float,
                    s_hi: float, base_matrix: Optional[np.ndarray]) -> CollarMetric:
    d = collar.cross_box.dim
    rk = math.sqrt(k)

    def cross(s, X):
        s = np.asarray(s, dtype=float)
        out = np.zeros((s.shape[0], d, d))
        ph = np.where(s <= 0, 1.0, np.asarray(blend.phi_h(np.maximum(s, 0.0))))
        pj = 1.0 - ph
        mh = ph > 0
        if np.any(mh):
            out[mh] += ph[mh, None, None] * collar.cross_at(s[mh], X[mh])
        mj = pj > 0
        if np.any(mj):
            w = np.sinh(rk * s[mj]) / rk
            if base_matrix is None:
                base = collar.cross_at(np.zeros(int(np.sum(mj))), X[mj])
            else:
                base = np.broadcast_to(base_matrix, (int(np.sum(mj)), d, d))
            out[mj] += (pj[mj] * w)[:, None, None] * base
        return out

    return CollarMetric((collar.s_range[0], s_hi), collar.cross_box, cross,
                        name=f"{collar.name}+sinh(k={k:g})" if collar.name else f"sinh(k={k:g})")


def convexify_extension(
    collar: CollarMetric,
    blend: Optional[BlendSpec] = None,
    boundary_metric: Optional[np.ndarray] = None,
    k_start: float = 1.0,
    k_max: float = K_MAX,
    tol: float = HESS_TOL,
    s_resolution: int = 48,
    x_resolution: int = 7,
) -> ConvexifyExtension:
    """Extend past the boundary so every level {s = c > 0} is strictly convex.

    The attached side carries phi_h(s) h_s + phi_j(s) * sinh(sqrt(k) s)/sqrt(k)
    * g_b, with g_b the boundary slice; the s <= 0 side is untouched.  k is
    doubled from k_start until the sampled shape eigenvalues on
    (0, 3S] are all <= -tol; the search trace is returned.  Needs the input
    slices to be strictly convex already near s = 0 (the blend only takes
    over beyond S/4).
    """
    lo, hi = collar.s_range
    if lo >= 0 or hi <= 0:
        raise ValueError("collar must straddle s = 0")
    S = float(hi)
    if blend is None:
        blend = BlendSpec.quintic(S)
    blend.validate()
    if abs(blend.S - S) > 1e-12 * max(1.0, S):
        raise ValueError("blend depth disagrees with the collar depth")
    if boundary_metric is not None:
        base = np.asarray(boundary_metric, dtype=float)
        probe = collar.cross_box.grid_points(3, margin=0.0)
        H0 = collar.cross_at(np.zeros(probe.shape[0]), probe)
        if np.max(np.abs(H0 - base[None])) > 1e-8 * max(1.0, float(np.max(np.abs(base)))):
            raise ValueError("boundary_metric disagrees with the s = 0 slice")
    else:
        base = None

    s_hi = 3.0 * S
    s_values = np.linspace(s_hi / s_resolution, s_hi, s_resolution)
    trace: List[Tuple[float, float]] = []
    k = float(k_start)
    while k <= k_max:
        candidate = _blended_collar(collar, blend, k, s_hi * 1.25, base)
        verdict = convexity_classify(candidate, s_values, x_resolution, tol=tol)
        worst = verdict.worst_eigenvalue
        trace.append((k, worst))
        if not np.isfinite(worst):
            raise SearchFailureError(
                f"shape eigenvalues overflowed at k = {k:g}; the sinh cone "
                f"exceeds floating range on the verification grid",
                trace=tuple(trace), worst=worst)
        if verdict.strictly:
            return ConvexifyExtension(collar=candidate, k=k, S=S, blend=blend,
                                      verdict=verdict, trace=tuple(trace))
        k *= 2.0
    raise SearchFailureError(
        f"no k <= {k_max:g} made every sampled level strictly convex",
        trace=tuple(trace), worst=trace[-1][1])


# ---------------------------------------------------------------------------
# negatively curved, incomplete-toward-the-boundary extension


def default_negative_phi(s_star: float) -> Callable[[np.ndarray], np.ndarray]:
    """exp(tan(pi (s/s_star - 1/2))) for 0 < s < s_star, zero for s <= 0.

    Smooth at 0 (all derivatives vanish), increasing and convex on (0, s_star),
    and non-integrable against e^phi toward s_star.  The tan argument is
    clamped at 700 to stay inside floating range.
    """
    if s_star <= 0:
        raise ValueError("s_star must be positive")

    def value(s):
        s = np.asarray(s, dtype=float)
        out = np.zeros(s.shape)
        pos = s > 0
        if np.any(pos):
            u = np.minimum(s[pos] / s_star, 1.0 - 1e-12)
            t = np.tan(np.pi * (u - 0.5))
            out[pos] = np.exp(np.minimum(t, 700.0))
        return out

    return value


@dataclass(frozen=True, eq=False)
class NegativeSectReport:
    worst_sect: float
    n_samples: int
    all_negative: bool
    divergence: DivergenceVerdict


@dataclass(frozen=True, eq=False)
class NegativeSectExtension:
    metric: ChartMetric
    base: ChartMetric
    phi: ScalarField
    phi_of_s: Callable[[np.ndarray], np.ndarray]
    s_star: float

    def verify(self, n_points: int = 125, n_planes: int = 8, seed: int = 0,
               s_cap: float = 0.93) -> NegativeSectReport:
        """Sampled Sect < 0 on the attached side plus the radial-length verdict.

        Curvature is evaluated through the conformal law on the base metric,
        on points with 0 < s <= s_cap * s_star; beyond the cap e^{-2 phi}
        underflows and signs become meaningless.
        """
        dom = self.base.domain
        h = self.base.fd_step()
        rng = np.random.default_rng(seed)
        lo = dom.lo_arr + 3.5 * h
        hi = dom.hi_arr - 3.5 * h
        hi[0] = min(hi[0], s_cap * self.s_star)
        lo[0] = max(lo[0], 1e-3 * self.s_star)
        P = lo + (hi - lo) * rng.random((n_points, dom.dim))
        planes = sample_planes(rng, n_points, n_planes, dom.dim)
        X = planes[:, :, 0, :].reshape(-1, dom.dim)
        Y = planes[:, :, 1, :].reshape(-1, dom.dim)
        Pr = np.repeat(P, n_planes, axis=0)
        vals = conformal_sectional_batch(self.base, self.phi, Pr, X, Y)
        worst = float(np.max(vals))
        return NegativeSectReport(
            worst_sect=worst,
            n_samples=int(vals.size),
            all_negative=bool(worst < 0.0),
            divergence=self.completeness_verdict(),
        )

    def completeness_verdict(self) -> DivergenceVerdict:
        return radial_length(self.phi_of_s, self.s_star)


def negative_sect_extension(
    collar: CollarMetric,
    s_star: float,
    phi_of_s: Optional[Callable[[np.ndarray], np.ndarray]] = None,
    check_base: bool = True,
    base_resolution: int = 9,
    seed: int = 0,
) -> NegativeSectExtension:
    """Conformal extension e^{2 phi(s)} h on the collar cut at s = s_star.

    phi must vanish for s <= 0 and be non-decreasing and convex on the
    attached side; violations raise with the offending s.  With the default
    phi the boundary distance integral e^phi diverges, so the attached side
    is complete-toward-s_star while the metric stays negatively curved
    whenever the base collar is.
    """
    lo, hi = collar.s_range
    if not (0 < s_star <= hi):
        raise ValueError("need 0 < s_star within the collar range")
    if phi_of_s is None:
        phi_of_s = default_negative_phi(s_star)

    # Precondition sweep on the profile of phi.
    sneg = np.linspace(lo * 0.999, 0.0, 64)
    vneg = np.asarray(phi_of_s(sneg), dtype=float)
    if np.any(np.abs(vneg) > 0.0):
        bad = float(sneg[int(np.argmax(np.abs(vneg)))])
        raise ValueError(f"phi must vanish on s <= 0; violated at s = {bad:.6g}")
    sg = np.linspace(1e-6 * s_star, 0.93 * s_star, 257)
    vg = np.asarray(phi_of_s(sg), dtype=float)
    d1 = np.diff(vg)
    if np.any(d1 < -1e-12):
        bad = float(sg[1:][int(np.argmin(d1))])
        raise ValueError(f"phi must be non-decreasing; violated at s = {bad:.6g}")
    d2 = np.diff(vg, 2)
    if np.any(d2 < -1e-9 * np.maximum(1.0, np.abs(vg[1:-1]))):
        bad = float(sg[1:-1][int(np.argmin(d2))])
        raise ValueError(f"phi must be convex; violated at s = {bad:.6g}")

    cut = CollarMetric((lo, s_star), collar.cross_box, collar.cross_metric,
                       name=collar.name)
    base = cut.as_chart()
    if check_base:
        rep = grid_curvature_report(base, [BoundSpec.parse("sect < 0")],
                                    resolution=base_resolution, plane_samples=4,
                                    seed=seed)
        if not rep.all_hold():
            v = rep.bound_verdicts[0]
            raise ValueError(
                f"base collar is not negatively curved: sect = {v.worst_value:.6g} "
                f"at {np.array2string(v.worst_point, precision=4)}")

    phi = ScalarField.of_first_coordinate(base.domain, phi_of_s, name="phi")
    g_ext = conformal_metric(base, phi,
                             name=f"e^2phi*{collar.name}" if collar.name else "e^2phi*h")
    return NegativeSectExtension(metric=g_ext, base=base, phi=phi,
                                 phi_of_s=phi_of_s, s_star=float(s_star))


# ---------------------------------------------------------------------------
# shell completion


@dataclass(frozen=True, eq=False)
class ShellCompletion:
    plan: ShellPlan
    c: np.ndarray
    crossing_lengths: np.ndarray

    @property
    def diverges_when_continued(self) -> bool:
        """Every scaled crossing is >= 1, so an unbounded continuation of the
        plan accumulates at least one unit of length per shell."""
        return bool(np.all(self.crossing_lengths >= 1.0 - 1e-12))

    def series_verdict(self):
        from .completeness import shell_series
        return shell_series(self.crossing_lengths)


def shell_completion(plan: ShellPlan) -> ShellCompletion:
    """Per-shell conformal factors c_j = max(1, 1/q_j).

    Algebraically c_j = exp(max(0, -ln q_j)); the reciprocal form keeps
    c_j * q_j exactly 1 for dyadic gaps.  Factors never fall below 1, and a
    shell whose crossing gap was q_j <= 1 gets scaled crossing length 1.
    """
    q = plan.gaps
    c = np.maximum(1.0, 1.0 / q)
    return ShellCompletion(plan=plan, c=c, crossing_lengths=c * q)


# ---------------------------------------------------------------------------
# curvature-decaying stretch


class _StretchMap:
    """Integral of a mollified piecewise-constant slope.

    Slope c(t) equals c_i strictly inside shell i and crosses to c_{i+1} by a
    quintic step inside a window of width w_i centered at the shell boundary;
    outside [b_0, b_n] the end slopes continue.  Forward values are analytic;
    the inverse seeds on a table and polishes with Newton steps.
    """

    def __init__(self, boundaries: np.ndarray, c: np.ndarray, window_frac: float):
        b = np.asarray(boundaries, dtype=float)
        c = np.asarray(c, dtype=float)
        self.b = b
        self.c = c
        widths = np.diff(b)
        n = len(c)
        self.win_lo = np.empty(max(n - 1, 0))
        self.win_hi = np.empty(max(n - 1, 0))
        for i in range(n - 1):
            w = window_frac * min(widths[i], widths[i + 1])
            self.win_lo[i] = b[i + 1] - 0.5 * w
            self.win_hi[i] = b[i + 1] + 0.5 * w
        # Segment edges: plain and window segments alternate.
        edges = [b[0]]
        for i in range(n - 1):
            edges += [self.win_lo[i], self.win_hi[i]]
        edges.append(b[-1])
        self.edges = np.asarray(edges)
        self.S_edges = np.empty(len(edges))
        self.S_edges[0] = b[0]
        for j in range(len(edges) - 1):
            lo, hi = self.edges[j], self.edges[j + 1]
            if j % 2 == 0:  # plain segment with slope c_{j//2}
                self.S_edges[j + 1] = self.S_edges[j] + c[j // 2] * (hi - lo)
            else:  # window j//2
                i = j // 2
                w = hi - lo
                self.S_edges[j + 1] = self.S_edges[j] + 0.5 * w * (c[i] + c[i + 1])
        self._table_t = None
        self._table_S = None

    def slope(self, t):
        t = np.asarray(t, dtype=float)
        out = np.empty(t.shape)
        idx = np.searchsorted(self.edges, t, side="right") - 1
        idx = np.clip(idx, 0, len(self.edges) - 2)
        below = t < self.edges[0]
        above = t >= self.edges[-1]
        plain = (idx % 2 == 0) & ~below & ~above
        out[below] = self.c[0]
        out[above] = self.c[-1]
        out[plain] = self.c[idx[plain] // 2]
        winm = ~plain & ~below & ~above
        if np.any(winm):
            i = idx[winm] // 2
            u = (t[winm] - self.win_lo[i]) / (self.win_hi[i] - self.win_lo[i])
            out[winm] = self.c[i] + (self.c[i + 1] - self.c[i]) * quintic_step(u)
        return out

    def forward(self, t):
        t = np.asarray(t, dtype=float)
        out = np.empty(t.shape)
        idx = np.searchsorted(self.edges, t, side="right") - 1
        idx = np.clip(idx, 0, len(self.edges) - 2)
        below = t < self.edges[0]
        above = t >= self.edges[-1]
        out[below] = self.S_edges[0] + self.c[0] * (t[below] - self.edges[0])
        out[above] = self.S_edges[-1] + self.c[-1] * (t[above] - self.edges[-1])
        mid = ~below & ~above
        plain = (idx % 2 == 0) & mid
        out[plain] = (self.S_edges[idx[plain]]
                      + self.c[idx[plain] // 2] * (t[plain] - self.edges[idx[plain]]))
        winm = mid & ~plain
        if np.any(winm):
            i = idx[winm] // 2
            w = self.win_hi[i] - self.win_lo[i]
            u = (t[winm] - self.win_lo[i]) / w
            out[winm] = (self.S_edges[idx[winm]]
                         + self.c[i] * (t[winm] - self.win_lo[i])
                         + (self.c[i + 1] - self.c[i]) * w * quintic_step_integral(u))
        return out

    def _ensure_table(self):
        if self._table_t is not None:
            return
        parts = [np.asarray([self.edges[0] - 1.0])]
        for j in range(len(self.edges) - 1):
            npts = 257 if j % 2 == 1 else 2
            parts.append(np.linspace(self.edges[j], self.edges[j + 1], npts)[:-1])
        parts.append(np.asarray([self.edges[-1], self.edges[-1] + 1.0]))
        t = np.concatenate(parts)
        self._table_t = t
        self._table_S = self.forward(t)

    def inverse(self, tau):
        tau = np.asarray(tau, dtype=float)
        self._ensure_table()
        lo_S, hi_S = self._table_S[0], self._table_S[-1]
        t = np.interp(np.clip(tau, lo_S, hi_S), self._table_S, self._table_t)
        out_lo = tau < lo_S
        out_hi = tau > hi_S
        t = np.where(out_lo, self._table_t[0] + (tau - lo_S) / self.c[0], t)
        t = np.where(out_hi, self._table_t[-1] + (tau - hi_S) / self.c[-1], t)
        for _ in range(3):
            t = t - (self.forward(t) - tau) / self.slope(t)
        return t


@dataclass(frozen=True, eq=False)
class GreeneVerification:
    per_shell_max: np.ndarray
    eps: np.ndarray
    holds: bool


@dataclass(frozen=True, eq=False)
class GreeneStretch:
    profile: WarpedProfile
    boundaries: np.ndarray
    eps: np.ndarray
    K: np.ndarray
    c: np.ndarray
    boundaries_out: np.ndarray
    stretched: WarpedProfile
    join_windows: Tuple[Tuple[float, float], ...]
    _map: _StretchMap

    def boundary_ratios(self) -> np.ndarray:
        """(stretched shell width) / (original shell width), shell by shell.

        Boundaries are mapped by the exact per-shell linear reparametrization,
        so each ratio equals c_i to rounding; the mollified joins deviate from
        the linear map only inside the reported join windows.
        """
        return np.diff(self.boundaries_out) / np.diff(self.boundaries)

    def verify(self, s_resolution: int = 24, x_resolution: int = 5,
               n_planes: int = 4, seed: int = 0) -> GreeneVerification:
        """Sampled max |Sect| per stretched shell against its target.

        Samples stay strictly between the mollifier windows, where the metric
        is the exact linear stretch of the original shell; inside a window the
        slope is mid-crossing and the curvature is between the two shells'.
        """
        chart = self.stretched.as_chart()
        h = chart.fd_step()
        rng = np.random.default_rng(seed)
        Xg = self.stretched.cross_box.grid_points(x_resolution, margin=4.0 * h)
        n_shells = len(self.c)
        worst = np.empty(n_shells)
        for i in range(n_shells):
            t_lo = self.boundaries[i] if i == 0 else float(self._map.win_hi[i - 1])
            t_hi = self.boundaries[i + 1] if i == n_shells - 1 else float(self._map.win_lo[i])
            lo = float(self._map.forward(np.asarray([t_lo]))[0])
            hi = float(self._map.forward(np.asarray([t_hi]))[0])
            m = max(5.0 * h, 0.01 * (hi - lo))
            svals = np.linspace(lo + m, hi - m, s_resolution)
            pts = np.concatenate(
                [np.column_stack([np.full(Xg.shape[0], sv), Xg]) for sv in svals])
            planes = sample_planes(rng, pts.shape[0], n_planes, chart.dim)
            sect_lo, sect_hi, _, _, _ = _point_block(chart, pts, planes, None)
            worst[i] = float(np.max(np.maximum(np.abs(sect_lo), np.abs(sect_hi))))
        holds = bool(np.all(worst <= self.eps * (1.0 + 1e-4) + 1e-6))
        return GreeneVerification(per_shell_max=worst, eps=self.eps, holds=holds)


def _shell_max_abs_sect(chart: ChartMetric, s_lo: float, s_hi: float,
                        cross_box: Box, s_resolution: int, x_resolution: int,
                        n_planes: int, rng) -> float:
    h = chart.fd_step()
    m = max(3.5 * h, 0.01 * (s_hi - s_lo))
    svals = np.linspace(s_lo + m, s_hi - m, s_resolution)
    Xg = cross_box.grid_points(x_resolution, margin=4.0 * h)
    pts = np.concatenate(
        [np.column_stack([np.full(Xg.shape[0], sv), Xg]) for sv in svals])
    planes = sample_planes(rng, pts.shape[0], n_planes, chart.dim)
    sect_lo, sect_hi, _, _, _ = _point_block(chart, pts, planes, None)
    return float(np.max(np.maximum(np.abs(sect_lo), np.abs(sect_hi))))


def greene_stretch(
    profile: WarpedProfile,
    boundaries,
    eps,
    window_frac: float = 0.05,
    s_resolution: int = 24,
    x_resolution: int = 5,
    n_planes: int = 4,
    seed: int = 0,
) -> GreeneStretch:
    """Stretch each shell [b_{i-1}, b_i] by c_i = ceil(sqrt(K_i / eps_i)).

    K_i is the sampled max |Sect| on shell i of the input warped collar; the
    stretch multiplies lengths by the locally constant c_i, so sectional
    curvature deep inside the stretched shell scales by exactly c_i^{-2}.
    Joins are mollified by a quintic slope blend over a window of
    window_frac times the shorter adjacent shell.  The ceiling is taken with
    a 1e-6 relief so finite-difference noise cannot round an exact integer
    ratio upward.
    """
    if profile.first_power:
        raise ValueError("greene_stretch expects a classical (squared) warp")
    b = np.asarray(boundaries, dtype=float)
    e = np.asarray(eps, dtype=float)
    if b.ndim != 1 or len(b) < 2:
        raise ValueError("need at least two shell boundaries")
    if np.any(np.diff(b) <= 0):
        raise ValueError("shell boundaries must be strictly increasing")
    if len(e) != len(b) - 1:
        raise ValueError("need one curvature target per shell")
    if np.any(e <= 0):
        raise ValueError("curvature targets must be positive")
    lo, hi = profile.s_range
    if b[0] <= lo or b[-1] >= hi:
        raise ValueError("profile range must strictly contain the shells")

    chart = profile.as_chart()
    rng = np.random.default_rng(seed)
    n_shells = len(e)
    K = np.empty(n_shells)
    for i in range(n_shells):
        K[i] = _shell_max_abs_sect(chart, float(b[i]), float(b[i + 1]),
                                   profile.cross_box, s_resolution,
                                   x_resolution, n_planes, rng)
    if not np.all(np.isfinite(K)):
        raise ValueError("non-finite curvature sample on the input shells")

    c = np.maximum(1.0, np.ceil(np.sqrt(K / e) - 1e-6))
    smap = _StretchMap(b, c, window_frac)
    tau = np.empty(len(b))
    tau[0] = b[0]
    for i in range(n_shells):
        tau[i + 1] = tau[i] + c[i] * (b[i + 1] - b[i])

    tiny = 1e-9 * (hi - lo)
    out_lo = float(smap.forward(np.asarray([lo + tiny]))[0])
    out_hi = float(smap.forward(np.asarray([hi - tiny]))[0])

    def F(taus):
        t = smap.inverse(np.asarray(taus, dtype=float))
        return smap.slope(t) * profile.f(t)

    stretched = WarpedProfile(
        s_range=(out_lo, out_hi),
        cross_box=profile.cross_box,
        cross_base=profile.cross_base,
        profile=F,
        name=f"{profile.name}:stretched" if profile.name else "stretched",
    )
    windows = tuple(
        (float(smap.forward(np.asarray([smap.win_lo[i]]))[0]),
         float(smap.forward(np.asarray([smap.win_hi[i]]))[0]))
        for i in range(n_shells - 1))
    return GreeneStretch(profile=profile, boundaries=b, eps=e, K=K, c=c,
                         boundaries_out=tau, stretched=stretched,
                         join_windows=windows, _map=smap)
