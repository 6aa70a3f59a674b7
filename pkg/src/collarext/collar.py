"""Collar metrics ds^2 + h_s near a boundary face {s = 0}.

The first chart coordinate is the signed boundary distance s (negative inside
the original manifold, positive on the attached side).  Cross-section metrics
h_s act on the remaining coordinates.  The shape operator of a level {s = c},
computed with respect to the inward normal -d/ds, is

    S = -(1/2) h_s^{-1} (d h_s / d s),

so a level set is convex (in the sense used throughout: second fundamental
form of the boundary as seen from the extension) when all eigenvalues are
negative.  For a warped product h_s = f(s)^2 g_b the eigenvalues are all
-f'(s)/f(s).
"""

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .chart import Box, ChartMetric
from .curvature import relative_eigenvalues
from .errors import DomainMismatchError
from .util import BLOWUP_CAP, CONVEX_TOL, as_batch


@dataclass(frozen=True, eq=False)
class CollarMetric:
    """ds^2 + h_s on s_range x cross_box.

    cross_metric(s_values, X) takes s (n,) and cross points X (n, m-1) and
    returns (n, m-1, m-1) matrices h_{s}(x).
    """

    s_range: tuple
    cross_box: Box
    cross_metric: Callable[[np.ndarray, np.ndarray], np.ndarray]
    name: str = ""

    def __post_init__(self):
        lo, hi = self.s_range
        if not (np.isfinite(lo) and np.isfinite(hi) and lo < hi):
            raise ValueError("s_range must be a finite nonempty interval")

    @property
    def dim(self) -> int:
        return self.cross_box.dim + 1

    @property
    def domain(self) -> Box:
        return Box((self.s_range[0], *self.cross_box.lo),
                   (self.s_range[1], *self.cross_box.hi))

    def cross_at(self, s, X) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        X = as_batch(X, self.cross_box.dim)
        if s.ndim == 0:
            s = np.full(X.shape[0], float(s))
        H = np.asarray(self.cross_metric(s, X), dtype=float)
        d = self.cross_box.dim
        if H.shape != (X.shape[0], d, d):
            raise ValueError(f"cross metric returned shape {H.shape}, "
                             f"expected {(X.shape[0], d, d)}")
        return 0.5 * (H + np.swapaxes(H, -1, -2))

    def as_chart(self, name: Optional[str] = None) -> ChartMetric:
        """Full chart metric: block diag(1, h_s(x)) over (s, x)."""
        d = self.cross_box.dim

        def components(P):
            P = np.asarray(P, dtype=float)
            H = self.cross_at(P[:, 0], P[:, 1:])
            G = np.zeros((P.shape[0], d + 1, d + 1))
            G[:, 0, 0] = 1.0
            G[:, 1:, 1:] = H
            return G

        return ChartMetric(
            dim=d + 1,
            domain=self.domain,
            components=components,
            name=self.name if name is None else name,
        )


@dataclass(frozen=True, eq=False)
class WarpedProfile:
    """Collar with h_s = f(s)^2 g_b for a scalar profile f > 0.

    When first_power is set the profile multiplies the cross metric once,
    h_s = f(s) g_b, which is the natural reading for profiles that are
    already squared (sinh-type comparison shells enter this way).
    """

    s_range: tuple
    cross_box: Box
    cross_base: np.ndarray
    profile: Callable[[np.ndarray], np.ndarray]
    dprofile: Optional[Callable[[np.ndarray], np.ndarray]] = None
    first_power: bool = False
    name: str = ""

    def __post_init__(self):
        base = np.asarray(self.cross_base, dtype=float)
        d = self.cross_box.dim
        if base.shape != (d, d):
            raise ValueError(f"cross_base must be {d}x{d}")
        object.__setattr__(self, "cross_base", 0.5 * (base + base.T))

    def f(self, s) -> np.ndarray:
        return np.asarray(self.profile(np.asarray(s, dtype=float)), dtype=float)

    def df(self, s, h: float = 1e-6) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        if self.dprofile is not None:
            return np.asarray(self.dprofile(s), dtype=float)
        return (self.f(s + h) - self.f(s - h)) / (2.0 * h)

    def factor(self, s) -> np.ndarray:
        f = self.f(s)
        return f if self.first_power else f * f

    def as_collar(self) -> CollarMetric:
        def cross(s, X):
            return self.factor(s)[:, None, None] * self.cross_base[None, :, :]

        return CollarMetric(self.s_range, self.cross_box, cross, name=self.name)

    def as_chart(self) -> ChartMetric:
        return self.as_collar().as_chart()

    def shape_eigenvalue(self, s) -> np.ndarray:
        """All shape eigenvalues coincide: -(1/2) (factor)'/factor."""
        s = np.asarray(s, dtype=float)
        f = self.f(s)
        df = self.df(s)
        if self.first_power:
            return -0.5 * df / f
        return -df / f


@dataclass(frozen=True)
class ShapeSpectrum:
    s: float
    x: np.ndarray
    eigenvalues: np.ndarray

    @property
    def max(self) -> float:
        return float(np.max(self.eigenvalues))

    @property
    def min(self) -> float:
        return float(np.min(self.eigenvalues))


def shape_operator_batch(collar: CollarMetric, s, X, ds: float = 1e-5) -> np.ndarray:
    """Eigenvalues of S = -(1/2) h^{-1} dh/ds at each (s_i, x_i), shape (n, m-1).

    Solved as the symmetric generalized problem (-(1/2) dh) v = lam h v.
    """
    s = np.asarray(s, dtype=float)
    X = as_batch(X, collar.cross_box.dim)
    if s.ndim == 0:
        s = np.full(X.shape[0], float(s))
    H0 = collar.cross_at(s, X)
    dH = (collar.cross_at(s + ds, X) - collar.cross_at(s - ds, X)) / (2.0 * ds)
    return relative_eigenvalues(-0.5 * dH, H0)


def shape_operator(collar: CollarMetric, s: float, x, ds: float = 1e-5) -> ShapeSpectrum:
    x = np.asarray(x, dtype=float)
    eig = shape_operator_batch(collar, float(s), x[None, :], ds)[0]
    return ShapeSpectrum(s=float(s), x=x, eigenvalues=eig)


@dataclass(frozen=True)
class ConvexityVerdict:
    convex: bool
    strictly: bool
    worst_eigenvalue: float
    worst_s: float
    worst_x: np.ndarray

    def describe(self) -> str:
        kind = ("strictly convex" if self.strictly
                else "convex" if self.convex else "not convex")
        return (f"{kind}: worst shape eigenvalue {self.worst_eigenvalue:.6g} "
                f"at s={self.worst_s:.6g}")


def convexity_classify(
    collar: CollarMetric,
    s_values,
    x_resolution: int = 9,
    tol: float = CONVEX_TOL,
    ds: float = 1e-5,
) -> ConvexityVerdict:
    """Classify level sets over the sampled s values and a cross grid.

    Strict convexity requires every eigenvalue <= -tol; eigenvalues within
    [-tol, tol] of zero still count as (weakly) convex.
    """
    s_values = np.atleast_1d(np.asarray(s_values, dtype=float))
    Xg = collar.cross_box.grid_points(x_resolution, margin=0.0)
    worst = -np.inf
    wh_s = float(s_values[0])
    wh_x = Xg[0]
    for sv in s_values:
        eig = shape_operator_batch(collar, float(sv), Xg, ds)
        mx = float(np.max(eig))
        if mx > worst:
            worst = mx
            wh_s = float(sv)
            wh_x = Xg[int(np.argmax(np.max(eig, axis=1)))]
    return ConvexityVerdict(
        convex=bool(worst <= tol),
        strictly=bool(worst <= -tol),
        worst_eigenvalue=worst,
        worst_s=wh_s,
        worst_x=np.asarray(wh_x, dtype=float),
    )


@dataclass(frozen=True, eq=False)
class RiccatiPath:
    t: np.ndarray
    lam: np.ndarray
    blew_up: bool
    blowup_time: Optional[float]


def riccati_evolve(
    lam0: float,
    K: Callable[[float], float],
    T: float,
    step: float = 1e-4,
    cap: float = BLOWUP_CAP,
) -> RiccatiPath:
    """Integrate lam' = lam^2 + K(t) from lam(0) = lam0 by RK4.

    Stops early and flags blow-up once |lam| exceeds cap.  Tracks principal
    curvature evolution along a normal geodesic with ambient sectional
    curvature K(t) in the plane.
    """
    if T <= 0:
        raise ValueError("need T > 0")
    n = int(np.ceil(T / step))
    ts = [0.0]
    ys = [float(lam0)]
    t = 0.0
    y = float(lam0)

    def rhs(tt, yy):
        return yy * yy + float(K(tt))

    for _ in range(n):
        dt = min(step, T - t)
        k1 = rhs(t, y)
        k2 = rhs(t + 0.5 * dt, y + 0.5 * dt * k1)
        k3 = rhs(t + 0.5 * dt, y + 0.5 * dt * k2)
        k4 = rhs(t + dt, y + dt * k3)
        y = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t = t + dt
        if not np.isfinite(y) or abs(y) > cap:
            return RiccatiPath(
                t=np.asarray(ts), lam=np.asarray(ys),
                blew_up=True, blowup_time=t,
            )
        ts.append(t)
        ys.append(y)
        if t >= T - 1e-15:
            break
    return RiccatiPath(t=np.asarray(ts), lam=np.asarray(ys),
                       blew_up=False, blowup_time=None)


def fermi_reflection_norm(
    collar: CollarMetric,
    s_max: Optional[float] = None,
    n_s: int = 64,
    x_resolution: int = 7,
) -> float:
    """Operator norm of the collar reflection s -> -s, as a Lipschitz bound.

    sup over sampled (s, x) with s in (0, s_max] of the largest stretch factor
    sqrt(lam_max(h_s^{-1} h_{-s})), floored at 1 (the ds direction is
    isometric).  Warped profiles admit the closed form
    max(1, sup f(-s)/f(s)).
    """
    lo, hi = collar.s_range
    if s_max is None:
        s_max = min(hi, -lo)
    if s_max <= 0:
        raise ValueError("collar must straddle s = 0 to reflect")
    if s_max > hi or -s_max < lo:
        raise DomainMismatchError("reflection range exceeds the collar")
    svals = np.linspace(s_max / n_s, s_max, n_s)
    Xg = collar.cross_box.grid_points(x_resolution, margin=0.0)
    worst = 1.0
    for sv in svals:
        s_arr = np.full(Xg.shape[0], sv)
        Hp = collar.cross_at(s_arr, Xg)
        Hm = collar.cross_at(-s_arr, Xg)
        if np.array_equal(Hp, Hm):
            continue
        lam = relative_eigenvalues(Hm, Hp)
        worst = max(worst, float(np.sqrt(np.max(lam))))
    return worst


def warped_reflection_norm(profile: WarpedProfile, s_max: Optional[float] = None,
                           n_s: int = 2048) -> float:
    """Closed-form reflection norm for a warped profile: max(1, sup f(-s)/f(s))."""
    lo, hi = profile.s_range
    if s_max is None:
        s_max = min(hi, -lo)
    if s_max <= 0:
        raise ValueError("profile range must straddle s = 0")
    svals = np.linspace(s_max / n_s, s_max, n_s)
    ratio = profile.factor(-svals) / profile.factor(svals)
    sup = float(np.sqrt(np.max(ratio)))
    return max(1.0, sup)


def normal_tube_profile(
    profile: WarpedProfile,
    s0: float,
    T: float,
    step: float = 1e-4,
) -> RiccatiPath:
    """Shape eigenvalue along the outward normal from the level {s = s0}.

    For a warped collar the principal curvatures of {s = s0 + t} obey the
    scalar Riccati equation with K(t) the ambient sectional curvature of
    planes containing d/ds, namely -w''/w evaluated at s0 + t, where w is the
    effective warp (f itself, or sqrt(f) for first-power profiles).
    """
    hfd = 1e-5

    def warp(s):
        return np.sqrt(profile.factor(s))

    def K(t):
        s = s0 + t
        w0 = float(warp(s))
        wpp = float((warp(s + hfd) - 2.0 * w0 + warp(s - hfd)) / (hfd * hfd))
        return -wpp / w0

    lam0 = float(profile.shape_eigenvalue(s0))
    return riccati_evolve(lam0, K, T, step)
