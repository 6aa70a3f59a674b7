"""Conformal Ricci lowering on a ball, one bump patch at a time.

The log-factor of a single patch is

    F(z) = s_amp * exp(-d / (5 - ||z|| chi(||z||))),

with chi a quintic step rising on [1, 2], so F is a positive constant on the
unit ball, radially non-increasing beyond, and vanishes to infinite order at
||z|| = 5.  One bump alone cannot push the Ricci ratios on the annulus
2 < ||z|| < 4 below an aggressive target while leaving the outer shell
4 < ||z|| < 5 undamaged, so the search composes rounds h -> e^{2F} h: each
round picks the decay rate d so the round strictly lowers the annulus ratios
without raising the outer shell beyond noise, then picks the amplitude by
doubling, and rounds repeat until the target holds everywhere sampled.
"""

from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .chart import Box, ChartMetric
from .curvature import ricci_batch, relative_eigenvalues, scalar_batch
from .errors import SearchFailureError
from .util import D_MAX, S_AMP_MAX, quintic_step

NOISE_TOL = 1e-7
MAX_ROUNDS = 64


@dataclass(frozen=True)
class LohkampBump:
    """One conformal bump: decay rate d, amplitude s_amp, chart of validity."""

    d: float
    s_amp: float
    chart: Box

    def __post_init__(self):
        if not (self.d > 0):
            raise ValueError("d must be positive")
        if not (self.s_amp > 0):
            raise ValueError("s_amp must be positive")


def bump_profile(r, d: float, s_amp: float) -> np.ndarray:
    """Radial profile s_amp * exp(-d / (5 - r chi(r))), zero from r = 5 on."""
    r = np.asarray(r, dtype=float)
    chi = quintic_step(r - 1.0)
    denom = 5.0 - r * chi
    out = np.zeros(r.shape)
    inside = r < 5.0
    if np.any(inside):
        out[inside] = s_amp * np.exp(-d / denom[inside])
    return out


def lohkamp_bump(b: LohkampBump, z) -> np.ndarray:
    """F at the point(s) z of the bump's chart."""
    z = np.atleast_2d(np.asarray(z, dtype=float))
    r = np.linalg.norm(z, axis=-1)
    vals = bump_profile(r, b.d, b.s_amp)
    return vals if vals.size > 1 else float(vals[0])


def deformed_metric(base: ChartMetric, bumps: Sequence[LohkampBump],
                    name: str = "") -> ChartMetric:
    """e^{2 sum F_i} times the base metric."""
    bumps = tuple(bumps)

    def comps(P):
        P = np.asarray(P, dtype=float)
        u = np.zeros(P.shape[0])
        r = np.linalg.norm(P, axis=-1)
        for b in bumps:
            u += bump_profile(r, b.d, b.s_amp)
        return np.exp(2.0 * u)[:, None, None] * base.eval(P)

    return ChartMetric(dim=base.dim, domain=base.domain, components=comps,
                       name=name or (f"{base.name}+{len(bumps)}bumps"
                                     if base.name else f"{len(bumps)} bumps"))


def _direction_set(m: int) -> np.ndarray:
    dirs = []
    for i in range(m):
        e = np.zeros(m)
        e[i] = 1.0
        dirs += [e, -e]
    for signs in range(2 ** m):
        v = np.asarray([1.0 if (signs >> j) & 1 else -1.0 for j in range(m)])
        dirs.append(v / np.sqrt(m))
    return np.asarray(dirs)


def _sample_points(m: int, r_lo: float, r_hi: float, n_r: int) -> np.ndarray:
    radii = np.linspace(r_lo, r_hi, n_r)
    dirs = _direction_set(m)
    return (radii[:, None, None] * dirs[None, :, :]).reshape(-1, m)


@dataclass(frozen=True, eq=False)
class LohkampRound:
    d: float
    s_amp: float
    worst_before: float
    worst_after: float
    violations_after: int


@dataclass(frozen=True, eq=False)
class LohkampResult:
    metric: ChartMetric
    d: float
    s_amp: float
    bumps: Tuple[LohkampBump, ...]
    trace: Tuple[LohkampRound, ...]
    worst_ratio: float
    annulus_points: np.ndarray


def ratio_values(base: ChartMetric, bumps, P: np.ndarray, mode: str) -> np.ndarray:
    """Pointwise target quantity for the deformed metric.

    mode "ricci": largest Ricci eigenvalue relative to the deformed metric;
    mode "scalar": scalar curvature.
    """
    g = deformed_metric(base, bumps) if bumps else base
    if mode == "ricci":
        ric = ricci_batch(g, P)
        g0 = g.eval(P)
        return np.max(relative_eigenvalues(ric, g0), axis=1)
    return scalar_batch(g, P)


def _lohkamp_search(base: ChartMetric, C: float, annulus: Tuple[float, float],
                    mode: str) -> LohkampResult:
    m = base.dim
    a_lo, a_hi = annulus
    if not (0 < a_lo < a_hi):
        raise ValueError("annulus must be 0 < inner < outer")
    h = base.fd_step()
    P_ann = _sample_points(m, a_lo + 0.02, a_hi - 0.02, 25)
    P_out = _sample_points(m, a_hi + 0.05, 4.90, 12)
    base.domain.require_clearance(np.vstack([P_ann, P_out]), 3.0 * h + 0.5 * h,
                                  "curvature stencil")

    bumps: List[LohkampBump] = []
    trace: List[LohkampRound] = []
    cur_ann = ratio_values(base, bumps, P_ann, mode)
    cur_out = ratio_values(base, bumps, P_out, mode)
    if float(np.max(cur_ann)) < C:
        # Already below target: identity deformation.
        return LohkampResult(metric=base, d=1.0, s_amp=0.0, bumps=(),
                             trace=(), worst_ratio=float(np.max(cur_ann)),
                             annulus_points=P_ann)

    d_prev = 1.0
    for _ in range(MAX_ROUNDS):
        worst_before = float(np.max(cur_ann))

        # Stage 1: decay rate.  Probing at two amplitudes, the increment must
        # be strictly lowering on the annulus and below noise on the outer
        # shell; larger d localizes the bump further in.
        d = d_prev
        found_d = None
        while d <= D_MAX:
            ok = True
            for s_probe in (1.0, 2.0):
                probe = bumps + [LohkampBump(d, s_probe, base.domain)]
                inc_ann = ratio_values(base, probe, P_ann, mode) - cur_ann
                inc_out = ratio_values(base, probe, P_out, mode) - cur_out
                if not (np.all(inc_ann < 0.0) and np.all(inc_out <= NOISE_TOL)):
                    ok = False
                    break
            if ok:
                found_d = d
                break
            d *= 2.0
        if found_d is None:
            raise SearchFailureError(
                f"no decay rate d <= {D_MAX:g} lowers the annulus without "
                f"raising the outer shell", trace=tuple(trace),
                worst=worst_before)
        d = found_d

        # Stage 2: amplitude by doubling.  A candidate is admissible when it
        # does not raise any tracked sample beyond noise; the best admissible
        # candidate minimizes (violation count, worst ratio).
        best = None
        s = 1.0
        stale = 0
        while s <= S_AMP_MAX:
            cand = bumps + [LohkampBump(d, s, base.domain)]
            val_ann = ratio_values(base, cand, P_ann, mode)
            val_out = ratio_values(base, cand, P_out, mode)
            admissible = (np.all(val_ann <= cur_ann + NOISE_TOL)
                          and np.all(val_out <= cur_out + NOISE_TOL))
            if admissible:
                score = (int(np.sum(val_ann >= C)), float(np.max(val_ann)))
                if best is None or score < best[0]:
                    best = (score, s, val_ann, val_out)
                    stale = 0
                else:
                    stale += 1
                if score[0] == 0:
                    break
            else:
                break
            if stale >= 2:
                break
            s *= 2.0
        if best is None:
            raise SearchFailureError(
                f"amplitude search found no admissible candidate at d = {d:g}",
                trace=tuple(trace), worst=worst_before)
        (n_viol, worst_after), s_amp, cur_ann, cur_out = best

        bumps.append(LohkampBump(d, s_amp, base.domain))
        trace.append(LohkampRound(d=d, s_amp=s_amp, worst_before=worst_before,
                                  worst_after=worst_after,
                                  violations_after=n_viol))
        d_prev = d
        if n_viol == 0:
            g = deformed_metric(base, bumps)
            return LohkampResult(metric=g, d=d, s_amp=s_amp,
                                 bumps=tuple(bumps), trace=tuple(trace),
                                 worst_ratio=worst_after,
                                 annulus_points=P_ann)

    raise SearchFailureError(
        f"target {C:g} not reached after {MAX_ROUNDS} rounds",
        trace=tuple(trace), worst=float(np.max(cur_ann)))


def lohkamp_lower(base: ChartMetric, C: float,
                  annulus: Tuple[float, float] = (2.0, 4.0)) -> LohkampResult:
    """Deform e^{2 sum F_i} base until all sampled Ricci eigen-ratios on the
    annulus fall below C, leaving the outer shell 4 < r < 5 no worse than
    noise.  Raises SearchFailureError with the worst sampled ratio when the
    caps run out."""
    return _lohkamp_search(base, float(C), annulus, "ricci")


def lohkamp_lower_scalar(base: ChartMetric, C: float,
                         annulus: Tuple[float, float] = (2.0, 4.0)) -> LohkampResult:
    """Scalar-curvature variant of lohkamp_lower: sampled Scal < C."""
    return _lohkamp_search(base, float(C), annulus, "scalar")
