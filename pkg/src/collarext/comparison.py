"""Volume comparison and growth-based nonexistence thresholds.

These are the desk-scale arithmetic counterparts to the growth data in
:mod:`collarext.groups`: model volumes for Ric >= -(m-1)C^2, the
critical C below which no complete extension with that bound can
exist, the integer N at which free-group entropy beats the comparison
estimate, and the displacement inequality check that pairs ball counts
against measured volumes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .groups import GrowthData


def bg_comparison_volume(m: int, c: float, r: float) -> float:
    """Volume of the radius-r ball in the model space with Ric = -(m-1)c^2.

    omega_{m-1} * integral_0^r (sinh(c t)/c)^(m-1) dt, where omega_{m-1}
    is the area of the unit (m-1)-sphere.  The c -> 0 limit is the
    Euclidean ball volume; below c*r < 1e-4 a series expansion avoids
    the 0/0 cancellation.
    """
    if m < 2:
        raise ValueError("dimension must be at least 2")
    if c < 0:
        raise ValueError("curvature scale must be nonnegative")
    if r <= 0:
        raise ValueError("radius must be positive")
    omega = 2.0 * math.pi ** (m / 2.0) / special.gamma(m / 2.0)
    if c * r < 1e-4:
        # (sinh(ct)/c)^(m-1) = t^(m-1) (1 + (m-1)(ct)^2/6 + O((ct)^4))
        main = r**m / m
        correction = (m - 1) * c**2 * r ** (m + 2) / (6.0 * (m + 2))
        return omega * (main + correction)

    def integrand(t):
        return (math.sinh(c * t) / c) ** (m - 1)

    value, _ = integrate.quad(integrand, 0.0, r, limit=200)
    return omega * value


def smg_threshold(m: int, diam: float, entropy_h: float) -> float:
    """Critical curvature scale h / (2(m-1) diam).

    No complete extension with Ric >= -(m-1)C^2 exists for C strictly
    below the returned value.  Zero entropy gives threshold 0, meaning
    no obstruction.
    """
    if m < 2:
        raise ValueError("dimension must be at least 2")
    if diam <= 0:
        raise ValueError("diameter must be positive")
    if entropy_h < 0:
        raise ValueError("entropy must be nonnegative")
    return entropy_h / (2.0 * (m - 1) * diam)


def tbg_N_threshold(m: int, delta: float, c: float) -> int:
    """Smallest integer N with N > 1/2 + exp(2(m-1) delta c)/2."""
    if m < 2:
        raise ValueError("dimension must be at least 2")
    if delta <= 0:
        raise ValueError("delta must be positive")
    if c < 0:
        raise ValueError("curvature scale must be nonnegative")
    threshold = 0.5 + 0.5 * math.exp(2.0 * (m - 1) * delta * c)
    return math.floor(threshold) + 1


@dataclass(frozen=True)
class SvarcMilnorReport:
    """Per-radius verdicts for |B_R| <= alpha * volume[R].

    ``failures`` lists the radii where the inequality breaks; a
    nonempty list is evidence that no equivariant structure with these
    displacement constants exists.
    """

    holds: tuple[bool, ...]
    failures: tuple[int, ...]
    alpha: float
    beta: float

    @property
    def all_hold(self) -> bool:
        return not self.failures

    @property
    def first_failure(self) -> int | None:
        return self.failures[0] if self.failures else None

    def describe(self) -> str:
        if self.all_hold:
            return (
                f"count <= {self.alpha:g} * volume holds at every sampled radius"
            )
        return (
            f"count exceeds {self.alpha:g} * volume first at R = "
            f"{self.first_failure} ({len(self.failures)} radii fail)"
        )


def svarc_milnor_check(
    data: GrowthData,
    volumes,
    alpha: float,
    beta: float,
) -> SvarcMilnorReport:
    """Check |B_R| <= alpha * volumes[R] for R = 0..R_max.

    ``volumes[R]`` must already be the comparison volume at radius
    beta * R; beta is recorded in the report for bookkeeping only.
    """
    vols = np.asarray(volumes, dtype=float)
    if vols.size == 0:
        raise ValueError("volume list is empty")
    if vols.ndim != 1 or vols.size != len(data.counts):
        raise ValueError(
            f"need one volume per radius: got {vols.size} volumes for "
            f"{len(data.counts)} counts"
        )
    if alpha <= 0 or beta <= 0:
        raise ValueError("alpha and beta must be positive")
    holds = tuple(
        count <= alpha * vol for count, vol in zip(data.counts, vols)
    )
    failures = tuple(r for r, ok in enumerate(holds) if not ok)
    return SvarcMilnorReport(
        holds=holds, failures=failures, alpha=float(alpha), beta=float(beta)
    )


def anderson_bound(k: int, h: int) -> int:
    """Max polynomial growth order k - h from k bounded Betti data."""
    if h < 0:
        raise ValueError("h must be nonnegative")
    if k < h:
        raise ValueError("k must be at least h")
    return k - h
