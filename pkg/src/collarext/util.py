"""Shared numeric defaults and small helpers."""

import os

import numpy as np

# Finite-difference step as a fraction of the shortest box side.
FD_FRACTION = 1e-4
# Default agreement tolerance for curvature quantities.
NUM_TOL = 1e-5
# Degenerate-plane rejection threshold on |X wedge Y|^2 relative to |X|^2 |Y|^2.
PLANE_TOL = 1e-10
# Geodesic / Riccati integration tolerance (fixed-step RK4 target).
ODE_TOL = 1e-6
# Boundary convexity classification tolerance on shape eigenvalues.
CONVEX_TOL = 1e-8
# Tangential Hessian positivity floor used by the convexifying search.
HESS_TOL = 1e-8
# Riccati blow-up cap.
BLOWUP_CAP = 1e6
# Length/series divergence cap.
DIVERGENCE_CAP = 1e6
# Doubling-search caps.
K_MAX = 2.0 ** 30
D_MAX = 2.0 ** 20
S_AMP_MAX = 2.0 ** 20

THREADS_ENV = "COLLAREXT_THREADS"


def worker_count(requested=None):
    """Worker cap for grid sweeps: explicit argument, else COLLAREXT_THREADS, else 1."""
    if requested is not None:
        return max(1, int(requested))
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def quintic_step(u):
    """C^2 smoothstep 6u^5 - 15u^4 + 10u^3, clamped to [0, 1]."""
    u = np.clip(u, 0.0, 1.0)
    return u * u * u * (u * (6.0 * u - 15.0) + 10.0)


def quintic_step_integral(u):
    """Integral of quintic_step from 0 to u, for u clamped to [0, 1]."""
    u = np.clip(u, 0.0, 1.0)
    return u ** 4 * (u * (u - 3.0) + 2.5)


def as_point(p, dim):
    p = np.asarray(p, dtype=float)
    if p.shape != (dim,):
        raise ValueError(f"expected a point of dimension {dim}, got shape {p.shape}")
    return p


def as_batch(P, dim):
    """Coerce to an (N, dim) float array; single points become a batch of one."""
    P = np.asarray(P, dtype=float)
    if P.ndim == 1:
        P = P[None, :]
    if P.ndim != 2 or P.shape[1] != dim:
        raise ValueError(f"expected points of dimension {dim}, got shape {P.shape}")
    return P
