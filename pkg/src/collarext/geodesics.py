"""Geodesic integration on chart metrics.

Fixed-step classical RK4 on the first-order system (q' = v, v' = -Gamma(v, v));
adaptive stepping is deliberately out of scope.  Integration halts for a
trajectory when its next evaluation would leave the domain clearance needed by
the Christoffel stencil; the path is then flagged as exited.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .chart import ChartMetric
from .curvature import christoffel_batch
from .util import as_batch


@dataclass(frozen=True, eq=False)
class GeodesicPath:
    """Sampled geodesic: times (n,), points (n, m), velocities (n, m)."""

    t: np.ndarray
    points: np.ndarray
    velocities: np.ndarray
    exited: bool
    exit_time: Optional[float]

    def speeds(self, g: ChartMetric) -> np.ndarray:
        G = g.eval(self.points)
        return np.sqrt(np.einsum("nij,ni,nj->n", G, self.velocities, self.velocities))


def _accel(g: ChartMetric, Q: np.ndarray, V: np.ndarray, fd_step) -> np.ndarray:
    Gam = christoffel_batch(g, Q, fd_step)
    return -np.einsum("nkij,ni,nj->nk", Gam, V, V)


def _integrate(g: ChartMetric, Q0, V0, T, step, fd_step, record_every=1):
    """Batched RK4.  Returns end states, exit data, and optional dense samples."""
    if T < 0:
        raise ValueError("integration time must be nonnegative")
    if step <= 0:
        raise ValueError("step must be positive")
    Q = Q0.copy()
    V = V0.copy()
    n = Q.shape[0]
    h = g.fd_step(fd_step)
    clearance = 2.0 * h + 0.25 * h
    active = g.domain.contains(Q, clearance)
    exited = ~active
    exit_time = np.where(exited, 0.0, np.nan)

    n_steps = int(np.ceil(T / step - 1e-12)) if T > 0 else 0
    times = [0.0]
    dense_q = [Q.copy()]
    dense_v = [V.copy()]

    t = 0.0
    for k in range(n_steps):
        dt = min(step, T - t)
        if np.any(active):
            idx = np.nonzero(active)[0]
            q = Q[idx]
            v = V[idx]
            try_pts = []

            k1q = v
            k1v = _accel(g, q, v, fd_step)
            q2 = q + 0.5 * dt * k1q
            ok2 = g.domain.contains(q2, clearance)
            # Trajectories whose stage points leave the clearance halt this step.
            k2v = np.zeros_like(v)
            k2q = np.zeros_like(v)
            good = ok2
            if np.any(ok2):
                k2q[ok2] = v[ok2] + 0.5 * dt * k1v[ok2]
                k2v[ok2] = _accel(g, q2[ok2], k2q[ok2], fd_step)
            q3 = q + 0.5 * dt * k2q
            ok3 = good & g.domain.contains(q3, clearance)
            k3q = np.zeros_like(v)
            k3v = np.zeros_like(v)
            if np.any(ok3):
                k3q[ok3] = v[ok3] + 0.5 * dt * k2v[ok3]
                k3v[ok3] = _accel(g, q3[ok3], k3q[ok3], fd_step)
            q4 = q + dt * k3q
            ok4 = ok3 & g.domain.contains(q4, clearance)
            k4q = np.zeros_like(v)
            k4v = np.zeros_like(v)
            if np.any(ok4):
                k4q[ok4] = v[ok4] + dt * k3v[ok4]
                k4v[ok4] = _accel(g, q4[ok4], k4q[ok4], fd_step)

            newq = q + (dt / 6.0) * (k1q + 2.0 * k2q + 2.0 * k3q + k4q)
            newv = v + (dt / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
            stays = ok4 & g.domain.contains(newq, clearance)

            halted = idx[~stays]
            moved = idx[stays]
            Q[moved] = newq[stays]
            V[moved] = newv[stays]
            if halted.size:
                active[halted] = False
                exited[halted] = True
                exit_time[halted] = t
        t += dt
        if (k + 1) % record_every == 0 or k == n_steps - 1:
            times.append(t)
            dense_q.append(Q.copy())
            dense_v.append(V.copy())

    return (
        Q,
        V,
        exited,
        exit_time,
        np.asarray(times),
        np.stack(dense_q, axis=0),
        np.stack(dense_v, axis=0),
    )


def shoot_geodesic(
    g: ChartMetric,
    p0,
    v0,
    T: float,
    step: float = 1e-3,
    fd_step: Optional[float] = None,
    record_every: int = 1,
) -> GeodesicPath:
    """Integrate a single geodesic from (p0, v0) for parameter time T."""
    if T <= 0:
        raise ValueError("integration time must be positive")
    P0 = as_batch(p0, g.dim)
    V0 = as_batch(v0, g.dim)
    _, _, exited, exit_time, t, dq, dv = _integrate(g, P0, V0, T, step, fd_step, record_every)
    return GeodesicPath(
        t=t,
        points=dq[:, 0, :],
        velocities=dv[:, 0, :],
        exited=bool(exited[0]),
        exit_time=float(exit_time[0]) if exited[0] else None,
    )


def shoot_batch(g: ChartMetric, P0, V0, T: float, step: float = 1e-3,
                fd_step: Optional[float] = None):
    """Endpoints of a batch of geodesics; returns (Q_end, V_end, exited, exit_time)."""
    P0 = as_batch(P0, g.dim)
    V0 = as_batch(V0, g.dim)
    Q, V, exited, exit_time, _, _, _ = _integrate(g, P0, V0, T, step, fd_step,
                                                  record_every=max(1, int(T / step)))
    return Q, V, exited, exit_time


@dataclass(frozen=True, eq=False)
class ConnectionResult:
    path: GeodesicPath
    v0: np.ndarray
    converged: bool
    residual: float


def connect_geodesic(
    g: ChartMetric,
    p0,
    p1,
    T: float = 1.0,
    step: float = 2e-3,
    tol: float = 1e-8,
    max_iter: int = 30,
    fd_step: Optional[float] = None,
) -> ConnectionResult:
    """Two-point geodesic by shooting: Newton iteration on the initial velocity.

    The Jacobian of the endpoint map is formed by finite differences; the
    coordinate difference seeds the first shot.
    """
    p0 = np.asarray(p0, dtype=float)
    p1 = np.asarray(p1, dtype=float)
    m = g.dim
    v = (p1 - p0) / T
    delta = 1e-6 * max(1.0, float(np.linalg.norm(v)))
    res = np.inf
    for _ in range(max_iter):
        probes = np.vstack([v[None, :], v[None, :] + delta * np.eye(m)])
        starts = np.broadcast_to(p0, (m + 1, m)).copy()
        ends, _, exited, _ = shoot_batch(g, starts, probes, T, step, fd_step)
        if exited[0]:
            raise RuntimeError("shooting trajectory left the chart; pick closer endpoints")
        r = ends[0] - p1
        res = float(np.linalg.norm(r))
        if res <= tol:
            break
        J = (ends[1:] - ends[0][None, :]).T / delta
        try:
            dv = np.linalg.solve(J, -r)
        except np.linalg.LinAlgError:
            dv = -np.linalg.lstsq(J, r, rcond=None)[0]
        v = v + dv
    path = shoot_geodesic(g, p0, v, T, step, fd_step)
    return ConnectionResult(path=path, v0=v, converged=bool(res <= tol), residual=res)


def curve_length(g: ChartMetric, curve, t0: float, t1: float, n: int = 512) -> float:
    """Length of t -> curve(t) in g by midpoint quadrature on n panels.

    curve maps an array of parameters to an (n, dim) array of points.
    """
    if t1 <= t0:
        raise ValueError("need t1 > t0")
    ts = np.linspace(t0, t1, n + 1)
    mids = 0.5 * (ts[:-1] + ts[1:])
    dt = ts[1] - ts[0]
    pts = np.asarray(curve(mids), dtype=float)
    eps = 1e-7 * (t1 - t0)
    fwd = np.asarray(curve(mids + eps), dtype=float)
    bwd = np.asarray(curve(mids - eps), dtype=float)
    vel = (fwd - bwd) / (2.0 * eps)
    G = g.eval(pts)
    speeds = np.sqrt(np.einsum("nij,ni,nj->n", G, vel, vel))
    return float(np.sum(speeds) * dt)
