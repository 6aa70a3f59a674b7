"""Curvature operations on chart metrics via central finite differences.

Sign conventions, fixed once for the whole package:

    R(X, Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z
    R(X, Y, Z, W) = g(R(X, Y)Z, W)
    sect(X, Y) = R(X, Y, Y, X) / (|X|^2 |Y|^2 - g(X, Y)^2)

so the round sphere has positive sectional curvature, and for the radius-r
sphere in polar coordinates R[0, 1, 1, 0] = r^2 sin^2(theta).  Ricci is the
trace ric(Y, Z) = tr(X -> R(X, Y)Z); the unit round sphere has ric = g.

First derivatives use the symmetric two-point stencil, second derivatives the
symmetric three/four-point stencils, with step fd_step (default: 1e-4 of the
shortest box side).  The stencil reach stays within the clearances demanded
below (2 fd_step for christoffel, 3 fd_step for riemann).
"""

from typing import Optional

import numpy as np

from .chart import (
    Box,
    ChartMetric,
    ScalarField,
    require_spd,
    same_domain,
    vector_components,
)
from .errors import DegeneratePlaneError
from .util import PLANE_TOL, as_batch


def _stencil_offsets(dim: int, h: float):
    """Offsets for value, first and second derivative stencils.

    Returns (offsets, index maps) where offsets is (S, dim): the center,
    +-h e_i, and the four corner points +-h e_a +- h e_b for a < b.
    """
    offs = [np.zeros(dim)]
    plus = {}
    minus = {}
    for i in range(dim):
        e = np.zeros(dim)
        e[i] = h
        plus[i] = len(offs)
        offs.append(e)
        minus[i] = len(offs)
        offs.append(-e)
    corners = {}
    for a in range(dim):
        for b in range(a + 1, dim):
            ea = np.zeros(dim)
            ea[a] = h
            eb = np.zeros(dim)
            eb[b] = h
            corners[(a, b)] = len(offs)
            offs.extend([ea + eb, ea - eb, -ea + eb, -ea - eb])
    return np.stack(offs, axis=0), plus, minus, corners


def _metric_jets(g: ChartMetric, P: np.ndarray, h: float):
    """Batched metric values and derivatives.

    Returns (g0, dg, d2g) with shapes (N, m, m), (N, m, m, m), (N, m, m, m, m);
    dg[:, l] is the l-th partial of the components, d2g[:, a, b] the mixed
    second partial.
    """
    m = g.dim
    N = P.shape[0]
    offs, plus, minus, corners = _stencil_offsets(m, h)
    S = offs.shape[0]
    stacked = (P[None, :, :] + offs[:, None, :]).reshape(S * N, m)
    E = g.eval(stacked).reshape(S, N, m, m)

    g0 = E[0]
    dg = np.empty((N, m, m, m))
    d2g = np.empty((N, m, m, m, m))
    inv2h = 1.0 / (2.0 * h)
    invh2 = 1.0 / (h * h)
    for l in range(m):
        Ep = E[plus[l]]
        Em = E[minus[l]]
        dg[:, l] = (Ep - Em) * inv2h
        d2g[:, l, l] = (Ep - 2.0 * g0 + Em) * invh2
    for (a, b), base in corners.items():
        Epp, Epm, Emp, Emm = E[base], E[base + 1], E[base + 2], E[base + 3]
        mixed = (Epp - Epm - Emp + Emm) * (0.25 * invh2)
        d2g[:, a, b] = mixed
        d2g[:, b, a] = mixed
    return g0, dg, d2g


def christoffel_batch(g: ChartMetric, P, fd_step: Optional[float] = None) -> np.ndarray:
    """Christoffel symbols Gam[n, k, i, j] = Gam^k_ij at a batch of points."""
    P = as_batch(P, g.dim)
    h = g.fd_step(fd_step)
    g.domain.require_clearance(P, 2.0 * h, "christoffel stencil")
    g0, dg, _ = _metric_jets(g, P, h)
    require_spd(g0, P)
    ginv = np.linalg.inv(g0)
    # S[n, i, j, l] = d_i g_jl + d_j g_il - d_l g_ij
    S = dg.transpose(0, 1, 2, 3) + dg.transpose(0, 2, 1, 3) - dg.transpose(0, 2, 3, 1)
    return 0.5 * np.einsum("nkl,nijl->nkij", ginv, S)


def christoffel(g: ChartMetric, p, fd_step: Optional[float] = None) -> np.ndarray:
    """Christoffel symbols Gam[k, i, j] at a single point."""
    return christoffel_batch(g, np.asarray(p, dtype=float)[None, :], fd_step)[0]


def _riemann_pieces(g: ChartMetric, P: np.ndarray, h: float):
    """g0, ginv, Gamma, and the lowered curvature R[n, i, j, k, l]."""
    m = g.dim
    g0, dg, d2g = _metric_jets(g, P, h)
    require_spd(g0, P)
    ginv = np.linalg.inv(g0)

    S = dg.transpose(0, 1, 2, 3) + dg.transpose(0, 2, 1, 3) - dg.transpose(0, 2, 3, 1)
    Gam = 0.5 * np.einsum("nkl,nijl->nkij", ginv, S)

    # dS[n, b, i, j, l] = d_b (d_i g_jl + d_j g_il - d_l g_ij)
    dS = (
        d2g.transpose(0, 1, 2, 3, 4)
        + d2g.transpose(0, 1, 3, 2, 4)
        - d2g.transpose(0, 1, 3, 4, 2)
    )
    dginv = -np.einsum("nka,nbac,ncl->nbkl", ginv, dg, ginv)
    dGam = 0.5 * (
        np.einsum("nbkl,nijl->nbkij", dginv, S) + np.einsum("nkl,nbijl->nbkij", ginv, dS)
    )

    # Rup[n, a, k, i, j]: component along e_a of R(e_i, e_j) e_k.
    Rup = (
        dGam.transpose(0, 2, 4, 1, 3)  # d_i Gam^a_jk
        - dGam.transpose(0, 2, 4, 3, 1)  # d_j Gam^a_ik
        + np.einsum("naib,nbjk->nakij", Gam, Gam)
        - np.einsum("najb,nbik->nakij", Gam, Gam)
    )
    R = np.einsum("nla,nakij->nijkl", g0, Rup)
    return g0, ginv, Gam, Rup, R


def riemann_batch(g: ChartMetric, P, fd_step: Optional[float] = None) -> np.ndarray:
    """Lowered curvature tensor R[n, i, j, k, l] = R(e_i, e_j, e_k, e_l)."""
    P = as_batch(P, g.dim)
    h = g.fd_step(fd_step)
    g.domain.require_clearance(P, 3.0 * h, "riemann stencil")
    return _riemann_pieces(g, P, h)[4]


def riemann(g: ChartMetric, p, fd_step: Optional[float] = None) -> np.ndarray:
    """Lowered curvature tensor R[i, j, k, l] at a single point."""
    return riemann_batch(g, np.asarray(p, dtype=float)[None, :], fd_step)[0]


def plane_weights(g0: np.ndarray, X: np.ndarray, Y: np.ndarray):
    """Gram data (|X|^2 |Y|^2 - g(X,Y)^2, and the inner products) for plane spans."""
    xx = np.einsum("...ij,...i,...j->...", g0, X, X)
    yy = np.einsum("...ij,...i,...j->...", g0, Y, Y)
    xy = np.einsum("...ij,...i,...j->...", g0, X, Y)
    return xx * yy - xy * xy, xx, yy, xy


def sectional_values(R: np.ndarray, g0: np.ndarray, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Sectional curvatures from precomputed R and g; raises on degenerate spans."""
    area2, xx, yy, _ = plane_weights(g0, X, Y)
    scale = xx * yy
    bad = area2 <= PLANE_TOL * np.maximum(scale, 1e-300)
    if np.any(bad):
        raise DegeneratePlaneError("tangent vectors span a degenerate 2-plane")
    num = np.einsum("...ijkl,...i,...j,...k,...l->...", R, X, Y, Y, X)
    return num / area2


def sectional(g: ChartMetric, p, X, Y, fd_step: Optional[float] = None) -> float:
    """Sectional curvature of span(X, Y) at p."""
    p = np.asarray(p, dtype=float)
    Xc = vector_components(X, p, g.dim)
    Yc = vector_components(Y, p, g.dim)
    R = riemann_batch(g, p[None, :], fd_step)
    g0 = g.eval(p[None, :])
    return float(sectional_values(R, g0, Xc[None, :], Yc[None, :])[0])


def ricci_batch(g: ChartMetric, P, fd_step: Optional[float] = None) -> np.ndarray:
    """Ricci tensors ric[n, j, k] at a batch of points."""
    P = as_batch(P, g.dim)
    h = g.fd_step(fd_step)
    g.domain.require_clearance(P, 3.0 * h, "riemann stencil")
    _, _, _, Rup, _ = _riemann_pieces(g, P, h)
    ric = np.einsum("nakaj->njk", Rup)
    return 0.5 * (ric + np.swapaxes(ric, -1, -2))


def ricci(g: ChartMetric, p, fd_step: Optional[float] = None) -> np.ndarray:
    return ricci_batch(g, np.asarray(p, dtype=float)[None, :], fd_step)[0]


def scalar_batch(g: ChartMetric, P, fd_step: Optional[float] = None) -> np.ndarray:
    P = as_batch(P, g.dim)
    ric = ricci_batch(g, P, fd_step)
    ginv = np.linalg.inv(g.eval(P))
    return np.einsum("njk,njk->n", ginv, ric)


def scalar(g: ChartMetric, p, fd_step: Optional[float] = None) -> float:
    """Scalar curvature (metric trace of Ricci) at p."""
    return float(scalar_batch(g, np.asarray(p, dtype=float)[None, :], fd_step)[0])


def ricci_eigenvalues_batch(g: ChartMetric, P, fd_step: Optional[float] = None) -> np.ndarray:
    """Eigenvalues of Ricci relative to g (ascending), shape (N, dim).

    These are the ratios ric(X, X)/g(X, X) over the eigendirections; the unit
    round sphere gives all ones.
    """
    P = as_batch(P, g.dim)
    ric = ricci_batch(g, P, fd_step)
    g0 = g.eval(P)
    return relative_eigenvalues(ric, g0)


def relative_eigenvalues(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Generalized eigenvalues of symmetric A relative to SPD B, batched, ascending."""
    L = np.linalg.cholesky(B)
    # C = L^-1 A L^-T via two triangular solves (numpy solves are batched).
    tmp = np.linalg.solve(L, A)
    C = np.linalg.solve(L, np.swapaxes(tmp, -1, -2))
    C = 0.5 * (C + np.swapaxes(C, -1, -2))
    return np.linalg.eigvalsh(C)


def scalar_field_jets(phi: ScalarField, P: np.ndarray, h: float):
    """Batched (value, gradient, second partials) of a scalar field."""
    m = phi.domain.dim
    N = P.shape[0]
    offs, plus, minus, corners = _stencil_offsets(m, h)
    S = offs.shape[0]
    stacked = (P[None, :, :] + offs[:, None, :]).reshape(S * N, m)
    E = phi.eval(stacked).reshape(S, N)

    f0 = E[0]
    df = np.empty((N, m))
    d2f = np.empty((N, m, m))
    inv2h = 1.0 / (2.0 * h)
    invh2 = 1.0 / (h * h)
    for l in range(m):
        df[:, l] = (E[plus[l]] - E[minus[l]]) * inv2h
        d2f[:, l, l] = (E[plus[l]] - 2.0 * f0 + E[minus[l]]) * invh2
    for (a, b), base in corners.items():
        mixed = (E[base] - E[base + 1] - E[base + 2] + E[base + 3]) * (0.25 * invh2)
        d2f[:, a, b] = mixed
        d2f[:, b, a] = mixed
    return f0, df, d2f


def hessian_batch(g: ChartMetric, phi: ScalarField, P, fd_step: Optional[float] = None):
    """Covariant Hessian of phi with respect to g at a batch of points."""
    P = as_batch(P, g.dim)
    same_domain(g.domain, phi.domain)
    h = g.fd_step(fd_step)
    g.domain.require_clearance(P, 2.0 * h, "hessian stencil")
    Gam = christoffel_batch(g, P, fd_step)
    _, df, d2f = scalar_field_jets(phi, P, h)
    return d2f - np.einsum("nkij,nk->nij", Gam, df)


def conformal_metric(h: ChartMetric, phi: ScalarField, name: str = "") -> ChartMetric:
    """The metric e^(2 phi) h on the shared domain of h and phi."""
    same_domain(h.domain, phi.domain)

    def comps(P):
        factor = np.exp(2.0 * phi.eval(P))
        return factor[:, None, None] * h.eval(P)

    return ChartMetric(dim=h.dim, domain=h.domain, components=comps,
                       name=name or (h.name + "_conformal"))


def conformal_sectional_batch(h: ChartMetric, phi: ScalarField, P, X, Y,
                              fd_step: Optional[float] = None) -> np.ndarray:
    """Sectional curvature of e^(2 phi) h evaluated through the transformation law.

    The law reads, for the background metric h with sectional curvature sect_h,

        sect'(X, Y) = e^(-2 phi) sect_h(X, Y)
                      + e^(-2 phi) |X ^ Y|^(-2) A(X, Y)

        A(X, Y) = 2 h(X, Y) Hess phi(X, Y) - |Y|^2 Hess phi(X, X)
                  - |X|^2 Hess phi(Y, Y) + |(X phi) Y - (Y phi) X|^2
                  - (|X|^2 |Y|^2 - h(X, Y)^2) |grad phi|^2

    with every inner product, gradient, and Hessian taken with respect to h.
    """
    P = as_batch(P, h.dim)
    same_domain(h.domain, phi.domain)
    step = h.fd_step(fd_step)
    h.domain.require_clearance(P, 3.0 * step, "riemann stencil")
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    if X.shape != P.shape or Y.shape != P.shape:
        raise ValueError("X and Y must match the point batch shape")

    g0, ginv, Gam, _, R = _riemann_pieces(h, P, step)
    area2, xx, yy, xy = plane_weights(g0, X, Y)
    scale = xx * yy
    if np.any(area2 <= PLANE_TOL * np.maximum(scale, 1e-300)):
        raise DegeneratePlaneError("tangent vectors span a degenerate 2-plane")
    sect_h = np.einsum("nijkl,ni,nj,nk,nl->n", R, X, Y, Y, X) / area2

    f0, df, d2f = scalar_field_jets(phi, P, step)
    hess = d2f - np.einsum("nkij,nk->nij", Gam, df)

    hXX = np.einsum("nij,ni,nj->n", hess, X, X)
    hYY = np.einsum("nij,ni,nj->n", hess, Y, Y)
    hXY = np.einsum("nij,ni,nj->n", hess, X, Y)
    dX = np.einsum("ni,ni->n", df, X)
    dY = np.einsum("ni,ni->n", df, Y)
    grad2 = np.einsum("nij,ni,nj->n", ginv, df, df)
    # |(X phi) Y - (Y phi) X|^2 expanded in h-inner products.
    cross = dX * dX * yy - 2.0 * dX * dY * xy + dY * dY * xx

    A = 2.0 * xy * hXY - yy * hXX - xx * hYY + cross - area2 * grad2
    damp = np.exp(-2.0 * f0)
    return damp * sect_h + damp * A / area2


def conformal_sectional(h: ChartMetric, phi: ScalarField, p, X, Y,
                        fd_step: Optional[float] = None) -> float:
    """Sectional curvature of e^(2 phi) h at p on span(X, Y), via the law above."""
    p = np.asarray(p, dtype=float)
    Xc = vector_components(X, p, h.dim)
    Yc = vector_components(Y, p, h.dim)
    return float(
        conformal_sectional_batch(h, phi, p[None, :], Xc[None, :], Yc[None, :], fd_step)[0]
    )


def bianchi_residuals(R: np.ndarray) -> np.ndarray:
    """Max first-Bianchi residual |R[ijkl] + R[jkil] + R[kijl]| per batch entry."""
    res = R + np.moveaxis(R, (1, 2, 3), (3, 1, 2)) + np.moveaxis(R, (1, 2, 3), (2, 3, 1))
    return np.max(np.abs(res), axis=(1, 2, 3, 4))


def symmetry_residuals(R: np.ndarray) -> np.ndarray:
    """Max residual of the pair symmetries per batch entry."""
    r1 = np.max(np.abs(R + np.swapaxes(R, 1, 2)), axis=(1, 2, 3, 4))
    r2 = np.max(np.abs(R + np.swapaxes(R, 3, 4)), axis=(1, 2, 3, 4))
    r3 = np.max(np.abs(R - np.transpose(R, (0, 3, 4, 1, 2))), axis=(1, 2, 3, 4))
    return np.maximum(np.maximum(r1, r2), r3)
