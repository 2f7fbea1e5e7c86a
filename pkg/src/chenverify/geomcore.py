"""Pointwise tensor algebra for statistical structures.

Index conventions used throughout the package:

* ``dg[k, i, j]``            = d_k g_ij
* ``ddg[l, k, i, j]``        = d_l d_k g_ij
* ``gamma[k, i, j]``         = Gamma^k_ij, so that nabla_{d_i} d_j = Gamma^k_ij d_k
* ``dgamma[l, k, i, j]``     = d_l Gamma^k_ij
* ``CurvatureAtPoint.r[i, j, k, l]`` = R^l_ijk with
  R(d_i, d_j) d_k = R^l_ijk d_l and
  R^l_ijk = d_i G^l_jk - d_j G^l_ik + G^l_im G^m_jk - G^l_jm G^m_ik.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

__all__ = [
    "GeometryError",
    "SingularMetricError",
    "RankDeficiencyError",
    "NotOrthonormalError",
    "MetricAtPoint",
    "ConnectionAtPoint",
    "CurvatureAtPoint",
    "Plane",
    "Frame",
    "levi_civita",
    "dual_connection",
    "curvature",
    "sectional_K",
    "scalar_tau",
    "riemannian_sectional",
    "gram_schmidt",
    "complete_frame",
    "ORTHONORMAL_TOL",
]

ORTHONORMAL_TOL = 1e-10
SPD_TOL = 1e-10


class GeometryError(ValueError):
    pass


class SingularMetricError(GeometryError):
    pass


class RankDeficiencyError(GeometryError):
    def __init__(self, index: int, norm: float):
        self.index = index
        self.norm = norm
        super().__init__(f"vector {index} is linearly dependent on its predecessors (pivot norm {norm:.3e})")


class NotOrthonormalError(GeometryError):
    pass


def _as_metric_matrix(g) -> np.ndarray:
    if isinstance(g, MetricAtPoint):
        return g.g
    return np.asarray(g, dtype=float)


@dataclass(frozen=True)
class MetricAtPoint:
    """Metric with first (and optionally second) partial derivatives at a point."""

    g: np.ndarray
    dg: np.ndarray | None = None
    ddg: np.ndarray | None = None
    g_inv: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        g = np.asarray(self.g, dtype=float)
        d = g.shape[0]
        if g.shape != (d, d):
            raise GeometryError(f"metric must be square, got shape {g.shape}")
        if not np.allclose(g, g.T, rtol=0, atol=1e-10):
            raise GeometryError("metric is not symmetric")
        g = 0.5 * (g + g.T)
        eig = np.linalg.eigvalsh(g)
        if eig[0] <= SPD_TOL:
            raise SingularMetricError(f"metric is not positive definite (smallest eigenvalue {eig[0]:.3e})")
        g_inv = np.linalg.inv(g)
        g_inv = 0.5 * (g_inv + g_inv.T)
        dg = np.zeros((d, d, d)) if self.dg is None else np.asarray(self.dg, dtype=float)
        dg = 0.5 * (dg + dg.transpose(0, 2, 1))
        ddg = self.ddg
        if ddg is not None:
            ddg = np.asarray(ddg, dtype=float)
            ddg = 0.5 * (ddg + ddg.transpose(0, 1, 3, 2))
            ddg = 0.5 * (ddg + ddg.transpose(1, 0, 2, 3))
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "dg", dg)
        object.__setattr__(self, "ddg", ddg)
        object.__setattr__(self, "g_inv", g_inv)

    @property
    def dim(self) -> int:
        return self.g.shape[0]

    @cached_property
    def dg_inv(self) -> np.ndarray:
        """d_k (g^-1) = -g^-1 (d_k g) g^-1, indexed [k, i, j]."""
        return -(self.g_inv @ self.dg @ self.g_inv)

    def inner(self, x, y) -> float:
        return float(np.asarray(x) @ self.g @ np.asarray(y))


@dataclass(frozen=True)
class ConnectionAtPoint:
    gamma: np.ndarray
    dgamma: np.ndarray | None = None

    @property
    def dim(self) -> int:
        return self.gamma.shape[0]

    def torsion(self) -> np.ndarray:
        return self.gamma - self.gamma.transpose(0, 2, 1)

    def covariant(self, X, Y, dY=None) -> np.ndarray:
        """Coordinates of nabla_X Y given the directional derivative dY of Y along X."""
        out = np.einsum("kij,i,j->k", self.gamma, X, Y)
        return out if dY is None else out + dY


@dataclass(frozen=True)
class CurvatureAtPoint:
    r: np.ndarray  # r[i, j, k, l] = R^l_ijk

    def apply(self, X, Y, Z) -> np.ndarray:
        """R(X, Y) Z as a coordinate vector."""
        return np.einsum("ijkl,i,j,k->l", self.r, X, Y, Z)

    def lowered(self, g) -> np.ndarray:
        """R_ijkl = g(R(d_i, d_j) d_k, d_l)."""
        return np.einsum("ijkm,ml->ijkl", self.r, _as_metric_matrix(g))

    def form(self, g, X, Y, Z, W) -> float:
        return float(self.apply(X, Y, Z) @ _as_metric_matrix(g) @ np.asarray(W))


@dataclass(frozen=True)
class Plane:
    X: np.ndarray
    Y: np.ndarray

    def check(self, g, tol: float = ORTHONORMAL_TOL):
        gm = _as_metric_matrix(g)
        X, Y = np.asarray(self.X), np.asarray(self.Y)
        errs = (abs(X @ gm @ X - 1.0), abs(Y @ gm @ Y - 1.0), abs(X @ gm @ Y))
        if max(errs) > tol:
            raise NotOrthonormalError(f"plane basis is not orthonormal (residuals {errs})")


@dataclass(frozen=True)
class Frame:
    vectors: np.ndarray  # one vector per row
    metric: np.ndarray
    kind: str = "tangent"

    def __len__(self):
        return self.vectors.shape[0]

    def gram(self) -> np.ndarray:
        return self.vectors @ self.metric @ self.vectors.T

    def check(self, tol: float = ORTHONORMAL_TOL):
        err = np.max(np.abs(self.gram() - np.eye(len(self))), initial=0.0)
        if err > tol:
            raise NotOrthonormalError(f"frame is not orthonormal (max Gram residual {err:.3e})")


# ---------------------------------------------------------------------------
# connections

def levi_civita(metric: MetricAtPoint) -> ConnectionAtPoint:
    """Christoffel symbols of the metric, with derivatives when ``ddg`` is known."""
    g_inv, dg = metric.g_inv, metric.dg
    d = g_inv.shape[0]
    if not dg.any() and (metric.ddg is None or not metric.ddg.any()):
        # constant metric: skip the contractions
        return ConnectionAtPoint(np.zeros((d, d, d)), None if metric.ddg is None else np.zeros((d, d, d, d)))
    # lowered[m, i, j] = 1/2 (d_i g_jm + d_j g_im - d_m g_ij)
    lowered = 0.5 * (dg.transpose(2, 0, 1) + dg.transpose(2, 1, 0) - dg)
    gamma = np.einsum("km,mij->kij", g_inv, lowered)
    dgamma = None
    if metric.ddg is not None:
        ddg = metric.ddg
        # d_l lowered[m, i, j]
        dlow = 0.5 * (ddg.transpose(0, 3, 1, 2) + ddg.transpose(0, 3, 2, 1) - ddg)
        dgamma = np.einsum("lkm,mij->lkij", metric.dg_inv, lowered, optimize=True) + np.einsum(
            "km,lmij->lkij", g_inv, dlow, optimize=True
        )
    return ConnectionAtPoint(gamma, dgamma)


def dual_connection(metric: MetricAtPoint, conn: ConnectionAtPoint) -> ConnectionAtPoint:
    """Solve d_i g_jk = G^m_ij g_mk + G*^m_ik g_jm for the dual coefficients G*."""
    g, g_inv, dg = metric.g, metric.g_inv, metric.dg
    # low[k, i, j] = g_km G^m_ij ;  Gs_low[j, i, k] = d_i g_jk - low[k, i, j]
    low = np.einsum("km,mij->kij", g, conn.gamma)
    star_low = dg.transpose(1, 0, 2) - low.transpose(2, 1, 0)
    gamma_star = np.einsum("lj,jik->lik", g_inv, star_low)
    dgamma_star = None
    if conn.dgamma is not None and metric.ddg is not None:
        dlow = np.einsum("pkm,mij->pkij", dg, conn.gamma) + np.einsum("km,pmij->pkij", g, conn.dgamma)
        dstar_low = metric.ddg.transpose(0, 2, 1, 3) - dlow.transpose(0, 3, 2, 1)
        dgamma_star = np.einsum("plj,jik->plik", metric.dg_inv, star_low) + np.einsum(
            "lj,pjik->plik", g_inv, dstar_low
        )
    return ConnectionAtPoint(gamma_star, dgamma_star)


def curvature(conn: ConnectionAtPoint) -> CurvatureAtPoint:
    if conn.dgamma is None:
        raise GeometryError("curvature needs connection derivatives (dgamma)")
    G, dG = conn.gamma, conn.dgamma
    # derivative part: d_i G^l_jk - d_j G^l_ik ; dG[i, l, j, k]
    deriv = dG.transpose(0, 2, 3, 1)  # [i, j, k, l]
    r = deriv - deriv.transpose(1, 0, 2, 3)
    quad = np.einsum("lim,mjk->ijkl", G, G)
    r = r + quad - quad.transpose(1, 0, 2, 3)
    return CurvatureAtPoint(r)


# ---------------------------------------------------------------------------
# sectional quantities

_K_WEIGHTS = {"proof": 2.0, "printed": 1.0}


def _k_combo(g, R, Rstar, Rcirc, X, Y, variant):
    weight = _K_WEIGHTS[variant]
    return 0.5 * (R.form(g, X, Y, Y, X) + Rstar.form(g, X, Y, Y, X) - weight * Rcirc.form(g, X, Y, Y, X))


def sectional_K(g, R, Rstar, Rcirc, plane: Plane, variant: str = "proof") -> float:
    """Sectional K-curvature of an orthonormal plane.

    ``variant="proof"`` uses 1/2 [R + R* - 2 R°]; ``"printed"`` keeps a single
    R° term, kept only for comparison reports.
    """
    plane.check(g)
    return _k_combo(g, R, Rstar, Rcirc, np.asarray(plane.X), np.asarray(plane.Y), variant)


def scalar_tau(g, R, Rstar, Rcirc, frame: Frame, variant: str = "proof") -> float:
    frame.check()
    vecs = frame.vectors
    total = 0.0
    for i in range(len(vecs)):
        for j in range(i + 1, len(vecs)):
            total += _k_combo(g, R, Rstar, Rcirc, vecs[i], vecs[j], variant)
    return total


def riemannian_sectional(g, R: CurvatureAtPoint, X, Y) -> float:
    """g(R(X,Y)Y, X) for an orthonormal pair."""
    return R.form(g, X, Y, Y, X)


# ---------------------------------------------------------------------------
# frames

def gram_schmidt(g, vectors: Sequence, kind: str = "tangent", tol: float = 1e-10) -> Frame:
    """Modified Gram-Schmidt (two passes) with respect to the metric ``g``."""
    gm = _as_metric_matrix(g)
    out = []
    for idx, v in enumerate(vectors):
        w = np.array(v, dtype=float)
        norm0 = np.sqrt(max(w @ gm @ w, 0.0))
        for _ in range(2):
            for e in out:
                w = w - (e @ gm @ w) * e
        norm = np.sqrt(max(w @ gm @ w, 0.0))
        if norm < tol or norm < tol * norm0:
            raise RankDeficiencyError(idx, norm)
        out.append(w / norm)
    d = gm.shape[0]
    return Frame(np.array(out).reshape(len(out), d), gm, kind)


def complete_frame(g, leading: Sequence, candidates: Sequence, size: int, kind="tangent", skip_tol=1e-6):
    """Orthonormalise ``leading`` then greedily add candidates until ``size`` vectors.

    Candidates whose residual norm falls below ``skip_tol`` are skipped.
    Returns the frame and the indices of the candidates that were used.
    """
    gm = _as_metric_matrix(g)
    frame = gram_schmidt(gm, leading, kind) if len(leading) else None
    out = list(frame.vectors) if frame is not None else []
    used = []
    for idx, v in enumerate(candidates):
        if len(out) >= size:
            break
        w = np.array(v, dtype=float)
        for _ in range(2):
            for e in out:
                w = w - (e @ gm @ w) * e
        norm = np.sqrt(max(w @ gm @ w, 0.0))
        if norm < skip_tol:
            continue
        out.append(w / norm)
        used.append(idx)
    if len(out) < size:
        raise RankDeficiencyError(len(out), 0.0)
    return Frame(np.array(out), gm, kind), used
