"""Immersed statistical submanifolds.

Pointwise data (tangent pushforwards, second fundamental forms, induced
connection coefficients, normal frames) are evaluated exactly from jets of
the immersion.  Derivatives of those fields along the submanifold chart
(needed for the induced curvature, shape operators and normal curvature) are
taken with a sixth-order central difference stencil, so the Gauss and Ricci
equations remain independent checks rather than identities.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from . import exprlang as el
from .ambient import AmbientModel, AmbientPoint, ModelError, evaluate_ambient
from .geomcore import (
    ConnectionAtPoint,
    CurvatureAtPoint,
    Frame,
    GeometryError,
    MetricAtPoint,
    complete_frame,
    curvature,
    gram_schmidt,
)

__all__ = [
    "ImmersedSubmanifold",
    "InducedData",
    "SubmanifoldClass",
    "GaussRicciReport",
    "submanifold_variables",
    "induced_data",
    "gauss_ricci_residuals",
    "p_alpha_invariants",
    "classify",
    "FD_STEP",
]

FD_STEP = 2e-3
RANK_TOL = 1e-8
_STENCIL = ((-3, -1.0), (-2, 9.0), (-1, -45.0), (1, 45.0), (2, -9.0), (3, 1.0))


def submanifold_variables(n: int) -> list[str]:
    return [f"u{i + 1}" for i in range(n)]


def _fd(fn, u, step=FD_STEP):
    """Sixth-order central differences of an array-valued (or tuple) function.

    Returns arrays with a leading axis indexing the chart direction.
    """
    u = np.asarray(u, dtype=float)
    n = u.shape[0]
    derivs = None
    for a in range(n):
        acc = None
        for offset, weight in _STENCIL:
            up = u.copy()
            up[a] += offset * step
            vals = fn(up)
            vals = vals if isinstance(vals, tuple) else (vals,)
            if acc is None:
                acc = [weight * np.asarray(v) for v in vals]
            else:
                for k, v in enumerate(vals):
                    acc[k] = acc[k] + weight * np.asarray(v)
        acc = [v / (60.0 * step) for v in acc]
        if derivs is None:
            derivs = [np.zeros((n,) + v.shape) for v in acc]
        for k, v in enumerate(acc):
            derivs[k][a] = v
    return tuple(derivs)


@dataclass(eq=False)
class ImmersedSubmanifold:
    ambient: AmbientModel
    n: int
    immersion: tuple  # d ExprAst components in u1..un
    domain: np.ndarray | None = None
    name: str = "submanifold"

    def __post_init__(self):
        if len(self.immersion) != self.ambient.dim:
            raise ModelError(
                f"immersion has {len(self.immersion)} components, ambient dimension is {self.ambient.dim}"
            )
        if not 1 <= self.n <= self.ambient.dim:
            raise ModelError(f"invalid submanifold dimension {self.n}")
        if self.domain is None:
            self.domain = np.tile([-1.0, 1.0], (self.n, 1))
        self.domain = np.asarray(self.domain, dtype=float).reshape(self.n, 2)

    @classmethod
    def from_texts(cls, ambient, n, texts, domain=None, name="submanifold"):
        names = submanifold_variables(n)
        return cls(ambient, n, tuple(el.parse(t, names) for t in texts), domain, name)

    @property
    def variables(self) -> list[str]:
        return submanifold_variables(self.n)

    def jets(self, u):
        """Position, Jacobian F[k, a] and second derivatives F2[k, a, b]."""
        u = np.asarray(u, dtype=float)
        d, n = self.ambient.dim, self.n
        x = np.zeros(d)
        F = np.zeros((d, n))
        F2 = np.zeros((d, n, n))
        for k, ast in enumerate(self.immersion):
            if el.is_constant(ast):
                x[k] = el.constant_value(ast)
                continue
            jet = el.eval_jet(ast, u)
            x[k], F[k], F2[k] = jet.value, jet.grad, jet.hess
        return x, F, F2


# ---------------------------------------------------------------------------
# exact pointwise pieces

@dataclass
class _Local:
    u: np.ndarray
    x: np.ndarray
    F: np.ndarray
    F2: np.ndarray
    amb: AmbientPoint
    h: np.ndarray
    h_inv: np.ndarray

    @cached_property
    def proj_coeff(self) -> np.ndarray:
        """Maps an ambient vector to the u-components of its tangential part."""
        return self.h_inv @ self.F.T @ self.amb.metric.g

    def second_derivs(self, conn: ConnectionAtPoint) -> np.ndarray:
        """V[a, b] = nabla-hat_{d_a f} d_b f as ambient vectors, shape (n, n, d)."""
        return np.moveaxis(self.F2, 0, -1) + np.einsum("kij,ia,jb->abk", conn.gamma, self.F, self.F, optimize=True)

    def split(self, V):
        """Induced coefficients Gamma^c_ab and normal parts of V[a, b]."""
        coeff = np.einsum("ck,abk->cab", self.proj_coeff, V)
        normal = V - np.einsum("kc,cab->abk", self.F, coeff)
        return coeff, normal


def _local(sub: ImmersedSubmanifold, u) -> _Local:
    u = np.asarray(u, dtype=float)
    x, F, F2 = sub.jets(u)
    amb = evaluate_ambient(sub.ambient, x)
    h = F.T @ amb.metric.g @ F
    h = 0.5 * (h + h.T)
    eig = np.linalg.eigvalsh(h)
    if eig[0] <= RANK_TOL**2:
        raise GeometryError(f"immersion is not of rank {sub.n} at u={u.tolist()} (smallest singular value {np.sqrt(max(eig[0], 0)):.3e})")
    return _Local(u, x, F, F2, amb, h, np.linalg.inv(h))


def _induced_gammas(sub, u):
    loc = _local(sub, u)
    out = []
    for conn in (loc.amb.conn, loc.amb.conn_star, loc.amb.conn_lc):
        coeff, _ = loc.split(loc.second_derivs(conn))
        out.append(coeff)
    return tuple(out)


def _normal_frame(loc: _Local, pivots=None, skip_tol=1e-2):
    d, n = loc.F.shape
    g = loc.amb.metric.g
    P_N = np.eye(d) - loc.F @ loc.proj_coeff
    scale = 1.0 / np.sqrt(np.diag(g))
    cands = [P_N[:, k] * scale[k] for k in range(d)]
    if pivots is None:
        frame, used = complete_frame(g, [], cands, d - n, kind="normal", skip_tol=skip_tol)
        return frame, tuple(used)
    frame = gram_schmidt(g, [cands[k] for k in pivots], kind="normal")
    return frame, tuple(pivots)


def _normal_vectors(sub, pivots):
    def fn(u):
        frame, _ = _normal_frame(_local(sub, u), pivots)
        return frame.vectors

    return fn


def _weingarten(sub, loc: _Local, pivots, step):
    """Shape operators and normal connection forms at ``loc`` via the Weingarten formula."""
    N = _normal_frame(loc, pivots)[0].vectors  # (m, d)
    (dN,) = _fd(_normal_vectors(sub, pivots), loc.u, step)  # (n, m, d)
    g = loc.amb.metric.g
    out = []
    for conn in (loc.amb.conn, loc.amb.conn_star):
        # nabla-hat_{d_a} xi_beta, shape (n, m, d)
        cov = dN + np.einsum("kij,ia,bj->abk", conn.gamma, loc.F, N)
        # A_{xi_beta} d_a = -tangential part ; A[beta, c, a]
        A = -np.einsum("ck,abk->bca", loc.proj_coeff, cov)
        # omega[a, gamma, beta] = g(nabla_a xi_beta, xi_gamma)
        omega = np.einsum("abk,kl,gl->agb", cov, g, N)
        out.append((A, omega))
    (A, omega), (A_star, omega_star) = out
    return N, A, A_star, omega, omega_star


# ---------------------------------------------------------------------------

@dataclass
class InducedData:
    """Everything induced on the submanifold at one chart point ``u``.

    Coordinate quantities are expressed in the submanifold chart; frame
    quantities use the tangent frame ``E`` (rows are u-components of e_i,
    orthonormal for the induced metric) and the ĝ-orthonormal normal frame
    ``N`` (rows are ambient vectors xi_gamma).
    """

    sub: ImmersedSubmanifold
    u: np.ndarray
    x: np.ndarray
    F: np.ndarray
    h: np.ndarray
    amb: AmbientPoint
    E: np.ndarray
    N: np.ndarray
    pivots: tuple
    gamma: np.ndarray
    gamma_star: np.ndarray
    gamma_lc: np.ndarray
    sigma: np.ndarray  # (n, n, d) ambient vectors sigma(d_a, d_b)
    sigma_star: np.ndarray
    sigma_lc: np.ndarray
    A: np.ndarray  # (m, n, n), A[gamma] in u-coordinates
    A_star: np.ndarray
    omega: np.ndarray  # (n, m, m) normal connection forms
    omega_star: np.ndarray
    R: CurvatureAtPoint
    R_star: CurvatureAtPoint
    R_lc: CurvatureAtPoint

    @property
    def n(self) -> int:
        return self.h.shape[0]

    @property
    def metric(self) -> np.ndarray:
        return self.h

    @property
    def tangent_frame(self) -> Frame:
        return Frame(self.E, self.h, "tangent")

    @property
    def normal_frame(self) -> Frame:
        return Frame(self.N, self.amb.metric.g, "normal")

    def push(self, v) -> np.ndarray:
        """Ambient components of a tangent vector given in u-components."""
        return self.F @ np.asarray(v, dtype=float)

    def ambient_frame(self, E=None) -> np.ndarray:
        E = self.E if E is None else E
        return E @ self.F.T

    def sigma_frame(self, E=None, which="sigma") -> np.ndarray:
        """sigma^gamma_ij = g-hat(sigma(e_i, e_j), xi_gamma), shape (m, n, n)."""
        E = self.E if E is None else E
        s = getattr(self, which)
        return np.einsum("ia,jb,abk,kl,gl->gij", E, E, s, self.amb.metric.g, self.N)

    def mean_curvature(self, which="sigma") -> np.ndarray:
        s = getattr(self, which)
        return np.einsum("ia,ib,abk->k", self.E, self.E, s) / self.n

    @property
    def H(self) -> np.ndarray:
        return self.mean_curvature("sigma")

    @property
    def H_star(self) -> np.ndarray:
        return self.mean_curvature("sigma_star")

    def norm2(self, v) -> float:
        return float(v @ self.amb.metric.g @ v)

    def P(self, E=None, star=False) -> np.ndarray:
        """Tangential parts of J_alpha (or J*_alpha) in the frame: P[a, j, i] = g(J e_i, e_j)."""
        if self.amb.J is None:
            raise ModelError("ambient has no quaternionic structure")
        Js = self.amb.J_star if star else self.amb.J
        amb_E = self.ambient_frame(E)
        g = self.amb.metric.g
        return np.einsum("jl,lm,amk,ik->aji", amb_E, g, Js, amb_E)

    def shape_frame(self, which="A") -> np.ndarray:
        """Matrix of g(A_{xi_gamma} e_i, e_j) in the tangent frame, shape (m, n, n)."""
        A = getattr(self, which)
        return np.einsum("jb,bc,gca,ia->gij", self.E, self.h, A, self.E)


def induced_data(sub: ImmersedSubmanifold, u, step: float = FD_STEP) -> InducedData:
    u = np.asarray(u, dtype=float)
    loc = _local(sub, u)
    gammas = []
    sigmas = []
    for conn in (loc.amb.conn, loc.amb.conn_star, loc.amb.conn_lc):
        coeff, normal = loc.split(loc.second_derivs(conn))
        gammas.append(coeff)
        sigmas.append(normal)
    dgammas = _fd(lambda up: _induced_gammas(sub, up), u, step)
    curv = [curvature(ConnectionAtPoint(G, dG)) for G, dG in zip(gammas, dgammas)]
    E = gram_schmidt(loc.h, np.eye(sub.n)).vectors
    _, pivots = _normal_frame(loc)
    N, A, A_star, omega, omega_star = _weingarten(sub, loc, pivots, step)
    return InducedData(
        sub=sub,
        u=u,
        x=loc.x,
        F=loc.F,
        h=loc.h,
        amb=loc.amb,
        E=E,
        N=N,
        pivots=pivots,
        gamma=gammas[0],
        gamma_star=gammas[1],
        gamma_lc=gammas[2],
        sigma=sigmas[0],
        sigma_star=sigmas[1],
        sigma_lc=sigmas[2],
        A=A,
        A_star=A_star,
        omega=omega,
        omega_star=omega_star,
        R=curv[0],
        R_star=curv[1],
        R_lc=curv[2],
    )


# ---------------------------------------------------------------------------
# Gauss and Ricci equations

def _normal_curvature(omega, domega):
    # R[a, b, gamma, beta] = d_a w^g_{b beta} - d_b w^g_{a beta} + w^g_{a d} w^d_{b beta} - w^g_{b d} w^d_{a beta}
    deriv = domega - domega.transpose(1, 0, 2, 3)
    quad = np.einsum("agd,bdc->abgc", omega, omega)
    return deriv + quad - quad.transpose(1, 0, 2, 3)


@dataclass
class GaussRicciReport:
    trials: int
    residuals: dict
    alternatives: dict = field(default_factory=dict)

    def max_residual(self) -> float:
        return max(self.residuals.values())

    def to_dict(self):
        return {"trials": self.trials, "residuals": self.residuals, "alternatives": self.alternatives}


def gauss_ricci_residuals(
    sub: ImmersedSubmanifold, u, trials: int = 50, rng=None, step: float = FD_STEP, data=None
) -> GaussRicciReport:
    """Max residuals of the two Gauss and two Ricci equations over random tuples.

    ``alternatives`` records the Ricci equations with the commutator pairing
    obtained by differentiating the Weingarten formula directly,
    [A_xi, A*_eta] for R-perp and [A*_xi, A_eta] for R*-perp.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    data = induced_data(sub, u, step) if data is None else data
    n, m = data.n, data.N.shape[0]
    g_amb = data.amb.metric.g
    h = data.h

    def omegas(up):
        loc = _local(sub, up)
        _, _, _, om, om_s = _weingarten(sub, loc, data.pivots, step)
        return om, om_s

    d_om, d_om_s = _fd(omegas, data.u, step)
    Rn = _normal_curvature(data.omega, d_om)
    Rn_s = _normal_curvature(data.omega_star, d_om_s)

    res = dict.fromkeys(("gauss", "gauss_star", "ricci", "ricci_star"), 0.0)
    alt = dict.fromkeys(("ricci_derived", "ricci_star_derived"), 0.0)

    def unit_tangent():
        v = rng.standard_normal(n)
        return v / np.sqrt(v @ h @ v)

    def shape(Aarr, coeffs):
        return np.einsum("g,gca->ca", coeffs, Aarr)

    for _ in range(trials):
        X, Y, Z, W = (unit_tangent() for _ in range(4))
        FX, FY, FZ, FW = (data.push(v) for v in (X, Y, Z, W))

        def sig(s, a, b):
            return np.einsum("a,b,abk->k", a, b, s)

        S, Ss = data.sigma, data.sigma_star
        lhs = data.amb.R.form(g_amb, FX, FY, FZ, FW)
        rhs = data.R.form(h, X, Y, Z, W) + sig(S, X, Z) @ g_amb @ sig(Ss, Y, W) - sig(Ss, X, W) @ g_amb @ sig(S, Y, Z)
        res["gauss"] = max(res["gauss"], abs(lhs - rhs))
        lhs = data.amb.R_star.form(g_amb, FX, FY, FZ, FW)
        rhs = data.R_star.form(h, X, Y, Z, W) + sig(Ss, X, Z) @ g_amb @ sig(S, Y, W) - sig(S, X, W) @ g_amb @ sig(Ss, Y, Z)
        res["gauss_star"] = max(res["gauss_star"], abs(lhs - rhs))

        s = rng.standard_normal(m)
        t = rng.standard_normal(m)
        s /= np.linalg.norm(s)
        t /= np.linalg.norm(t)
        xi, eta = s @ data.N, t @ data.N
        A_xi, As_xi = shape(data.A, s), shape(data.A_star, s)
        A_eta, As_eta = shape(data.A, t), shape(data.A_star, t)

        def comm(P, Q):
            return float(Y @ h @ (P @ Q - Q @ P) @ X)

        perp = np.einsum("a,b,abgc,c,g->", X, Y, Rn, s, t)
        amb_term = data.amb.R.form(g_amb, FX, FY, xi, eta)
        res["ricci"] = max(res["ricci"], abs(perp - amb_term - comm(As_xi, A_eta)))
        alt["ricci_derived"] = max(alt["ricci_derived"], abs(perp - amb_term - comm(A_xi, As_eta)))

        perp = np.einsum("a,b,abgc,c,g->", X, Y, Rn_s, s, t)
        amb_term = data.amb.R_star.form(g_amb, FX, FY, xi, eta)
        res["ricci_star"] = max(res["ricci_star"], abs(perp - amb_term - comm(A_xi, As_eta)))
        alt["ricci_star_derived"] = max(alt["ricci_star_derived"], abs(perp - amb_term - comm(As_xi, A_eta)))

    return GaussRicciReport(trials, {k: float(v) for k, v in res.items()}, {k: float(v) for k, v in alt.items()})


# ---------------------------------------------------------------------------
# quaternionic invariants and classification

def p_alpha_invariants(data: InducedData, E=None) -> list[tuple[float, float, float]]:
    """(tr P_a, ||P_a||^2, tr(P_a P*_a)) for a = 1, 2, 3."""
    P = data.P(E)
    Ps = data.P(E, star=True)
    return [
        (float(np.trace(P[a])), float(np.sum(P[a] ** 2)), float(np.trace(P[a] @ Ps[a])))
        for a in range(3)
    ]


@dataclass
class SubmanifoldClass:
    label: str
    max_normal: float
    max_tangential: float
    per_alpha_normal: list
    per_alpha_tangential: list
    normal_span_rank: int
    tol: float

    def to_dict(self):
        return {
            "label": self.label,
            "max_normal": self.max_normal,
            "max_tangential": self.max_tangential,
            "per_alpha_normal": self.per_alpha_normal,
            "per_alpha_tangential": self.per_alpha_tangential,
            "normal_span_rank": self.normal_span_rank,
            "tol": self.tol,
        }


def _alignment(sub, u):
    loc = _local(sub, u)
    if loc.amb.J is None:
        raise ModelError("classification needs a quaternionic ambient")
    g = loc.amb.metric.g
    E = gram_schmidt(loc.h, np.eye(sub.n)).vectors
    frame = E @ loc.F.T  # (n, d)
    normals, tangents, images = [], [], []
    for a in range(3):
        JE = frame @ loc.amb.J[a].T  # rows J_a e_i
        tang = np.einsum("kc,cl,il->ik", loc.F, loc.proj_coeff, JE)
        norm_part = JE - tang
        normals.append(max(np.sqrt(np.einsum("ik,kl,il->i", norm_part, g, norm_part)).max(), 0.0))
        tangents.append(max(np.sqrt(np.einsum("ik,kl,il->i", tang, g, tang)).max(), 0.0))
        images.append(norm_part)
    return normals, tangents, np.vstack(images), g, sub.ambient.dim - sub.n


def classify(sub: ImmersedSubmanifold, points: Sequence, tol: float = 1e-6) -> SubmanifoldClass:
    per_n = np.zeros(3)
    per_t = np.zeros(3)
    min_rank = None
    for u in points:
        normals, tangents, images, g, codim = _alignment(sub, u)
        per_n = np.maximum(per_n, normals)
        per_t = np.maximum(per_t, tangents)
        # rank of the normal parts of the J-images, measured with g-hat
        L = np.linalg.cholesky(g)
        sv = np.linalg.svd(images @ L, compute_uv=False) if images.size else np.zeros(0)
        rank = int(np.sum(sv > 1e-6))
        min_rank = rank if min_rank is None else min(min_rank, rank)
    max_n, max_t = float(per_n.max()), float(per_t.max())
    codim = sub.ambient.dim - sub.n
    if max_n < tol:
        label = "invariant"
    elif max_t < tol:
        label = "lagrangian_like" if min_rank == codim else "totally_real"
    else:
        label = "generic"
    return SubmanifoldClass(label, max_n, max_t, per_n.tolist(), per_t.tolist(), int(min_rank or 0), tol)
