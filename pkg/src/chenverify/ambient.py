"""Ambient statistical manifolds, quaternionic structures and their validators."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Sequence

import numpy as np

from . import exprlang as el
from .geomcore import (
    ConnectionAtPoint,
    CurvatureAtPoint,
    MetricAtPoint,
    curvature,
    dual_connection,
    levi_civita,
)

__all__ = [
    "AmbientModel",
    "AmbientPoint",
    "QuaternionicFrameData",
    "CheckResult",
    "ValidationReport",
    "ConstantTypeFit",
    "ModelError",
    "ambient_variables",
    "evaluate_ambient",
    "connection_at",
    "compute_dual_J",
    "quaternionic_frame_data",
    "validate_statistical",
    "validate_quaternionic",
    "constant_type_tensor",
    "check_constant_type_curvature",
    "sample_points",
    "builtin_model",
    "standard_quaternion_matrices",
]


class ModelError(ValueError):
    pass


def ambient_variables(d: int) -> list[str]:
    return [f"x{i + 1}" for i in range(d)]


def standard_quaternion_matrices(m: int = 1) -> np.ndarray:
    """Left multiplication by i, j, k on H^m, shape (3, 4m, 4m).

    Satisfies J_a^2 = -I and J_1 J_2 = J_3 (cyclically); each J_a is orthogonal.
    """
    # basis products (a, b) -> (sign, c) for quaternion units 1, i, j, k
    table = {
        (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
        (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
        (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
    }
    block = np.zeros((3, 4, 4))
    for unit in (1, 2, 3):
        for col in range(4):
            sign, row = table[(unit, col)]
            block[unit - 1, row, col] = sign
    out = np.zeros((3, 4 * m, 4 * m))
    for b in range(m):
        out[:, 4 * b : 4 * b + 4, 4 * b : 4 * b + 4] = block
    return out


@dataclass(eq=False)
class AmbientModel:
    """Chart-level description of a statistical manifold.

    ``skewness`` maps sorted index triples (0-based) to expressions for the
    totally symmetric cubic form K_ijk; in that mode the connections are
    Gamma = LC + K#, Gamma* = LC - K# with K#^k_ij = g^kl K_lij.  In explicit
    mode ``gamma`` maps (k, i, j) to Gamma^k_ij and ``gamma_star`` optionally
    supplies the dual coefficients (otherwise they are solved from duality).
    """

    dim: int
    metric: el.ExprMatrix
    connection_mode: str = "skewness"
    skewness: Mapping[tuple, el.ExprAst] = field(default_factory=dict)
    gamma: Mapping[tuple, el.ExprAst] = field(default_factory=dict)
    gamma_star: Mapping[tuple, el.ExprAst] | None = None
    J: tuple | None = None  # three ExprMatrix
    omega: tuple | None = None  # three tuples of d expressions
    c: float | None = None
    domain: np.ndarray | None = None
    name: str = "custom"

    def __post_init__(self):
        d = self.dim
        if self.metric.rows != d or self.metric.cols != d:
            raise ModelError("metric must be dim x dim")
        if self.connection_mode not in ("skewness", "explicit"):
            raise ModelError(f"unknown connection mode {self.connection_mode!r}")
        if self.J is not None:
            if d % 4:
                raise ModelError(f"quaternionic models need dim divisible by 4, got {d}")
            if len(self.J) != 3:
                raise ModelError("J must have three components")
        if self.omega is not None and self.J is None:
            raise ModelError("omega given without J")
        self.skewness = {tuple(sorted(k)): v for k, v in self.skewness.items()}
        if self.domain is None:
            self.domain = np.tile([-1.0, 1.0], (d, 1))
        self.domain = np.asarray(self.domain, dtype=float).reshape(d, 2)

    @property
    def quaternionic(self) -> bool:
        return self.J is not None

    @property
    def variables(self) -> list[str]:
        return ambient_variables(self.dim)

    @cached_property
    def _metric_entries(self):
        entries = []
        for i, j, ast in self.metric.nonzero():
            if j < i:
                continue
            entries.append((i, j, ast, el.is_constant(ast)))
        return entries


@dataclass(frozen=True)
class AmbientPoint:
    """All ambient quantities evaluated at one chart point."""

    x: np.ndarray
    metric: MetricAtPoint
    conn: ConnectionAtPoint
    conn_star: ConnectionAtPoint
    conn_lc: ConnectionAtPoint
    J: np.ndarray | None = None  # (3, d, d), J[a, k, j] = (J_a)^k_j
    dJ: np.ndarray | None = None  # (3, d, d, d), dJ[a, i, k, j] = d_i (J_a)^k_j
    omega: np.ndarray | None = None  # (3, d)

    @cached_property
    def R(self) -> CurvatureAtPoint:
        return curvature(self.conn)

    @cached_property
    def R_star(self) -> CurvatureAtPoint:
        return curvature(self.conn_star)

    @cached_property
    def R_lc(self) -> CurvatureAtPoint:
        return curvature(self.conn_lc)

    @cached_property
    def J_star(self) -> np.ndarray:
        return np.array([compute_dual_J(self.metric, Ja) for Ja in self.J])


def _jet_or_const(ast, x, is_const):
    d = x.shape[0]
    if is_const:
        return el.constant_value(ast), np.zeros(d), np.zeros((d, d))
    jet = el.eval_jet(ast, x)
    return jet.value, jet.grad, jet.hess


def _eval_metric(model: AmbientModel, x) -> MetricAtPoint:
    d = model.dim
    g = np.zeros((d, d))
    dg = np.zeros((d, d, d))
    ddg = np.zeros((d, d, d, d))
    for i, j, ast, const in model._metric_entries:
        v, gr, he = _jet_or_const(ast, x, const)
        g[i, j] = g[j, i] = v
        dg[:, i, j] = dg[:, j, i] = gr
        ddg[:, :, i, j] = ddg[:, :, j, i] = he
    return MetricAtPoint(g, dg, ddg)


def _eval_sparse3(entries: Mapping[tuple, el.ExprAst], x, d, symmetric: bool):
    val = np.zeros((d, d, d))
    grad = np.zeros((d, d, d, d))  # grad[p, a, b, c]
    for idx, ast in entries.items():
        v, gr, _ = _jet_or_const(ast, x, el.is_constant(ast))
        targets = set(_permutations(idx)) if symmetric else {idx}
        for a, b, c in targets:
            val[a, b, c] = v
            grad[:, a, b, c] = gr
    return val, grad


def _permutations(idx):
    i, j, k = idx
    return [(i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)]


def connection_at(model: AmbientModel, x, strict: bool = False):
    """(Gamma, Gamma*, Levi-Civita, metric) at ``x``."""
    x = np.asarray(x, dtype=float)
    d = model.dim
    metric = _eval_metric(model, x)
    lc = levi_civita(metric)
    if model.connection_mode == "skewness":
        K, dK = _eval_sparse3(model.skewness, x, d, symmetric=True)
        if not K.any() and not dK.any():
            return lc, lc, lc, metric
        ks = np.einsum("kl,lij->kij", metric.g_inv, K)
        dks = np.einsum("pkl,lij->pkij", metric.dg_inv, K, optimize=True) + np.einsum(
            "kl,plij->pkij", metric.g_inv, dK, optimize=True
        )
        conn = ConnectionAtPoint(lc.gamma + ks, lc.dgamma + dks)
        conn_star = ConnectionAtPoint(lc.gamma - ks, lc.dgamma - dks)
    else:
        G, dG = _eval_sparse3(model.gamma, x, d, symmetric=False)
        conn = ConnectionAtPoint(G, dG)
        if strict:
            asym = np.max(np.abs(conn.torsion()), initial=0.0)
            if asym > 1e-12:
                raise ModelError(f"explicit connection has torsion (max asymmetry {asym:.3e})")
        if model.gamma_star is not None:
            Gs, dGs = _eval_sparse3(model.gamma_star, x, d, symmetric=False)
            conn_star = ConnectionAtPoint(Gs, dGs)
        else:
            conn_star = dual_connection(metric, conn)
    return conn, conn_star, lc, metric


def evaluate_ambient(model: AmbientModel, x) -> AmbientPoint:
    x = np.asarray(x, dtype=float)
    conn, conn_star, lc, metric = connection_at(model, x)
    J = dJ = omega = None
    if model.J is not None:
        d = model.dim
        J = np.zeros((3, d, d))
        dJ = np.zeros((3, d, d, d))
        for a, Jm in enumerate(model.J):
            for k, j, ast in Jm.nonzero():
                v, gr, _ = _jet_or_const(ast, x, el.is_constant(ast))
                J[a, k, j] = v
                dJ[a, :, k, j] = gr
        omega = np.zeros((3, d))
        if model.omega is not None:
            for a, row in enumerate(model.omega):
                for i, ast in enumerate(row):
                    omega[a, i] = el.eval_float(ast, x)
    return AmbientPoint(x, metric, conn, conn_star, lc, J, dJ, omega)


def compute_dual_J(g, J) -> np.ndarray:
    """J* = -g^-1 J^T g, the endomorphism with g(JX, Y) + g(X, J*Y) = 0."""
    if isinstance(g, MetricAtPoint):
        gm, g_inv = g.g, g.g_inv
    else:
        gm = np.asarray(g, dtype=float)
        g_inv = np.linalg.inv(gm)
    return -g_inv @ np.asarray(J, dtype=float).T @ gm


@dataclass(frozen=True)
class QuaternionicFrameData:
    J_alpha: np.ndarray
    J_star_alpha: np.ndarray
    omega_alpha: np.ndarray


def quaternionic_frame_data(model: AmbientModel, x) -> QuaternionicFrameData:
    if model.J is None:
        raise ModelError("model has no quaternionic structure")
    pt = evaluate_ambient(model, x)
    return QuaternionicFrameData(pt.J, pt.J_star, pt.omega)


# ---------------------------------------------------------------------------
# validation reports

@dataclass
class CheckResult:
    name: str
    max_residual: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(self.max_residual <= self.tol)

    def to_dict(self):
        return {"name": self.name, "max_residual": self.max_residual, "tol": self.tol, "passed": self.passed}


@dataclass
class ValidationReport:
    kind: str
    checks: list
    points: list
    failures: list = field(default_factory=list)  # (point index, message)

    @property
    def passed(self) -> bool:
        return not self.failures and all(c.passed for c in self.checks)

    def __getitem__(self, name) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def failed_checks(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]

    def to_dict(self):
        return {
            "kind": self.kind,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
            "points": [list(map(float, p)) for p in self.points],
            "failures": [{"point": i, "error": msg} for i, msg in self.failures],
        }


def _run_checks(kind, names, points, tol, per_point):
    worst = dict.fromkeys(names, 0.0)
    failures = []
    for idx, x in enumerate(points):
        try:
            residuals = per_point(np.asarray(x, dtype=float))
        except (ValueError, ZeroDivisionError, OverflowError, np.linalg.LinAlgError) as exc:
            failures.append((idx, str(exc)))
            continue
        for name in names:
            worst[name] = max(worst[name], float(residuals[name]))
    checks = [CheckResult(name, worst[name], tol) for name in names]
    return ValidationReport(kind, checks, [np.asarray(p, dtype=float) for p in points], failures)


def _maxabs(a) -> float:
    return float(np.max(np.abs(a), initial=0.0))


STATISTICAL_CHECKS = ("torsion_free", "dual_torsion_free", "codazzi", "duality", "levi_civita_average")


def statistical_residuals(conn, conn_star, lc, metric) -> dict:
    g, dg = metric.g, metric.dg
    low = np.einsum("km,mij->kij", g, conn.gamma)  # Gamma_{k,ij}
    low_star = np.einsum("km,mij->kij", g, conn_star.gamma)
    # (nabla_k g)_ij = d_k g_ij - Gamma_{j,ki} - Gamma_{i,kj}
    cubic = dg - np.einsum("jki->kij", low) - np.einsum("ikj->kij", low)
    # duality: d_i g_jk - Gamma_{k,ij} - Gamma*_{j,ik}
    duality = dg - np.einsum("kij->ijk", low) - np.einsum("jik->ijk", low_star)
    return {
        "torsion_free": _maxabs(conn.torsion()),
        "dual_torsion_free": _maxabs(conn_star.torsion()),
        "codazzi": _maxabs(cubic - cubic.transpose(1, 0, 2)),
        "duality": _maxabs(duality),
        "levi_civita_average": _maxabs(0.5 * (conn.gamma + conn_star.gamma) - lc.gamma),
    }


def validate_statistical(model: AmbientModel, points: Sequence, tol: float = 1e-9) -> ValidationReport:
    """Torsion, Codazzi symmetry of nabla g, duality and the LC average at each point."""

    def per_point(x):
        conn, conn_star, lc, metric = connection_at(model, x)
        return statistical_residuals(conn, conn_star, lc, metric)

    return _run_checks("statistical", STATISTICAL_CHECKS, points, tol, per_point)


QUATERNIONIC_CHECKS = ("quaternion_relations", "metric_adapted", "hermite_like", "kaehler_like")


def quaternionic_residuals(pt: AmbientPoint) -> dict:
    J, g = pt.J, pt.metric.g
    d = g.shape[0]
    eye = np.eye(d)
    rel = 0.0
    adapted = 0.0
    hermite = 0.0
    kaehler = 0.0
    for a in range(3):
        b, c = (a + 1) % 3, (a + 2) % 3
        rel = max(
            rel,
            _maxabs(J[a] @ J[a] + eye),
            _maxabs(J[a] @ J[b] - J[c]),
            _maxabs(J[b] @ J[a] + J[c]),
        )
        adapted = max(adapted, _maxabs(J[a].T @ g @ J[a] - g))
        Js = compute_dual_J(pt.metric, J[a])
        hermite = max(
            hermite,
            _maxabs(J[a].T @ g + g @ Js),
            _maxabs(compute_dual_J(pt.metric, Js) - J[a]),
            _maxabs(J[a].T @ g @ Js - g),
        )
        G = pt.conn.gamma
        # (nabla_i J)^k_j = d_i J^k_j + G^k_im J^m_j - G^m_ij J^k_m ; stored [i, k, j]
        nabla = pt.dJ[a] + np.einsum("kim,mj->ikj", G, J[a]) - np.einsum("mij,km->ikj", G, J[a])
        target = np.einsum("i,kj->ikj", pt.omega[c], J[b]) - np.einsum("i,kj->ikj", pt.omega[b], J[c])
        kaehler = max(kaehler, _maxabs(nabla - target))
    return {
        "quaternion_relations": rel,
        "metric_adapted": adapted,
        "hermite_like": hermite,
        "kaehler_like": kaehler,
    }


def validate_quaternionic(model: AmbientModel, points: Sequence, tol: float = 1e-9) -> ValidationReport:
    if model.J is None:
        raise ModelError("model has no quaternionic structure (J fields missing)")
    return _run_checks(
        "quaternionic",
        QUATERNIONIC_CHECKS,
        points,
        tol,
        lambda x: quaternionic_residuals(evaluate_ambient(model, x)),
    )


# ---------------------------------------------------------------------------
# constant-type curvature

def constant_type_tensor(g, J) -> np.ndarray:
    """Lowered curvature form of the constant-type model with c = 1.

    Returns B[i, j, k, l] = g(R_1(d_i, d_j) d_k, d_l) where R_1 is the
    quaternionic constant-type expression with c = 1, built literally from
    g and the triple J (pass J* to get the dual-connection version).
    """
    g = np.asarray(g, dtype=float)
    d = g.shape[0]
    # vector-valued tensor T[i, j, k, :] = R_1(d_i, d_j) d_k
    eye = np.eye(d)
    T = np.einsum("jk,il->ijkl", g, eye) - np.einsum("ik,jl->ijkl", g, eye)
    for Ja in J:
        gJ = g @ Ja  # gJ[k, j] = g(d_k, J d_j)
        # g(Z, J Y) J X - g(Z, J X) J Y
        T += np.einsum("kj,li->ijkl", gJ, Ja) - np.einsum("ki,lj->ijkl", gJ, Ja)
        # [g(X, J Y) - g(J X, Y)] J Z
        coef = gJ - gJ.T  # coef[i, j] = g(d_i, J d_j) - g(J d_i, d_j)
        T += np.einsum("ij,lk->ijkl", coef, Ja)
    T *= 0.25
    return np.einsum("ijkm,ml->ijkl", T, g)


@dataclass
class ConstantTypeFit:
    c_fit: float | None
    residual: float
    tol: float
    c_declared: float | None = None
    degenerate: bool = False

    @property
    def passed(self) -> bool:
        if self.c_fit is None:
            return False
        ok = self.residual <= self.tol
        if self.c_declared is not None:
            ok = ok and abs(self.c_fit - self.c_declared) <= self.tol * max(1.0, abs(self.c_declared))
        return bool(ok)

    def to_dict(self):
        return {
            "c_fit": self.c_fit,
            "c_declared": self.c_declared,
            "residual": self.residual,
            "tol": self.tol,
            "degenerate": self.degenerate,
            "passed": self.passed,
        }


def check_constant_type_curvature(model: AmbientModel, points: Sequence, tol: float = 1e-9) -> ConstantTypeFit:
    """Least-squares fit of c so that R and R* match the constant-type form."""
    if model.J is None:
        raise ModelError("constant-type check needs a quaternionic structure")
    actual, basis = [], []
    for x in points:
        pt = evaluate_ambient(model, x)
        g = pt.metric.g
        actual += [pt.R.lowered(g).ravel(), pt.R_star.lowered(g).ravel()]
        basis += [constant_type_tensor(g, pt.J).ravel(), constant_type_tensor(g, pt.J_star).ravel()]
    actual = np.concatenate(actual)
    basis = np.concatenate(basis)
    bb = float(basis @ basis)
    if bb == 0.0:
        if _maxabs(actual) == 0.0:
            return ConstantTypeFit(0.0, 0.0, tol, model.c, degenerate=True)
        return ConstantTypeFit(None, _maxabs(actual), tol, model.c, degenerate=True)
    c_fit = float(basis @ actual) / bb
    if abs(c_fit) < 1e-14:
        c_fit = 0.0
    residual = _maxabs(actual - c_fit * basis)
    return ConstantTypeFit(c_fit, residual, tol, model.c)


# ---------------------------------------------------------------------------
# builtin models

def sample_points(model_or_domain, count: int, rng) -> list[np.ndarray]:
    """Uniform points in the declared box domain, drawn from ``rng``."""
    domain = model_or_domain.domain if hasattr(model_or_domain, "domain") else np.asarray(model_or_domain)
    lo, hi = domain[:, 0], domain[:, 1]
    return [lo + (hi - lo) * rng.random(lo.shape[0]) for _ in range(count)]


def _num(v) -> el.Num:
    return el.Num(float(v))


def _flat_quaternionic(m: int, omega=None, J=None) -> AmbientModel:
    if m < 1:
        raise ModelError(f"flat_quaternionic needs m >= 1, got {m}")
    d = 4 * m
    Jm = standard_quaternion_matrices(m) if J is None else np.asarray(J, dtype=float)
    om = None
    if omega is not None:
        om = tuple(tuple(_num(v) for v in row) for row in np.asarray(omega, dtype=float))
    return AmbientModel(
        dim=d,
        metric=el.ExprMatrix.from_array(np.eye(d)),
        connection_mode="skewness",
        J=tuple(el.ExprMatrix.from_array(Jm[a]) for a in range(3)),
        omega=om,
        c=0.0,
        domain=np.tile([-2.0, 2.0], (d, 1)),
        name=f"flat_quaternionic({m})",
    )


def _sympy_to_text(expr) -> str:
    import sympy as sp

    if expr.is_Symbol:
        return expr.name
    if expr is sp.pi:
        return "pi"
    if expr is sp.E:
        return "exp(1)"
    if expr.is_Integer:
        v = int(expr)
        return str(v) if v >= 0 else f"({v})"
    if expr.is_Rational:
        return f"({int(expr.p)}/{int(expr.q)})"
    if expr.is_Number:
        v = float(expr)
        return repr(v) if v >= 0 else f"({v!r})"
    if expr.is_Add:
        return "(" + "+".join(_sympy_to_text(a) for a in expr.args) + ")"
    if expr.is_Mul:
        return "(" + "*".join(_sympy_to_text(a) for a in expr.args) + ")"
    if expr.is_Pow:
        base, exp = expr.args
        if exp == sp.Rational(1, 2):
            return f"sqrt({_sympy_to_text(base)})"
        return f"({_sympy_to_text(base)}^{_sympy_to_text(exp)})"
    fn = type(expr).__name__
    if fn in el.FUNCTIONS:
        return f"{fn}({_sympy_to_text(expr.args[0])})"
    raise ModelError(f"cannot express {expr} in the expression language")


def _hessian(potential: str, dim: int, domain=None, check_points: int = 50, seed: int = 0) -> AmbientModel:
    """Hessian statistical structure: g = D^2 phi, flat nabla, K = -1/2 D^3 phi."""
    import sympy as sp

    names = ambient_variables(dim)
    el.parse(potential, names)  # reject anything outside the grammar first
    syms = sp.symbols(names)
    local = dict(zip(names, syms))
    phi = sp.sympify(potential.replace("^", "**"), locals=local)
    metric_txt = [["0"] * dim for _ in range(dim)]
    for i in range(dim):
        for j in range(i, dim):
            metric_txt[i][j] = metric_txt[j][i] = _sympy_to_text(sp.diff(phi, syms[i], syms[j]))
    skew = {}
    for i in range(dim):
        for j in range(i, dim):
            for k in range(j, dim):
                third = sp.diff(phi, syms[i], syms[j], syms[k])
                if third != 0:
                    skew[(i, j, k)] = el.parse(_sympy_to_text(-third / 2), names)
    domain = np.tile([-1.0, 1.0], (dim, 1)) if domain is None else np.asarray(domain, dtype=float)
    model = AmbientModel(
        dim=dim,
        metric=el.ExprMatrix.from_texts(metric_txt, names),
        connection_mode="skewness",
        skewness=skew,
        domain=domain,
        name=f"hessian({potential})",
    )
    rng = np.random.default_rng(seed)
    for x in sample_points(model, check_points, rng):
        H = model.metric.evaluate(x)
        if np.linalg.eigvalsh(0.5 * (H + H.T))[0] <= 1e-10:
            raise ModelError(f"potential {potential!r} is not strictly convex at {x.tolist()}")
    return model


def _normal_family(alpha: float) -> AmbientModel:
    """Fisher metric of N(mu, sigma) with the Amari alpha-connection, chart (x1, x2) = (mu, sigma)."""
    names = ambient_variables(2)
    metric = el.ExprMatrix.from_texts([["1/x2^2", "0"], ["0", "2/x2^2"]], names)
    # K = -(alpha/2) T with T_{mu mu sigma} = 2/sigma^3, T_{sigma sigma sigma} = 8/sigma^3
    skew = {}
    if alpha != 0:
        a = float(alpha)
        skew[(0, 0, 1)] = el.parse(f"({-a!r})/x2^3", names)
        skew[(1, 1, 1)] = el.parse(f"({-4 * a!r})/x2^3", names)
    return AmbientModel(
        dim=2,
        metric=metric,
        connection_mode="skewness",
        skewness=skew,
        domain=np.array([[-2.0, 2.0], [0.5, 2.0]]),
        name=f"normal_family({alpha})",
    )


def _round_sphere(n: int, radius: float) -> AmbientModel:
    """Stereographic chart of the radius-``radius`` sphere, trivial statistical structure."""
    if n < 1 or radius <= 0:
        raise ModelError("round_sphere needs n >= 1 and radius > 0")
    names = ambient_variables(n)
    r2 = "+".join(f"{v}^2" for v in names)
    factor = f"{4 * radius**2!r}/(1+{r2})^2"
    texts = [[factor if i == j else "0" for j in range(n)] for i in range(n)]
    return AmbientModel(
        dim=n,
        metric=el.ExprMatrix.from_texts(texts, names),
        connection_mode="skewness",
        domain=np.tile([-1.5, 1.5], (n, 1)),
        name=f"round_sphere({n}, {radius})",
    )


def _euclidean(d: int) -> AmbientModel:
    return AmbientModel(
        dim=d,
        metric=el.ExprMatrix.from_array(np.eye(d)),
        connection_mode="skewness",
        domain=np.tile([-2.0, 2.0], (d, 1)),
        name=f"euclidean({d})",
    )


def builtin_model(name: str, **params) -> AmbientModel:
    """Library of test instances.

    ``flat_quaternionic(m)``, ``hessian(potential, dim)``,
    ``normal_family(alpha)``, ``round_sphere(n, radius)`` and the plain
    ``euclidean(d)`` with the trivial statistical structure.
    """
    if name == "flat_quaternionic":
        return _flat_quaternionic(int(params.get("m", 1)), params.get("omega"), params.get("J"))
    if name == "hessian":
        return _hessian(params["potential"], int(params["dim"]), params.get("domain"))
    if name == "normal_family":
        return _normal_family(float(params.get("alpha", 0.0)))
    if name == "round_sphere":
        return _round_sphere(int(params.get("n", 2)), float(params.get("radius", 1.0)))
    if name == "euclidean":
        return _euclidean(int(params["d"]))
    raise ModelError(f"unknown builtin model {name!r}")
