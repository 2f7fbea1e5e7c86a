"""Chen-type inequalities for statistical submanifolds of quaternionic
Kaehler-like statistical manifolds: the algebraic lemmas, the first Chen
inequality, the delta(2,2) inequality, equality patterns and the minimality
statements that follow from them.
"""
from __future__ import annotations

import weakref
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .ambient import (
    AmbientModel,
    check_constant_type_curvature,
    sample_points,
    validate_quaternionic,
    validate_statistical,
)
from .geomcore import (
    NotOrthonormalError,
    Plane,
    complete_frame,
    gram_schmidt,
    riemannian_sectional,
    scalar_tau,
    sectional_K,
)
from .subman import ImmersedSubmanifold, InducedData, SubmanifoldClass, classify, induced_data

__all__ = [
    "LemmaResult",
    "lemma_chen_first",
    "lemma_chen_delta22",
    "lemma_margins",
    "maximize_lemma",
    "chen_first_coefficients",
    "delta22_constant",
    "EqualityDiagnostics",
    "equality_residuals",
    "equality_case_check",
    "InequalityReport",
    "chen_first_report",
    "delta22_report",
    "minimality_check",
    "nonminimality_criterion",
    "random_plane",
    "random_plane_pair",
    "ClassificationMismatch",
    "UnverifiedAmbientError",
    "CASES",
    "HOLDS_RTOL",
]

CASES = ("holomorphic_printed", "holomorphic_proof_variant", "totally_real")
HOLDS_RTOL = 1e-8


class ClassificationMismatch(ValueError):
    def __init__(self, case, classification: SubmanifoldClass):
        self.case = case
        self.classification = classification
        super().__init__(
            f"case {case!r} does not apply to a submanifold classified as {classification.label!r} "
            f"(max normal part {classification.max_normal:.3e}, max tangential part {classification.max_tangential:.3e})"
        )


class UnverifiedAmbientError(ValueError):
    pass


# ---------------------------------------------------------------------------
# lemmas

@dataclass(frozen=True)
class LemmaResult:
    lhs: float
    rhs: float
    holds: bool
    equality: bool

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs


def _lemma_constant(n: int, kind: str, constant: str) -> float:
    if kind == "chen_first":
        return 0.5 if constant == "printed" else (n - 2) / (2 * (n - 1))
    return (n - 3) / (2 * (n - 2))


def _pair_sum(a) -> float:
    s = a.sum()
    return 0.5 * (s * s - (a * a).sum())


def lemma_chen_first(a, constant: str = "corrected") -> LemmaResult:
    """sum_{i<j} a_i a_j - a_1 a_2 <= (n-2)/(2(n-1)) (sum a_i)^2.

    ``constant="printed"`` uses the weaker bound 1/2 (sum a_i)^2.
    """
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    if n < 3:
        raise ValueError(f"first Chen lemma needs n >= 3, got {n}")
    lhs = _pair_sum(a) - a[0] * a[1]
    rhs = _lemma_constant(n, "chen_first", constant) * a.sum() ** 2
    pattern = np.concatenate([[a[0] + a[1]], a[2:]])
    equality = bool(np.max(np.abs(pattern - pattern[0])) < 1e-10)
    return LemmaResult(float(lhs), float(rhs), bool(lhs <= rhs + 1e-12), equality)


def lemma_chen_delta22(a) -> LemmaResult:
    """sum_{i<j} a_i a_j - a_1 a_2 - a_3 a_4 <= (n-3)/(2(n-2)) (sum a_i)^2."""
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    if n < 4:
        raise ValueError(f"delta(2,2) lemma needs n >= 4, got {n}")
    lhs = _pair_sum(a) - a[0] * a[1] - a[2] * a[3]
    rhs = _lemma_constant(n, "delta22", "corrected") * a.sum() ** 2
    pattern = np.concatenate([[a[0] + a[1], a[2] + a[3]], a[4:]])
    equality = bool(np.max(np.abs(pattern - pattern[0])) < 1e-10)
    return LemmaResult(float(lhs), float(rhs), bool(lhs <= rhs + 1e-12), equality)


def lemma_margins(samples, kind: str = "chen_first", constant: str = "corrected") -> np.ndarray:
    """Vectorised rhs - lhs for each row of ``samples``."""
    A = np.asarray(samples, dtype=float)
    s = A.sum(axis=1)
    return _lemma_constant(A.shape[1], kind, constant) * s * s - _lemma_lhs(A, kind)


def _lemma_lhs(A, kind):
    s = A.sum(axis=-1)
    lhs = 0.5 * (s * s - (A * A).sum(axis=-1)) - A[..., 0] * A[..., 1]
    if kind == "delta22":
        lhs = lhs - A[..., 2] * A[..., 3]
    return lhs


def _lemma_lhs_grad(A, kind):
    grad = A.sum(axis=-1, keepdims=True) - A
    grad[..., 0] -= A[..., 1]
    grad[..., 1] -= A[..., 0]
    if kind == "delta22":
        grad[..., 2] -= A[..., 3]
        grad[..., 3] -= A[..., 2]
    return grad


def _pattern(a, kind):
    if kind == "delta22":
        return np.concatenate([[a[0] + a[1], a[2] + a[3]], a[4:]])
    return np.concatenate([[a[0] + a[1]], a[2:]])


@dataclass
class MaximizationResult:
    n: int
    kind: str
    max_ratio: float  # max lhs / (sum a)^2 on the hyperplane sum a = total
    maximizer: np.ndarray
    pattern_residual: float
    restarts: int


def maximize_lemma(n: int, kind: str = "chen_first", restarts: int = 200, rng=None, total: float = 1.0,
                   iters: int = 4000, step: float = 0.4) -> MaximizationResult:
    """Projected gradient ascent of the lemma lhs on the hyperplane sum a = ``total``.

    All restarts run together as rows of one array.  The result does not use
    the closed-form constants: ``max_ratio`` is what the optimiser reaches and
    ``pattern_residual`` is the distance of the best maximiser from the
    stated equality pattern.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    A = rng.uniform(-10, 10, (restarts, n))
    A += (total - A.sum(axis=1, keepdims=True)) / n
    for _ in range(iters):
        grad = _lemma_lhs_grad(A, kind)
        grad -= grad.mean(axis=1, keepdims=True)
        if np.max(np.abs(grad)) < 1e-13:
            break
        A = A + step * grad
    vals = _lemma_lhs(A, kind)
    best = int(np.argmax(vals))
    pattern = _pattern(A[best], kind)
    return MaximizationResult(
        n, kind, float(vals[best] / total**2), A[best].copy(), float(np.max(np.abs(pattern - pattern[0]))), restarts
    )


# ---------------------------------------------------------------------------
# coefficients (exact rational forms)

def chen_first_coefficients(n: int, c=Fraction(1), case: str = "totally_real") -> dict:
    c = Fraction(c)
    const = c / 8 * (n - 2) * ((n + 1) if case.startswith("holomorphic") else (n - 1))
    return {"constant": const, "mean_curvature": Fraction(n * n * (n - 2), 4 * (n - 1))}


def delta22_constant(n: int, c=Fraction(1)) -> Fraction:
    return Fraction(c) / 8 * (n * n - n - 4)


# ---------------------------------------------------------------------------
# equality patterns

@dataclass
class EqualityDiagnostics:
    kind: str
    per_gamma: list
    tol: float

    @property
    def equality(self) -> bool:
        return all(r < self.tol for r in self.per_gamma)

    def to_dict(self):
        return {"kind": self.kind, "per_gamma": self.per_gamma, "tol": self.tol, "equality": self.equality}


def _pattern_residual(s, kind):
    n = s.shape[0]
    diag = np.diag(s)
    if kind == "delta22":
        vals = np.concatenate([[diag[0] + diag[1], diag[2] + diag[3]], diag[4:]])
    else:
        vals = np.concatenate([[diag[0] + diag[1]], diag[2:]])
    off = s - np.diag(diag)
    return max(float(np.max(np.abs(vals - vals[0]))), float(np.max(np.abs(off), initial=0.0)))


def equality_residuals(sigma, sigma_star=None, kind: str = "chen_first") -> list[float]:
    """Per normal direction deviation of sigma (and sigma*) from the equality pattern.

    ``sigma`` has shape (m, n, n) with sigma[gamma, i, j] = sigma^gamma_ij.
    """
    sigma = np.asarray(sigma, dtype=float)
    sigma_star = sigma if sigma_star is None else np.asarray(sigma_star, dtype=float)
    return [max(_pattern_residual(s, kind), _pattern_residual(ss, kind)) for s, ss in zip(sigma, sigma_star)]


def equality_case_check(data: InducedData, kind: str = "chen_first", E=None, tol: float = 1e-9) -> EqualityDiagnostics:
    sig = data.sigma_frame(E, "sigma")
    sig_s = data.sigma_frame(E, "sigma_star")
    return EqualityDiagnostics(kind, equality_residuals(sig, sig_s, kind), tol)


def minimality_check(data: InducedData, tol: float = 1e-6) -> bool:
    return bool(np.sqrt(data.norm2(data.H)) < tol and np.sqrt(data.norm2(data.H_star)) < tol)


# ---------------------------------------------------------------------------
# reports

@dataclass
class InequalityReport:
    kind: str
    case: str
    lhs: float
    rhs: float
    tol: float
    lhs_terms: dict
    rhs_terms: dict
    alternatives: dict
    quantities: dict
    equality: EqualityDiagnostics
    classification: str
    point: list
    planes: list = field(default_factory=list)

    @property
    def margin(self) -> float:
        return self.lhs - self.rhs

    @property
    def holds(self) -> bool:
        return bool(self.lhs >= self.rhs - self.tol * (1.0 + abs(self.rhs)))

    def to_dict(self):
        return {
            "kind": self.kind,
            "case": self.case,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "holds": self.holds,
            "lhs_terms": self.lhs_terms,
            "rhs_terms": self.rhs_terms,
            "alternatives": self.alternatives,
            "quantities": self.quantities,
            "equality": self.equality.to_dict(),
            "classification": self.classification,
            "point": self.point,
            "planes": self.planes,
        }


_verified_cache: "weakref.WeakKeyDictionary[AmbientModel, tuple]" = weakref.WeakKeyDictionary()


def verify_ambient(model: AmbientModel, samples: int = 8, tol: float = 1e-9, seed: int = 0x5EED):
    """Run (and cache) the statistical, quaternionic and constant-type checks."""
    cached = _verified_cache.get(model)
    if cached is not None:
        return cached
    if model.J is None:
        raise UnverifiedAmbientError(f"{model.name}: inequality checks need a quaternionic ambient")
    pts = sample_points(model, samples, np.random.default_rng(seed))
    stat = validate_statistical(model, pts, tol)
    quat = validate_quaternionic(model, pts, tol)
    fit = check_constant_type_curvature(model, pts, tol)
    result = (stat, quat, fit)
    _verified_cache[model] = result
    return result


def _require_verified(model: AmbientModel, c):
    stat, quat, fit = verify_ambient(model)
    if not (stat.passed and quat.passed):
        failed = stat.failed_checks() + quat.failed_checks()
        raise UnverifiedAmbientError(f"{model.name}: structure validation failed ({', '.join(failed)})")
    if c is None:
        c = model.c
    if c is None:
        raise UnverifiedAmbientError(f"{model.name}: curvature constant c is unknown")
    if fit.c_fit is None or fit.residual > fit.tol or abs(fit.c_fit - c) > 1e-8 * max(1.0, abs(c)):
        raise UnverifiedAmbientError(
            f"{model.name}: curvature is not of constant type with c={c} (fit {fit.c_fit}, residual {fit.residual:.3e})"
        )
    return float(c)


def _check_case(sub, data, case, classification):
    if case not in CASES:
        raise ValueError(f"unknown case {case!r}")
    if classification is None:
        classification = classify(sub, [data.u])
    ok = classification.label == "invariant" if case.startswith("holomorphic") else classification.label in (
        "totally_real",
        "lagrangian_like",
    )
    if not ok:
        raise ClassificationMismatch(case, classification)
    return classification


def _adapted_frame(data: InducedData, leading):
    frame, _ = complete_frame(data.h, leading, np.eye(data.n), data.n)
    return frame


def _j_pair(amb, g, X, Y, Z, W):
    """sum_a g(X, J_a Y) g(Z, J_a W) with ambient vectors."""
    return float(sum((X @ g @ (Ja @ Y)) * (Z @ g @ (Ja @ W)) for Ja in amb.J))


def _j_pairing_terms(data, e1, e2, printed_last=True):
    """The three printed J-pairing summands for the plane spanned by ambient e1, e2."""
    amb, g = data.amb, data.amb.metric.g
    t1 = -0.5 * sum(float(e1 @ g @ (Ja @ e2)) ** 2 for Ja in amb.J)
    t2 = -0.5 * sum(float((Ja @ e1) @ g @ e2) ** 2 for Ja in amb.J)
    t3 = -0.5 * _j_pair(amb, g, e1, e2, e2, e2)
    alt = -0.5 * float(sum(((Ja @ e1) @ g @ e2) * ((Ja @ e2) @ g @ e1) for Ja in amb.J))
    return t1, t2, t3, alt


def _p_block(data, E, c, half_trace=True):
    P = data.P(E)
    Ps = data.P(E, star=True)
    w = 0.5 if half_trace else 1.0
    total = 0.0
    for a in range(3):
        total += w * np.trace(P[a]) ** 2 + np.sum(P[a] ** 2) - 2.0 * np.trace(P[a] @ Ps[a])
    return c / 4.0 * float(total), P


def _curvature_pieces(data: InducedData, frame_u):
    """Intrinsic and ambient curvature quantities in the adapted frame."""
    h = data.h
    g_amb = data.amb.metric.g
    frame = frame_u.vectors
    amb_frame = data.ambient_frame(frame)
    n = data.n
    tau = scalar_tau(h, data.R, data.R_star, data.R_lc, frame_u)
    tau_lc = 0.0
    tau_hat = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            tau_lc += riemannian_sectional(h, data.R_lc, frame[i], frame[j])
            tau_hat += riemannian_sectional(g_amb, data.amb.R_lc, amb_frame[i], amb_frame[j])
    return tau, tau_lc, tau_hat, amb_frame


def _plane_pieces(data, X, Y, amb_X, amb_Y):
    h, g_amb = data.h, data.amb.metric.g
    K = sectional_K(h, data.R, data.R_star, data.R_lc, Plane(X, Y))
    K_lc = riemannian_sectional(h, data.R_lc, X, Y)
    K_hat = riemannian_sectional(g_amb, data.amb.R_lc, amb_X, amb_Y)
    return K, K_lc, K_hat


def _sum_terms(terms: dict) -> float:
    total = 0.0
    for v in terms.values():
        total += v
    return total


def chen_first_report(
    sub: ImmersedSubmanifold,
    u,
    plane: Plane,
    case: str = "totally_real",
    data: InducedData | None = None,
    c: float | None = None,
    classification: SubmanifoldClass | None = None,
    tol: float = HOLDS_RTOL,
) -> InequalityReport:
    """Evaluate both sides of the first Chen inequality at ``u`` for ``plane``.

    ``plane`` holds u-components orthonormal for the induced metric.
    """
    n = sub.n
    if n < 3:
        raise ValueError(f"first Chen inequality needs n >= 3, got {n}")
    c = _require_verified(sub.ambient, c)
    data = induced_data(sub, u) if data is None else data
    classification = _check_case(sub, data, case, classification)
    plane.check(data.h)
    X, Y = np.asarray(plane.X, float), np.asarray(plane.Y, float)
    frame_u = _adapted_frame(data, [X, Y])
    E = frame_u.vectors
    tau, tau_lc, tau_hat, amb_frame = _curvature_pieces(data, frame_u)
    K, K_lc, K_hat = _plane_pieces(data, E[0], E[1], amb_frame[0], amb_frame[1])
    H2, Hs2 = data.norm2(data.H), data.norm2(data.H_star)

    lhs_terms = {"tau": tau, "-tau_lc": -tau_lc, "-K": -K, "K_lc": K_lc}
    mean_coef = n * n * (n - 2) / (4.0 * (n - 1))
    rhs_terms = {}
    alternatives = {}
    if case == "totally_real":
        rhs_terms["constant"] = c / 8.0 * (n - 2) * (n - 1)
    else:
        rhs_terms["constant"] = c / 8.0 * (n - 2) * (n + 1)
        block, _ = _p_block(data, E, c, half_trace=(case == "holomorphic_printed"))
        rhs_terms["p_alpha_block"] = block
        t1, t2, t3, alt = _j_pairing_terms(data, amb_frame[0], amb_frame[1])
        rhs_terms["j_pair_e1_Je2_sq"] = t1
        rhs_terms["j_pair_Je1_e2_sq"] = t2
        rhs_terms["j_pair_mixed"] = t3
        alternatives["j_pair_mixed_proof_display"] = alt
        alternatives["p_alpha_block_other_variant"] = _p_block(
            data, E, c, half_trace=(case != "holomorphic_printed")
        )[0]
    rhs_terms["mean_curvature"] = -mean_coef * (H2 + Hs2)
    rhs_terms["ambient_lc"] = 2.0 * K_hat - 2.0 * tau_hat

    eq = equality_case_check(data, "chen_first", E)
    return InequalityReport(
        kind="chen_first",
        case=case,
        lhs=_sum_terms(lhs_terms),
        rhs=_sum_terms(rhs_terms),
        tol=tol,
        lhs_terms=lhs_terms,
        rhs_terms=rhs_terms,
        alternatives=alternatives,
        quantities={
            "n": n, "c": c, "tau": tau, "tau_lc": tau_lc, "K": K, "K_lc": K_lc,
            "K_hat_lc": K_hat, "tau_hat_lc": tau_hat, "H2": H2, "H_star2": Hs2,
        },
        equality=eq,
        classification=classification.label,
        point=[float(v) for v in data.u],
        planes=[[X.tolist(), Y.tolist()]],
    )


def delta22_report(
    sub: ImmersedSubmanifold,
    u,
    pi1: Plane,
    pi2: Plane,
    case: str = "totally_real",
    data: InducedData | None = None,
    c: float | None = None,
    classification: SubmanifoldClass | None = None,
    tol: float = HOLDS_RTOL,
) -> InequalityReport:
    """Evaluate both sides of the delta(2,2) inequality for mutually orthogonal planes."""
    n = sub.n
    if n < 4:
        raise ValueError(f"delta(2,2) inequality needs n >= 4, got {n}")
    c = _require_verified(sub.ambient, c)
    data = induced_data(sub, u) if data is None else data
    classification = _check_case(sub, data, case, classification)
    h = data.h
    pi1.check(h)
    pi2.check(h)
    vecs = [np.asarray(v, float) for v in (pi1.X, pi1.Y, pi2.X, pi2.Y)]
    cross = max(abs(a @ h @ b) for a in vecs[:2] for b in vecs[2:])
    if cross > 1e-10:
        raise NotOrthonormalError(f"planes are not mutually orthogonal (max cross inner product {cross:.3e})")
    frame_u = _adapted_frame(data, vecs)
    E = frame_u.vectors
    tau, tau_lc, tau_hat, amb_frame = _curvature_pieces(data, frame_u)
    K1, K1_lc, K1_hat = _plane_pieces(data, E[0], E[1], amb_frame[0], amb_frame[1])
    K2, K2_lc, K2_hat = _plane_pieces(data, E[2], E[3], amb_frame[2], amb_frame[3])
    H2, Hs2 = data.norm2(data.H), data.norm2(data.H_star)

    lhs_terms = {"tau": tau, "-K1": -K1, "-K2": -K2, "-tau_lc": -tau_lc, "K1_lc": K1_lc, "K2_lc": K2_lc}
    mean_coef = n * n * (n - 2) / (4.0 * (n - 1))
    rhs_terms = {"constant": c / 8.0 * (n * n - n - 4)}
    alternatives = {}
    if case != "totally_real":
        P = data.P(E)
        trace_sq = float(sum(np.trace(P[a]) ** 2 for a in range(3)))
        full_block, _ = _p_block(data, E, c, half_trace=False)
        amb_trace_sq = float(sum(np.trace(Ja) ** 2 for Ja in data.amb.J))
        if case == "holomorphic_printed":
            rhs_terms["trace_term"] = c / 8.0 * trace_sq
            alternatives["p_alpha_block_display"] = full_block
        else:
            rhs_terms["p_alpha_block"] = full_block
            alternatives["trace_term"] = c / 8.0 * trace_sq
        alternatives["trace_term_ambient_J"] = c / 8.0 * amb_trace_sq
        t1, t2, t3, alt = _j_pairing_terms(data, amb_frame[0], amb_frame[1])
        rhs_terms["j_pair_pi1_e1_Je2_sq"] = t1
        rhs_terms["j_pair_pi1_Je1_e2_sq"] = t2
        rhs_terms["j_pair_pi1_mixed"] = t3
        alternatives["j_pair_pi1_mixed_proof_display"] = alt
        e3, e4 = amb_frame[2], amb_frame[3]
        g = data.amb.metric.g
        rhs_terms["j_pair_pi2_e3_Je4_sq"] = -0.5 * sum(float(e3 @ g @ (Ja @ e4)) ** 2 for Ja in data.amb.J)
        rhs_terms["j_pair_pi2_Je3_e4_sq"] = -0.5 * sum(float((Ja @ e3) @ g @ e4) ** 2 for Ja in data.amb.J)
        rhs_terms["j_pair_pi2_mixed"] = -0.5 * _j_pair(data.amb, g, e3, e3, e4, e3)
    rhs_terms["mean_curvature"] = -mean_coef * (H2 + Hs2)
    rhs_terms["ambient_lc"] = -2.0 * (tau_hat - 2.0 * K1_hat - 2.0 * K2_hat)

    eq = equality_case_check(data, "delta22", E)
    return InequalityReport(
        kind="delta22",
        case=case,
        lhs=_sum_terms(lhs_terms),
        rhs=_sum_terms(rhs_terms),
        tol=tol,
        lhs_terms=lhs_terms,
        rhs_terms=rhs_terms,
        alternatives=alternatives,
        quantities={
            "n": n, "c": c, "tau": tau, "tau_lc": tau_lc, "K1": K1, "K2": K2, "K1_lc": K1_lc, "K2_lc": K2_lc,
            "K1_hat_lc": K1_hat, "K2_hat_lc": K2_hat, "tau_hat_lc": tau_hat, "H2": H2, "H_star2": Hs2,
        },
        equality=eq,
        classification=classification.label,
        point=[float(v) for v in data.u],
        planes=[[vecs[0].tolist(), vecs[1].tolist()], [vecs[2].tolist(), vecs[3].tolist()]],
    )


# ---------------------------------------------------------------------------
# corollaries

@dataclass
class NonMinimalityDiagnosis:
    status: str  # criterion_fires | criterion_silent | CONTRADICTION
    lhs: float
    threshold: float
    H_norm: float
    H_star_norm: float

    def to_dict(self):
        return {
            "status": self.status,
            "lhs": self.lhs,
            "threshold": self.threshold,
            "H_norm": self.H_norm,
            "H_star_norm": self.H_star_norm,
        }


def nonminimality_threshold(report: InequalityReport) -> float:
    q = report.quantities
    n, c = q["n"], q["c"]
    if report.kind == "chen_first":
        return c / 8.0 * (n - 2) * (n - 1) + 2.0 * q["K_hat_lc"] - 2.0 * q["tau_hat_lc"]
    return c / 8.0 * (n * n - n - 4) - 2.0 * (q["tau_hat_lc"] - q["K1_hat_lc"] - q["K2_hat_lc"])


def nonminimality_criterion(
    report: InequalityReport, data: InducedData | None = None, tol: float = 1e-8, h_tol: float = 1e-6
) -> NonMinimalityDiagnosis:
    """If lhs falls below the minimal-case threshold the submanifold cannot be minimal.

    A firing criterion on a submanifold with H = H* = 0 is reported as a
    CONTRADICTION (evidence against the inequality).
    """
    threshold = nonminimality_threshold(report)
    if data is not None:
        Hn, Hsn = np.sqrt(data.norm2(data.H)), np.sqrt(data.norm2(data.H_star))
    else:
        Hn, Hsn = np.sqrt(report.quantities["H2"]), np.sqrt(report.quantities["H_star2"])
    fires = report.lhs < threshold - tol * (1.0 + abs(threshold))
    if not fires:
        status = "criterion_silent"
    elif Hn < h_tol and Hsn < h_tol:
        status = "CONTRADICTION"
    else:
        status = "criterion_fires"
    return NonMinimalityDiagnosis(status, report.lhs, float(threshold), float(Hn), float(Hsn))


# ---------------------------------------------------------------------------
# plane sampling

def random_plane(data: InducedData, rng) -> Plane:
    """A random h-orthonormal plane from Gram-Schmidt on Gaussian vectors."""
    frame = gram_schmidt(data.h, rng.standard_normal((2, data.n)))
    return Plane(frame.vectors[0], frame.vectors[1])


def random_plane_pair(data: InducedData, rng) -> tuple[Plane, Plane]:
    """Two mutually orthogonal random planes; the second lies in the complement of the first."""
    frame = gram_schmidt(data.h, rng.standard_normal((4, data.n)))
    v = frame.vectors
    return Plane(v[0], v[1]), Plane(v[2], v[3])
