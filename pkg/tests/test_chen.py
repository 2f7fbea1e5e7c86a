from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from chenverify.ambient import builtin_model, standard_quaternion_matrices
from chenverify.chen import (
    ClassificationMismatch,
    EqualityDiagnostics,
    InequalityReport,
    UnverifiedAmbientError,
    chen_first_coefficients,
    chen_first_report,
    delta22_constant,
    delta22_report,
    equality_case_check,
    equality_residuals,
    lemma_chen_delta22,
    lemma_chen_first,
    lemma_margins,
    maximize_lemma,
    minimality_check,
    nonminimality_criterion,
    random_plane,
    random_plane_pair,
)
from chenverify.families import linear_quaternionic, linear_real, product_torus, real_graph
from chenverify.geomcore import NotOrthonormalError, Plane
from chenverify.subman import ImmersedSubmanifold, induced_data

# ---------------------------------------------------------------------------
# lemmas


def test_lemma_first_equality_example():
    r = lemma_chen_first([1.0, 1.0, 2.0])
    assert (r.lhs, r.rhs) == (4.0, 4.0)
    assert r.holds and r.equality and r.margin == 0.0


def test_lemma_first_zero_vector():
    r = lemma_chen_first(np.zeros(5))
    assert r.holds and r.equality and r.lhs == r.rhs == 0.0


def test_lemma_first_strict():
    r = lemma_chen_first([1.0, 0.0, 0.0])
    assert r.holds and not r.equality and r.margin == pytest.approx(0.25)


def test_lemma_printed_constant_weaker():
    a = [1.0, 1.0, 2.0, 2.0]
    assert lemma_chen_first(a, constant="printed").rhs > lemma_chen_first(a).rhs


def test_lemma_delta22_equality_example():
    r = lemma_chen_delta22([1.0, 1.0, 0.5, 1.5, 2.0])
    assert r.equality and r.lhs == pytest.approx(r.rhs, abs=1e-14)


@pytest.mark.parametrize("fn, a", [(lemma_chen_first, [1.0, 2.0]), (lemma_chen_delta22, [1.0, 2.0, 3.0])])
def test_lemma_dimension_guard(fn, a):
    with pytest.raises(ValueError):
        fn(a)


@pytest.mark.parametrize(
    "kind, n", [("chen_first", n) for n in range(3, 9)] + [("delta22", n) for n in range(4, 9)]
)
def test_lemma_margins_nonnegative(kind, n):
    rng = np.random.default_rng(1000 + n)
    samples = rng.standard_normal((20000, n)) * rng.uniform(0.1, 10.0, (20000, 1))
    margins = lemma_margins(samples, kind) / (1.0 + samples.sum(axis=1) ** 2)
    assert margins.min() >= -1e-12


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-5, 5), min_size=3, max_size=8), st.floats(0.1, 10))
def test_lemma_homogeneity(a, t):
    a = np.array(a)
    r1, r2 = lemma_chen_first(a), lemma_chen_first(t * a)
    scale = t * t
    assert r2.lhs == pytest.approx(scale * r1.lhs, rel=1e-9, abs=1e-9)
    assert r2.rhs == pytest.approx(scale * r1.rhs, rel=1e-9, abs=1e-9)


@pytest.mark.parametrize("n", range(3, 9))
def test_maximizer_reaches_corrected_constant(n):
    res = maximize_lemma(n, "chen_first", restarts=50)
    assert res.max_ratio == pytest.approx((n - 2) / (2 * (n - 1)), abs=1e-6)
    assert res.pattern_residual < 1e-6
    # the weaker constant is never attained
    assert res.max_ratio < 0.5 - 1e-3


@pytest.mark.parametrize("n", range(4, 9))
def test_maximizer_delta22(n):
    res = maximize_lemma(n, "delta22", restarts=50)
    assert res.max_ratio == pytest.approx((n - 3) / (2 * (n - 2)), abs=1e-6)
    assert res.pattern_residual < 1e-6


# ---------------------------------------------------------------------------
# exact coefficients


def test_coefficient_probes():
    assert chen_first_coefficients(3, 8)["constant"] == 2
    assert chen_first_coefficients(3, 8)["mean_curvature"] == Fraction(9, 8)
    assert chen_first_coefficients(4, 1)["mean_curvature"] == Fraction(8, 3)
    assert delta22_constant(4, 8) == 8
    assert chen_first_coefficients(4, 8, "holomorphic_printed")["constant"] == 10


@pytest.mark.parametrize("n", range(3, 12))
def test_coefficients_are_exact_rationals(n):
    c = Fraction(3, 7)
    coeffs = chen_first_coefficients(n, c)
    assert coeffs["constant"] == c * (n - 2) * (n - 1) / 8
    assert coeffs["mean_curvature"] == Fraction(n * n * (n - 2)) / (4 * (n - 1))
    assert delta22_constant(n, c) == c * (n * n - n - 4) / 8
    assert all(isinstance(v, Fraction) for v in coeffs.values())


# ---------------------------------------------------------------------------
# equality patterns


def test_equality_residuals_exact_pattern():
    sigma = np.zeros((2, 4, 4))
    sigma[0] = np.diag([0.5, 1.5, 2.0, 2.0])
    sigma[1] = np.diag([1.0, -1.0, 0.0, 0.0])
    assert equality_residuals(sigma) == [0.0, 0.0]


@pytest.mark.parametrize("eps", [1e-3, 0.25, 2.0])
def test_equality_off_diagonal_defect(eps):
    s = np.diag([0.5, 1.5, 2.0, 2.0])[None].copy()
    s[0, 1, 2] = s[0, 2, 1] = eps
    assert equality_residuals(s) == [eps]


def test_delta22_equality_pattern():
    s = np.diag([0.2, 1.8, 1.0, 1.0, 2.0])[None]
    assert equality_residuals(s, kind="delta22") == [0.0]
    assert equality_residuals(s, kind="chen_first") == [pytest.approx(1.0)]
    bad = np.diag([0.2, 1.8, 1.0, 1.1, 2.0])[None]
    assert equality_residuals(bad, kind="delta22") == [pytest.approx(0.1)]


def test_equality_uses_both_forms():
    s = np.diag([1.0, 1.0, 2.0])[None]
    ss = np.diag([1.0, 1.0, 2.5])[None]
    assert equality_residuals(s, ss) == [pytest.approx(0.5)]
    assert not EqualityDiagnostics("chen_first", [0.5], 1e-9).equality


# ---------------------------------------------------------------------------
# reports on concrete submanifolds


def _report(sub, u, rng, case="totally_real"):
    data = induced_data(sub, u)
    return chen_first_report(sub, u, random_plane(data, rng), case, data=data), data


def test_totally_geodesic_equality():
    sub = linear_real(3, 3)
    rng = np.random.default_rng(0)
    for u in rng.uniform(-1, 1, (5, 3)):
        rep, data = _report(sub, u, rng)
        assert abs(rep.margin) < 1e-9 and rep.holds
        assert rep.equality.equality
        assert minimality_check(data)
        assert rep.classification == "lagrangian_like"


def test_torus_closed_form():
    for n in (3, 4):
        sub = product_torus(n)
        rng = np.random.default_rng(n)
        rep, _ = _report(sub, rng.uniform(-3, 3, n), rng)
        assert rep.lhs == pytest.approx(0.0, abs=1e-9)
        expected = -(n * n * (n - 2)) / (2 * (n - 1)) / n  # ||H||^2 = ||H*||^2 = 1/n
        assert rep.rhs == pytest.approx(expected, abs=1e-9)
        assert rep.rhs_terms["mean_curvature"] == pytest.approx(expected, abs=1e-9)
        assert rep.holds
        assert not rep.equality.equality


def test_graph_inequalities_hold():
    rng = np.random.default_rng(4)
    sub = real_graph(5, 4, rng=rng)
    for u in rng.uniform(-1, 1, (3, 4)):
        data = induced_data(sub, u)
        rep = chen_first_report(sub, u, random_plane(data, rng), data=data)
        assert rep.holds and rep.classification == "totally_real"
        p1, p2 = random_plane_pair(data, rng)
        rep2 = delta22_report(sub, u, p1, p2, data=data)
        assert rep2.holds
        assert rep.lhs == pytest.approx(sum(rep.lhs_terms.values()))
        assert rep2.rhs == pytest.approx(sum(rep2.rhs_terms.values()))


def test_holomorphic_cases_on_invariant_subspace():
    sub = linear_quaternionic(2)
    u = np.zeros(4)
    data = induced_data(sub, u)
    plane = Plane(np.eye(4)[0], np.eye(4)[1])
    for case in ("holomorphic_printed", "holomorphic_proof_variant"):
        rep = chen_first_report(sub, u, plane, case, data=data)
        assert rep.holds
        assert rep.case == case
        assert "p_alpha_block_other_variant" in rep.alternatives
    p1, p2 = Plane(*np.eye(4)[:2]), Plane(*np.eye(4)[2:])
    rep = delta22_report(sub, u, p1, p2, "holomorphic_printed", data=data)
    assert rep.holds and "trace_term_ambient_J" in rep.alternatives


def test_case_mismatch_guard():
    sub = product_torus(3)
    data = induced_data(sub, np.zeros(3))
    plane = random_plane(data, np.random.default_rng(0))
    with pytest.raises(ClassificationMismatch) as info:
        chen_first_report(sub, np.zeros(3), plane, "holomorphic_printed", data=data)
    assert info.value.classification.label == "lagrangian_like"
    with pytest.raises(ClassificationMismatch):
        chen_first_report(linear_quaternionic(1), np.zeros(4), Plane(*np.eye(4)[:2]), "totally_real")


def test_unknown_case_rejected():
    sub = linear_real(3, 3)
    with pytest.raises(ValueError):
        chen_first_report(sub, np.zeros(3), Plane(*np.eye(3)[:2]), "complex")


def test_dimension_guards():
    with pytest.raises(ValueError):
        chen_first_report(linear_real(2, 2), np.zeros(2), Plane(*np.eye(2)))
    with pytest.raises(ValueError):
        delta22_report(linear_real(3, 3), np.zeros(3), Plane(*np.eye(3)[:2]), Plane(*np.eye(3)[1:]))


def test_delta22_requires_orthogonal_planes():
    sub = linear_real(4, 4)
    e = np.eye(4)
    with pytest.raises(NotOrthonormalError):
        delta22_report(sub, np.zeros(4), Plane(e[0], e[1]), Plane(e[1], e[2]))


def test_unverified_ambient_rejected():
    # swapped J_2, J_3 fails the quaternion relations
    amb = builtin_model("flat_quaternionic", m=1, J=standard_quaternion_matrices(1)[[0, 2, 1]])
    sub = ImmersedSubmanifold.from_texts(amb, 3, ["u1", "u2", "u3", "0"])
    with pytest.raises(UnverifiedAmbientError):
        chen_first_report(sub, np.zeros(3), Plane(*np.eye(3)[:2]))


def test_declared_c_mismatch_rejected():
    sub = linear_real(3, 3)
    with pytest.raises(UnverifiedAmbientError):
        chen_first_report(sub, np.zeros(3), Plane(*np.eye(3)[:2]), c=1.0)


def test_non_quaternionic_ambient_rejected():
    sub = ImmersedSubmanifold.from_texts(builtin_model("euclidean", d=4), 3, ["u1", "u2", "u3", "0"])
    with pytest.raises(UnverifiedAmbientError):
        chen_first_report(sub, np.zeros(3), Plane(*np.eye(3)[:2]))


def test_report_serialises():
    rep, _ = _report(product_torus(3), np.zeros(3), np.random.default_rng(1))
    d = rep.to_dict()
    assert d["holds"] is True and d["margin"] == pytest.approx(rep.margin)
    assert set(d["rhs_terms"]) == {"constant", "mean_curvature", "ambient_lc"}


# ---------------------------------------------------------------------------
# minimality corollaries


def test_minimal_instance_never_contradicts():
    sub = linear_real(4, 4)
    rng = np.random.default_rng(2)
    for u in rng.uniform(-1, 1, (3, 4)):
        data = induced_data(sub, u)
        rep = chen_first_report(sub, u, random_plane(data, rng), data=data)
        diag = nonminimality_criterion(rep, data)
        assert diag.status == "criterion_silent"


def test_criterion_on_torus_is_silent():
    rep, data = _report(product_torus(3), np.zeros(3), np.random.default_rng(3))
    assert nonminimality_criterion(rep, data).status == "criterion_silent"


def _synthetic_report(lhs, H2):
    q = {"n": 4, "c": 0.0, "K_hat_lc": 0.0, "tau_hat_lc": 0.0, "H2": H2, "H_star2": H2}
    return InequalityReport(
        "chen_first", "totally_real", lhs, 0.0, 1e-8, {}, {}, {}, q,
        EqualityDiagnostics("chen_first", [], 1e-9), "totally_real", [0.0] * 4,
    )


def test_criterion_contradiction_path():
    assert nonminimality_criterion(_synthetic_report(-1.0, 0.0)).status == "CONTRADICTION"
    assert nonminimality_criterion(_synthetic_report(-1.0, 0.25)).status == "criterion_fires"
    assert nonminimality_criterion(_synthetic_report(0.5, 0.0)).status == "criterion_silent"


def test_equality_case_check_on_sphere_like_graph():
    sub = real_graph(4, 3, f="u1^2+u2^2+u3^2")
    data = induced_data(sub, np.zeros(3))
    diag = equality_case_check(data)
    # sigma is 2*I in the graph normal: a1 + a2 = 4 differs from a3 = 2
    assert not diag.equality
    assert max(diag.per_gamma) == pytest.approx(2.0, abs=1e-9)
