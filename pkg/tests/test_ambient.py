import numpy as np
import pytest

from chenverify import exprlang as el
from chenverify.ambient import (
    AmbientModel,
    ModelError,
    ambient_variables,
    builtin_model,
    check_constant_type_curvature,
    compute_dual_J,
    connection_at,
    constant_type_tensor,
    evaluate_ambient,
    quaternionic_frame_data,
    sample_points,
    standard_quaternion_matrices,
    validate_quaternionic,
    validate_statistical,
)
from chenverify.geomcore import SingularMetricError

from oracles import fd_curvature, hamilton, left_mult_matrix, normal_skewness_quadrature

EPS = 1e-3
# constant totally symmetric base: K_{112} = 0.2 on flat R^4, so Gamma = K, Gamma* = -K
BASE = {(0, 0, 1): 0.2, (0, 1, 0): 0.2, (1, 0, 0): 0.2}


def _txt(v):
    return repr(float(v)) if v >= 0 else f"({float(v)!r})"


def _explicit(gamma, gamma_star=None, d=4):
    names = ambient_variables(d)
    G = {k: el.parse(_txt(v), names) for k, v in gamma.items()}
    Gs = None if gamma_star is None else {k: el.parse(_txt(v), names) for k, v in gamma_star.items()}
    return AmbientModel(d, el.ExprMatrix.from_array(np.eye(d)), "explicit", gamma=G, gamma_star=Gs)


def _neg(d):
    return {k: -v for k, v in d.items()}


def _failed(report):
    return {c.name: c.max_residual for c in report.checks if not c.passed}


def _points(model, count=5, seed=0):
    return sample_points(model, count, np.random.default_rng(seed))


def test_standard_quaternion_matrices_are_left_multiplication():
    J = standard_quaternion_matrices(1)
    for a, unit in enumerate(np.eye(4)[1:]):
        assert np.array_equal(J[a], left_mult_matrix(unit))
    # i * j = k through the matrices
    assert np.array_equal(J[0] @ J[1], J[2])
    assert np.array_equal(hamilton([0, 1, 0, 0], [0, 0, 1, 0]), [0, 0, 0, 1])


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_flat_quaternionic_passes_everything(m):
    model = builtin_model("flat_quaternionic", m=m)
    pts = _points(model, 10, m)
    stat = validate_statistical(model, pts, tol=1e-12)
    quat = validate_quaternionic(model, pts, tol=1e-12)
    assert stat.passed and quat.passed
    assert max(c.max_residual for c in stat.checks + quat.checks) < 1e-12
    fit = check_constant_type_curvature(model, pts)
    assert fit.c_fit == 0.0 and fit.residual == 0.0 and fit.passed


def test_flat_quaternionic_one():
    model = builtin_model("flat_quaternionic", m=1)
    pt = evaluate_ambient(model, np.zeros(4))
    assert model.dim == 4
    assert np.array_equal(pt.metric.g, np.eye(4))
    assert not pt.conn.gamma.any() and not pt.conn_star.gamma.any()
    assert not pt.omega.any()
    data = quaternionic_frame_data(model, np.zeros(4))
    assert np.array_equal(data.J_alpha, standard_quaternion_matrices(1))


@pytest.mark.parametrize(
    "name, params",
    [
        ("flat_quaternionic", {"m": 2}),
        ("normal_family", {"alpha": 0.0}),
        ("normal_family", {"alpha": 1.0}),
        ("normal_family", {"alpha": -0.6}),
        ("round_sphere", {"n": 2, "radius": 1.0}),
        ("round_sphere", {"n": 4, "radius": 0.7}),
        ("hessian", {"potential": "exp(x1)+exp(x2)+exp(x1+x2)", "dim": 2}),
        ("euclidean", {"d": 3}),
    ],
)
def test_builtins_pass_statistical_suite(name, params):
    model = builtin_model(name, **params)
    report = validate_statistical(model, _points(model, 50))
    assert report.passed, report.to_dict()


def test_normal_family_without_J_rejected_by_quaternionic_validator():
    model = builtin_model("normal_family", alpha=0.5)
    with pytest.raises(ModelError):
        validate_quaternionic(model, _points(model, 1))


def test_skewness_zero_gives_levi_civita():
    conn, conn_star, lc, _ = connection_at(builtin_model("round_sphere", n=3), [0.3, 0.1, -0.2])
    assert np.array_equal(conn.gamma, lc.gamma) and np.array_equal(conn_star.gamma, lc.gamma)


def test_constant_skewness_on_flat_metric():
    names = ambient_variables(3)
    model = AmbientModel(3, el.ExprMatrix.from_array(np.eye(3)), skewness={(2, 0, 1): el.parse("0.5", names)})
    conn, conn_star, _, _ = connection_at(model, np.zeros(3))
    assert conn.gamma[0, 1, 2] == conn.gamma[2, 1, 0] == 0.5
    assert np.array_equal(conn_star.gamma, -conn.gamma)


@pytest.mark.parametrize("alpha", [-1.0, -0.3, 0.0, 0.8, 1.0])
def test_normal_family_skewness_matches_quadrature(alpha):
    mu, sigma = 0.4, 1.3
    T = normal_skewness_quadrature(mu, sigma)
    conn, conn_star, lc, metric = connection_at(builtin_model("normal_family", alpha=alpha), [mu, sigma])
    # lowered K = g (Gamma - Gamma°) should be -(alpha / 2) T
    K = np.einsum("km,mij->kij", metric.g, conn.gamma - lc.gamma)
    assert np.max(np.abs(K + 0.5 * alpha * T)) < 1e-12
    Ks = np.einsum("km,mij->kij", metric.g, conn_star.gamma - lc.gamma)
    assert np.max(np.abs(Ks - 0.5 * alpha * T)) < 1e-12


@pytest.mark.parametrize("alpha", [-0.5, 0.3, 2.0])
def test_curvature_duality_identity(alpha):
    model = builtin_model("normal_family", alpha=alpha)
    rng = np.random.default_rng(17)
    worst = 0.0
    for x in sample_points(model, 10, rng):
        pt = evaluate_ambient(model, x)
        for _ in range(10):
            X, Y, Z, W = rng.standard_normal((4, 2))
            lhs = pt.R.form(pt.metric, X, Y, Z, W)
            worst = max(worst, abs(lhs + pt.R_star.form(pt.metric, X, Y, W, Z)))
    assert worst < 1e-8


def test_hessian_structure_is_dually_flat():
    model = builtin_model("hessian", potential="exp(x1)+exp(x2)+exp(x3)+exp(x1-x3)", dim=3)
    for x in _points(model, 5):
        pt = evaluate_ambient(model, x)
        assert np.max(np.abs(pt.R.r)) < 1e-12
        assert np.max(np.abs(pt.R_star.r)) < 1e-12


def test_hessian_rejects_nonconvex_potential():
    with pytest.raises(ModelError):
        builtin_model("hessian", potential="x1^2-x2^2", dim=2)
    with pytest.raises(el.ExprSyntaxError):
        builtin_model("hessian", potential="x1^^2", dim=2)


@pytest.mark.parametrize(
    "name, params",
    [("flat_quaternionic", {"m": 0}), ("round_sphere", {"radius": -1.0}), ("nonsense", {})],
)
def test_builtin_parameter_errors(name, params):
    with pytest.raises(ModelError):
        builtin_model(name, **params)


def test_quaternionic_model_needs_dim_divisible_by_four():
    J = tuple(el.ExprMatrix.zeros(3, 3) for _ in range(3))
    with pytest.raises(ModelError):
        AmbientModel(3, el.ExprMatrix.from_array(np.eye(3)), J=J)


def test_sample_points_inside_domain():
    model = builtin_model("normal_family", alpha=0.0)
    pts = np.array(_points(model, 200))
    assert np.all(pts >= model.domain[:, 0]) and np.all(pts <= model.domain[:, 1])


# ---------------------------------------------------------------------------
# compute_dual_J


def test_dual_J_of_skew_matrix_is_itself():
    J = standard_quaternion_matrices(1)[1]
    assert np.array_equal(compute_dual_J(np.eye(4), J), J)


def test_dual_of_symmetric_matrix_is_negative():
    rng = np.random.default_rng(0)
    B = rng.standard_normal((4, 4))
    A = B + B.T
    assert np.allclose(compute_dual_J(np.eye(4), A), -A, atol=1e-15)


def test_dual_J_defining_identity():
    g = np.diag([2.0, 1.0, 1.0, 1.0])
    J = standard_quaternion_matrices(1)[0]
    Js = compute_dual_J(g, J)
    basis = np.eye(4)
    for X in basis:
        for Y in basis:
            assert abs((J @ X) @ g @ Y + X @ g @ (Js @ Y)) < 1e-10
    assert np.allclose(compute_dual_J(g, Js), J, atol=1e-15)


def test_dual_J_singular_metric():
    with pytest.raises(np.linalg.LinAlgError):
        compute_dual_J(np.zeros((4, 4)), np.eye(4))


# ---------------------------------------------------------------------------
# defect injections: each fails exactly its documented set of checks


def test_defect_torsion():
    G = dict(BASE)
    G[(0, 0, 1)] += EPS  # Gamma^1_12 != Gamma^1_21
    report = validate_statistical(_explicit(G, _neg(G)), _points(_explicit(BASE)))
    failed = _failed(report)
    assert set(failed) == {"torsion_free", "dual_torsion_free", "codazzi", "duality"}
    assert failed["torsion_free"] == pytest.approx(EPS, rel=1e-12)


def test_defect_torsion_with_dual_solved():
    G = dict(BASE)
    G[(0, 0, 1)] += EPS
    failed = _failed(validate_statistical(_explicit(G), _points(_explicit(BASE))))
    assert set(failed) == {"torsion_free", "codazzi", "levi_civita_average"}
    assert failed["levi_civita_average"] == pytest.approx(EPS / 2, rel=1e-12)


def test_defect_codazzi():
    G = dict(BASE)
    G[(0, 1, 1)] = EPS  # torsion-free but g(nabla d_i d_j, d_k) not totally symmetric
    failed = _failed(validate_statistical(_explicit(G, _neg(G)), _points(_explicit(BASE))))
    assert set(failed) == {"codazzi", "duality"}
    assert failed["codazzi"] == pytest.approx(EPS, rel=1e-12)


def test_defect_duality():
    Gs = _neg(BASE)
    Gs[(2, 3, 3)] = EPS
    failed = _failed(validate_statistical(_explicit(BASE, Gs), _points(_explicit(BASE))))
    assert set(failed) == {"duality", "levi_civita_average"}
    assert failed["duality"] == pytest.approx(EPS, rel=1e-12)


def test_defect_quaternion_swap():
    J = standard_quaternion_matrices(2)[[0, 2, 1]]
    model = builtin_model("flat_quaternionic", m=2, J=J)
    pts = _points(model)
    assert validate_statistical(model, pts).passed
    failed = _failed(validate_quaternionic(model, pts))
    assert set(failed) == {"quaternion_relations"}
    assert failed["quaternion_relations"] == pytest.approx(2.0)


def test_defect_metric_not_adapted():
    J = tuple(el.ExprMatrix.from_array(a) for a in standard_quaternion_matrices(1))
    model = AmbientModel(4, el.ExprMatrix.from_array(np.diag([2.0, 1.0, 1.0, 1.0])), J=J)
    pts = _points(model)
    assert validate_statistical(model, pts).passed
    assert set(_failed(validate_quaternionic(model, pts))) == {"metric_adapted"}


def test_defect_constant_omega():
    omega = np.zeros((3, 4))
    omega[1, 2] = 0.3
    omega[2, 0] = -0.7
    model = builtin_model("flat_quaternionic", m=1, omega=omega)
    failed = _failed(validate_quaternionic(model, _points(model)))
    assert set(failed) == {"kaehler_like"}
    assert failed["kaehler_like"] == pytest.approx(np.max(np.abs(omega)), rel=1e-15)


def test_evaluation_failures_are_recorded():
    names = ambient_variables(2)
    model = AmbientModel(2, el.ExprMatrix.from_texts([["1", "0"], ["0", "log(x1)"]], names))
    report = validate_statistical(model, [[2.0, 0.0], [-1.0, 0.0], [0.5, 0.0]])
    assert [i for i, _ in report.failures] == [1, 2]
    assert not report.passed


# ---------------------------------------------------------------------------
# constant-type curvature


def test_constant_type_totally_real_plane():
    J = standard_quaternion_matrices(2)
    B = constant_type_tensor(np.eye(8), J)
    X, Y = np.eye(8)[0], np.eye(8)[4]  # real slots of two blocks: totally real pair
    assert np.einsum("ijkl,i,j,k,l->", B, X, Y, Y, X) == pytest.approx(0.25, abs=1e-15)
    # a quaternionic plane {X, J1 X} carries the holomorphic value c
    Z = J[0] @ X
    assert np.einsum("ijkl,i,j,k,l->", B, X, Z, Z, X) == pytest.approx(1.0, abs=1e-15)


def test_constant_type_tensor_symmetries():
    B = constant_type_tensor(np.eye(4), standard_quaternion_matrices(1))
    assert np.max(np.abs(B + B.transpose(1, 0, 2, 3))) < 1e-15
    assert np.max(np.abs(B + B.transpose(0, 1, 3, 2))) < 1e-15
    cyc = B + B.transpose(1, 2, 0, 3) + B.transpose(2, 0, 1, 3)
    assert np.max(np.abs(cyc)) < 1e-15


def test_non_constant_type_perturbation():
    names = ambient_variables(4)
    J = tuple(el.ExprMatrix.from_array(a) for a in standard_quaternion_matrices(1))
    skew = {(0, 0, 1): el.parse("0.1*x3", names), (2, 3, 3): el.parse("0.05*x1^2", names)}
    model = AmbientModel(4, el.ExprMatrix.from_array(np.eye(4)), skewness=skew, J=J, c=0.0)
    pts = _points(model, 3)
    fit = check_constant_type_curvature(model, pts)
    assert not fit.passed
    # recompute the gap from finite-difference curvature of the two connections
    actual, basis = [], []
    for x in pts:
        for sign, Js in ((1.0, standard_quaternion_matrices(1)), (-1.0, None)):
            R = fd_curvature(lambda y: sign * connection_at(model, y)[0].gamma, x, h=1e-5)
            Jm = Js if Js is not None else np.array([compute_dual_J(np.eye(4), a) for a in standard_quaternion_matrices(1)])
            actual.append(R.ravel())
            basis.append(constant_type_tensor(np.eye(4), Jm).ravel())
    actual, basis = np.concatenate(actual), np.concatenate(basis)
    c_ref = basis @ actual / (basis @ basis)
    assert fit.c_fit == pytest.approx(c_ref, abs=1e-8)
    assert fit.residual == pytest.approx(np.max(np.abs(actual - c_ref * basis)), abs=1e-8)
    assert fit.residual > 1e-3


def test_singular_metric_in_model():
    model = AmbientModel(2, el.ExprMatrix.from_texts([["x1", "0"], ["0", "1"]], ambient_variables(2)))
    with pytest.raises(SingularMetricError):
        evaluate_ambient(model, [0.0, 0.0])
