import numpy as np
import pytest

from chenverify.ambient import ModelError, builtin_model
from chenverify.families import (
    linear_quaternionic,
    linear_real,
    perturbed_graph,
    product_torus,
    real_graph,
    round_sphere_in_euclidean,
)
from chenverify.subman import (
    ImmersedSubmanifold,
    classify,
    gauss_ricci_residuals,
    induced_data,
    p_alpha_invariants,
)


def _random_points(sub, count, seed=0):
    rng = np.random.default_rng(seed)
    lo, hi = sub.domain[:, 0], sub.domain[:, 1]
    return [lo + (hi - lo) * rng.random(sub.n) for _ in range(count)]


def test_linear_subspace_is_totally_geodesic():
    sub = ImmersedSubmanifold.from_texts(builtin_model("flat_quaternionic", m=1), 2, ["u1", "u2", "0", "0"])
    d = induced_data(sub, [0.3, -0.4])
    for s in (d.sigma, d.sigma_star, d.sigma_lc):
        assert np.max(np.abs(s)) < 1e-14
    assert np.max(np.abs(d.H)) < 1e-14 and np.max(np.abs(d.H_star)) < 1e-14
    rep = gauss_ricci_residuals(sub, [0.3, -0.4], trials=10)
    assert rep.max_residual() < 1e-12


def test_sphere_second_fundamental_form():
    sub = round_sphere_in_euclidean(2)
    for u in _random_points(sub, 10):
        d = induced_data(sub, u)
        s = d.sigma_frame()
        assert s.shape == (1, 2, 2)
        # normal orientation is a convention: |sigma^1_ij| = delta_ij
        assert np.max(np.abs(np.abs(s[0]) - np.eye(2))) < 1e-9
        assert d.norm2(d.H) == pytest.approx(1.0, abs=1e-9)


def test_sphere_gauss_residuals():
    sub = round_sphere_in_euclidean(2)
    for k, u in enumerate(_random_points(sub, 5)):
        rep = gauss_ricci_residuals(sub, u, trials=20, rng=np.random.default_rng(k))
        assert rep.residuals["gauss"] <= 1e-8 and rep.residuals["gauss_star"] <= 1e-8


def test_torus_mean_curvature_and_invariants():
    sub = product_torus(2)
    for u in _random_points(sub, 5):
        d = induced_data(sub, u)
        assert d.norm2(d.H) == pytest.approx(0.5, abs=1e-9)
        assert d.norm2(d.H_star) == pytest.approx(0.5, abs=1e-9)
        for inv in p_alpha_invariants(d):
            assert max(abs(v) for v in inv) < 1e-9


@pytest.mark.parametrize("n", [1, 3, 4])
def test_n_torus_mean_curvature(n):
    d = induced_data(product_torus(4, n), np.linspace(-1, 1, n))
    assert d.norm2(d.H) == pytest.approx(1.0 / n, abs=1e-9)


def test_torus_gauss_ricci_residuals():
    sub = product_torus(2)
    for k, u in enumerate(_random_points(sub, 4)):
        rep = gauss_ricci_residuals(sub, u, trials=20, rng=np.random.default_rng(k))
        assert rep.max_residual() <= 1e-8


def test_perturbed_graph_residuals():
    sub = perturbed_graph()
    rep = gauss_ricci_residuals(sub, [0.2, -0.3], trials=30)
    assert rep.residuals["gauss"] <= 1e-8 and rep.residuals["gauss_star"] <= 1e-8
    # the commutator pairing from differentiating the Weingarten formula holds
    assert rep.alternatives["ricci_derived"] <= 1e-8
    assert rep.alternatives["ricci_star_derived"] <= 1e-8
    # the swapped pairing differs once A != A*
    assert rep.residuals["ricci"] > 1e-4


def test_invariant_line_P_norms():
    d = induced_data(linear_quaternionic(2), [0.1, 0.2, 0.3, 0.4])
    for tr, norm2, mixed in p_alpha_invariants(d):
        assert tr == pytest.approx(0.0, abs=1e-12)
        assert norm2 == pytest.approx(4.0, abs=1e-12)
        # flat J is skew, so J* = J and tr(P P*) = tr(P^2) = -||P||^2
        assert mixed == pytest.approx(-norm2, abs=1e-12)
    assert np.allclose(d.P(star=True), d.P(), atol=1e-15)


@pytest.mark.parametrize(
    "factory",
    [lambda: perturbed_graph(), lambda: real_graph(3, 2), lambda: round_sphere_in_euclidean(2), lambda: product_torus(2)],
)
def test_sigma_average_and_shape_relations(factory):
    sub = factory()
    for u in _random_points(sub, 3):
        d = induced_data(sub, u)
        assert np.max(np.abs(d.sigma + d.sigma_star - 2 * d.sigma_lc)) < 1e-9
        for s in (d.sigma, d.sigma_star):
            assert np.max(np.abs(s - s.transpose(1, 0, 2))) < 1e-12
        assert np.max(np.abs(d.sigma_frame(which="sigma") - d.shape_frame("A_star"))) < 1e-9
        assert np.max(np.abs(d.sigma_frame(which="sigma_star") - d.shape_frame("A"))) < 1e-9


def test_mean_curvature_frame_independent():
    sub = perturbed_graph()
    d = induced_data(sub, [0.4, 0.1])
    rng = np.random.default_rng(9)
    Q, _ = np.linalg.qr(rng.standard_normal((2, 2)))
    E = Q @ d.E  # another orthonormal frame
    for which, H in (("sigma", d.H), ("sigma_star", d.H_star)):
        s = getattr(d, which)
        H2 = np.einsum("ia,ib,abk->k", E, E, s) / d.n
        assert np.max(np.abs(H2 - H)) < 1e-9


def test_frames_are_orthonormal():
    d = induced_data(perturbed_graph(), [0.1, 0.1])
    d.tangent_frame.check(1e-12)
    d.normal_frame.check(1e-12)
    # normals are orthogonal to the tangent space
    assert np.max(np.abs(d.N @ d.amb.metric.g @ d.F)) < 1e-12


@pytest.mark.parametrize(
    "sub, labels",
    [
        (linear_quaternionic(2), {"invariant"}),
        (linear_real(2, 2), {"totally_real", "lagrangian_like"}),
        (product_torus(2), {"lagrangian_like"}),
        (real_graph(3, 2), {"totally_real"}),
        (real_graph(2, 1), {"totally_real"}),
    ],
)
def test_classification(sub, labels):
    assert classify(sub, _random_points(sub, 3)).label in labels


def test_tilted_plane_is_generic():
    theta = 0.7
    amb = builtin_model("flat_quaternionic", m=1)
    sub = ImmersedSubmanifold.from_texts(amb, 2, ["u1", f"{float(np.cos(theta))!r}*u2", f"{float(np.sin(theta))!r}*u2", "0"])
    c = classify(sub, [[0.0, 0.0]])
    assert c.label == "generic"
    # J_1 e_1 = d_x2, whose tangential part has length cos(theta)
    assert c.per_alpha_tangential[0] == pytest.approx(np.cos(theta), abs=1e-12)
    assert c.per_alpha_normal[0] == pytest.approx(np.sin(theta), abs=1e-12)


def test_classification_requires_quaternionic_ambient():
    with pytest.raises(ModelError):
        classify(round_sphere_in_euclidean(2), [[0.0, 0.0]])


def test_immersion_component_count_checked():
    with pytest.raises(ModelError):
        ImmersedSubmanifold.from_texts(builtin_model("euclidean", d=3), 2, ["u1", "u2"])
