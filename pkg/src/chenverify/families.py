"""Ready-made submanifold instances used by the CLI generator, tests and demos."""
from __future__ import annotations

import numpy as np

from . import exprlang as el
from .ambient import AmbientModel, ModelError, ambient_variables, builtin_model
from .subman import ImmersedSubmanifold

__all__ = [
    "linear_real",
    "linear_quaternionic",
    "product_torus",
    "real_graph",
    "random_quadratic",
    "round_sphere_in_euclidean",
    "perturbed_flat_ambient",
    "perturbed_graph",
    "submanifold_family",
    "SUBMANIFOLD_FAMILIES",
]


def _flat(m):
    if m < 1:
        raise ModelError(f"flat_quaternionic needs m >= 1, got {m}")
    return builtin_model("flat_quaternionic", m=m)


def linear_real(m: int, n: int) -> ImmersedSubmanifold:
    """u_k in the real slot of quaternion block k: totally geodesic and totally real."""
    if not 1 <= n <= m:
        raise ModelError(f"real linear family needs 1 <= n <= m, got n={n}, m={m}")
    amb = _flat(m)
    texts = ["0"] * amb.dim
    for k in range(n):
        texts[4 * k] = f"u{k + 1}"
    return ImmersedSubmanifold.from_texts(amb, n, texts, domain=np.tile([-1.0, 1.0], (n, 1)), name=f"linear_real({m},{n})")


def linear_quaternionic(m: int, blocks: int = 1) -> ImmersedSubmanifold:
    """The first ``blocks`` quaternion lines: an invariant (holomorphic) subspace."""
    if not 1 <= blocks <= m:
        raise ModelError(f"invariant family needs 1 <= blocks <= m, got blocks={blocks}, m={m}")
    amb = _flat(m)
    n = 4 * blocks
    texts = [f"u{k + 1}" if k < n else "0" for k in range(amb.dim)]
    return ImmersedSubmanifold.from_texts(amb, n, texts, domain=np.tile([-1.0, 1.0], (n, 1)), name=f"invariant({m},{blocks})")


def product_torus(m: int, n: int | None = None, radii=None) -> ImmersedSubmanifold:
    """Circles of the given radii in the (1, i) plane of blocks 1..n."""
    n = m if n is None else n
    if not 1 <= n <= m:
        raise ModelError(f"torus family needs 1 <= n <= m, got n={n}, m={m}")
    radii = np.ones(n) if radii is None else np.asarray(radii, dtype=float)
    amb = _flat(m)
    texts = ["0"] * amb.dim
    for k in range(n):
        r = "" if radii[k] == 1.0 else el.to_text(el.Num(float(radii[k]))) + "*"
        texts[4 * k] = f"{r}cos(u{k + 1})"
        texts[4 * k + 1] = f"{r}sin(u{k + 1})"
    return ImmersedSubmanifold.from_texts(
        amb, n, texts, domain=np.tile([-3.0, 3.0], (n, 1)), name=f"torus({m},{n})"
    )


def random_quadratic(n: int, rng, scale: float = 0.5) -> str:
    """A random quadratic polynomial in u1..un, printed in the expression language."""
    terms = []
    for a in range(n):
        for b in range(a, n):
            coef = float(np.round(scale * rng.uniform(-1, 1), 6))
            terms.append(f"{el.to_text(el.Num(coef))}*u{a + 1}*u{b + 1}")
    return "+".join(terms)


def real_graph(m: int, n: int, f: str | None = None, rng=None) -> ImmersedSubmanifold:
    """Graph u -> (u, f(u)) with every component in a real slot: totally real in flat H^m, m > n."""
    if not 1 <= n < m:
        raise ModelError(f"graph family needs 1 <= n < m, got n={n}, m={m}")
    if f is None:
        f = random_quadratic(n, np.random.default_rng(0) if rng is None else rng)
    amb = _flat(m)
    texts = ["0"] * amb.dim
    for k in range(n):
        texts[4 * k] = f"u{k + 1}"
    texts[4 * n] = f
    return ImmersedSubmanifold.from_texts(amb, n, texts, domain=np.tile([-1.0, 1.0], (n, 1)), name=f"graph({m},{n})")


def round_sphere_in_euclidean(n: int = 2, d: int | None = None) -> ImmersedSubmanifold:
    """Upper unit hemisphere S^n as a graph over the ball, inside euclidean(d)."""
    d = n + 1 if d is None else d
    if n < 1 or d < n + 1:
        raise ModelError(f"sphere family needs n >= 1 and d >= n + 1, got n={n}, d={d}")
    amb = builtin_model("euclidean", d=d)
    r2 = "+".join(f"u{k + 1}^2" for k in range(n))
    texts = [f"u{k + 1}" for k in range(n)] + [f"sqrt(1-({r2}))"] + ["0"] * (d - n - 1)
    return ImmersedSubmanifold.from_texts(amb, n, texts, domain=np.tile([-0.5, 0.5], (n, 1)), name=f"sphere({n})")


def perturbed_flat_ambient() -> AmbientModel:
    """Flat R^4 with a non-constant totally symmetric skewness tensor."""
    names = ambient_variables(4)
    skew = {
        (0, 0, 0): el.parse("0.3*sin(x2)", names),
        (0, 1, 1): el.parse("0.2*x1+0.1*x3", names),
        (1, 2, 3): el.parse("0.15*cos(x1*x4)", names),
        (2, 2, 3): el.parse("0.1", names),
    }
    return AmbientModel(
        4, el.ExprMatrix.from_array(np.eye(4)), "skewness", skewness=skew, name="perturbed_flat(4)"
    )


def perturbed_graph() -> ImmersedSubmanifold:
    """A curved surface graph in :func:`perturbed_flat_ambient`."""
    return ImmersedSubmanifold.from_texts(
        perturbed_flat_ambient(),
        2,
        ["u1", "u2", "0.3*u1^2-0.2*u1*u2", "0.1*sin(u2)+0.2*u1*u2"],
        domain=[[-1.0, 1.0], [-1.0, 1.0]],
        name="perturbed_graph",
    )


SUBMANIFOLD_FAMILIES = ("linear", "invariant", "torus", "graph", "sphere", "perturbed_graph")


def submanifold_family(kind: str, **params) -> ImmersedSubmanifold:
    m = int(params.get("m", 1))
    if kind == "linear":
        return linear_real(m, int(params.get("n", m)))
    if kind == "invariant":
        return linear_quaternionic(m, int(params.get("blocks", 1)))
    if kind == "torus":
        return product_torus(m, int(params.get("n", m)))
    if kind == "graph":
        n = int(params.get("n", m - 1))
        rng = np.random.default_rng(int(params.get("seed", 0)))
        return real_graph(m, n, params.get("f"), rng)
    if kind == "sphere":
        n = int(params.get("n", 2))
        return round_sphere_in_euclidean(n, int(params.get("d", n + 1)))
    if kind == "perturbed_graph":
        return perturbed_graph()
    raise ModelError(f"unknown submanifold family {kind!r}")
