"""Second-order forward-mode jets.

A :class:`Jet2` carries the value of a scalar field together with its
gradient and Hessian with respect to the chart coordinates.  Arithmetic on
jets propagates the product, quotient and chain rules exactly, so evaluating
an expression over seeded coordinate jets yields exact first and second
partial derivatives (up to floating point rounding).
"""
from __future__ import annotations

import math

import numpy as np

__all__ = [
    "Jet2",
    "JetDomainError",
    "jet_seed",
    "jet_const",
    "jet_arith",
    "jet_unary",
    "UNARY_FUNCTIONS",
]

UNARY_FUNCTIONS = ("sin", "cos", "exp", "log", "sqrt", "tanh", "neg")


class JetDomainError(ValueError):
    """Raised when an elementary function is applied outside its domain."""

    def __init__(self, fn: str, value: float, message: str | None = None):
        self.fn = fn
        self.value = value
        super().__init__(message or f"{fn}: argument {value!r} outside domain")


class Jet2:
    """Value, gradient and Hessian of a scalar field at one point.

    The Hessian is symmetrised on construction so every jet produced by the
    arithmetic below is exactly symmetric.
    """

    __slots__ = ("value", "grad", "hess")

    def __init__(self, value, grad, hess, *, symmetrize=True):
        self.value = float(value)
        self.grad = np.asarray(grad, dtype=float)
        hess = np.asarray(hess, dtype=float)
        if symmetrize:
            hess = 0.5 * (hess + hess.T)
        self.hess = hess

    @property
    def dim(self) -> int:
        return self.grad.shape[0]

    def is_constant(self) -> bool:
        return not (self.grad.any() or self.hess.any())

    def __repr__(self):
        return f"Jet2(value={self.value!r}, grad={self.grad.tolist()!r}, hess={self.hess.tolist()!r})"

    # Operator sugar; the work is done by jet_arith / jet_unary.
    def _coerce(self, other) -> Jet2:
        if isinstance(other, Jet2):
            return other
        return jet_const(other, self.dim)

    def __add__(self, other):
        return jet_arith("add", self, self._coerce(other))

    def __radd__(self, other):
        return jet_arith("add", self._coerce(other), self)

    def __sub__(self, other):
        return jet_arith("sub", self, self._coerce(other))

    def __rsub__(self, other):
        return jet_arith("sub", self._coerce(other), self)

    def __mul__(self, other):
        return jet_arith("mul", self, self._coerce(other))

    def __rmul__(self, other):
        return jet_arith("mul", self._coerce(other), self)

    def __truediv__(self, other):
        return jet_arith("div", self, self._coerce(other))

    def __rtruediv__(self, other):
        return jet_arith("div", self._coerce(other), self)

    def __pow__(self, other):
        return jet_arith("pow", self, self._coerce(other))

    def __rpow__(self, other):
        return jet_arith("pow", self._coerce(other), self)

    def __neg__(self):
        return jet_unary("neg", self)


def jet_seed(point, index: int) -> Jet2:
    """Coordinate jet ``x_index`` at ``point``: unit gradient, zero Hessian."""
    point = np.asarray(point, dtype=float).ravel()
    d = point.shape[0]
    if not 0 <= index < d:
        raise IndexError(f"seed index {index} out of range for chart dimension {d}")
    grad = np.zeros(d)
    grad[index] = 1.0
    return Jet2(point[index], grad, np.zeros((d, d)), symmetrize=False)


def jet_const(value: float, dim: int) -> Jet2:
    return Jet2(value, np.zeros(dim), np.zeros((dim, dim)), symmetrize=False)


def _chain(a: Jet2, f0: float, f1: float, f2: float) -> Jet2:
    # f(a): grad = f'(a) da, hess = f''(a) da da^T + f'(a) d2a
    return Jet2(f0, f1 * a.grad, f2 * np.outer(a.grad, a.grad) + f1 * a.hess)


def _mul(a: Jet2, b: Jet2) -> Jet2:
    cross = np.outer(a.grad, b.grad)
    return Jet2(
        a.value * b.value,
        a.value * b.grad + b.value * a.grad,
        a.value * b.hess + b.value * a.hess + cross + cross.T,
        symmetrize=False,
    )


def _reciprocal(b: Jet2) -> Jet2:
    v = b.value
    if v == 0.0:
        raise ZeroDivisionError("jet division by a zero-valued jet")
    return _chain(b, 1.0 / v, -1.0 / v**2, 2.0 / v**3)


def _int_power(a: Jet2, k: int) -> Jet2:
    if k == 0:
        return jet_const(1.0, a.dim)
    if k < 0:
        return _reciprocal(_int_power(a, -k))
    # repeated multiplication keeps negative bases legal
    result = a
    for _ in range(k - 1):
        result = _mul(result, a)
    return result


def jet_arith(op: str, a: Jet2, b: Jet2) -> Jet2:
    """Binary jet arithmetic for ``op`` in add, sub, mul, div, pow."""
    if op == "add":
        return Jet2(a.value + b.value, a.grad + b.grad, a.hess + b.hess, symmetrize=False)
    if op == "sub":
        return Jet2(a.value - b.value, a.grad - b.grad, a.hess - b.hess, symmetrize=False)
    if op == "mul":
        return _mul(a, b)
    if op == "div":
        return _mul(a, _reciprocal(b))
    if op == "pow":
        if b.is_constant() and float(b.value).is_integer():
            return _int_power(a, int(b.value))
        if a.value <= 0.0:
            raise JetDomainError(
                "pow", a.value, f"pow: non-integer power of non-positive base {a.value!r}"
            )
        return jet_unary("exp", _mul(b, jet_unary("log", a)))
    raise ValueError(f"unknown jet operation {op!r}")


def jet_unary(fn: str, a: Jet2) -> Jet2:
    """Apply an elementary function through the chain rule."""
    v = a.value
    if fn == "neg":
        return Jet2(-v, -a.grad, -a.hess, symmetrize=False)
    if fn == "sin":
        s, c = math.sin(v), math.cos(v)
        return _chain(a, s, c, -s)
    if fn == "cos":
        s, c = math.sin(v), math.cos(v)
        return _chain(a, c, -s, -c)
    if fn == "exp":
        e = math.exp(v)
        return _chain(a, e, e, e)
    if fn == "log":
        if v <= 0.0:
            raise JetDomainError("log", v)
        return _chain(a, math.log(v), 1.0 / v, -1.0 / v**2)
    if fn == "sqrt":
        if v <= 0.0:
            raise JetDomainError("sqrt", v)
        r = math.sqrt(v)
        return _chain(a, r, 0.5 / r, -0.25 / (r * v))
    if fn == "tanh":
        t = math.tanh(v)
        s2 = 1.0 - t * t
        return _chain(a, t, s2, -2.0 * t * s2)
    raise ValueError(f"unknown jet function {fn!r}")
