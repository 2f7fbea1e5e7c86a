"""Reader and writer for the plain-text manifold spec format.

A file is a sequence of ``[section]`` headers followed by ``key = value``
lines; ``#`` starts a comment.  Indices in keys are 1-based::

    [manifold]
    dim = 4
    domain = -2,2; -2,2; -2,2; -2,2
    [metric]
    g_1_1 = 1
    ...
    [connection]
    mode = skewness
    K_1_1_2 = x3
    [quaternionic]
    J1_1_2 = -1
    omega1_3 = 0
    c = 0
    [submanifold]
    n = 2
    domain = 0,6.3; 0,6.3
    f_1 = cos(u1)

Unspecified entries default to 0.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import exprlang as el
from .ambient import AmbientModel, ambient_variables
from .subman import ImmersedSubmanifold, submanifold_variables

__all__ = ["SpecFileError", "ManifoldSpec", "parse_spec", "load_spec", "write_spec"]

_SECTIONS = ("manifold", "metric", "connection", "quaternionic", "submanifold")


class SpecFileError(ValueError):
    """Malformed spec file; ``line`` is 1-based, ``offset`` is the byte offset in the line."""

    def __init__(self, message: str, line: int, offset: int | None = None):
        self.line = line
        self.offset = offset
        where = f"line {line}" + (f", offset {offset}" if offset is not None else "")
        super().__init__(f"{where}: {message}")


@dataclass
class ManifoldSpec:
    ambient: AmbientModel
    submanifold: ImmersedSubmanifold | None = None


@dataclass
class _Entry:
    value: str
    line: int
    col: int  # offset of the value within the line


def _split_sections(text: str):
    sections: dict[str, dict[str, _Entry]] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        stripped = line.strip()
        if stripped.startswith("["):
            m = re.fullmatch(r"\[\s*([A-Za-z_]+)\s*\]", stripped)
            if m is None or m.group(1) not in _SECTIONS:
                raise SpecFileError(f"unknown section header {stripped!r}", lineno, raw.index("["))
            current = m.group(1)
            if current in sections:
                raise SpecFileError(f"duplicate section [{current}]", lineno, raw.index("["))
            sections[current] = {}
            continue
        if current is None:
            raise SpecFileError("key outside of any section", lineno, 0)
        if "=" not in line:
            raise SpecFileError("expected key = value", lineno, len(line) - len(line.lstrip()))
        key, value = line.split("=", 1)
        key = key.strip()
        col = line.index("=") + 1
        col += len(value) - len(value.lstrip())
        if key in sections[current]:
            raise SpecFileError(f"duplicate key {key!r}", lineno, line.index(key))
        sections[current][key] = _Entry(value.strip(), lineno, col)
    return sections


def _int(entry: _Entry, what: str) -> int:
    try:
        return int(entry.value)
    except ValueError:
        raise SpecFileError(f"{what} must be an integer, got {entry.value!r}", entry.line, entry.col) from None


def _domain(entry: _Entry | None, dim: int):
    if entry is None:
        return None
    try:
        pairs = [[float(v) for v in part.split(",")] for part in entry.value.split(";") if part.strip()]
    except ValueError:
        raise SpecFileError(f"malformed domain {entry.value!r}", entry.line, entry.col) from None
    if any(len(p) != 2 for p in pairs):
        raise SpecFileError("domain entries must be lo,hi pairs", entry.line, entry.col)
    if len(pairs) == 1:
        pairs = pairs * dim
    if len(pairs) != dim:
        raise SpecFileError(f"domain has {len(pairs)} intervals, expected {dim}", entry.line, entry.col)
    if any(lo >= hi for lo, hi in pairs):
        raise SpecFileError("domain intervals need lo < hi", entry.line, entry.col)
    return np.array(pairs)


def _expr(entry: _Entry, variables):
    try:
        return el.parse(entry.value, variables)
    except el.ExprError as exc:
        offset = getattr(exc, "offset", 0)
        raise SpecFileError(str(exc), entry.line, entry.col + offset) from exc


def _indices(key: str, prefix: str, count: int, dim: int, entry: _Entry):
    m = re.fullmatch(re.escape(prefix) + r"((?:_\d+){%d})" % count, key)
    if m is None:
        return None
    idx = tuple(int(v) - 1 for v in m.group(1).split("_")[1:])
    if any(not 0 <= i < dim for i in idx):
        raise SpecFileError(f"index out of range in {key!r} (dim {dim})", entry.line, 0)
    return idx


def parse_spec(text: str, name: str = "custom") -> ManifoldSpec:
    sections = _split_sections(text)
    if "manifold" not in sections:
        raise SpecFileError("missing [manifold] section", 1)
    man = sections["manifold"]
    if "dim" not in man:
        raise SpecFileError("[manifold] needs dim", 1)
    dim = _int(man["dim"], "dim")
    if dim < 1:
        raise SpecFileError("dim must be positive", man["dim"].line, man["dim"].col)
    for key, entry in man.items():
        if key not in ("dim", "domain", "name"):
            raise SpecFileError(f"unknown key {key!r} in [manifold]", entry.line, 0)
    if "name" in man:
        name = man["name"].value
    names = ambient_variables(dim)

    metric = [[el.ZERO] * dim for _ in range(dim)]
    for key, entry in sections.get("metric", {}).items():
        idx = _indices(key, "g", 2, dim, entry)
        if idx is None:
            raise SpecFileError(f"unknown key {key!r} in [metric]", entry.line, 0)
        i, j = idx
        if j < i:
            raise SpecFileError(f"metric keys use the upper triangle (i <= j), got {key!r}", entry.line, 0)
        metric[i][j] = metric[j][i] = _expr(entry, names)
    for i in range(dim):
        if f"g_{i + 1}_{i + 1}" not in sections.get("metric", {}):
            raise SpecFileError(f"missing diagonal metric entry g_{i + 1}_{i + 1}", 1)
    metric_m = el.ExprMatrix(dim, dim, tuple(tuple(r) for r in metric))

    conn = sections.get("connection", {})
    mode = conn["mode"].value if "mode" in conn else "skewness"
    if mode not in ("skewness", "explicit"):
        raise SpecFileError(f"unknown connection mode {mode!r}", conn["mode"].line, conn["mode"].col)
    skew, gamma, gamma_star = {}, {}, {}
    for key, entry in conn.items():
        if key == "mode":
            continue
        if mode == "skewness" and (idx := _indices(key, "K", 3, dim, entry)) is not None:
            s = tuple(sorted(idx))
            if s in skew:
                raise SpecFileError(f"duplicate skewness component {key!r} (K is symmetric)", entry.line, 0)
            skew[s] = _expr(entry, names)
        elif mode == "explicit" and (idx := _indices(key, "Gamma", 3, dim, entry)) is not None:
            gamma[idx] = _expr(entry, names)
        elif mode == "explicit" and (idx := _indices(key, "GammaStar", 3, dim, entry)) is not None:
            gamma_star[idx] = _expr(entry, names)
        else:
            raise SpecFileError(f"unknown key {key!r} for connection mode {mode!r}", entry.line, 0)

    J = omega = c = None
    if "quaternionic" in sections:
        quat = sections["quaternionic"]
        Jm = [[[el.ZERO] * dim for _ in range(dim)] for _ in range(3)]
        om = [[el.ZERO] * dim for _ in range(3)]
        has_omega = False
        for key, entry in quat.items():
            if key == "c":
                if entry.value == "unknown":
                    c = None
                else:
                    try:
                        c = float(entry.value)
                    except ValueError:
                        raise SpecFileError(f"c must be a real or 'unknown', got {entry.value!r}", entry.line, entry.col) from None
                continue
            m = re.fullmatch(r"J([123])_(\d+)_(\d+)", key)
            if m:
                i, j = int(m.group(2)) - 1, int(m.group(3)) - 1
                if not (0 <= i < dim and 0 <= j < dim):
                    raise SpecFileError(f"index out of range in {key!r}", entry.line, 0)
                Jm[int(m.group(1)) - 1][i][j] = _expr(entry, names)
                continue
            m = re.fullmatch(r"omega([123])_(\d+)", key)
            if m:
                i = int(m.group(2)) - 1
                if not 0 <= i < dim:
                    raise SpecFileError(f"index out of range in {key!r}", entry.line, 0)
                om[int(m.group(1)) - 1][i] = _expr(entry, names)
                has_omega = True
                continue
            raise SpecFileError(f"unknown key {key!r} in [quaternionic]", entry.line, 0)
        J = tuple(el.ExprMatrix(dim, dim, tuple(tuple(r) for r in Ja)) for Ja in Jm)
        omega = tuple(tuple(r) for r in om) if has_omega else None

    domain = _domain(man.get("domain"), dim)
    try:
        ambient = AmbientModel(
            dim=dim,
            metric=metric_m,
            connection_mode=mode,
            skewness=skew,
            gamma=gamma,
            gamma_star=gamma_star or None,
            J=J,
            omega=omega,
            c=c,
            domain=domain,
            name=name,
        )
    except ValueError as exc:
        raise SpecFileError(str(exc), man["dim"].line) from exc

    sub = None
    if "submanifold" in sections:
        sec = sections["submanifold"]
        if "n" not in sec:
            raise SpecFileError("[submanifold] needs n", 1)
        n = _int(sec["n"], "n")
        if not 1 <= n <= dim:
            raise SpecFileError(f"submanifold dimension {n} out of range", sec["n"].line, sec["n"].col)
        unames = submanifold_variables(n)
        comps = [el.ZERO] * dim
        for key, entry in sec.items():
            if key in ("n", "domain", "name"):
                continue
            idx = _indices(key, "f", 1, dim, entry)
            if idx is None:
                raise SpecFileError(f"unknown key {key!r} in [submanifold]", entry.line, 0)
            comps[idx[0]] = _expr(entry, unames)
        sub = ImmersedSubmanifold(
            ambient, n, tuple(comps), _domain(sec.get("domain"), n), sec["name"].value if "name" in sec else "submanifold"
        )
    return ManifoldSpec(ambient, sub)


def load_spec(path) -> ManifoldSpec:
    path = Path(path)
    return parse_spec(path.read_text(), name=path.stem)


def _fmt_domain(domain) -> str:
    return "; ".join(f"{float(lo)!r},{float(hi)!r}" for lo, hi in np.asarray(domain, dtype=float))


def _is_zero(ast) -> bool:
    return isinstance(ast, el.Num) and ast.value == 0.0


def write_spec(model: AmbientModel, sub: ImmersedSubmanifold | None = None) -> str:
    """Serialise a model (and optional submanifold) so that parse_spec reproduces it."""
    d = model.dim
    lines = ["[manifold]", f"name = {model.name}", f"dim = {d}", f"domain = {_fmt_domain(model.domain)}", "", "[metric]"]
    for i in range(d):
        for j in range(i, d):
            ast = model.metric[i, j]
            if i == j or not _is_zero(ast):
                lines.append(f"g_{i + 1}_{j + 1} = {el.to_text(ast)}")
    lines += ["", "[connection]", f"mode = {model.connection_mode}"]
    if model.connection_mode == "skewness":
        for (i, j, k), ast in sorted(model.skewness.items()):
            lines.append(f"K_{i + 1}_{j + 1}_{k + 1} = {el.to_text(ast)}")
    else:
        for (k, i, j), ast in sorted(model.gamma.items()):
            lines.append(f"Gamma_{k + 1}_{i + 1}_{j + 1} = {el.to_text(ast)}")
        for (k, i, j), ast in sorted((model.gamma_star or {}).items()):
            lines.append(f"GammaStar_{k + 1}_{i + 1}_{j + 1} = {el.to_text(ast)}")
    if model.J is not None:
        lines += ["", "[quaternionic]"]
        for a, Ja in enumerate(model.J):
            for i, j, ast in Ja.nonzero():
                lines.append(f"J{a + 1}_{i + 1}_{j + 1} = {el.to_text(ast)}")
        if model.omega is not None:
            for a, row in enumerate(model.omega):
                for i, ast in enumerate(row):
                    if not _is_zero(ast):
                        lines.append(f"omega{a + 1}_{i + 1} = {el.to_text(ast)}")
        lines.append(f"c = {'unknown' if model.c is None else repr(float(model.c))}")
    if sub is not None:
        lines += ["", "[submanifold]", f"name = {sub.name}", f"n = {sub.n}", f"domain = {_fmt_domain(sub.domain)}"]
        for k, ast in enumerate(sub.immersion):
            if not _is_zero(ast):
                lines.append(f"f_{k + 1} = {el.to_text(ast)}")
    return "\n".join(lines) + "\n"
