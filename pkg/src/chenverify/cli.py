"""Command line front end: ``chenverify validate|chen|delta22|lemmas|generate``.

Exit codes: 0 pass, 1 structural or validation failure, 2 input error,
3 falsification finding.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys

import numpy as np

from . import __version__
from . import chen as ch
from .ambient import (
    ModelError,
    builtin_model,
    check_constant_type_curvature,
    sample_points,
    validate_quaternionic,
    validate_statistical,
)
from .exprlang import ExprError, ExprEvalError
from .families import submanifold_family
from .geomcore import GeometryError
from .specfile import SpecFileError, parse_spec, write_spec
from .subman import classify, induced_data

DEFAULT_SEED = 0xC4E2
EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_FALSIFIED = 0, 1, 2, 3


class InputError(Exception):
    pass


def default_seed() -> int:
    env = os.environ.get("CHENVERIFY_SEED")
    return int(env, 0) if env else DEFAULT_SEED


def _seed(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _n_range(text: str) -> tuple[int, int]:
    lo, _, hi = text.partition(":")
    lo, hi = int(lo), int(hi or lo)
    if lo < 3 or hi < lo:
        raise argparse.ArgumentTypeError("n-range must look like LO:HI with 3 <= LO <= HI")
    return lo, hi


# ---------------------------------------------------------------------------
# output

def _document(args, spec_text: str | None, checks, findings, **extra) -> dict:
    meta = {
        "command": args.command,
        "seed": args.seed,
        "version": __version__,
        "spec_hash": hashlib.sha256(spec_text.encode()).hexdigest() if spec_text is not None else None,
    }
    doc = {"meta": meta, "checks": checks, "findings": findings}
    doc.update(extra)
    return doc


def _emit(args, doc: dict, table: list[dict], text_lines: list[str]):
    if args.format == "json":
        out = json.dumps(doc, indent=2, allow_nan=True) + "\n"
    elif args.format == "csv":
        buf = io.StringIO()
        if table:
            writer = csv.DictWriter(buf, fieldnames=list(table[0].keys()), lineterminator="\n")
            writer.writeheader()
            writer.writerows(table)
        out = buf.getvalue()
    else:
        out = "\n".join(text_lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


def _read_spec(path: str):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        stem = os.path.splitext(os.path.basename(path))[0]
        return text, parse_spec(text, name=stem)
    except (SpecFileError, ExprError, ModelError) as exc:
        raise InputError(f"{path}: {exc}") from exc


# ---------------------------------------------------------------------------
# validate

def _validation_checks(model, points, tol):
    checks = []
    reports = [validate_statistical(model, points, tol)]
    if model.quaternionic:
        reports.append(validate_quaternionic(model, points, tol))
    for rep in reports:
        for chk in rep.checks:
            checks.append({"kind": rep.kind, **chk.to_dict()})
        for idx, msg in rep.failures:
            checks.append({"kind": rep.kind, "name": "evaluation", "passed": False, "point": idx, "detail": msg})
    if model.quaternionic:
        fit = check_constant_type_curvature(model, points, tol)
        entry = {"kind": "quaternionic", "name": "constant_type", **fit.to_dict()}
        if model.c is None:
            entry["passed"] = None  # informational only: c undeclared
        checks.append(entry)
    return checks


def cmd_validate(args) -> int:
    spec_text, spec = _read_spec(args.spec)
    rng = np.random.default_rng(args.seed)
    points = sample_points(spec.ambient, args.samples, rng)
    checks = _validation_checks(spec.ambient, points, args.tol)
    findings = []
    if spec.submanifold is not None and spec.ambient.quaternionic:
        upts = sample_points(spec.submanifold.domain, min(args.samples, 5), rng)
        try:
            cls = classify(spec.submanifold, upts)
            checks.append({"kind": "submanifold", "name": "classification", "passed": True, **cls.to_dict()})
        except GeometryError as exc:
            checks.append({"kind": "submanifold", "name": "classification", "passed": False, "detail": str(exc)})
    failed = [c for c in checks if c.get("passed") is False]
    for c in failed:
        findings.append({"type": "validation_failure", "check": c["name"], "kind": c["kind"]})
    doc = _document(args, spec_text, checks, findings, model=spec.ambient.name, points=len(points))
    table = [
        {"kind": c["kind"], "check": c["name"], "residual": c.get("max_residual", c.get("residual")),
         "tol": c.get("tol"), "passed": c.get("passed")}
        for c in checks
    ]
    lines = [f"{spec.ambient.name}: {len(points)} points"]
    for row in table:
        status = {True: "ok", False: "FAIL", None: "info"}[row["passed"]]
        lines.append(f"  [{status:4}] {row['kind']}.{row['check']}: residual={row['residual']} tol={row['tol']}")
    _emit(args, doc, table, lines)
    return EXIT_FAIL if failed else EXIT_OK


# ---------------------------------------------------------------------------
# chen / delta22

_CASES = {"real": ("totally_real",), "holomorphic": ("holomorphic_printed", "holomorphic_proof_variant")}


def _run_inequality(args, delta22: bool) -> int:
    spec_text, spec = _read_spec(args.spec)
    sub = spec.submanifold
    if sub is None:
        raise InputError(f"{args.spec}: no [submanifold] section")
    kind = "delta22" if delta22 else "chen_first"
    min_n = 4 if delta22 else 3
    if sub.n < min_n:
        raise InputError(f"{args.spec}: the {kind} inequality needs n >= {min_n}, submanifold has n = {sub.n}")
    rng = np.random.default_rng(args.seed)
    points = sample_points(sub.domain, args.points, rng)
    checks, findings, samples = [], [], []

    def finish(code, **extra):
        doc = _document(args, spec_text, checks, findings, kind=kind, samples=samples, **extra)
        table = [
            {"sample": s["index"], "case": s["case"], "point": " ".join(repr(v) for v in s["point"]),
             "margin": s["margin"], "holds": s["holds"]}
            for s in samples
        ]
        lines = [f"{kind} on {sub.name}: {len(samples)} samples"]
        lines += [f"  #{r['sample']} {r['case']}: margin={r['margin']!r} holds={r['holds']}" for r in table]
        if "summary" in extra:
            lines.append("summary: " + json.dumps(extra["summary"]))
        lines += [f"finding: {json.dumps(f)}" for f in findings]
        _emit(args, doc, table, lines)
        return code

    try:
        stat, quat, fit = ch.verify_ambient(sub.ambient)
    except ch.UnverifiedAmbientError as exc:
        findings.append({"type": "ambient_unverified", "detail": str(exc)})
        return finish(EXIT_FAIL)
    checks.append({"name": "ambient_statistical", "passed": stat.passed, "failed": stat.failed_checks()})
    checks.append({"name": "ambient_quaternionic", "passed": quat.passed, "failed": quat.failed_checks()})
    checks.append({"name": "constant_type", **fit.to_dict()})

    try:
        cls = classify(sub, points)
    except GeometryError as exc:
        findings.append({"type": "input_error", "detail": str(exc)})
        return finish(EXIT_FAIL)
    checks.append({"name": "classification", **cls.to_dict()})

    cases = _CASES[args.case]
    min_margin, violations, equality_hits = None, 0, 0
    for idx, u in enumerate(points):
        data = induced_data(sub, u)
        for p in range(args.planes):
            pi = ch.random_plane_pair(data, rng) if delta22 else (ch.random_plane(data, rng),)
            for case in cases:
                try:
                    if delta22:
                        rep = ch.delta22_report(sub, u, pi[0], pi[1], case, data=data, classification=cls, tol=args.tol)
                    else:
                        rep = ch.chen_first_report(sub, u, pi[0], case, data=data, classification=cls, tol=args.tol)
                except ch.ClassificationMismatch as exc:
                    findings.append({"type": "classification_mismatch", "case": case, "detail": str(exc),
                                     "classification": exc.classification.to_dict()})
                    return finish(EXIT_FAIL)
                except ch.UnverifiedAmbientError as exc:
                    findings.append({"type": "ambient_unverified", "detail": str(exc)})
                    return finish(EXIT_FAIL)
                entry = {"index": len(samples), "point_index": idx, "plane_index": p, **rep.to_dict()}
                samples.append(entry)
                min_margin = rep.margin if min_margin is None else min(min_margin, rep.margin)
                if rep.equality.equality:
                    equality_hits += 1
                if not rep.holds:
                    violations += 1
                    findings.append({"type": "violation", "sample": entry["index"], "case": case, "lhs": rep.lhs,
                                     "rhs": rep.rhs, "point": rep.point, "planes": rep.planes})
                if case == "totally_real":
                    diag = ch.nonminimality_criterion(rep, data)
                    entry["nonminimality"] = diag.to_dict()
                    if diag.status == "CONTRADICTION":
                        findings.append({"type": "contradiction", "sample": entry["index"], "point": rep.point,
                                         "planes": rep.planes, **diag.to_dict()})
    summary = {"samples": len(samples), "min_margin": min_margin, "violations": violations, "equality_hits": equality_hits}
    falsified = any(f["type"] in ("violation", "contradiction") for f in findings)
    return finish(EXIT_FALSIFIED if falsified else EXIT_OK, summary=summary)


def cmd_chen(args) -> int:
    return _run_inequality(args, args.delta22)


def cmd_delta22(args) -> int:
    return _run_inequality(args, True)


# ---------------------------------------------------------------------------
# lemmas

def cmd_lemmas(args) -> int:
    lo, hi = args.n_range
    rng = np.random.default_rng(args.seed)
    checks, findings = [], []
    if args.trials > 0:
        for n in range(lo, hi + 1):
            for kind in ("chen_first", "delta22"):
                if kind == "delta22" and n < 4:
                    continue
                constant = args.constant if kind == "chen_first" else "corrected"
                samples = rng.uniform(-10, 10, (args.trials, n))
                worst = float(ch.lemma_margins(samples, kind, constant).min())
                opt = ch.maximize_lemma(n, kind, args.restarts, rng)
                bound = ch._lemma_constant(n, kind, constant)
                entry = {
                    "n": n,
                    "kind": kind,
                    "constant": constant,
                    "trials": args.trials,
                    "worst_margin": worst,
                    "bound": bound,
                    "max_ratio": opt.max_ratio,
                    "sharp": abs(opt.max_ratio - bound) < 1e-6,
                    "gap": bound - opt.max_ratio,
                    "pattern_residual": opt.pattern_residual,
                    "maximizer": opt.maximizer.tolist(),
                    "passed": worst >= -1e-12 and opt.max_ratio <= bound + 1e-9,
                }
                checks.append(entry)
                if not entry["passed"]:
                    findings.append({"type": "lemma_violation", "n": n, "kind": kind, "worst_margin": worst,
                                     "max_ratio": opt.max_ratio, "bound": bound})
    doc = _document(args, None, checks, findings)
    table = [{k: c[k] for k in ("n", "kind", "constant", "worst_margin", "bound", "max_ratio", "sharp", "passed")}
             for c in checks]
    lines = [f"lemma suite: n in {lo}..{hi}, {args.trials} trials, constant={args.constant}"]
    for c in checks:
        note = "sharp" if c["sharp"] else f"not attained (gap {c['gap']:.3g})"
        lines.append(f"  n={c['n']} {c['kind']}: worst margin {c['worst_margin']:.3e}, max ratio {c['max_ratio']:.12f} "
                     f"vs bound {c['bound']:.12f} [{note}]")
    _emit(args, doc, table, lines)
    return EXIT_FALSIFIED if findings else EXIT_OK


# ---------------------------------------------------------------------------
# generate

_AMBIENT_ONLY = ("normal_family", "round_sphere", "hessian", "euclidean")


def _parse_params(items):
    params = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep:
            raise InputError(f"parameters must be key=value, got {item!r}")
        params[key.replace("-", "_")] = value
    return params


def _generate(family: str, params: dict):
    try:
        if family == "flat_quaternionic":
            m = int(params.get("m", 1))
            kind = params.get("submanifold")
            if kind is None:
                return builtin_model("flat_quaternionic", m=m), None
            extra = {k: v for k, v in params.items() if k not in ("submanifold",)}
            sub = submanifold_family(kind, **extra)
            return sub.ambient, sub
        if family == "sphere":
            n = int(params.get("n", 2))
            d = int(params.get("ambient_dim", params.get("d", n + 1)))
            sub = submanifold_family("sphere", n=n, d=d)
            return sub.ambient, sub
        if family == "perturbed_graph":
            sub = submanifold_family("perturbed_graph")
            return sub.ambient, sub
        if family == "normal_family":
            return builtin_model("normal_family", alpha=float(params.get("alpha", 0.0))), None
        if family == "round_sphere":
            return builtin_model("round_sphere", n=int(params.get("n", 2)), radius=float(params.get("radius", 1.0))), None
        if family == "hessian":
            return builtin_model("hessian", potential=params["potential"], dim=int(params["dim"])), None
        if family == "euclidean":
            return builtin_model("euclidean", d=int(params.get("d", 3))), None
    except KeyError as exc:
        raise InputError(f"family {family!r} needs parameter {exc.args[0]!r}") from exc
    except (ValueError, ExprEvalError) as exc:
        raise InputError(f"family {family!r}: {exc}") from exc
    raise InputError(f"unknown family {family!r}")


GENERATE_FAMILIES = ("flat_quaternionic", "sphere", "perturbed_graph") + _AMBIENT_ONLY


def cmd_generate(args) -> int:
    model, sub = _generate(args.family, _parse_params(args.params))
    text = write_spec(model, sub)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_seed, default=None, help="RNG seed (default 0xC4E2 or $CHENVERIFY_SEED)")
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--out", default=None, help="write output here instead of stdout")

    parser = argparse.ArgumentParser(prog="chenverify", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"chenverify {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="validate the structures declared in a spec file")
    p.add_argument("spec")
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_validate)

    for name, func in (("chen", cmd_chen), ("delta22", cmd_delta22)):
        p = sub.add_parser(name, parents=[common], help=f"evaluate the {name} inequality over sampled points and planes")
        p.add_argument("spec")
        p.add_argument("--case", choices=("real", "holomorphic"), default="real")
        p.add_argument("--points", "--samples", dest="points", type=int, default=5)
        p.add_argument("--planes", type=int, default=3)
        p.add_argument("--tol", type=float, default=ch.HOLDS_RTOL)
        if name == "chen":
            p.add_argument("--delta22", action="store_true", help="evaluate the delta(2,2) inequality instead")
        p.set_defaults(func=func)

    p = sub.add_parser("lemmas", parents=[common], help="run the algebraic lemma suite")
    p.add_argument("--n-range", type=_n_range, default=(3, 8))
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--restarts", type=int, default=200)
    p.add_argument("--constant", choices=("corrected", "printed"), default="corrected")
    p.set_defaults(func=cmd_lemmas)

    p = sub.add_parser("generate", help="emit a spec file for a built-in family")
    p.add_argument("family", choices=GENERATE_FAMILIES)
    p.add_argument("params", nargs="*", help="key=value parameters, e.g. m=2 submanifold=torus")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if getattr(args, "seed", "unset") is None:
        try:
            args.seed = default_seed()
        except ValueError:
            print("chenverify: CHENVERIFY_SEED is not an integer", file=sys.stderr)
            return EXIT_INPUT
    try:
        return args.func(args)
    except (InputError, ExprEvalError) as exc:
        print(f"chenverify: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (GeometryError, ModelError) as exc:
        print(f"chenverify: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
