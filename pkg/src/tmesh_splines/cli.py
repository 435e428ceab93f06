"""Command-line interface.

Commands: stats, dim, oracle, basis, cvr, extend, gen, verify, render.
Exit codes: 0 all checks pass, 1 a check failed or results disagree,
2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field

from .rational import rat, rat_from_json, rat_to_json, rat_str
from .mesh import (
    TMesh, MeshError, ParseError, mesh_from_json, mesh_to_json, extend,
    extract_ledges,
)
from .hierarchy import (
    HMesh, hmesh_from_json, hmesh_to_json, generate_random, extend_hmesh,
    isolated_cells,
)
from .oracle import SpaceSpec, assemble_system, dim_oracle, nullspace_basis
from .dimension import (
    dim_formula_general, dim_bilinear_hbc, lower_bound_biquadratic_hbc,
    dim_biquadratic_hier_hbc, DegreeTooLow,
)
from .embedding import bilinear_constraints, raw_biquadratic_constraints
from .basis import (
    cardinal_bilinear_basis, hierarchical_basis, linear_independence_check,
    nonnegativity_check, partition_of_unity_check,
)
from .cvr import cvr_graph, identity_checks, conjecture_experiment, IdentityViolated
from .verify import run_suite, SUITES, UnknownSuite
from .render import render_svg


@dataclass
class RunReport:
    command: str
    inputs: dict
    checks: list = field(default_factory=list)  # (name, expected, actual, ok)
    values: dict = field(default_factory=dict)
    started: float = field(default_factory=time.monotonic)

    def add_check(self, name, expected, actual, ok=None):
        if ok is None:
            ok = expected == actual
        self.checks.append((name, expected, actual, bool(ok)))

    @property
    def ok(self) -> bool:
        return all(c[3] for c in self.checks)

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "inputs": self.inputs,
            "values": {k: _jsonable(v) for k, v in sorted(self.values.items())},
            "checks": [
                {"name": n, "expected": _jsonable(e), "actual": _jsonable(a), "pass": ok}
                for n, e, a, ok in sorted(self.checks)
            ],
            "ok": self.ok,
            "seconds": round(time.monotonic() - self.started, 6),
        }

    def print_human(self):
        for k, v in sorted(self.values.items()):
            print(f"{k}: {_human(v)}")
        for n, e, a, ok in sorted(self.checks):
            tag = "PASS" if ok else "FAIL"
            print(f"{tag} {n}: expected {_human(e)}, got {_human(a)}")


def _jsonable(v):
    if isinstance(v, (int, str, bool, type(None), float)):
        return v
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return str(v)


def _human(v):
    if isinstance(v, dict):
        return ", ".join(f"{k}={_human(x)}" for k, x in v.items())
    return str(v)


def _emit(report: RunReport, as_json: bool) -> int:
    if as_json:
        print(json.dumps(report.to_json(), indent=1, sort_keys=True))
    else:
        report.print_human()
    return 0 if report.ok else 1


def load_mesh_file(path):
    """Load a mesh file; returns a TMesh or an HMesh."""
    try:
        with open(path) as f:
            doc = json.load(f)
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: line {e.lineno}, column {e.colno}: {e.msg}") from e
    if isinstance(doc, dict) and "base" in doc:
        return hmesh_from_json(doc)
    return mesh_from_json(doc)


def _realized(obj) -> TMesh:
    return obj.realized if isinstance(obj, HMesh) else obj


def _parse_space(text, hbc) -> SpaceSpec:
    try:
        m, n, a, b = (int(p) for p in text.split(","))
    except ValueError as e:
        raise ParseError(f"--space expects m,n,a,b, got {text!r}") from e
    return SpaceSpec(m, n, a, b, hbc=hbc)


def _parse_random(text):
    opts = {"seed": 0, "rows": 3, "cols": 3, "levels": 2, "prob": 0.4, "cvc": False}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if part == "cvc":
            opts["cvc"] = True
            continue
        k, _, v = part.partition("=")
        if k not in opts:
            raise ParseError(f"unknown random-mesh option {k!r}")
        opts[k] = float(v) if k == "prob" else int(v)
    return opts


# -- commands --------------------------------------------------------------


def cmd_stats(args) -> int:
    obj = load_mesh_file(args.mesh)
    mesh = _realized(obj)
    st = mesh.stats
    report = RunReport("stats", {"mesh": args.mesh})
    report.values.update({
        "F": st.F, "V_interior": st.V, "V_plus": st.V_plus, "V_T": st.V_T,
        "V_b": st.V_b, "E_h": st.E_h, "E_v": st.E_v, "E": st.E,
    })
    classes = {}
    for c in mesh.vertex_classes.values():
        classes[c] = classes.get(c, 0) + 1
    report.values["vertex_classes"] = dict(sorted(classes.items()))
    report.values["ledges"] = [
        f"{l.orientation} {rat_str(l.coord)} [{rat_str(l.lo)},{rat_str(l.hi)}]"
        for l in extract_ledges(mesh)]
    if isinstance(obj, HMesh) and obj.extension is None:
        iso, delta = isolated_cells(obj)
        report.values["isolated_cells"] = len(iso)
        report.values["delta"] = delta
    report.add_check("lemma-cells-identity", st.V_plus + st.E + 1, st.F)
    report.add_check("lemma-ledge-endpoints", 2 * st.E, st.V_T + st.V_bT)
    return _emit(report, args.json)


def cmd_dim(args) -> int:
    obj = load_mesh_file(args.mesh)
    mesh = _realized(obj)
    spec = _parse_space(args.space, args.hbc)
    report = RunReport("dim", {"mesh": args.mesh, "space": args.space, "hbc": args.hbc})
    methods = ("formula", "oracle", "embedding") if args.method == "all" else (args.method,)
    vals = {}
    if "formula" in methods:
        st = mesh.stats
        if not spec.hbc:
            try:
                vals["formula"] = dim_formula_general(st, spec)
            except DegreeTooLow as e:
                report.values["formula"] = f"not applicable: {e}"
        elif (spec.m, spec.n, spec.alpha, spec.beta) == (1, 1, 0, 0):
            vals["formula"] = dim_bilinear_hbc(st)
        elif (spec.m, spec.n, spec.alpha, spec.beta) == (2, 2, 1, 1):
            if isinstance(obj, HMesh):
                vals["formula"] = dim_biquadratic_hier_hbc(obj)
            elif st.V_plus > 0:
                report.values["lower_bound"] = lower_bound_biquadratic_hbc(st)
        else:
            report.values["formula"] = "no closed form for this space"
    if "oracle" in methods:
        vals["oracle"] = dim_oracle(mesh, spec)
    if "embedding" in methods:
        key = (spec.m, spec.n, spec.alpha, spec.beta, spec.hbc)
        if key == (1, 1, 0, 0, True):
            vals["embedding"] = mesh.stats.F - bilinear_constraints(mesh).rank()
        elif key == (2, 2, 1, 1, True):
            d11 = dim_oracle(mesh, SpaceSpec(1, 1, 0, 0, hbc=True))
            vals["embedding"] = d11 - raw_biquadratic_constraints(mesh).rank()
        else:
            report.values["embedding"] = "embedding route covers (1,1,0,0) and (2,2,1,1) with HBC"
    report.values.update(vals)
    if len(vals) > 1:
        first = next(iter(vals.values()))
        report.add_check("methods-agree", first, first,
                         ok=all(v == first for v in vals.values()))
    return _emit(report, args.json)


def cmd_oracle(args) -> int:
    obj = load_mesh_file(args.mesh)
    mesh = _realized(obj)
    spec = _parse_space(args.space, args.hbc)
    system = assemble_system(mesh, spec, basis=args.basis)
    report = RunReport("oracle", {"mesh": args.mesh, "space": args.space, "hbc": args.hbc})
    report.values["unknowns"] = system.unknowns
    report.values["rows"] = system.matrix.nrows
    rank = system.matrix.rank()
    report.values["rank"] = rank
    report.values["dimension"] = system.unknowns - rank
    if args.nullspace:
        funcs = nullspace_basis(system)
        doc = {"space": args.space, "hbc": args.hbc, "functions": []}
        for f in funcs:
            doc["functions"].append({
                str(ci): [[rat_to_json(v) for v in row] for row in f.grid(ci)]
                for ci in range(len(mesh.cells))})
        with open(args.nullspace, "w") as fh:
            json.dump(doc, fh, indent=1)
        report.values["nullspace_file"] = args.nullspace
    return _emit(report, args.json)


def cmd_basis(args) -> int:
    obj = load_mesh_file(args.mesh)
    mesh = _realized(obj)
    report = RunReport("basis", {"mesh": args.mesh, "kind": args.kind})
    if args.kind == "cardinal":
        bs = cardinal_bilinear_basis(mesh)
    else:
        if not isinstance(obj, HMesh):
            raise ParseError("hierarchical basis needs a hierarchical mesh file")
        bs = hierarchical_basis(obj)
    report.values["count"] = len(bs)
    report.values["anchors"] = [f"({rat_str(x)},{rat_str(y)})" for x, y in bs.anchors]
    if args.eval:
        x, y = (rat_from_json(p) for p in args.eval.split(","))
        report.values["values_at_point"] = [rat_str(f.evaluate((x, y))) for f in bs.functions]
    for check in args.check or ():
        if check == "unity":
            report.add_check("partition-of-unity", True, partition_of_unity_check(mesh))
        elif check == "independence":
            report.add_check("linear-independence", True, linear_independence_check(bs))
        elif check == "nonneg":
            report.add_check("nonnegative", True,
                             all(nonnegativity_check(f) for f in bs.functions))
    return _emit(report, args.json)


def cmd_cvr(args) -> int:
    obj = load_mesh_file(args.mesh)
    graph = cvr_graph(obj)
    report = RunReport("cvr", {"mesh": args.mesh})
    report.values.update({
        "nodes": graph.node_count, "edges": graph.edge_count,
        "faces": graph.faces, "components": graph.components,
    })
    try:
        identity_checks(obj, graph)
        report.add_check("counting-identities", True, True)
    except IdentityViolated as e:
        report.add_check("counting-identities", True, str(e), ok=False)
    if args.conjecture:
        m, n = (int(p) for p in args.conjecture.split(","))
        lhs, rhs, verdict = conjecture_experiment(obj, m, n)
        report.values["conjecture"] = {"m": m, "n": n, "lhs": lhs,
                                       "rhs": "unsupported" if rhs is None else rhs,
                                       "verdict": verdict}
        if verdict == "disagree" and m == 2 and n == 2:
            report.add_check("theorem-m2", lhs, rhs)
    if args.svg:
        with open(args.svg, "w") as fh:
            fh.write(render_svg(obj, show_cvr=True))
        report.values["svg"] = args.svg
    return _emit(report, args.json)


def cmd_extend(args) -> int:
    obj = load_mesh_file(args.mesh)
    margin = rat_from_json(args.margin) if args.margin else None
    if isinstance(obj, HMesh):
        ext = extend_hmesh(obj, args.m, args.n, margin).realized
    else:
        ext = extend(obj, args.m, args.n, margin)
    doc = mesh_to_json(ext)
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(doc, fh, indent=1)
    else:
        print(json.dumps(doc, indent=1))
    return 0


def cmd_gen(args) -> int:
    h = generate_random(args.seed, args.rows, args.cols, args.levels,
                        args.prob, require_cvc=args.cvc)
    doc = hmesh_to_json(h)
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(doc, fh, indent=1)
    else:
        print(json.dumps(doc, indent=1))
    return 0


def cmd_verify(args) -> int:
    if args.random is not None:
        opts = _parse_random(args.random)
        obj = generate_random(opts["seed"], opts["rows"], opts["cols"],
                              opts["levels"], opts["prob"], require_cvc=opts["cvc"])
        inputs = {"random": args.random}
    elif args.mesh is not None:
        obj = load_mesh_file(args.mesh)
        inputs = {"mesh": args.mesh}
    else:
        raise ParseError("verify needs a mesh file or --random")
    results = run_suite(obj, args.suite)
    report = RunReport("verify", {**inputs, "suite": args.suite})
    for r in results:
        if r.skipped:
            report.values[r.name] = f"skipped: {r.actual}"
        else:
            report.add_check(r.name, r.expected, r.actual, ok=r.passed)
    return _emit(report, args.json)


def cmd_render(args) -> int:
    obj = load_mesh_file(args.mesh)
    svg = render_svg(obj, show_levels=args.levels, show_cvr=args.cvr)
    with open(args.svg, "w") as fh:
        fh.write(svg)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="tmesh",
        description="Exact spline-space dimension analysis over T-meshes")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("stats", help="mesh statistics and counting identities")
    s.add_argument("mesh")
    s.set_defaults(fn=cmd_stats)

    s = sub.add_parser("dim", help="dimension by formula/oracle/embedding")
    s.add_argument("mesh")
    s.add_argument("--space", required=True, metavar="m,n,a,b")
    s.add_argument("--hbc", action="store_true")
    s.add_argument("--method", choices=("formula", "oracle", "embedding", "all"),
                   default="all")
    s.set_defaults(fn=cmd_dim)

    s = sub.add_parser("oracle", help="rank oracle for one space")
    s.add_argument("mesh")
    s.add_argument("--space", required=True, metavar="m,n,a,b")
    s.add_argument("--hbc", action="store_true")
    s.add_argument("--basis", choices=("monomial", "bernstein"), default="monomial")
    s.add_argument("--nullspace", metavar="OUT.json")
    s.set_defaults(fn=cmd_oracle)

    s = sub.add_parser("basis", help="construct basis functions")
    s.add_argument("mesh")
    s.add_argument("--kind", choices=("cardinal", "hierarchical"), default="cardinal")
    s.add_argument("--eval", metavar="x,y")
    s.add_argument("--check", action="append",
                   choices=("unity", "independence", "nonneg"))
    s.set_defaults(fn=cmd_basis)

    s = sub.add_parser("cvr", help="crossing-vertex-relationship graph")
    s.add_argument("mesh")
    s.add_argument("--svg", metavar="OUT.svg")
    s.add_argument("--conjecture", metavar="m,n")
    s.set_defaults(fn=cmd_cvr)

    s = sub.add_parser("extend", help="extension mesh")
    s.add_argument("mesh")
    s.add_argument("-m", type=int, required=True)
    s.add_argument("-n", type=int, required=True)
    s.add_argument("--margin", metavar="p/q")
    s.add_argument("-o", "--out")
    s.set_defaults(fn=cmd_extend)

    s = sub.add_parser("gen", help="random hierarchical mesh")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--rows", type=int, default=3)
    s.add_argument("--cols", type=int, default=3)
    s.add_argument("--levels", type=int, default=2)
    s.add_argument("--prob", type=float, default=0.4)
    s.add_argument("--cvc", action="store_true")
    s.add_argument("-o", "--out")
    s.set_defaults(fn=cmd_gen)

    s = sub.add_parser("verify", help="run a verification suite")
    s.add_argument("mesh", nargs="?")
    s.add_argument("--random", metavar="seed=N,rows=R,cols=C,levels=L,prob=P[,cvc]")
    s.add_argument("--suite", choices=SUITES, default="all")
    s.set_defaults(fn=cmd_verify)

    s = sub.add_parser("render", help="deterministic SVG rendering")
    s.add_argument("mesh")
    s.add_argument("--svg", required=True)
    s.add_argument("--cvr", action="store_true")
    s.add_argument("--levels", action="store_true")
    s.set_defaults(fn=cmd_render)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    try:
        return args.fn(args)
    except (MeshError, UnknownSuite) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
