"""Command-line interface.

Every verdict is computed by the library modules; the CLI only loads
files, dispatches, and prints.  JSON reports are deterministic for fixed
inputs, seed and prime (sorted keys, no timestamps).  Exit codes: 0 all
requested checks passed, 1 a check failed (reproduction seed included in
the report), 2 parse or validation error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Tuple

from .linalg import default_prime
from .quiver import (
    NotDynkinError,
    decompose_rep,
    ext_dim,
    indec_labels,
    indecomposables,
)
from .formal import (
    FormalMorphism,
    Triangle,
    formal_direct_sum,
    is_exact,
    rotate,
    split_exact_normalize,
    split_off,
    tr3_complete,
    trivial_triangle,
    Decomposition,
)
from .cones import cone, cone_in_heart, cone_of_extension
from .octa import build_octahedron, double_grid_report, strong_form_report
from .tstruct import build_path_graph, blocks, t_structure_from, walk_to_path
from .equivalence import verify_equivalence
from .randgen import child_rng, random_formal_morphism, random_formal_object
from . import io as tio


def _parse_window(text: str) -> Tuple[int, int]:
    try:
        lo, hi = text.split("..")
        lo, hi = int(lo), int(hi)
    except ValueError:
        raise tio.FormatError("--window", f"expected LO..HI, got {text!r}")
    if lo > hi:
        raise tio.FormatError("--window", "lower bound exceeds upper bound")
    return lo, hi


def _emit(report: dict, as_json: bool) -> None:
    if as_json:
        print(json.dumps(report, sort_keys=True, indent=2))
        return
    for key, value in report.items():
        if isinstance(value, dict):
            print(key)
            for k2, v2 in value.items():
                print(f"\t{k2}\t{v2}")
        elif isinstance(value, list):
            print(key)
            for item in value:
                print(f"\t{item}")
        else:
            print(f"{key}\t{value}")


def _object_labels(q, obj) -> list:
    """Summand labels like S2[1] for the components of a graded object."""
    reps = indecomposables(q)
    labels = indec_labels(q, reps)
    by_dims = {r.dims: labels[i] for i, r in enumerate(reps)}
    out = []
    for d, comp in obj.components.items():
        for s in decompose_rep(comp, seed=0):
            name = by_dims.get(s.rep.dims, "M" + str(s.rep.dims))
            shift = -d
            out.append(f"{name}[{shift}]" if shift else name)
    return sorted(out)


def _morphism_json(f: FormalMorphism) -> dict:
    return {
        "hom": {str(n): [m.tolist() for m in g.phi] for n, g in f.hom.items()},
        "ext": {str(n): c.coords.a.reshape(-1).tolist() for n, c in f.ext.items()},
    }


def _triangle_json(q, t: Triangle) -> dict:
    return {
        "X": {str(n): list(r.dims) for n, r in t.X.components.items()},
        "Y": {str(n): list(r.dims) for n, r in t.Y.components.items()},
        "cone": {str(n): list(r.dims) for n, r in t.Z.components.items()},
        "cone_labels": _object_labels(q, t.Z),
        "f": _morphism_json(t.f),
        "g": _morphism_json(t.g),
        "h": _morphism_json(t.h),
    }


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_quiver_check(args) -> int:
    q = tio.load_quiver(args.file, args.prime)
    report = {
        "command": "quiver check",
        "file": args.file,
        "vertices": q.n,
        "arrows": len(q.arrows),
        "acyclic": True,
        "dynkin": q.is_dynkin(),
        "prime": q.p,
    }
    _emit(report, args.json)
    return 0


def cmd_indec_list(args) -> int:
    q = tio.load_quiver(args.quiver, args.prime)
    reps = indecomposables(q)
    labels = indec_labels(q, reps)
    if args.json:
        report = {
            "command": "indec list",
            "prime": q.p,
            "count": len(reps),
            "indecomposables": [
                {"label": lab, "dims": list(r.dims)} for lab, r in zip(labels, reps)
            ],
        }
        print(json.dumps(report, sort_keys=True, indent=2))
    else:
        for lab, r in zip(labels, reps):
            print(f"{lab}\t{','.join(str(d) for d in r.dims)}")
    return 0


def cmd_hom(args) -> int:
    q = tio.load_quiver(args.quiver, args.prime)
    x = tio.load_representation(args.source, q)
    y = tio.load_representation(args.target, q)
    from .quiver import hom_ext_presentation

    he = hom_ext_presentation(x, y)
    report = {"command": "hom", "dim": he.hom_dim, "prime": q.p}
    if args.json:
        report["basis"] = [[m.tolist() for m in b.phi] for b in he.hom_basis]
    _emit(report, args.json)
    return 0


def cmd_ext(args) -> int:
    q = tio.load_quiver(args.quiver, args.prime)
    x = tio.load_representation(args.source, q)
    y = tio.load_representation(args.target, q)
    report = {"command": "ext", "dim": ext_dim(x, y), "prime": q.p}
    _emit(report, args.json)
    return 0


def cmd_cone(args) -> int:
    q = tio.load_quiver(args.quiver, args.prime)
    data = tio.load_json(args.morphism)
    if "phi" in data:
        f = tio.load_rep_morphism(args.morphism, q)
        t, diagram = cone_in_heart(f)
        kind = "heart"
    else:
        fm = tio.load_formal_morphism(args.morphism, q)
        if not fm.hom and len(fm.ext) == 1:
            t = cone_of_extension(fm)
            kind = "extension"
        else:
            t = cone(fm)
            kind = "general"
    exact = is_exact(t)
    report = {
        "command": "cone",
        "kind": kind,
        "prime": q.p,
        "triangle": _triangle_json(q, t),
        "exact": exact.passed,
    }
    _emit(report, args.json)
    return 0 if exact.passed else 1


def cmd_decompose(args) -> int:
    q = tio.load_quiver(args.quiver, args.prime)
    x = tio.load_representation(args.rep, q)
    parts = decompose_rep(x, seed=args.seed)
    try:
        reps = indecomposables(q)
        labels = indec_labels(q, reps)
        by_dims = {r.dims: labels[i] for i, r in enumerate(reps)}
    except NotDynkinError:
        by_dims = {}
    rows = [
        {"dims": list(p.rep.dims), "label": by_dims.get(p.rep.dims, "")} for p in parts
    ]
    report = {"command": "decompose", "prime": q.p, "seed": args.seed, "summands": rows}
    if args.json:
        print(json.dumps(report, sort_keys=True, indent=2))
    else:
        for r in rows:
            print(f"{r['label'] or 'indec'}\t{','.join(str(d) for d in r['dims'])}")
    return 0


def cmd_blocks(args) -> int:
    q = tio.load_quiver(args.quiver, args.prime)
    g = build_path_graph(q, args.window)
    comps = blocks(g)
    report = {
        "command": "blocks",
        "prime": q.p,
        "window": list(args.window),
        "count": len(comps),
        "blocks": [sorted(g.node_label(n) for n in comp) for comp in comps],
    }
    if args.figure:
        from .plotting import render_path_graph

        render_path_graph(g, args.figure, title=f"path graph, {len(comps)} block(s)")
        report["figure"] = args.figure
    _emit(report, args.json)
    return 0


def cmd_tstructure(args) -> int:
    q = tio.load_quiver(args.quiver, args.prime)
    g = build_path_graph(q, args.window)
    m = g.parse_node(args.generator)
    ts = t_structure_from(g, m)
    report = {
        "command": "tstructure",
        "prime": q.p,
        "window": list(args.window),
        "generator": g.node_label(m),
        "aisle": sorted(g.node_label(n) for n in ts.leq0),
        "coaisle": sorted(g.node_label(n) for n in ts.geq0),
        "heart": sorted(g.node_label(n) for n in ts.heart),
        "checks": ts.report,
    }
    ok = all(ts.report.get(k, False) for k in ("t1", "t2", "t3", "split", "bounded"))
    report["passed"] = ok
    if args.figure:
        from .plotting import render_path_graph

        render_path_graph(
            g,
            args.figure,
            highlight={"leq0": ts.leq0, "geq0": ts.geq0, "heart": ts.heart},
            title=f"t-structure from {g.node_label(m)}",
        )
        report["figure"] = args.figure
    _emit(report, args.json)
    return 0 if ok else 1


def cmd_walk2path(args) -> int:
    q = tio.load_quiver(args.quiver, args.prime)
    g = build_path_graph(q, args.window)
    walk = tio.load_walk(args.walk, g)
    result = walk_to_path(g, walk, seed=args.seed)
    report = {
        "command": "walk2path",
        "prime": q.p,
        "window": list(args.window),
        "path": [g.node_label(n) for n in result.nodes],
        "m": result.m,
        "rewrites": result.rewrites,
    }
    if args.figure:
        from .plotting import render_path_graph

        render_path_graph(g, args.figure, path=result.nodes, title="rewritten path")
        report["figure"] = args.figure
    _emit(report, args.json)
    return 0


def cmd_octahedron(args) -> int:
    q = tio.load_quiver(args.quiver, args.prime)
    f = tio.load_formal_morphism(args.f, q)
    u = tio.load_formal_morphism(args.u, q)
    o = build_octahedron(f, u)
    strong = strong_form_report(o)
    grids = double_grid_report(f, u)
    report = {
        "command": "octahedron",
        "prime": q.p,
        "identities": {
            "w.v_prime == delta": o.t_u.h @ o.v_prime == o.delta,
            "delta == f[1].h_prime": o.delta == f.shift(1) @ o.t_fu.h,
        },
        "dagger_exact": is_exact(o.dagger).passed,
        "strong_form": strong,
        "double_grids": grids["checks"],
        "cone_f": _object_labels(q, o.t_f.Z),
        "cone_uf": _object_labels(q, o.t_fu.Z),
        "cone_u": _object_labels(q, o.t_u.Z),
    }
    ok = (
        all(report["identities"].values())
        and report["dagger_exact"]
        and strong["passed"]
        and grids["passed"]
    )
    report["passed"] = ok
    _emit(report, args.json)
    return 0 if ok else 1


def cmd_verify_equivalence(args) -> int:
    q = tio.load_quiver(args.quiver, args.prime)
    rep = verify_equivalence(q, seed=args.seed, trials=args.trials, window=args.window)
    report = {
        "command": "verify equivalence",
        "prime": q.p,
        "seed": args.seed,
        "trials": args.trials,
        "window": list(args.window),
        "checks": rep.checks,
        "failures": rep.failures,
        "passed": rep.passed,
    }
    if args.figure:
        from .plotting import render_check_summary

        render_check_summary(rep.checks, args.figure, title="equivalence checks")
        report["figure"] = args.figure
    _emit(report, args.json)
    return 0 if rep.passed else 1


def cmd_verify_axioms(args) -> int:
    q = tio.load_quiver(args.quiver, args.prime)
    seed, trials = args.seed, args.trials
    checks = {}
    failures = []

    def record(name, runs, fails):
        checks[name] = {"runs": runs, "failures": len(fails)}
        failures.extend({"check": name, **f} for f in fails)

    # TR0: the identity triangle on random objects is exact
    fails = []
    for t in range(trials):
        rng = child_rng(seed, t)
        x = random_formal_object(q, rng, 2)
        if not is_exact(trivial_triangle(x)).passed:
            fails.append({"trial": t})
    record("tr0", trials, fails)

    # TR1 + TR2: cones exist and rotation preserves exactness
    fails = []
    for t in range(trials):
        rng = child_rng(seed, 1000 + t)
        x = random_formal_object(q, rng, 2)
        y = random_formal_object(q, rng, 2)
        f = random_formal_morphism(x, y, rng)
        tri = cone(f)
        if not (is_exact(tri).passed and is_exact(rotate(tri)).passed):
            fails.append({"trial": t})
    record("tr1-tr2", trials, fails)

    # TR3 and the two-out-of-three property on conjugated cone triangles
    fails = []
    for t in range(trials):
        rng = child_rng(seed, 2000 + t)
        x = random_formal_object(q, rng, 2)
        y = random_formal_object(q, rng, 2)
        f = random_formal_morphism(x, y, rng)
        a = _random_automorphism(x, rng)
        b = _random_automorphism(y, rng)
        f2 = b @ f @ a.inverse()
        z = tr3_complete(cone(f), cone(f2), a, b)
        if z is None or not z.is_iso():
            fails.append({"trial": t})
    record("tr3-two-of-three", trials, fails)

    # split triangles: normalization and splitting off a zero component
    fails = []
    for t in range(trials):
        rng = child_rng(seed, 3000 + t)
        x = random_formal_object(q, rng, 2)
        z = random_formal_object(q, rng, 2)
        s, incs, projs = formal_direct_sum([x, z])
        tri = Triangle(incs[0], projs[1], FormalMorphism.zero(z, x.shift(1)))
        ax = _random_automorphism(x, rng)
        ay = _random_automorphism(s, rng)
        az = _random_automorphism(z, rng)
        tri2 = Triangle(ay @ tri.f @ ax.inverse(), az @ tri.g @ ay.inverse(), FormalMorphism.zero(z, x.shift(1)))
        try:
            theta = split_exact_normalize(tri2)
            ok = theta.is_iso()
        except ValueError:
            ok = False
        if not ok:
            fails.append({"trial": t})
    record("split-normalize", trials, fails)

    fails = []
    for t in range(trials):
        rng = child_rng(seed, 4000 + t)
        x = random_formal_object(q, rng, 2)
        yp = random_formal_object(q, rng, 2)
        ypp = random_formal_object(q, rng, 2)
        fp = random_formal_morphism(x, yp, rng)
        ysum, incs, projs = formal_direct_sum([yp, ypp])
        fsum = incs[0] @ fp
        tri = cone(fsum)
        deco = Decomposition(
            part=yp, rest=ypp, include_part=incs[0], project_part=projs[0],
            include_rest=incs[1], project_rest=projs[1],
        )
        try:
            t1, t2, (xx, yy, zz) = split_off(tri, deco)
            ok = zz.is_iso() and is_exact(t1).passed
        except ValueError:
            ok = False
        if not ok:
            fails.append({"trial": t})
    record("split-off", trials, fails)

    passed = not failures
    report = {
        "command": "verify axioms",
        "prime": q.p,
        "seed": seed,
        "trials": trials,
        "checks": checks,
        "failures": failures,
        "passed": passed,
    }
    if args.figure:
        from .plotting import render_check_summary

        render_check_summary(checks, args.figure, title="axiom checks")
        report["figure"] = args.figure
    _emit(report, args.json)
    return 0 if passed else 1


def _random_automorphism(x, rng) -> FormalMorphism:
    """Unit scalars on each component plus a random degree-dropping part;
    always invertible."""
    from .randgen import random_formal_morphism

    base = FormalMorphism.identity(x)
    scl = {n: f.scale(int(rng.integers(1, x.quiver.p))) for n, f in base.hom.items()}
    twist = random_formal_morphism(x, x, rng)
    return FormalMorphism(x, x, scl, twist.ext)


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _add_common(sp, quiver_required: bool = True):
    sp.add_argument("--quiver", required=quiver_required, help="quiver JSON file")
    sp.add_argument("--prime", type=int, default=None, help=f"field prime (default {default_prime()})")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--trials", type=int, default=50)
    sp.add_argument("--window", type=_parse_window, default=(-3, 3), help="shift window LO..HI")
    sp.add_argument("--json", action="store_true", help="stable-schema JSON output")
    sp.add_argument("--figure", default=None, help="write a figure (PNG) next to the report")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="trihered",
        description="exact cones, triangle axioms and split t-structures for Dynkin quiver representations",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("quiver", help="quiver file utilities")
    qsub = p.add_subparsers(dest="subcommand", required=True)
    pc = qsub.add_parser("check", help="validate a quiver file")
    pc.add_argument("file")
    _add_common(pc, quiver_required=False)
    pc.set_defaults(func=cmd_quiver_check)

    p = sub.add_parser("indec", help="indecomposable enumeration")
    isub = p.add_subparsers(dest="subcommand", required=True)
    il = isub.add_parser("list")
    _add_common(il)
    il.set_defaults(func=cmd_indec_list)

    p = sub.add_parser("hom", help="Hom dimension and basis")
    _add_common(p)
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    p.set_defaults(func=cmd_hom)

    p = sub.add_parser("ext", help="Ext^1 dimension")
    _add_common(p)
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    p.set_defaults(func=cmd_ext)

    p = sub.add_parser("cone", help="cone triangle of a morphism file")
    _add_common(p)
    p.add_argument("--morphism", required=True)
    p.set_defaults(func=cmd_cone)

    p = sub.add_parser("decompose", help="indecomposable summands of a representation")
    _add_common(p)
    p.add_argument("--rep", required=True)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("blocks", help="path-connected components of the graph")
    _add_common(p)
    p.set_defaults(func=cmd_blocks)

    p = sub.add_parser("tstructure", help="split t-structure from a generator")
    _add_common(p)
    p.add_argument("--generator", required=True, help='node like "S1[0]"')
    p.set_defaults(func=cmd_tstructure)

    p = sub.add_parser("walk2path", help="rewrite a walk into a forward path")
    _add_common(p)
    p.add_argument("--walk", required=True)
    p.set_defaults(func=cmd_walk2path)

    p = sub.add_parser("octahedron", help="build and verify an octahedron")
    _add_common(p)
    p.add_argument("-f", required=True, help="formal morphism file f: X -> Y")
    p.add_argument("-u", required=True, help="formal morphism file u: Y -> Y'")
    p.set_defaults(func=cmd_octahedron)

    p = sub.add_parser("verify", help="property verification suites")
    vsub = p.add_subparsers(dest="subcommand", required=True)
    ve = vsub.add_parser("equivalence")
    _add_common(ve)
    ve.set_defaults(func=cmd_verify_equivalence)
    va = vsub.add_parser("axioms")
    _add_common(va)
    va.set_defaults(func=cmd_verify_axioms)

    return ap


def main(argv: Optional[list] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except tio.FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NotDynkinError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        if "cycle" in str(exc):
            print(f"error: {exc}", file=sys.stderr)
            return 2
        print(f"check failed: {exc} (seed {getattr(args, 'seed', 0)})", file=sys.stderr)
        return 1
    except (AssertionError, RuntimeError) as exc:
        print(f"check failed: {exc} (seed {getattr(args, 'seed', 0)})", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
