"""Command-line driver.

Exit codes: 0 success, 1 input or validation error, 2 a property or
self-check was violated.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from typing import Callable

from . import chain
from .chain import (
    ChainComplex,
    ChainMap,
    cone,
    euler_char,
    fib,
    homology_dims,
    induced_on_homology_is_iso,
    is_quasi_iso,
    shift,
    validate_complex,
)
from .exactlin import DimensionMismatch, Field, FieldMismatch, Matrix, rank, vstack
from .fincat import (
    CategoryError,
    FinPoset,
    Functor,
    PosetError,
    from_poset,
    is_poset,
    point,
)
from .groth import (
    BipartiteDiagram,
    GrothCat,
    InvalidDiagram,
    build_cone,
    build_kronecker,
    build_star,
    delta1_example,
    export_dot,
    groth,
    groth_contra,
    groth_cov,
    kronecker_example,
    ladkani_condition,
)
from .io import (
    InputError,
    chain_map_to_json,
    complex_to_json,
    diagram_from_json,
    diagram_to_json,
    dumps,
    field_to_json,
    groth_shape_ref,
    groth_to_json,
    load_json,
    representation_from_json,
    representation_to_json,
    triple_to_json,
)
from .reflect import (
    InvalidInput,
    R_minus,
    R_plus,
    SignConventionError,
    counit_comparison,
    pack_contra,
    pack_cov,
    unit_comparison,
    unpack_contra,
    unpack_cov,
)
from .rep import IncoherentDiagram, Representation, ShapeMismatch, validate_rep
from .testkit import (
    Bounds,
    classical_bgp_oracle,
    fixture_diagrams,
    make_rng,
    random_chain_map,
    random_complex,
    random_rep,
    random_triple,
    star_rep,
)

INPUT_ERRORS = (InputError, InvalidDiagram, InvalidInput, CategoryError, PosetError, IncoherentDiagram,
                ShapeMismatch, DimensionMismatch, FieldMismatch)


class Violation(Exception):
    def __init__(self, suite: str, message: str, witness: dict | None = None):
        super().__init__(message)
        self.suite = suite
        self.witness = witness or {}


def _fail(kind: str, message: str, problems=None) -> int:
    report = {"error": kind, "message": message}
    if problems:
        report["problems"] = list(problems)
    sys.stderr.write(json.dumps(report, indent=2) + "\n")
    return 1


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_rep(path: str, diagram_path: str | None) -> tuple[Representation, GrothCat | None]:
    D = diagram_from_json(load_json(diagram_path)) if diagram_path else None
    M, G = representation_from_json(load_json(path), D)
    problems = validate_rep(M)
    if problems:
        raise InvalidInput("; ".join(problems))
    return M, G


# -- groth -------------------------------------------------------------------

def cmd_groth(args) -> int:
    D = diagram_from_json(load_json(args.input))
    G = groth(D, args.variant)
    text = export_dot(G) if args.format == "dot" else dumps(groth_to_json(G))
    _emit(text, args.out)
    return 0


# -- reflect -----------------------------------------------------------------

def reflect_representation(M: Representation, G: GrothCat, direction: str) -> tuple[Representation, GrothCat]:
    want = "cov" if direction == "plus" else "contra"
    if G.variant != want:
        raise ShapeMismatch(f"reflection {direction} needs a representation of the {want} construction, "
                            f"got {G.variant}")
    if direction == "plus":
        G2 = groth_contra(G.diagram)
        return R_plus(M, G, G2), G2
    G2 = groth_cov(G.diagram)
    return R_minus(M, G, G2), G2


def cmd_reflect(args) -> int:
    M, G = _load_rep(args.input, args.diagram)
    if G is None:
        raise ShapeMismatch("reflection needs a representation whose shape is a Grothendieck construction")
    want = "cov" if args.direction == "plus" else "contra"
    if G.variant != want:
        raise ShapeMismatch(f"reflection {args.direction} needs a representation of the {want} construction, "
                            f"got {G.variant}")
    # the input is valid from here on, so any failure is an internal one
    try:
        N, G2 = reflect_representation(M, G, args.direction)
    except (InvalidInput, SignConventionError) as e:
        sys.stderr.write(json.dumps({"error": "self-check", "problems": [str(e)]}, indent=2) + "\n")
        return 2
    problems = validate_rep(N)
    if problems:
        sys.stderr.write(json.dumps({"error": "self-check", "problems": problems}, indent=2) + "\n")
        return 2
    _emit(dumps(representation_to_json(N, groth_shape_ref(G2))), args.out)
    return 0


# -- homology ----------------------------------------------------------------

def homology_table(M: Representation) -> dict:
    objs = {}
    for x in M.shape.objects:
        C = M.at[x]
        objs[x] = {"homology": {str(n): k for n, k in homology_dims(C).items()}, "euler": euler_char(C)}
    return {"kind": "homology", "field": field_to_json(M.field), "objects": objs}


def cmd_homology(args) -> int:
    M, _ = _load_rep(args.input, args.diagram)
    _emit(dumps(homology_table(M)), args.out)
    return 0


# -- verify ------------------------------------------------------------------

VERIFY_BOUNDS = Bounds(max_deg=1, max_dim=2, density=0.6, max_total=6)


def _check_complexes(rng, F: Field) -> None:
    A = random_complex(rng, 2, 2, F)
    B = random_complex(rng, 2, 2, F)
    f = random_chain_map(rng, A, B)
    C, _, _ = cone(f)
    witness = {"src": complex_to_json(A), "tgt": complex_to_json(B), "map": chain_map_to_json(f)}
    bad = validate_complex(C)
    if bad:
        raise Violation("complexes", f"cone is not a complex: {bad}", witness)
    if fib(f)[0] != shift(C, -1):
        raise Violation("complexes", "fibre differs from the shifted cone", witness)
    if is_quasi_iso(f) != induced_on_homology_is_iso(f):
        raise Violation("complexes", "quasi-isomorphism criteria disagree", witness)


def _check_roundtrips(rng, F: Field, D: BipartiteDiagram, G: GrothCat, Gc: GrothCat) -> None:
    t = random_triple(rng, D, F, VERIFY_BOUNDS, "ca")
    M = unpack_cov(t, G)
    if validate_rep(M):
        raise Violation("roundtrip", "unpacked representation is invalid", triple_to_json(t))
    t2 = pack_cov(M, G)
    if (t2.a, t2.b, t2.phi.components) != (t.a, t.b, t.phi.components) or unpack_cov(t2, G) != M:
        raise Violation("roundtrip", "covariant pack/unpack is not the identity", triple_to_json(t))
    s = random_triple(rng, D, F, VERIFY_BOUNDS, "coca")
    N = unpack_contra(s, Gc)
    if validate_rep(N):
        raise Violation("roundtrip", "unpacked representation is invalid", triple_to_json(s))
    s2 = pack_contra(N, Gc)
    if (s2.a, s2.b, s2.psi.components) != (s.a, s.b, s.psi.components) or unpack_contra(s2, Gc) != N:
        raise Violation("roundtrip", "contravariant pack/unpack is not the identity", triple_to_json(s))


def euler_defects(M: Representation, N: Representation, G: GrothCat) -> list[str]:
    """Objects ``(l,x)`` where ``chi(N) != sum_alpha chi(M at (r, f_alpha x)) - chi(M)``."""
    D = G.diagram
    out = []
    for l in D.left:
        X = D.values[l]
        for x in X.objects:
            lx = f"({l},{x})"
            rhs = -euler_char(M.at[lx])
            for a in D.quiver.arrows_from(l):
                r = D.quiver.arrows[a][1]
                rhs += euler_char(M.at[f"({r},{D.functors[a](x)})"])
            if euler_char(N.at[lx]) != rhs:
                out.append(lx)
    return out


def _check_reflections(rng, F: Field, D: BipartiteDiagram, G: GrothCat, Gc: GrothCat) -> None:
    t = random_triple(rng, D, F, VERIFY_BOUNDS, "ca")
    M = unpack_cov(t, G)
    N = R_plus(M, G, Gc)
    if validate_rep(N) or euler_defects(M, N, G):
        raise Violation("euler", "R+ output invalid or Euler identity fails", triple_to_json(t))
    if not unit_comparison(t)[1]:
        raise Violation("unit", "unit is not a quasi-isomorphism", triple_to_json(t))
    s = random_triple(rng, D, F, VERIFY_BOUNDS, "coca")
    P = unpack_contra(s, Gc)
    Q = R_minus(P, Gc, G)
    if validate_rep(Q) or euler_defects(P, Q, Gc):
        raise Violation("euler", "R- output invalid or Euler identity fails", triple_to_json(s))
    if not counit_comparison(s)[1]:
        raise Violation("counit", "counit is not a quasi-isomorphism", triple_to_json(s))


def _random_poset(rng, n: int) -> FinPoset:
    objs = [str(i) for i in range(n)]
    rel = [(objs[i], objs[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.4]
    return FinPoset.from_covers(objs, rel) if rel else FinPoset.antichain(objs)


def _check_ladkani(rng, F: Field) -> None:
    X = from_poset(_random_poset(rng, rng.randint(1, 3)))
    Y = from_poset(_random_poset(rng, rng.randint(1, 3)))
    fs = []
    for _ in range(rng.randint(0, 3)):
        for _attempt in range(50):
            om = {x: rng.choice(Y.objects) for x in X.objects}
            try:
                fs.append(Functor.between_posets(X, Y, om))
                break
            except (ValueError, KeyError):
                continue
    D = build_kronecker(X, Y, fs)
    for v in ("cov", "contra"):
        if ladkani_condition(D, v) != is_poset(groth(D, v).cat):
            raise Violation("ladkani", f"{v}: Ladkani condition disagrees with the poset test",
                            diagram_to_json(D))


def _check_classical(rng, F: Field) -> None:
    d = rng.randint(1, 3)
    arms = [chr(ord("a") + i) for i in range(d)]
    Y = from_poset(FinPoset.antichain(arms))
    D = build_star(Y, arms)
    G, Gc = groth_cov(D), groth_contra(D)
    ns = [rng.randint(0, 3) for _ in arms]
    m = rng.randint(0, min(3, sum(ns)))
    # injective assembled map: random, retried until full column rank
    while True:
        legs = [Matrix(F, n, m, [[F.random(rng) for _ in range(m)] for _ in range(n)]) for n in ns]
        if rank(vstack(F, legs, m)) == m:
            break
    M = star_rep(G, m, ns, legs)
    N = R_plus(M, G, Gc)
    oracle = classical_bgp_oracle(G, M)
    got = homology_dims(N.at["(0,*)"])
    if {n: k for n, k in got.items() if k} != ({0: oracle.dim} if oracle.dim else {}):
        raise Violation("classical", "R+ disagrees with the classical cokernel", representation_to_json(
            M, groth_shape_ref(G)))


SUITES = ("complexes", "roundtrip", "reflection", "ladkani", "classical")


def run_verify(seed: int, cases: int, F: Field, log: Callable[[str], None] = print) -> tuple[dict, Violation | None]:
    fixtures = fixture_diagrams()
    names = sorted(fixtures)
    built = {k: (fixtures[k], groth_cov(fixtures[k]), groth_contra(fixtures[k])) for k in names}
    master = make_rng(seed)
    case_seeds = [master.getrandbits(64) for _ in range(cases)]
    counts = {s: 0 for s in SUITES}
    for i, cs in enumerate(case_seeds):
        rng = make_rng(cs)
        D, G, Gc = built[names[i % len(names)]]
        steps = [("complexes", lambda: _check_complexes(rng, F)),
                 ("roundtrip", lambda: _check_roundtrips(rng, F, D, G, Gc)),
                 ("reflection", lambda: _check_reflections(rng, F, D, G, Gc)),
                 ("ladkani", lambda: _check_ladkani(rng, F)),
                 ("classical", lambda: _check_classical(rng, F))]
        for suite, step in steps:
            try:
                step()
            except Violation as v:
                v.witness = {"case": i, "case_seed": cs, "suite": v.suite, "detail": str(v), "input": v.witness}
                return counts, v
            except (SignConventionError, *INPUT_ERRORS, ArithmeticError) as e:
                v = Violation(suite, f"{type(e).__name__}: {e}")
                v.witness = {"case": i, "case_seed": cs, "suite": suite, "detail": str(v)}
                return counts, v
            counts[suite] += 1
    return counts, None


def cmd_verify(args) -> int:
    F = Field.gf(args.p) if args.field == "fp" else Field.rationals()
    t0 = time.perf_counter()
    if args.corrupt_cone_sign:
        with chain.corrupted_cone_sign():
            counts, bad = run_verify(args.seed, args.cases, F)
    else:
        counts, bad = run_verify(args.seed, args.cases, F)
    print(f"field {F}, seed {args.seed}, {args.cases} cases")
    for s in SUITES:
        print(f"  {s}: {counts[s]} passed")
    if bad is not None:
        print(f"VIOLATION in {bad.suite}: {bad}")
        print(dumps({"kind": "counterexample", "field": field_to_json(F), "seed": args.seed, **bad.witness}),
              end="")
        return 2
    if args.timing:
        print(f"  elapsed {time.perf_counter() - t0:.2f}s")
    print("all properties hold")
    return 0


# -- demo --------------------------------------------------------------------

def _dims_row(M: Representation, objs, n: int = 0) -> tuple[int, ...]:
    return tuple(homology_dims(M.at[x]).get(n, 0) for x in objs)


def _table(M: Representation, objs) -> list[str]:
    lines = []
    for x in objs:
        h = {n: k for n, k in homology_dims(M.at[x]).items() if k}
        hs = ", ".join(f"H_{n}={k}" for n, k in sorted(h.items())) or "acyclic"
        lines.append(f"  {x}: {hs}; chi={euler_char(M.at[x])}")
    return lines


def _write(out: str, name: str, text: str, files: list[str]):
    with open(os.path.join(out, name), "w") as fh:
        fh.write(text)
    files.append(name)


def _demo_a2(out: str, files: list[str]) -> list[str]:
    F = Field.gf(5)
    D = build_star(point(), ["*"])
    G, Gc = groth_cov(D), groth_contra(D)
    objs = ["(0,*)", "(1,*)"]
    k = G.kappa[("f1", "*")]
    one = Matrix.identity(F, 1)
    k1 = ChainComplex(F, {0: 1})
    M = Representation(G.cat, F, {"(0,*)": k1, "(1,*)": k1}, {k: ChainMap(k1, k1, {0: one})})
    N = R_plus(M, G, Gc)
    S = Representation(G.cat, F, {"(0,*)": k1, "(1,*)": ChainComplex.zero(F)},
                       {k: ChainMap(k1, ChainComplex.zero(F), {})})
    SN = R_plus(S, G, Gc)
    _write(out, "diagram.json", dumps(diagram_to_json(D)), files)
    _write(out, "rep.json", dumps(representation_to_json(M, groth_shape_ref(G))), files)
    _write(out, "reflected.json", dumps(representation_to_json(N, groth_shape_ref(Gc))), files)
    _write(out, "simple.json", dumps(representation_to_json(S, groth_shape_ref(G))), files)
    _write(out, "simple-reflected.json", dumps(representation_to_json(SN, groth_shape_ref(Gc))), files)
    before, after = _dims_row(M, objs), _dims_row(N, objs)
    return ["A2: a free source (0,*) with one arrow to (1,*), over GF(5).",
            "Representation k --id--> k, reflected at the source with R+.",
            f"dimension vector (source, sink): {before} -> {after}",
            "before:", *_table(M, objs), "after:", *_table(N, objs),
            "Simple representation at the source (k -> 0):",
            "before:", *_table(S, objs), "after:", *_table(SN, objs),
            "The reflected vertex carries k in degree 1: the cokernel oracle sees 0,",
            "R+ sees the shifted class."]


def _demo_dstar(out: str, files: list[str]) -> list[str]:
    F = Field.gf(5)
    arms = ["a", "b", "c"]
    Y = from_poset(FinPoset.antichain(arms))
    D = build_star(Y, arms)
    G, Gc = groth_cov(D), groth_contra(D)
    one = Matrix.identity(F, 1)
    M = star_rep(G, 1, [1, 1, 1], [one, one, one])
    N = R_plus(M, G, Gc)
    oracle = classical_bgp_oracle(G, M)
    objs = ["(0,*)", *[f"(1,{y})" for y in arms]]
    _write(out, "diagram.json", dumps(diagram_to_json(D)), files)
    _write(out, "rep.json", dumps(representation_to_json(M, groth_shape_ref(G))), files)
    _write(out, "reflected.json", dumps(representation_to_json(N, groth_shape_ref(Gc))), files)
    return ["D4 star: free source (0,*) with arrows to (1,a), (1,b), (1,c), over GF(5).",
            "Representation with k everywhere and the diagonal map k -> k^3.",
            f"dimension vector (source; arms): {_dims_row(M, objs)} -> {_dims_row(N, objs)}",
            f"classical cokernel oracle at the reflected vertex: dim {oracle.dim}",
            "after:", *_table(N, objs)]


def _groth_report(D: BipartiteDiagram, out: str, files: list[str]) -> list[str]:
    lines = []
    _write(out, "diagram.json", dumps(diagram_to_json(D)), files)
    for v in ("cov", "contra"):
        G = groth(D, v)
        _write(out, f"groth-{v}.json", dumps(groth_to_json(G)), files)
        _write(out, f"groth-{v}.dot", export_dot(G, f"groth_{v}"), files)
        C = G.cat
        verdict = "poset" if is_poset(C) else "not a poset"
        lines.append(f"{v}: {len(C.objects)} objects, {len(C.non_identity_morphisms())} non-identity morphisms, "
                     f"{verdict}; Ladkani condition {'holds' if ladkani_condition(D, v) else 'fails'}")
        big = [(x, y, len(C.hom(x, y))) for x in C.objects for y in C.objects if len(C.hom(x, y)) > 1]
        for x, y, n in big:
            lines.append(f"  |Hom({x},{y})| = {n}")
    return lines


def _demo_kronecker(out: str, files: list[str]) -> list[str]:
    D = kronecker_example()
    return ["Kronecker diagram 0 => 1 with X = {0->1}, Y = {0->1->2},",
            "f1 = (0,1) and f2 = (2,2).", *_groth_report(D, out, files),
            "The images of 0 under f1 and f2 have a common upper bound, so the",
            "construction has parallel morphisms and is not a poset."]


def _demo_delta1(out: str, files: list[str]) -> list[str]:
    D = delta1_example()
    return ["Single arrow 0 -> 1 with X = {0->1->2}, Y = {0->1}, f = (0,0,1).",
            *_groth_report(D, out, files),
            "With one arrow there are no parallel pairs: the Ladkani condition is vacuous",
            "and both constructions are 5-element posets."]


def _demo_cone(out: str, files: list[str]) -> list[str]:
    F = Field.gf(5)
    X = from_poset(FinPoset.from_covers(["a", "b", "c"], [("a", "b"), ("a", "c")]))
    D = build_cone(X)
    G, Gc = groth_cov(D), groth_contra(D)
    M = random_rep(make_rng(0), G.cat, F, Bounds(max_deg=1, max_dim=2, density=0.8, max_total=6))
    N = R_plus(M, G, Gc)
    top = "(1,*)"
    lines = ["Cone over X = {a<b, a<c}: the covariant construction adds a terminal object (1,*),",
             "the contravariant one an initial object (1,*).",
             f"(R+M) at the initial object equals M at the terminal object: {N.at[top] == M.at[top]}"]
    for x in X.objects:
        f = M.on[G.kappa[("f1", x)]]
        lines.append(f"(R+M) at (0,{x}) equals cone(M_(0,{x}) -> M_(1,*)): {N.at[f'(0,{x})'] == cone(f)[0]}")
    objs = list(G.cat.objects)
    _write(out, "diagram.json", dumps(diagram_to_json(D)), files)
    _write(out, "rep.json", dumps(representation_to_json(M, groth_shape_ref(G))), files)
    _write(out, "reflected.json", dumps(representation_to_json(N, groth_shape_ref(Gc))), files)
    return lines + ["before:", *_table(M, objs), "after:", *_table(N, objs)]


DEMOS = {"a2": _demo_a2, "dstar": _demo_dstar, "kronecker-example": _demo_kronecker,
         "delta1-example": _demo_delta1, "cone": _demo_cone}


def run_demo(name: str, out: str) -> str:
    os.makedirs(out, exist_ok=True)
    files: list[str] = []
    lines = DEMOS[name](out, files)
    report = "\n".join([f"demo {name}", *lines, "files: " + ", ".join(files + ["report.txt"])]) + "\n"
    with open(os.path.join(out, "report.txt"), "w") as fh:
        fh.write(report)
    return report


def cmd_demo(args) -> int:
    if args.name not in DEMOS:
        return _fail("unknown-demo", f"unknown demo {args.name!r}; choose from {', '.join(DEMOS)}")
    sys.stdout.write(run_demo(args.name, args.out or f"demo-{args.name}"))
    return 0


# -- entry point -------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bgpreflect", description="Reflection functors on Grothendieck constructions "
                                "of bipartite diagrams, over exact fields.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("groth", help="build the Grothendieck construction of a diagram")
    g.add_argument("input")
    g.add_argument("--variant", choices=["cov", "contra"], default="cov")
    g.add_argument("--format", choices=["json", "dot"], default="json")
    g.add_argument("-o", "--out")
    g.set_defaults(func=cmd_groth)

    r = sub.add_parser("reflect", help="apply R+ or R- to a representation")
    r.add_argument("input")
    r.add_argument("--diagram", help="diagram file, if the representation does not embed one")
    r.add_argument("--direction", choices=["plus", "minus"], default="plus")
    r.add_argument("-o", "--out")
    r.set_defaults(func=cmd_reflect)

    h = sub.add_parser("homology", help="homology dimensions and Euler characteristics")
    h.add_argument("input")
    h.add_argument("--diagram")
    h.add_argument("-o", "--out")
    h.set_defaults(func=cmd_homology)

    v = sub.add_parser("verify", help="run the randomized property suites")
    v.add_argument("--seed", type=int, default=1)
    v.add_argument("--cases", type=int, default=100)
    v.add_argument("--field", choices=["fp", "q"], default="fp")
    v.add_argument("--p", type=int, default=5)
    v.add_argument("--timing", action="store_true")
    v.add_argument("--corrupt-cone-sign", action="store_true", help=argparse.SUPPRESS)
    v.set_defaults(func=cmd_verify)

    d = sub.add_parser("demo", help="write a worked example and its report")
    d.add_argument("name")
    d.add_argument("--out", help="output directory (default demo-NAME)")
    d.set_defaults(func=cmd_demo)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InvalidDiagram as e:
        return _fail("invalid-diagram", "diagram failed validation", e.problems)
    except INPUT_ERRORS as e:
        return _fail(type(e).__name__, str(e))
    except (ValueError, KeyError, TypeError) as e:
        return _fail("invalid-input", f"{type(e).__name__}: {e}")
    except SignConventionError as e:
        sys.stderr.write(json.dumps({"error": "self-check", "message": str(e)}, indent=2) + "\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
