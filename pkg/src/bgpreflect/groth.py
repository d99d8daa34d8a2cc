"""Bipartite diagrams of finite categories and their Grothendieck constructions.

For a diagram with arrows ``alpha: l -> r`` carrying functors
``f_alpha: value(l) -> value(r)`` the covariant construction has objects
``(q,x)`` and, besides the morphisms inside each block,

    Hom((l,x), (r,y)) = disjoint union over alpha of Hom(f_alpha(x), y)

while the contravariant one has

    Hom((r,y), (l,x)) = disjoint union over alpha of Hom(y, f_alpha(x)).

Object ids are ``(q,x)``, block morphism ids ``(q,h)`` and cross morphism
ids ``(alpha,x,g)``, so the left blocks of both constructions carry the same
ids as the disjoint union of the left values (and likewise on the right).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .fincat import (
    CategoryError,
    FinCat,
    FinPoset,
    Functor,
    disjoint_union,
    from_poset,
    is_poset,
    opposite,
    point,
    tagged,
    to_poset,
    validate_category,
    validate_functor,
)


class InvalidDiagram(ValueError):
    def __init__(self, problems: Sequence[str]):
        super().__init__("; ".join(problems))
        self.problems = list(problems)


@dataclass
class BipartiteQuiver:
    left: list[str]
    right: list[str]
    # arrow id -> (source, target); insertion order fixes summand order in F
    arrows: dict[str, tuple[str, str]]

    def arrows_from(self, l: str) -> list[str]:
        return [a for a, (s, _) in self.arrows.items() if s == l]

    def arrows_between(self, l: str, r: str) -> list[str]:
        return [a for a, st in self.arrows.items() if st == (l, r)]


@dataclass
class BipartiteDiagram:
    quiver: BipartiteQuiver
    values: dict[str, FinCat]
    functors: dict[str, Functor]

    @property
    def left(self) -> list[str]:
        return self.quiver.left

    @property
    def right(self) -> list[str]:
        return self.quiver.right

    def left_union(self) -> tuple[FinCat, dict[str, Functor]]:
        U, inj = disjoint_union([self.values[l] for l in self.left], self.left)
        return U, dict(zip(self.left, inj))

    def right_union(self) -> tuple[FinCat, dict[str, Functor]]:
        U, inj = disjoint_union([self.values[r] for r in self.right], self.right)
        return U, dict(zip(self.right, inj))


def validate_diagram(D: BipartiteDiagram) -> list[str]:
    out = []
    Q = D.quiver
    if set(Q.left) & set(Q.right):
        out.append("left and right vertex sets overlap")
    if len(set(Q.left)) != len(Q.left) or len(set(Q.right)) != len(Q.right):
        out.append("duplicate vertex ids")
    for v in [*Q.left, *Q.right]:
        if v not in D.values:
            out.append(f"vertex {v} has no value")
        else:
            out.extend(f"value at {v}: {p}" for p in validate_category(D.values[v]))
    for a, (s, t) in Q.arrows.items():
        if s not in Q.left or t not in Q.right:
            out.append(f"arrow {a}: {s} -> {t} does not go from left to right (not bipartite)")
            continue
        F = D.functors.get(a)
        if F is None:
            out.append(f"arrow {a} has no functor")
            continue
        if s not in D.values or t not in D.values:
            continue
        if F.src != D.values[s] or F.tgt != D.values[t]:
            out.append(f"functor on arrow {a} has wrong endpoints")
            continue
        out.extend(f"functor on arrow {a}: {p}" for p in validate_functor(F))
    for a in D.functors:
        if a not in Q.arrows:
            out.append(f"functor given for unknown arrow {a}")
    return out


@dataclass
class GrothCat:
    cat: FinCat
    variant: str
    diagram: BipartiteDiagram
    obj_tag: dict[str, tuple[str, str]]
    # ("block", q, h) or ("cross", alpha, x, g)
    mor_tag: dict[str, tuple]
    inclusions: dict[str, Functor] = field(default_factory=dict)
    # cov: (alpha, x) -> morphism (l,x) -> (r, f_alpha x); contra: reversed
    kappa: dict[tuple[str, str], str] = field(default_factory=dict)


def cross_id(alpha: str, x: str, g: str) -> str:
    return f"({alpha},{x},{g})"


def _check(D: BipartiteDiagram, check: bool):
    if not check:
        return
    problems = validate_diagram(D)
    if problems:
        raise InvalidDiagram(problems)


def _blocks(D: BipartiteDiagram):
    objects, mors, ids, comp, obj_tag, mor_tag = [], {}, {}, {}, {}, {}
    for q in [*D.left, *D.right]:
        C = D.values[q]
        for x in C.objects:
            objects.append(tagged(q, x))
            obj_tag[tagged(q, x)] = (q, x)
            ids[tagged(q, x)] = tagged(q, C.identity(x))
        for h, (s, t) in C.morphisms.items():
            mors[tagged(q, h)] = (tagged(q, s), tagged(q, t))
            mor_tag[tagged(q, h)] = ("block", q, h)
        for (g, f), h in C.composition.items():
            comp[(tagged(q, g), tagged(q, f))] = tagged(q, h)
    return objects, mors, ids, comp, obj_tag, mor_tag


def _finish(D, variant, objects, mors, ids, comp, obj_tag, mor_tag, kappa) -> GrothCat:
    cat = FinCat(objects, mors, ids, comp)
    inc = {q: Functor(D.values[q], cat, {x: tagged(q, x) for x in D.values[q].objects},
                      {h: tagged(q, h) for h in D.values[q].morphisms})
           for q in [*D.left, *D.right]}
    return GrothCat(cat, variant, D, obj_tag, mor_tag, inc, kappa)


def groth_cov(D: BipartiteDiagram, check: bool = True) -> GrothCat:
    """Covariant construction; ``check=False`` skips diagram validation."""
    _check(D, check)
    objects, mors, ids, comp, obj_tag, mor_tag = _blocks(D)
    kappa = {}
    for a, (l, r) in D.quiver.arrows.items():
        X, Y, f = D.values[l], D.values[r], D.functors[a]
        for x in X.objects:
            fx = f(x)
            for g in Y.outgoing(fx):
                m = cross_id(a, x, g)
                if m in mors:
                    raise CategoryError(f"id clash at {m}")
                mors[m] = (tagged(l, x), tagged(r, Y.tgt(g)))
                mor_tag[m] = ("cross", a, x, g)
                # (r,k) ∘ (a,x,g) = (a,x,k∘g)
                for k in Y.outgoing(Y.tgt(g)):
                    comp[(tagged(r, k), m)] = cross_id(a, x, Y.compose(k, g))
                # (a,x,g) ∘ (l,h) = (a,x',g∘f(h)) for h: x' -> x
                for h in X.incoming(x):
                    comp[(m, tagged(l, h))] = cross_id(a, X.src(h), Y.compose(g, f.on_mor(h)))
            kappa[(a, x)] = cross_id(a, x, Y.identity(fx))
    return _finish(D, "cov", objects, mors, ids, comp, obj_tag, mor_tag, kappa)


def groth_contra(D: BipartiteDiagram, check: bool = True) -> GrothCat:
    _check(D, check)
    objects, mors, ids, comp, obj_tag, mor_tag = _blocks(D)
    kappa = {}
    for a, (l, r) in D.quiver.arrows.items():
        X, Y, f = D.values[l], D.values[r], D.functors[a]
        for x in X.objects:
            fx = f(x)
            for g in Y.incoming(fx):
                m = cross_id(a, x, g)
                if m in mors:
                    raise CategoryError(f"id clash at {m}")
                mors[m] = (tagged(r, Y.src(g)), tagged(l, x))
                mor_tag[m] = ("cross", a, x, g)
                # (l,h) ∘ (a,x,g) = (a,x',f(h)∘g) for h: x -> x'
                for h in X.outgoing(x):
                    comp[(tagged(l, h), m)] = cross_id(a, X.tgt(h), Y.compose(f.on_mor(h), g))
                # (a,x,g) ∘ (r,k) = (a,x,g∘k) for k: y' -> y
                for k in Y.incoming(Y.src(g)):
                    comp[(m, tagged(r, k))] = cross_id(a, x, Y.compose(g, k))
            kappa[(a, x)] = cross_id(a, x, Y.identity(fx))
    return _finish(D, "contra", objects, mors, ids, comp, obj_tag, mor_tag, kappa)


def groth(D: BipartiteDiagram, variant: str, check: bool = True) -> GrothCat:
    if variant == "cov":
        return groth_cov(D, check)
    if variant == "contra":
        return groth_contra(D, check)
    raise ValueError(f"unknown variant {variant!r}")


def ladkani_condition(D: BipartiteDiagram, variant: str) -> bool:
    """No two distinct parallel arrows send any ``x`` to elements with a common
    upper bound (``cov``) or lower bound (``contra``)."""
    if variant not in ("cov", "contra"):
        raise ValueError(f"unknown variant {variant!r}")
    posets = {}
    for q, C in D.values.items():
        if not is_poset(C):
            raise CategoryError(f"value at {q} is not a poset")
        posets[q] = to_poset(C)
    Q = D.quiver
    for l in Q.left:
        for r in Q.right:
            par = Q.arrows_between(l, r)
            for i, a in enumerate(par):
                for b in par[i + 1:]:
                    fa, fb = D.functors[a], D.functors[b]
                    P = posets[r]
                    for x in D.values[l].objects:
                        pair = (fa(x), fb(x))
                        bounds = P.upper_bounds(pair) if variant == "cov" else P.lower_bounds(pair)
                        if bounds:
                            return False
    return True


def build_kronecker(X: FinCat, Y: FinCat, fs: Sequence[Functor]) -> BipartiteDiagram:
    """The ``d``-Kronecker diagram ``0 => 1`` with values ``X``, ``Y``."""
    for i, f in enumerate(fs):
        if f.src != X or f.tgt != Y:
            raise InvalidDiagram([f"functor {i + 1} does not go from X to Y"])
    arrows = {f"f{i + 1}": ("0", "1") for i in range(len(fs))}
    return BipartiteDiagram(BipartiteQuiver(["0"], ["1"], arrows), {"0": X, "1": Y},
                            {f"f{i + 1}": f for i, f in enumerate(fs)})


def build_star(Y: FinCat, ys: Sequence[str]) -> BipartiteDiagram:
    """``pt => Y`` picking the objects ``ys``: adjoins a free source (cov) or sink (contra)."""
    pt = point()
    return build_kronecker(pt, Y, [Functor.constant(pt, Y, y) for y in ys])


def build_cone(X: FinCat) -> BipartiteDiagram:
    """``X -> pt``: covariant construction is ``X`` plus a terminal object."""
    pt = point()
    return build_kronecker(X, pt, [Functor.constant(X, pt, "*")])


def opposite_diagram(D: BipartiteDiagram) -> BipartiteDiagram:
    vals = {q: opposite(C) for q, C in D.values.items()}
    fun = {a: Functor(vals[D.quiver.arrows[a][0]], vals[D.quiver.arrows[a][1]], F.obj_map, F.mor_map)
           for a, F in D.functors.items()}
    return BipartiteDiagram(D.quiver, vals, fun)


def add_terminal(X: FinCat, top: str = "T") -> FinCat:
    """``X`` with a new terminal object, built directly."""
    return _add_cone_point(X, top, terminal=True)


def add_initial(X: FinCat, bot: str = "B") -> FinCat:
    return _add_cone_point(X, bot, terminal=False)


def _add_cone_point(X: FinCat, c: str, terminal: bool) -> FinCat:
    mors = dict(X.morphisms)
    ids = dict(X.identities)
    comp = dict(X.composition)
    mors[f"id_{c}"] = (c, c)
    ids[c] = f"id_{c}"
    name = (lambda x: f"{x}->{c}") if terminal else (lambda x: f"{c}->{x}")
    for x in X.objects:
        mors[name(x)] = (x, c) if terminal else (c, x)
    for h, (s, t) in X.morphisms.items():
        if terminal:
            comp[(name(t), h)] = name(s)
        else:
            comp[(h, name(s))] = name(t)
    return FinCat([*X.objects, c], mors, ids, comp)


def adjoin_free(Y: FinCat, ys: Sequence[str], new: str = "y", source: bool = True) -> FinCat:
    """``Y`` plus a new object with free arrows to (``source``) or from each ``ys[i]``."""
    mors = dict(Y.morphisms)
    ids = dict(Y.identities)
    comp = dict(Y.composition)
    mors[f"id_{new}"] = (new, new)
    ids[new] = f"id_{new}"
    for i, yi in enumerate(ys):
        if source:
            for k in Y.outgoing(yi):
                mors[f"e{i}.{k}"] = (new, Y.tgt(k))
                for k2 in Y.outgoing(Y.tgt(k)):
                    comp[(k2, f"e{i}.{k}")] = f"e{i}.{Y.compose(k2, k)}"
        else:
            for k in Y.incoming(yi):
                mors[f"e{i}.{k}"] = (Y.src(k), new)
                for k2 in Y.incoming(Y.src(k)):
                    comp[(f"e{i}.{k}", k2)] = f"e{i}.{Y.compose(k, k2)}"
    return FinCat([*Y.objects, new], mors, ids, comp)


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(G: GrothCat | FinCat, name: str = "G") -> str:
    """DOT text: Hasse diagram for posets, every non-identity morphism otherwise."""
    C = G.cat if isinstance(G, GrothCat) else G
    lines = [f"digraph {name} {{"]
    for x in C.objects:
        lines.append(f"  {_dot_quote(x)};")
    if is_poset(C):
        P = to_poset(C)
        for x, y in P.covers():
            lines.append(f"  {_dot_quote(x)} -> {_dot_quote(y)};")
    else:
        for m in C.non_identity_morphisms():
            s, t = C.morphisms[m]
            lines.append(f"  {_dot_quote(s)} -> {_dot_quote(t)} [label={_dot_quote(m)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def kronecker_example() -> BipartiteDiagram:
    """``X = {0->1}``, ``Y = {0->1->2}``, ``f1 = (0,1)``, ``f2 = (2,2)``."""
    X = from_poset(FinPoset.chain(2))
    Y = from_poset(FinPoset.chain(3))
    f1 = Functor.between_posets(X, Y, {"0": "0", "1": "1"})
    f2 = Functor.between_posets(X, Y, {"0": "2", "1": "2"})
    return build_kronecker(X, Y, [f1, f2])


def delta1_example() -> BipartiteDiagram:
    """``X = {0->1->2}``, ``Y = {0->1}``, ``f = (0,0,1)``."""
    X = from_poset(FinPoset.chain(3))
    Y = from_poset(FinPoset.chain(2))
    return build_kronecker(X, Y, [Functor.between_posets(X, Y, {"0": "0", "1": "0", "2": "1"})])


def groth_summary(G: GrothCat) -> Mapping[str, object]:
    return {"variant": G.variant, "objects": len(G.cat.objects),
            "morphisms": len(G.cat.morphisms), "is_poset": is_poset(G.cat)}
