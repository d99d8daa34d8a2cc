"""Reflection functors via triples.

A representation of the covariant construction is the same thing as a
triple ``(b, phi: a -> F(b))`` with ``b`` on the right blocks ``Y`` and ``a``
on the left blocks ``X``, where

    F(b)_x = direct sum over arrows alpha out of l of b_{f_alpha(x)}

(summands in quiver arrow order).  Representations of the contravariant
construction are triples ``(b, psi: F(b) -> a)``.  ``R+`` replaces ``a`` by
the objectwise cone of ``phi``; ``R-`` replaces ``a`` by the objectwise fibre
of ``psi``.
"""
from __future__ import annotations

from dataclasses import dataclass

from .chain import (
    ChainMap,
    cone,
    cone_map,
    direct_sum,
    direct_sum_map,
    fib,
    fib_map,
    validate_chain_map,
)
from .exactlin import Matrix, block
from .fincat import FinCat, Functor, tagged
from .groth import BipartiteDiagram, GrothCat, groth_contra, groth_cov
from .rep import NatTrans, Representation, ShapeMismatch, pointwise_qiso, restrict, validate_nat, validate_rep


class InvalidInput(ValueError):
    pass


class SignConventionError(AssertionError):
    """A comparison map failed its chain-map self-check."""


@dataclass
class FData:
    """``F(b)`` together with, per object of ``X``, the summand data."""
    rep: Representation
    arrows: dict[str, list[str]]  # object of X -> arrows contributing summands
    inj: dict[str, list[ChainMap]]
    proj: dict[str, list[ChainMap]]


def _left_right(D: BipartiteDiagram) -> tuple[FinCat, FinCat]:
    return D.left_union()[0], D.right_union()[0]


def f_data(D: BipartiteDiagram, b: Representation) -> FData:
    X, Y = _left_right(D)
    if b.shape != Y:
        raise ShapeMismatch("b must be a representation of the right-block union")
    F = b.field
    at, inj, proj, arrows = {}, {}, {}, {}
    for l in D.left:
        out = D.quiver.arrows_from(l)
        for x in D.values[l].objects:
            ox = tagged(l, x)
            parts = [b.at[tagged(D.quiver.arrows[a][1], D.functors[a](x))] for a in out]
            at[ox], inj[ox], proj[ox] = direct_sum(parts, F)
            arrows[ox] = out
    on = {}
    for l in D.left:
        out = D.quiver.arrows_from(l)
        for h, (s, t) in D.values[l].morphisms.items():
            src, tgt = at[tagged(l, s)], at[tagged(l, t)]
            maps = [b.on[tagged(D.quiver.arrows[a][1], D.functors[a].on_mor(h))] for a in out]
            on[tagged(l, h)] = direct_sum_map(maps, src, tgt)
    return FData(Representation(X, F, at, on), arrows, inj, proj)


def apply_F(D: BipartiteDiagram, b: Representation) -> Representation:
    return f_data(D, b).rep


@dataclass
class TripleCa:
    diagram: BipartiteDiagram
    b: Representation
    a: Representation
    phi: NatTrans  # a -> F(b)


@dataclass
class TripleCoca:
    diagram: BipartiteDiagram
    b: Representation
    a: Representation
    psi: NatTrans  # F(b) -> a


def validate_triple(t: TripleCa | TripleCoca) -> list[str]:
    X, Y = _left_right(t.diagram)
    out = []
    if t.b.shape != Y:
        out.append("b is not a representation of the right blocks")
    if t.a.shape != X:
        out.append("a is not a representation of the left blocks")
    if out:
        return out
    out += [f"b: {p}" for p in validate_rep(t.b)]
    out += [f"a: {p}" for p in validate_rep(t.a)]
    if out:
        return out
    Fb = apply_F(t.diagram, t.b)
    if isinstance(t, TripleCa):
        eta, want = t.phi, (t.a, Fb)
    else:
        eta, want = t.psi, (Fb, t.a)
    if eta.src != want[0] or eta.tgt != want[1]:
        return ["structure map has the wrong source or target"]
    return [f"structure map: {p}" for p in validate_nat(eta)]


def _require_valid_triple(t):
    problems = validate_triple(t)
    if problems:
        raise InvalidInput("; ".join(problems))


def _block_inclusion(U: FinCat, G: GrothCat) -> Functor:
    # the tagged ids of the block unions coincide with those of G
    return Functor(U, G.cat, {x: x for x in U.objects}, {m: m for m in U.morphisms})


def _require_rep_of(M: Representation, G: GrothCat):
    if M.shape is not G.cat and M.shape != G.cat:
        raise ShapeMismatch(f"representation is not over the {G.variant} construction")
    problems = validate_rep(M)
    if problems:
        raise InvalidInput("; ".join(problems))


def pack_cov(M: Representation, G: GrothCat) -> TripleCa:
    if G.variant != "cov":
        raise ValueError("pack_cov needs the covariant construction")
    _require_rep_of(M, G)
    D = G.diagram
    X, Y = _left_right(D)
    a = restrict(M, _block_inclusion(X, G))
    b = restrict(M, _block_inclusion(Y, G))
    fd = f_data(D, b)
    F = M.field
    comps = {}
    for ox in X.objects:
        l, x = G.obj_tag[ox]
        legs = [M.on[G.kappa[(al, x)]] for al in fd.arrows[ox]]
        src, tgt = a.at[ox], fd.rep.at[ox]
        comps[ox] = ChainMap(src, tgt, {n: block(F, [[leg.comp(n)] for leg in legs],
                                               [leg.tgt.dim(n) for leg in legs], [src.dim(n)])
                                        for n in src.dims if tgt.dim(n)})
    return TripleCa(D, b, a, NatTrans(a, fd.rep, comps))


def pack_contra(M: Representation, G: GrothCat) -> TripleCoca:
    if G.variant != "contra":
        raise ValueError("pack_contra needs the contravariant construction")
    _require_rep_of(M, G)
    D = G.diagram
    X, Y = _left_right(D)
    a = restrict(M, _block_inclusion(X, G))
    b = restrict(M, _block_inclusion(Y, G))
    fd = f_data(D, b)
    F = M.field
    comps = {}
    for ox in X.objects:
        l, x = G.obj_tag[ox]
        legs = [M.on[G.kappa[(al, x)]] for al in fd.arrows[ox]]
        src, tgt = fd.rep.at[ox], a.at[ox]
        comps[ox] = ChainMap(src, tgt, {n: block(F, [[leg.comp(n) for leg in legs]],
                                               [tgt.dim(n)], [leg.src.dim(n) for leg in legs])
                                        for n in src.dims if tgt.dim(n)})
    return TripleCoca(D, b, a, NatTrans(fd.rep, a, comps))


def _unpack(t, G: GrothCat, cross) -> Representation:
    D = t.diagram
    fd = f_data(D, t.b)
    at = {**t.a.at, **t.b.at}
    on = {}
    for m, tag in G.mor_tag.items():
        if tag[0] == "block":
            on[m] = t.a.on[m] if tag[1] in D.left else t.b.on[m]
        else:
            _, al, x, g = tag
            l, r = D.quiver.arrows[al]
            ox = tagged(l, x)
            i = fd.arrows[ox].index(al)
            on[m] = cross(fd, ox, i, t.b.on[tagged(r, g)])
    return Representation(G.cat, t.b.field, {x: at[x] for x in G.cat.objects}, on)


def unpack_cov(t: TripleCa, G: GrothCat | None = None) -> Representation:
    """Cross morphism ``(alpha, x, g)`` acts by ``b(g) ∘ pr_alpha ∘ phi_x``."""
    _require_valid_triple(t)
    G = G or groth_cov(t.diagram)
    return _unpack(t, G, lambda fd, ox, i, bg: bg @ fd.proj[ox][i] @ t.phi[ox])


def unpack_contra(t: TripleCoca, G: GrothCat | None = None) -> Representation:
    """Cross morphism ``(alpha, x, g)`` acts by ``psi_x ∘ in_alpha ∘ b(g)``."""
    _require_valid_triple(t)
    G = G or groth_contra(t.diagram)
    return _unpack(t, G, lambda fd, ox, i, bg: t.psi[ox] @ fd.inj[ox][i] @ bg)


def reflect_plus(t: TripleCa) -> TripleCoca:
    """``(b, phi: a -> F b)  ->  (b, F b -> cone(phi))``."""
    _require_valid_triple(t)
    Fb = apply_F(t.diagram, t.b)
    X = t.a.shape
    cones = {x: cone(t.phi[x]) for x in X.objects}
    at = {x: cones[x][0] for x in X.objects}
    on = {}
    for h, (s, u) in X.morphisms.items():
        on[h] = cone_map(t.a.on[h], Fb.on[h], at[s], at[u])
    a2 = Representation(X, t.b.field, at, on)
    psi = NatTrans(Fb, a2, {x: cones[x][1] for x in X.objects})
    return TripleCoca(t.diagram, t.b, a2, psi)


def reflect_minus(t: TripleCoca) -> TripleCa:
    """``(b, psi: F b -> a)  ->  (b, fib(psi) -> F b)``."""
    _require_valid_triple(t)
    Fb = apply_F(t.diagram, t.b)
    X = t.a.shape
    fibs = {x: fib(t.psi[x]) for x in X.objects}
    at = {x: fibs[x][0] for x in X.objects}
    on = {}
    for h, (s, u) in X.morphisms.items():
        on[h] = fib_map(Fb.on[h], t.a.on[h], at[s], at[u])
    a2 = Representation(X, t.b.field, at, on)
    phi = NatTrans(a2, Fb, {x: fibs[x][1] for x in X.objects})
    return TripleCa(t.diagram, t.b, a2, phi)


def R_plus(M: Representation, G: GrothCat, G_contra: GrothCat | None = None) -> Representation:
    """Representation of the covariant construction -> contravariant one."""
    return unpack_contra(reflect_plus(pack_cov(M, G)), G_contra)


def R_minus(M: Representation, G: GrothCat, G_cov: GrothCat | None = None) -> Representation:
    return unpack_cov(reflect_minus(pack_contra(M, G)), G_cov)


def _self_check(eta: NatTrans, what: str):
    for x, f in eta.components.items():
        bad = validate_chain_map(f)
        if bad:
            raise SignConventionError(f"{what} at {x} is not a chain map: {bad}")
    bad = validate_nat(eta)
    if bad:
        raise SignConventionError(f"{what} is not natural: {bad}")


def unit_comparison(t: TripleCa) -> tuple[NatTrans, bool]:
    """``eta: a -> a''`` where ``a''`` is the ``a``-part of ``R- R+ t``.

    ``a''_x = fib(F b -> cone(phi_x))`` has degree-``n`` part
    ``F(b)_n + a_n + F(b)_{n+1}``; the component is ``v -> (phi v, -v, 0)``,
    which satisfies ``phi'' ∘ eta = phi`` on the nose.  Returns ``eta`` and
    whether it is a pointwise quasi-isomorphism.
    """
    t2 = reflect_minus(reflect_plus(t))
    F = t.b.field
    comps = {}
    for x in t.a.shape.objects:
        A, B, tgt = t.a.at[x], t.phi[x].tgt, t2.a.at[x]
        comps[x] = ChainMap(A, tgt, {
            n: block(F, [[t.phi[x].comp(n)], [-Matrix.identity(F, A.dim(n))], [None]],
                     [B.dim(n), A.dim(n), B.dim(n + 1)], [A.dim(n)])
            for n in A.dims})
    eta = NatTrans(t.a, t2.a, comps)
    _self_check(eta, "unit")
    if t2.phi @ eta != t.phi:
        raise SignConventionError("unit does not commute with the structure maps")
    return eta, pointwise_qiso(eta)


def counit_comparison(t: TripleCoca) -> tuple[NatTrans, bool]:
    """``eps: a'' -> a`` where ``a''`` is the ``a``-part of ``R+ R- t``.

    ``a''_x = cone(fib(psi_x) -> F b)`` has degree-``n`` part
    ``F(b)_{n-1} + a_n + F(b)_n``; the component is ``(c, v, w) -> psi(w) - v``,
    which satisfies ``eps ∘ psi'' = psi`` on the nose.
    """
    t2 = reflect_plus(reflect_minus(t))
    F = t.b.field
    comps = {}
    for x in t.a.shape.objects:
        A, B, src = t.a.at[x], t.psi[x].src, t2.a.at[x]
        comps[x] = ChainMap(src, A, {
            n: block(F, [[None, -Matrix.identity(F, A.dim(n)), t.psi[x].comp(n)]],
                     [A.dim(n)], [B.dim(n - 1), A.dim(n), B.dim(n)])
            for n in A.dims})
    eps = NatTrans(t2.a, t.a, comps)
    _self_check(eps, "counit")
    if eps @ t2.psi != t.psi:
        raise SignConventionError("counit does not commute with the structure maps")
    return eps, pointwise_qiso(eps)


def zero_triple(D: BipartiteDiagram, field, variant: str = "ca") -> TripleCa | TripleCoca:
    X, Y = _left_right(D)
    b = Representation.zero(Y, field)
    a = Representation.zero(X, field)
    Fb = apply_F(D, b)
    if variant == "ca":
        return TripleCa(D, b, a, NatTrans.zero(a, Fb))
    return TripleCoca(D, b, a, NatTrans.zero(Fb, a))
