"""Strict functors from a finite category into chain complexes."""
from __future__ import annotations

from typing import Mapping

from .chain import ChainComplex, ChainMap, is_quasi_iso, validate_chain_map, validate_complex
from .exactlin import Field
from .fincat import FinCat, FinPoset, Functor, from_poset, poset_morphism_id


class ShapeMismatch(ValueError):
    pass


class IncoherentDiagram(ValueError):
    def __init__(self, x: str, y: str):
        super().__init__(f"incoherent diagram: cover paths from {x} to {y} compose to different maps")
        self.pair = (x, y)


class Representation:
    """``at`` assigns a complex to each object, ``on`` a chain map to each morphism.

    Identity morphisms missing from ``on`` are filled with identity maps.
    """

    def __init__(self, shape: FinCat, field: Field, at: Mapping[str, ChainComplex],
                 on: Mapping[str, ChainMap]):
        self.shape = shape
        self.field = field
        self.at = {x: at[x] for x in shape.objects}
        self.on = dict(on)
        for x in shape.objects:
            self.on.setdefault(shape.identity(x), ChainMap.identity(self.at[x]))

    @classmethod
    def zero(cls, shape: FinCat, field: Field) -> "Representation":
        Z = ChainComplex.zero(field)
        return cls(shape, field, {x: Z for x in shape.objects},
                   {m: ChainMap.zero(Z, Z) for m in shape.morphisms})

    @classmethod
    def constant(cls, shape: FinCat, C: ChainComplex) -> "Representation":
        return cls(shape, C.field, {x: C for x in shape.objects},
                   {m: ChainMap.identity(C) for m in shape.morphisms})

    def __eq__(self, other):
        if not isinstance(other, Representation):
            return NotImplemented
        return (self.shape == other.shape and self.field == other.field
                and self.at == other.at and self.on == other.on)

    def __hash__(self):
        return hash(tuple(self.at))

    def __repr__(self):
        return f"Representation({ {x: C.dims for x, C in self.at.items()} })"


def validate_rep(M: Representation) -> list[str]:
    out = []
    S = M.shape
    for x, C in M.at.items():
        if C.field != M.field:
            out.append(f"complex at {x} over the wrong field")
        for n, why in validate_complex(C):
            out.append(f"complex at {x} is not a complex in degree {n}: {why}")
    for m, (s, t) in S.morphisms.items():
        f = M.on.get(m)
        if f is None:
            out.append(f"no map for morphism {m}")
            continue
        if f.src != M.at[s] or f.tgt != M.at[t]:
            out.append(f"map for {m} has wrong source or target")
            continue
        for n, why in validate_chain_map(f):
            out.append(f"map for {m} is not a chain map in degree {n}: {why}")
    for m in M.on:
        if m not in S.morphisms:
            out.append(f"map given for unknown morphism {m}")
    if out:
        return out
    for x in S.objects:
        if M.on[S.identity(x)] != ChainMap.identity(M.at[x]):
            out.append(f"identity of {x} not sent to the identity map")
    for g, f in S.composable_pairs():
        if S.is_identity(g) or S.is_identity(f):
            continue
        if M.on[S.compose(g, f)] != M.on[g] @ M.on[f]:
            out.append(f"functoriality fails at {g} ∘ {f}")
    return out


def complete_from_covers(P: FinPoset, at: Mapping[str, ChainComplex],
                         cover_maps: Mapping[tuple[str, str], ChainMap],
                         field: Field | None = None) -> Representation:
    """Extend maps on covering relations to a representation of ``P``.

    Raises :class:`IncoherentDiagram` if two saturated chains between the
    same pair compose differently.
    """
    covers = P.covers()
    if set(cover_maps) != set(covers):
        raise ValueError(f"cover maps must be given exactly on the covers {covers}")
    cat = from_poset(P)
    if field is None:
        field = next(iter(at.values())).field
    # process targets in a linear extension so every cover-predecessor is done
    order = sorted(P.objects, key=lambda y: sum(P.le(z, y) for z in P.objects))
    comp: dict[tuple[str, str], ChainMap] = {}
    for x in P.objects:
        comp[(x, x)] = ChainMap.identity(at[x])
    for y in order:
        for x in P.objects:
            if x == y or not P.le(x, y):
                continue
            found = None
            for c, y2 in covers:
                if y2 != y or not P.le(x, c):
                    continue
                cand = cover_maps[(c, y)] @ comp[(x, c)]
                if found is None:
                    found = cand
                elif cand != found:
                    raise IncoherentDiagram(x, y)
            comp[(x, y)] = found
    on = {poset_morphism_id(x, y): f for (x, y), f in comp.items()}
    return Representation(cat, field, at, on)


class NatTrans:
    def __init__(self, src: Representation, tgt: Representation, components: Mapping[str, ChainMap]):
        if src.shape is not tgt.shape and src.shape != tgt.shape:
            raise ShapeMismatch("natural transformation between representations of different shapes")
        if src.field != tgt.field:
            raise ShapeMismatch("natural transformation between representations over different fields")
        self.src = src
        self.tgt = tgt
        self.components = dict(components)

    def __getitem__(self, x: str) -> ChainMap:
        return self.components[x]

    @classmethod
    def identity(cls, M: Representation) -> "NatTrans":
        return cls(M, M, {x: ChainMap.identity(C) for x, C in M.at.items()})

    @classmethod
    def zero(cls, M: Representation, N: Representation) -> "NatTrans":
        return cls(M, N, {x: ChainMap.zero(M.at[x], N.at[x]) for x in M.shape.objects})

    def __matmul__(self, other: "NatTrans") -> "NatTrans":
        return NatTrans(other.src, self.tgt, {x: self[x] @ other[x] for x in self.src.shape.objects})

    def __eq__(self, other):
        if not isinstance(other, NatTrans):
            return NotImplemented
        return self.src == other.src and self.tgt == other.tgt and self.components == other.components

    def __hash__(self):
        return hash(tuple(self.components))


def validate_nat(eta: NatTrans) -> list[str]:
    out = []
    S = eta.src.shape
    for x in S.objects:
        f = eta.components.get(x)
        if f is None:
            out.append(f"missing component at {x}")
            continue
        if f.src != eta.src.at[x] or f.tgt != eta.tgt.at[x]:
            out.append(f"component at {x} has wrong source or target")
            continue
        for n, why in validate_chain_map(f):
            out.append(f"component at {x} is not a chain map in degree {n}: {why}")
    if out:
        return out
    for m, (s, t) in S.morphisms.items():
        if S.is_identity(m):
            continue
        if eta.tgt.on[m] @ eta[s] != eta[t] @ eta.src.on[m]:
            out.append(f"naturality fails at {m}")
    return out


def restrict(M: Representation, F: Functor) -> Representation:
    """Precomposition ``M ∘ F``."""
    if F.tgt is not M.shape and F.tgt != M.shape:
        raise ShapeMismatch("functor does not land in the representation's shape")
    return Representation(F.src, M.field, {x: M.at[F(x)] for x in F.src.objects},
                          {m: M.on[F.on_mor(m)] for m in F.src.morphisms})


def restrict_nat(eta: NatTrans, F: Functor) -> NatTrans:
    return NatTrans(restrict(eta.src, F), restrict(eta.tgt, F),
                    {x: eta[F(x)] for x in F.src.objects})


def pointwise_qiso(eta: NatTrans) -> bool:
    return all(is_quasi_iso(eta[x]) for x in eta.src.shape.objects)
