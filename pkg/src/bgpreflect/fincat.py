"""Finite categories given by full composition tables, posets, and functors."""
from __future__ import annotations

import itertools
from typing import Iterable, Mapping, Sequence


class CategoryError(ValueError):
    pass


class PosetError(ValueError):
    pass


class FinCat:
    """A finite category.

    ``morphisms`` maps a morphism id to ``(source, target)``; ``composition``
    maps ``(g, f)`` to ``g ∘ f`` for every composable pair (``tgt f == src g``).
    Composites with identities may be omitted and are filled in.
    """

    def __init__(self, objects: Sequence[str], morphisms: Mapping[str, tuple[str, str]],
                 identities: Mapping[str, str], composition: Mapping[tuple[str, str], str]):
        self.objects = tuple(objects)
        if len(set(self.objects)) != len(self.objects):
            raise CategoryError("duplicate object ids")
        self.morphisms = dict(morphisms)
        self.identities = dict(identities)
        obset = set(self.objects)
        for m, (s, t) in self.morphisms.items():
            if s not in obset or t not in obset:
                raise CategoryError(f"morphism {m} has unknown endpoint")
        for x in self.objects:
            i = self.identities.get(x)
            if i is None or self.morphisms.get(i) != (x, x):
                raise CategoryError(f"object {x} lacks an identity endomorphism")
        comp = dict(composition)
        for m, (s, t) in self.morphisms.items():
            comp.setdefault((self.identities[t], m), m)
            comp.setdefault((m, self.identities[s]), m)
        self.composition = comp
        self._hom: dict[tuple[str, str], list[str]] = {}
        for m, st in self.morphisms.items():
            self._hom.setdefault(st, []).append(m)
        self._out: dict[str, list[str]] = {}
        self._in: dict[str, list[str]] = {}
        for m, (s, t) in self.morphisms.items():
            self._out.setdefault(s, []).append(m)
            self._in.setdefault(t, []).append(m)

    def src(self, m: str) -> str:
        return self.morphisms[m][0]

    def tgt(self, m: str) -> str:
        return self.morphisms[m][1]

    def identity(self, x: str) -> str:
        return self.identities[x]

    def is_identity(self, m: str) -> bool:
        s, t = self.morphisms[m]
        return s == t and self.identities[s] == m

    def hom(self, x: str, y: str) -> list[str]:
        return self._hom.get((x, y), [])

    def outgoing(self, x: str) -> list[str]:
        return self._out.get(x, [])

    def incoming(self, y: str) -> list[str]:
        return self._in.get(y, [])

    def compose(self, g: str, f: str) -> str:
        """``g ∘ f``."""
        try:
            return self.composition[(g, f)]
        except KeyError:
            raise CategoryError(f"{g} ∘ {f} is undefined") from None

    def non_identity_morphisms(self) -> list[str]:
        return [m for m in self.morphisms if not self.is_identity(m)]

    def composable_pairs(self) -> Iterable[tuple[str, str]]:
        for f, (_, y) in self.morphisms.items():
            for g in self.outgoing(y):
                yield g, f

    def __len__(self):
        return len(self.objects)

    def __eq__(self, other):
        if not isinstance(other, FinCat):
            return NotImplemented
        return (self.objects == other.objects and self.morphisms == other.morphisms
                and self.identities == other.identities and self.composition == other.composition)

    def __hash__(self):
        return hash((self.objects, len(self.morphisms)))

    def __repr__(self):
        return f"FinCat({len(self.objects)} objects, {len(self.morphisms)} morphisms)"


def validate_category(C: FinCat) -> list[str]:
    """Exhaustive check of the composition table; returns violations."""
    out = []
    for g, f in C.composable_pairs():
        h = C.composition.get((g, f))
        if h is None:
            out.append(f"missing composite {g} ∘ {f}")
        elif C.morphisms.get(h) != (C.src(f), C.tgt(g)):
            out.append(f"{g} ∘ {f} = {h} has wrong endpoints")
    for (g, f) in C.composition:
        if g not in C.morphisms or f not in C.morphisms or C.tgt(f) != C.src(g):
            out.append(f"composite given for non-composable pair ({g}, {f})")
    if out:
        return out
    for m, (s, t) in C.morphisms.items():
        if C.composition[(C.identity(t), m)] != m or C.composition[(m, C.identity(s))] != m:
            out.append(f"identity law fails at {m}")
    for f, (_, y) in C.morphisms.items():
        for g in C.outgoing(y):
            gf = C.composition[(g, f)]
            for h in C.outgoing(C.tgt(g)):
                if C.composition[(h, gf)] != C.composition[(C.composition[(h, g)], f)]:
                    out.append(f"associativity fails at ({h}, {g}, {f})")
    return out


class FinPoset:
    """Finite poset given by its full order relation (a set of pairs ``x <= y``)."""

    def __init__(self, objects: Sequence[str], leq: Iterable[tuple[str, str]]):
        self.objects = tuple(objects)
        self.leq = frozenset(leq) | {(x, x) for x in self.objects}

    @classmethod
    def from_covers(cls, objects: Sequence[str], covers: Iterable[tuple[str, str]]) -> "FinPoset":
        """Reflexive-transitive closure of ``covers``."""
        rel = {(x, x) for x in objects} | set(covers)
        changed = True
        while changed:
            changed = False
            for (a, b), (c, d) in list(itertools.product(rel, rel)):
                if b == c and (a, d) not in rel:
                    rel.add((a, d))
                    changed = True
        return cls(objects, rel)

    @classmethod
    def chain(cls, n: int) -> "FinPoset":
        obs = [str(i) for i in range(n)]
        return cls(obs, [(obs[i], obs[j]) for i in range(n) for j in range(i, n)])

    @classmethod
    def antichain(cls, objects: Sequence[str]) -> "FinPoset":
        return cls(objects, [])

    def le(self, x: str, y: str) -> bool:
        return (x, y) in self.leq

    def covers(self) -> list[tuple[str, str]]:
        out = []
        for x, y in sorted(self.leq, key=self._pair_key):
            if x != y and not any(z not in (x, y) and self.le(x, z) and self.le(z, y) for z in self.objects):
                out.append((x, y))
        return out

    def upper_bounds(self, xs: Iterable[str]) -> list[str]:
        xs = list(xs)
        return [z for z in self.objects if all(self.le(x, z) for x in xs)]

    def lower_bounds(self, xs: Iterable[str]) -> list[str]:
        xs = list(xs)
        return [z for z in self.objects if all(self.le(z, x) for x in xs)]

    def _pair_key(self, pair):
        idx = {x: i for i, x in enumerate(self.objects)}
        return (idx.get(pair[0], -1), idx.get(pair[1], -1))

    def __repr__(self):
        return f"FinPoset({list(self.objects)}, covers={self.covers()})"


def poset_violations(P: FinPoset) -> list[str]:
    out = []
    obs = set(P.objects)
    for x, y in P.leq:
        if x not in obs or y not in obs:
            out.append(f"relation ({x}, {y}) mentions an unknown element")
    for x, y in P.leq:
        if x != y and (y, x) in P.leq:
            out.append(f"antisymmetry fails: {x} <= {y} <= {x}")
    for (a, b), (c, d) in itertools.product(P.leq, P.leq):
        if b == c and (a, d) not in P.leq:
            out.append(f"transitivity fails: {a} <= {b} <= {d}")
    return sorted(set(out))


def poset_morphism_id(x: str, y: str) -> str:
    return f"{x}<={y}"


def from_poset(P: FinPoset) -> FinCat:
    """One morphism ``x<=y`` per related pair; composition is forced."""
    bad = poset_violations(P)
    if bad:
        raise PosetError("; ".join(bad))
    pairs = sorted(P.leq, key=P._pair_key)
    mors = {poset_morphism_id(x, y): (x, y) for x, y in pairs}
    ids = {x: poset_morphism_id(x, x) for x in P.objects}
    comp = {}
    for x, y in pairs:
        for y2, z in pairs:
            if y == y2:
                comp[(poset_morphism_id(y, z), poset_morphism_id(x, y))] = poset_morphism_id(x, z)
    return FinCat(P.objects, mors, ids, comp)


def is_poset(C: FinCat) -> bool:
    for x in C.objects:
        for y in C.objects:
            n = len(C.hom(x, y))
            if n > 1:
                return False
            if n and x != y and C.hom(y, x):
                return False
    return True


def to_poset(C: FinCat) -> FinPoset:
    if not is_poset(C):
        raise PosetError("category is not a poset")
    return FinPoset(C.objects, [C.morphisms[m] for m in C.morphisms])


def point(obj: str = "*") -> FinCat:
    return FinCat([obj], {f"id_{obj}": (obj, obj)}, {obj: f"id_{obj}"}, {})


def opposite(C: FinCat) -> FinCat:
    return FinCat(C.objects, {m: (t, s) for m, (s, t) in C.morphisms.items()}, C.identities,
                  {(f, g): h for (g, f), h in C.composition.items()})


def tagged(tag: str, name: str) -> str:
    return f"({tag},{name})"


class Functor:
    def __init__(self, src: FinCat, tgt: FinCat, obj_map: Mapping[str, str], mor_map: Mapping[str, str]):
        self.src = src
        self.tgt = tgt
        self.obj_map = dict(obj_map)
        self.mor_map = dict(mor_map)

    def __call__(self, x: str) -> str:
        """Image of an object."""
        return self.obj_map[x]

    def on_mor(self, m: str) -> str:
        return self.mor_map[m]

    @classmethod
    def identity(cls, C: FinCat) -> "Functor":
        return cls(C, C, {x: x for x in C.objects}, {m: m for m in C.morphisms})

    @classmethod
    def constant(cls, src: FinCat, tgt: FinCat, z: str) -> "Functor":
        return cls(src, tgt, {x: z for x in src.objects}, {m: tgt.identity(z) for m in src.morphisms})

    @classmethod
    def between_posets(cls, src: FinCat, tgt: FinCat, obj_map: Mapping[str, str]) -> "Functor":
        """Functor between poset categories determined by its object map."""
        mor = {}
        for m, (s, t) in src.morphisms.items():
            hs = tgt.hom(obj_map[s], obj_map[t])
            if len(hs) != 1:
                raise CategoryError(f"object map is not monotone at {m}")
            mor[m] = hs[0]
        return cls(src, tgt, obj_map, mor)

    def __matmul__(self, other: "Functor") -> "Functor":
        """``self ∘ other``."""
        return Functor(other.src, self.tgt, {x: self.obj_map[y] for x, y in other.obj_map.items()},
                       {m: self.mor_map[n] for m, n in other.mor_map.items()})

    def __eq__(self, other):
        if not isinstance(other, Functor):
            return NotImplemented
        return (self.src == other.src and self.tgt == other.tgt
                and self.obj_map == other.obj_map and self.mor_map == other.mor_map)

    def __hash__(self):
        return hash(tuple(sorted(self.obj_map.items())))

    def __repr__(self):
        return f"Functor({self.obj_map})"


def validate_functor(F: Functor) -> list[str]:
    out = []
    for x in F.src.objects:
        if F.obj_map.get(x) not in F.tgt.objects:
            out.append(f"object {x} has no valid image")
    for m in F.src.morphisms:
        if F.mor_map.get(m) not in F.tgt.morphisms:
            out.append(f"morphism {m} has no valid image")
    if out:
        return out
    for m, (s, t) in F.src.morphisms.items():
        if F.tgt.morphisms[F.mor_map[m]] != (F.obj_map[s], F.obj_map[t]):
            out.append(f"morphism {m}: endpoints not preserved")
    for x in F.src.objects:
        if F.mor_map[F.src.identity(x)] != F.tgt.identity(F.obj_map[x]):
            out.append(f"identity of {x} not preserved")
    if out:
        return out
    for g, f in F.src.composable_pairs():
        lhs = F.mor_map[F.src.compose(g, f)]
        rhs = F.tgt.compose(F.mor_map[g], F.mor_map[f])
        if lhs != rhs:
            out.append(f"composition not preserved at ({g}, {f})")
    return out


def disjoint_union(cats: Sequence[FinCat], tags: Sequence[str] | None = None
                   ) -> tuple[FinCat, list[Functor]]:
    """Coproduct; object ``x`` of summand ``tag`` becomes ``(tag,x)``."""
    if tags is None:
        tags = [str(i) for i in range(len(cats))]
    if len(set(tags)) != len(tags) or len(tags) != len(cats):
        raise CategoryError("disjoint union needs one distinct tag per summand")
    objects, mors, ids, comp = [], {}, {}, {}
    for tag, C in zip(tags, cats):
        objects.extend(tagged(tag, x) for x in C.objects)
        for m, (s, t) in C.morphisms.items():
            mors[tagged(tag, m)] = (tagged(tag, s), tagged(tag, t))
        for x, i in C.identities.items():
            ids[tagged(tag, x)] = tagged(tag, i)
        for (g, f), h in C.composition.items():
            comp[(tagged(tag, g), tagged(tag, f))] = tagged(tag, h)
    U = FinCat(objects, mors, ids, comp)
    inj = [Functor(C, U, {x: tagged(tag, x) for x in C.objects}, {m: tagged(tag, m) for m in C.morphisms})
           for tag, C in zip(tags, cats)]
    return U, inj


def find_isomorphism(C: FinCat, D: FinCat) -> Functor | None:
    """Brute-force search for an isomorphism ``C -> D`` (small categories only)."""
    if len(C.objects) != len(D.objects) or len(C.morphisms) != len(D.morphisms):
        return None
    cobs = list(C.objects)
    for perm in itertools.permutations(D.objects):
        om = dict(zip(cobs, perm))
        if any(len(C.hom(x, y)) != len(D.hom(om[x], om[y])) for x in cobs for y in cobs):
            continue
        mm = _match_morphisms(C, D, om)
        if mm is not None:
            return Functor(C, D, om, mm)
    return None


def _match_morphisms(C: FinCat, D: FinCat, om: dict) -> dict | None:
    mm = {C.identity(x): D.identity(om[x]) for x in C.objects}
    todo = [m for m in C.morphisms if m not in mm]
    used = set(mm.values())

    def consistent() -> bool:
        for g, f in C.composable_pairs():
            if g in mm and f in mm:
                h = C.compose(g, f)
                if h in mm and mm[h] != D.compose(mm[g], mm[f]):
                    return False
        return True

    def extend(i: int) -> bool:
        if i == len(todo):
            return True
        m = todo[i]
        s, t = C.morphisms[m]
        for cand in D.hom(om[s], om[t]):
            if cand in used:
                continue
            mm[m] = cand
            used.add(cand)
            if consistent() and extend(i + 1):
                return True
            del mm[m]
            used.discard(cand)
        return False

    return dict(mm) if extend(0) else None
