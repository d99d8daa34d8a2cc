"""Seeded generators and independent oracles for the property suites.

Everything here is deterministic given a ``random.Random`` seeded by the
caller.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterator, Sequence

from .chain import ChainComplex, ChainMap, direct_sum, direct_sum_map
from .exactlin import (
    Field,
    Matrix,
    block,
    hstack,
    kernel_basis,
    kron,
    random_invertible,
    rank,
    vstack,
)
from .fincat import FinCat, FinPoset, Functor, from_poset, point, poset_morphism_id
from .groth import (
    BipartiteDiagram,
    BipartiteQuiver,
    GrothCat,
    build_cone,
    build_kronecker,
    build_star,
    delta1_example,
    kronecker_example,
)
from .reflect import TripleCa, TripleCoca, apply_F
from .rep import NatTrans, Representation


def make_rng(seed: int) -> random.Random:
    return random.Random(seed)


# -- complexes -------------------------------------------------------------

@dataclass
class ComplexRecord:
    """How a random complex was assembled before the change of basis."""
    spheres: dict[int, int]
    disks: dict[int, int]  # top degree -> count


def random_complex_with_record(rng: random.Random, field: Field, max_deg: int, max_dim: int,
                               min_deg: int = 0) -> tuple[ChainComplex, ComplexRecord]:
    """Sum of spheres and disks in degrees ``min_deg..max_deg`` (at most
    ``max_dim`` per degree), conjugated by random invertible matrices."""
    cap = {n: max_dim for n in range(min_deg, max_deg + 1)}
    disks, spheres = {}, {}
    for n in range(max_deg, min_deg, -1):
        k = rng.randint(0, min(cap[n], cap[n - 1]))
        if k and rng.random() < 0.5:
            disks[n] = k
            cap[n] -= k
            cap[n - 1] -= k
    for n in range(min_deg, max_deg + 1):
        k = rng.randint(0, cap[n])
        if k:
            spheres[n] = k
    # basis per degree: sphere gens, disk tops (at n), disk bottoms (from n+1)
    dims = {n: spheres.get(n, 0) + disks.get(n, 0) + disks.get(n + 1, 0) for n in cap}
    d = {}
    for n, k in disks.items():
        # d_n: C_n -> C_{n-1}; tops of disks at n sit after spheres at n,
        # bottoms of those disks sit after spheres and tops at n-1
        rows = dims[n - 1]
        cols = dims[n]
        ent = [[field.zero] * cols for _ in range(rows)]
        c0 = spheres.get(n, 0)
        r0 = spheres.get(n - 1, 0) + disks.get(n - 1, 0)
        for i in range(k):
            ent[r0 + i][c0 + i] = field.one
        d[n] = Matrix(field, rows, cols, ent)
    G = {n: random_invertible(field, k, rng) for n, k in dims.items()}
    d2 = {n: G[n - 1][0] @ m @ G[n][1] for n, m in d.items()}
    return ChainComplex(field, dims, d2), ComplexRecord(spheres, disks)


def random_complex(rng: random.Random, max_deg: int, max_dim: int, field: Field) -> ChainComplex:
    return random_complex_with_record(rng, field, max_deg, max_dim)[0]


# -- solution spaces of linear conditions ------------------------------------

class _System:
    """Homogeneous linear conditions ``sum L X_v R = 0`` on matrix unknowns."""

    def __init__(self, field: Field):
        self.field = field
        self.shapes: dict = {}
        self.offsets: dict = {}
        self.ncols = 0
        self.rows: list[tuple] = []

    def unknown(self, key, rows: int, cols: int):
        if rows and cols:
            self.shapes[key] = (rows, cols)
            self.offsets[key] = self.ncols
            self.ncols += rows * cols

    def equation(self, terms: Sequence[tuple[Matrix, object, Matrix]]):
        terms = [(L, v, R) for L, v, R in terms if v in self.shapes]
        if not terms:
            return
        p, q = terms[0][0].rows, terms[0][2].cols
        if p * q == 0:
            return
        z = self.field.zero
        out = [[z] * self.ncols for _ in range(p * q)]
        F = self.field
        for L, v, R in terms:
            K = kron(L, R.T)  # vec(L X R) = (L kron R^T) vec(X), row-major
            off = self.offsets[v]
            for i, row in enumerate(K.entries):
                tgt = out[i]
                for j, c in enumerate(row):
                    if c != 0:
                        tgt[off + j] = F(tgt[off + j] + c)
        self.rows.extend(out)

    def basis(self) -> Matrix:
        if not self.rows:
            return Matrix.identity(self.field, self.ncols)
        # rows written before later unknowns were declared are shorter
        z = self.field.zero
        rows = [r + [z] * (self.ncols - len(r)) for r in self.rows]
        A = Matrix(self.field, len(rows), self.ncols, rows)
        return kernel_basis(A)

    def unpack(self, vec: Sequence) -> dict:
        out = {}
        for key, (r, c) in self.shapes.items():
            off = self.offsets[key]
            out[key] = Matrix(self.field, r, c, [vec[off + i * c: off + (i + 1) * c] for i in range(r)])
        return out

    def sample(self, rng: random.Random) -> dict:
        K = self.basis()
        F = self.field
        coeffs = [F.random(rng) for _ in range(K.cols)]
        vec = [F(sum((K.entries[i][j] * coeffs[j] for j in range(K.cols)), F.zero)) for i in range(K.rows)]
        return self.unpack(vec)


def _chain_map_system(A: ChainComplex, B: ChainComplex, key=None, S: _System | None = None) -> _System:
    S = S or _System(A.field)
    for n in A.dims:
        S.unknown((key, n), B.dim(n), A.dim(n))
    degs = sorted(set(A.dims) | set(B.dims) | {n + 1 for n in A.dims})
    for n in degs:
        # d_B X_n - X_{n-1} d_A = 0
        S.equation([(B.diff(n), (key, n), Matrix.identity(A.field, A.dim(n))),
                    (-Matrix.identity(A.field, B.dim(n - 1)), (key, n - 1), A.diff(n))])
    return S


def random_chain_map(rng: random.Random, A: ChainComplex, B: ChainComplex) -> ChainMap:
    """Uniform sample from the space of chain maps ``A -> B``."""
    S = _chain_map_system(A, B)
    sol = S.sample(rng)
    return ChainMap(A, B, {n: sol[(None, n)] for n in A.dims if (None, n) in sol})


def _nat_system(M: Representation, N: Representation) -> _System:
    F = M.field
    S = _System(F)
    for x in M.shape.objects:
        _chain_map_system(M.at[x], N.at[x], x, S)
    for h, (s, t) in M.shape.morphisms.items():
        if M.shape.is_identity(h):
            continue
        for n in M.at[s].dims:
            # N(h) X_s - X_t M(h) = 0 in degree n
            S.equation([(N.on[h].comp(n), (s, n), Matrix.identity(F, M.at[s].dim(n))),
                        (-Matrix.identity(F, N.at[t].dim(n)), (t, n), M.on[h].comp(n))])
    return S


def _nat_from_solution(M, N, sol) -> NatTrans:
    comps = {}
    for x in M.shape.objects:
        comps[x] = ChainMap(M.at[x], N.at[x], {n: sol[(x, n)] for n in M.at[x].dims if (x, n) in sol})
    return NatTrans(M, N, comps)


def random_nat(rng: random.Random, M: Representation, N: Representation) -> NatTrans:
    """Uniform sample from the solution space of the naturality system."""
    return _nat_from_solution(M, N, _nat_system(M, N).sample(rng))


def nat_space_dim(M: Representation, N: Representation) -> int:
    return _nat_system(M, N).basis().cols


# -- representations ---------------------------------------------------------

@dataclass
class Bounds:
    max_deg: int = 1
    max_dim: int = 1
    # probability that an object seeds a projective/injective summand
    density: float = 0.6
    # cap on the total dimension (all degrees) at any object
    max_total: int = 6


def random_rep(rng: random.Random, shape: FinCat, field: Field, bounds: Bounds) -> Representation:
    """Twisted sum of projective and injective families, conjugated by random isos.

    A projective family seeded at ``z`` with complex ``C`` has ``C`` once per
    morphism ``z -> y`` at ``y``; an injective one has ``C`` once per
    morphism ``y -> z``.  Both are strictly functorial for any finite category.
    """
    summands = []  # (kind, z, C)
    for z in shape.objects:
        if rng.random() < bounds.density:
            C = random_complex(rng, bounds.max_deg, bounds.max_dim, field)
            if not C.is_zero():
                summands.append(("P" if rng.random() < 0.5 else "I", z, C))
    # basis at y: list of (summand index, morphism)
    gens: dict[str, list[tuple[int, str]]] = {}
    for y in shape.objects:
        g = []
        for i, (kind, z, C) in enumerate(summands):
            ms = shape.hom(z, y) if kind == "P" else shape.hom(y, z)
            g.extend((i, m) for m in ms)
        gens[y] = g
    # keep the representation small
    while summands and max((sum(summands[i][2].total_dim() for i, _ in gens[y]) for y in shape.objects),
                           default=0) > bounds.max_total:
        drop = len(summands) - 1
        summands.pop()
        for y in shape.objects:
            gens[y] = [(i, m) for i, m in gens[y] if i != drop]
    at, plain = {}, {}
    for y in shape.objects:
        parts = [summands[i][2] for i, _ in gens[y]]
        plain[y] = direct_sum(parts, field)[0]
    on = {}
    for h, (s, t) in shape.morphisms.items():
        blocks = []
        for (j, mt) in gens[t]:
            row = []
            for (i, ms) in gens[s]:
                kind = summands[i][0]
                hit = i == j and ((kind == "P" and shape.compose(h, ms) == mt)
                                  or (kind == "I" and shape.compose(mt, h) == ms))
                row.append(hit)
            blocks.append(row)
        comps = {}
        for n in plain[s].dims:
            if not plain[t].dim(n):
                continue
            rd = [summands[j][2].dim(n) for j, _ in gens[t]]
            cd = [summands[i][2].dim(n) for i, _ in gens[s]]
            bl = [[Matrix.identity(field, cd[c]) if blocks[r][c] else None for c in range(len(cd))]
                  for r in range(len(rd))]
            comps[n] = block(field, bl, rd, cd)
        on[h] = ChainMap(plain[s], plain[t], comps)
    # conjugate by random automorphisms degreewise
    G = {y: {n: random_invertible(field, k, rng) for n, k in plain[y].dims.items()} for y in shape.objects}
    for y in shape.objects:
        C = plain[y]
        at[y] = ChainComplex(field, C.dims, {n: G[y][n - 1][0] @ C.diff(n) @ G[y][n][1]
                                             for n in C.dims if C.dim(n - 1)})
    on2 = {}
    for h, (s, t) in shape.morphisms.items():
        f = on[h]
        on2[h] = ChainMap(at[s], at[t], {n: G[t][n][0] @ f.comp(n) @ G[s][n][1]
                                         for n in at[s].dims if at[t].dim(n)})
    return Representation(shape, field, at, on2)


def rep_sum(M: Representation, N: Representation) -> Representation:
    """Objectwise direct sum ``M ⊕ N`` with block-diagonal maps."""
    at = {x: direct_sum([M.at[x], N.at[x]], M.field)[0] for x in M.shape.objects}
    on = {m: direct_sum_map([M.on[m], N.on[m]], at[s], at[t])
          for m, (s, t) in M.shape.morphisms.items()}
    return Representation(M.shape, M.field, at, on)


def random_triple(rng: random.Random, D: BipartiteDiagram, field: Field, bounds: Bounds,
                  variant: str = "ca") -> TripleCa | TripleCoca:
    X = D.left_union()[0]
    Y = D.right_union()[0]
    b = random_rep(rng, Y, field, bounds)
    a = random_rep(rng, X, field, bounds)
    Fb = apply_F(D, b)
    # half the time glue a copy of F(b) onto a so the space of maps is nonzero
    if rng.random() < 0.5:
        a = rep_sum(a, Fb)
    if variant == "ca":
        return TripleCa(D, b, a, random_nat(rng, a, Fb))
    return TripleCoca(D, b, a, random_nat(rng, Fb, a))


# -- fixture diagrams ---------------------------------------------------------

def kronecker_category() -> FinCat:
    """Two objects ``p``, ``q`` and two parallel arrows ``u, v: p -> q``."""
    return FinCat(["p", "q"], {"id_p": ("p", "p"), "id_q": ("q", "q"), "u": ("p", "q"), "v": ("p", "q")},
                  {"p": "id_p", "q": "id_q"}, {})


def fixture_diagrams() -> dict[str, BipartiteDiagram]:
    """Small diagrams covering stars, cones, parallel arrows, several
    vertices and a non-poset value."""
    C2 = from_poset(FinPoset.chain(2))
    C3 = from_poset(FinPoset.chain(3))
    V = from_poset(FinPoset.from_covers(["a", "b", "c"], [("a", "b"), ("a", "c")]))
    A3 = from_poset(FinPoset.antichain(["a", "b", "c"]))
    K = kronecker_category()
    pt = point()
    multi = BipartiteDiagram(
        BipartiteQuiver(["l1", "l2"], ["r1", "r2"],
                        {"s": ("l1", "r1"), "t": ("l1", "r2"), "u": ("l2", "r2")}),
        {"l1": C2, "l2": pt, "r1": C3, "r2": C2},
        {"s": Functor.between_posets(C2, C3, {"0": "1", "1": "2"}),
         "t": Functor.between_posets(C2, C2, {"0": "0", "1": "0"}),
         "u": Functor.constant(pt, C2, "1")})
    return {
        "kronecker": kronecker_example(),
        "delta1": delta1_example(),
        "a2": build_star(pt, ["*"]),
        "d4": build_star(A3, ["a", "b", "c"]),
        "cone-v": build_cone(V),
        "multi": multi,
        "table": build_kronecker(pt, K, [Functor.constant(pt, K, "p"), Functor.constant(pt, K, "q")]),
        "kron-table": build_kronecker(C2, K, [Functor(C2, K, {"0": "p", "1": "q"},
                                                      {"0<=0": "id_p", "1<=1": "id_q", "0<=1": "u"}),
                                              Functor(C2, K, {"0": "p", "1": "q"},
                                                      {"0<=0": "id_p", "1<=1": "id_q", "0<=1": "v"})]),
    }


# -- classical reflections ---------------------------------------------------

class NotDegreeZero(ValueError):
    pass


@dataclass
class ClassicalReflection:
    dim: int
    # source case: maps M_{y_i} -> new space; sink case: new space -> M_{y_i}
    legs: list[Matrix]


def _degree_zero_dim(C: ChainComplex) -> int:
    if any(n != 0 for n in C.dims):
        raise NotDegreeZero(f"complex with support {sorted(C.dims)} is not concentrated in degree 0")
    return C.dim(0)


def classical_source_reflection(field: Field, legs: Sequence[Matrix], dim_y: int) -> ClassicalReflection:
    """Cokernel of ``M_y -> direct sum M_{y_i}`` with the induced maps."""
    N = [A.rows for A in legs]
    S = vstack(field, legs, dim_y)
    # rows of Pr span the annihilator of im S, so Pr is onto the cokernel
    Pr = kernel_basis(S.T).T
    out, off = [], 0
    for n in N:
        out.append(Pr.submatrix(0, Pr.rows, off, off + n))
        off += n
    return ClassicalReflection(Pr.rows, out)


def classical_sink_reflection(field: Field, legs: Sequence[Matrix], dim_y: int) -> ClassicalReflection:
    """Kernel of ``direct sum M_{y_i} -> M_y`` with its components."""
    N = [B.cols for B in legs]
    T = hstack(field, legs, dim_y)
    K = kernel_basis(T)
    out, off = [], 0
    for n in N:
        out.append(K.submatrix(off, off + n, 0, K.cols))
        off += n
    return ClassicalReflection(K.cols, out)


def classical_bgp_oracle(G: GrothCat, M: Representation) -> ClassicalReflection:
    """Classical reflection at the adjoined vertex of a star diagram.

    ``G`` is the covariant (source case) or contravariant (sink case)
    construction of ``build_star``; ``M`` must live in degree 0.
    """
    D = G.diagram
    if D.values["0"].objects != ("*",):
        raise ValueError("star diagrams have a point on the left")
    for C in M.at.values():
        _degree_zero_dim(C)
        if any(not C.diff(n).is_zero() for n in C.dims):
            raise NotDegreeZero("nonzero differential")
    F = M.field
    y = "(0,*)"
    legs = [M.on[G.kappa[(a, "*")]].comp(0) for a in D.quiver.arrows]
    if G.variant == "cov":
        return classical_source_reflection(F, legs, M.at[y].dim(0))
    return classical_sink_reflection(F, legs, M.at[y].dim(0))


def star_rep(G: GrothCat, m: int, ns: list[int], legs: list[Matrix], field: Field | None = None
             ) -> Representation:
    """Degree-0 representation of a star construction from its legs.

    Works for the covariant (legs ``M_y -> M_{y_i}``) and contravariant
    (legs ``M_{y_i} -> M_y``) variants.
    """
    F = field or legs[0].field
    D = G.diagram
    arms = D.values["1"].objects
    at = {"(0,*)": ChainComplex(F, {0: m})}
    for y, n in zip(arms, ns):
        at[f"(1,{y})"] = ChainComplex(F, {0: n})
    on = {}
    for i, a in enumerate(D.quiver.arrows):
        k = G.kappa[(a, "*")]
        s, t = G.cat.morphisms[k]
        on[k] = ChainMap(at[s], at[t], {0: legs[i]})
    return Representation(G.cat, F, at, on)


def enumerate_star_reps(field: Field, d: int, max_dim: int, rng: random.Random, per_vector: int,
                        injective: bool = True) -> Iterator[tuple[int, list[int], list[Matrix]]]:
    """Degree-0 data ``(dim_y, dims_i, legs)`` for a source with ``d`` arms.

    Every dimension vector with entries ``<= max_dim`` for which an injective
    (resp. surjective) assembled map exists is visited; for each, ``per_vector``
    seeded random maps with that property are produced.
    """
    for dims in itertools.product(range(max_dim + 1), repeat=d + 1):
        m, ns = dims[0], list(dims[1:])
        if injective and m > sum(ns) or not injective and m < sum(ns):
            continue
        made = 0
        while made < per_vector:
            if injective:
                legs = [Matrix(field, n, m, [[field.random(rng) for _ in range(m)] for _ in range(n)]) for n in ns]
                S = vstack(field, legs, m)
                ok = rank(S) == m
            else:
                legs = [Matrix(field, m, n, [[field.random(rng) for _ in range(n)] for _ in range(m)]) for n in ns]
                S = hstack(field, legs, m)
                ok = rank(S) == m
            if ok:
                made += 1
                yield m, ns, legs


# -- exhaustive small diagrams -----------------------------------------------

@dataclass(frozen=True)
class Limits:
    max_left: int = 4
    max_right: int = 4
    max_arrows: int = 3
    min_size: int = 0


def _labeled_posets(n: int) -> list[frozenset]:
    """All partial orders on ``range(n)``, as sets of strict pairs."""
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    out = []
    for bits in range(1 << len(pairs)):
        rel = {p for k, p in enumerate(pairs) if bits >> k & 1}
        if any((j, i) in rel for i, j in rel):
            continue
        if all((a, c) in rel for a, b in rel for b2, c in rel if b == b2 and a != c):
            out.append(frozenset(rel))
    return out


def _relabel(rel, perm) -> frozenset:
    return frozenset((perm[a], perm[b]) for a, b in rel)


def poset_iso_classes(n: int) -> list[frozenset]:
    """One natural-labelled representative (``i < j`` whenever ``i`` below ``j``) per class."""
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    reps, seen = [], set()
    for bits in range(1 << len(pairs)):
        rel = frozenset(p for k, p in enumerate(pairs) if bits >> k & 1)
        if not all((a, c) in rel for a, b in rel for b2, c in rel if b == b2):
            continue
        key = min(tuple(sorted(_relabel(rel, p))) for p in itertools.permutations(range(n)))
        if key not in seen:
            seen.add(key)
            reps.append(rel)
    return reps


def _automorphisms(n: int, rel) -> list[tuple]:
    return [p for p in itertools.permutations(range(n)) if _relabel(rel, p) == rel]


def _monotone_maps(nx, relx, ny, rely) -> list[tuple]:
    return [m for m in itertools.product(range(ny), repeat=nx)
            if all(m[a] == m[b] or (m[a], m[b]) in rely for a, b in relx)]


def _poset_cat(n: int, rel) -> FinCat:
    obs = [str(i) for i in range(n)]
    return from_poset(FinPoset(obs, [(str(a), str(b)) for a, b in rel]))


def _canonical_multiset(maps: tuple, auts_x, auts_y) -> tuple:
    best = None
    for s in auts_x:
        inv = [0] * len(s)
        for i, j in enumerate(s):
            inv[j] = i
        for t in auts_y:
            # relabel: m'(s(i)) = t(m(i))
            cand = tuple(sorted(tuple(t[m[inv[k]]] for k in range(len(s))) for m in maps))
            if best is None or cand < best:
                best = cand
    return best


def enumerate_small_diagrams(limits: Limits) -> Iterator[BipartiteDiagram]:
    """All diagrams ``X => Y`` of posets within ``limits``, one per isomorphism
    class (relabelling objects of ``X`` and ``Y``; arrows form a multiset)."""
    for nx, ny, relx, rely, maps in _enumerate_raw(limits):
        yield _diagram_from_maps(nx, relx, ny, rely, maps)


def enumerate_limit_union(limits: Sequence[Limits]) -> Iterator[BipartiteDiagram]:
    """Each diagram within at least one of ``limits``, exactly once."""
    def inside(lim, nx, ny, d):
        return (lim.min_size <= min(nx, ny) and nx <= lim.max_left and ny <= lim.max_right
                and d <= lim.max_arrows)

    for i, lim in enumerate(limits):
        for nx, ny, relx, rely, maps in _enumerate_raw(lim):
            if not any(inside(prev, nx, ny, len(maps)) for prev in limits[:i]):
                yield _diagram_from_maps(nx, relx, ny, rely, maps)


def _enumerate_raw(limits: Limits):
    classes = {n: poset_iso_classes(n) for n in range(limits.min_size, max(limits.max_left, limits.max_right) + 1)}
    for nx in range(limits.min_size, limits.max_left + 1):
        for relx in classes[nx]:
            ax = _automorphisms(nx, relx)
            for ny in range(limits.min_size, limits.max_right + 1):
                for rely in classes[ny]:
                    ay = _automorphisms(ny, rely)
                    mono = _monotone_maps(nx, relx, ny, rely)
                    for d in range(limits.max_arrows + 1):
                        for maps in itertools.combinations_with_replacement(mono, d):
                            if _canonical_multiset(maps, ax, ay) == tuple(sorted(maps)):
                                yield nx, ny, relx, rely, maps


_CAT_CACHE: dict = {}


def _cached_cat(n, rel) -> FinCat:
    key = (n, rel)
    if key not in _CAT_CACHE:
        _CAT_CACHE[key] = _poset_cat(n, rel)
    return _CAT_CACHE[key]


def _diagram_from_maps(nx, relx, ny, rely, maps) -> BipartiteDiagram:
    X = _cached_cat(nx, relx)
    Y = _cached_cat(ny, rely)
    fs = []
    for m in maps:
        om = {str(i): str(m[i]) for i in range(nx)}
        mm = {poset_morphism_id(a, b): poset_morphism_id(om[a], om[b]) for a, b in X.morphisms.values()}
        fs.append(Functor(X, Y, om, mm))
    arrows = {f"f{i + 1}": ("0", "1") for i in range(len(fs))}
    return BipartiteDiagram(BipartiteQuiver(["0"], ["1"], arrows), {"0": X, "1": Y},
                            {f"f{i + 1}": f for i, f in enumerate(fs)})


def count_small_diagrams(limits: Limits) -> int:
    return sum(1 for _ in _enumerate_raw(limits))


def recount_small_diagrams(limits: Limits) -> int:
    """Independent count: all labelled posets and maps, classes found by
    relabelling with every permutation of both object sets."""
    seen = set()
    for nx in range(limits.min_size, limits.max_left + 1):
        for ny in range(limits.min_size, limits.max_right + 1):
            for relx in _labeled_posets(nx):
                for rely in _labeled_posets(ny):
                    mono = [m for m in itertools.product(range(ny), repeat=nx)
                            if all((m[a], m[b]) in rely or m[a] == m[b] for a, b in relx)]
                    for d in range(limits.max_arrows + 1):
                        for maps in itertools.combinations_with_replacement(mono, d):
                            keys = []
                            for s in itertools.permutations(range(nx)):
                                for t in itertools.permutations(range(ny)):
                                    rx = tuple(sorted(_relabel(relx, s)))
                                    ry = tuple(sorted(_relabel(rely, t)))
                                    inv = [0] * nx
                                    for i, j in enumerate(s):
                                        inv[j] = i
                                    ms = tuple(sorted(tuple(t[m[inv[k]]] for k in range(nx)) for m in maps))
                                    keys.append((nx, ny, rx, ry, ms))
                            seen.add(min(keys))
    return len(seen)
