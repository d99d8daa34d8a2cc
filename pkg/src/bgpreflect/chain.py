"""Bounded chain complexes over an exact field.

Homological convention: ``d_n`` maps degree ``n`` to degree ``n - 1`` and is
stored as a ``dim(n-1) x dim(n)`` matrix.  Degrees of dimension zero are never
stored, so two complexes are equal iff their dimensions and all
differentials agree.
"""
from __future__ import annotations

from contextlib import contextmanager
from typing import Mapping, Sequence

from .exactlin import (
    DimensionMismatch,
    Field,
    FieldMismatch,
    Matrix,
    block,
    block_diag,
    image_basis,
    kernel_basis,
    rank,
)

# sign in front of -d_A in the cone differential; flipped only by the
# corruption hook used to exercise self-checks
_CONE_SIGN = -1


@contextmanager
def corrupted_cone_sign():
    """Temporarily use the wrong sign in :func:`cone` (test hook)."""
    global _CONE_SIGN
    old = _CONE_SIGN
    _CONE_SIGN = 1
    try:
        yield
    finally:
        _CONE_SIGN = old


class ChainComplex:
    __slots__ = ("field", "dims", "_d")

    def __init__(self, field: Field, dims: Mapping[int, int], d: Mapping[int, Matrix] | None = None):
        self.field = field
        self.dims = {int(n): int(k) for n, k in sorted(dims.items()) if k}
        # zero matrices are not stored; diff() reconstructs them
        self._d = {}
        for n, m in (d or {}).items():
            n = int(n)
            if m.field != field:
                raise FieldMismatch(f"differential d_{n} over {m.field}, complex over {field}")
            if not m.is_zero() or m.shape != (self.dim(n - 1), self.dim(n)):
                self._d[n] = m

    @classmethod
    def zero(cls, field: Field) -> "ChainComplex":
        return cls(field, {})

    def dim(self, n: int) -> int:
        return self.dims.get(n, 0)

    def diff(self, n: int) -> Matrix:
        m = self._d.get(n)
        if m is None:
            return Matrix.zeros(self.field, self.dim(n - 1), self.dim(n))
        return m

    @property
    def degrees(self) -> list[int]:
        return list(self.dims)

    def degree_range(self) -> range:
        """Degrees ``n`` for which ``d_n`` may be nonzero, plus the support."""
        if not self.dims and not self._d:
            return range(0)
        lo = min([*self.dims, *(n - 1 for n in self._d)])
        hi = max([*self.dims, *self._d])
        return range(lo, hi + 2)

    def is_zero(self) -> bool:
        return not self.dims

    def total_dim(self) -> int:
        return sum(self.dims.values())

    def __eq__(self, other):
        if not isinstance(other, ChainComplex):
            return NotImplemented
        return (self.field == other.field and self.dims == other.dims
                and self._d.keys() == other._d.keys()
                and all(self._d[n] == other._d[n] for n in self._d))

    def __hash__(self):
        return hash((self.field, tuple(self.dims.items())))

    def __repr__(self):
        return f"ChainComplex({self.field}, dims={self.dims})"


def sphere(field: Field, n: int, k: int = 1) -> ChainComplex:
    """``k``-dimensional space concentrated in degree ``n``."""
    return ChainComplex(field, {n: k})


def disk(field: Field, n: int, k: int = 1) -> ChainComplex:
    """``k^k`` in degrees ``n`` and ``n-1`` joined by the identity."""
    return ChainComplex(field, {n: k, n - 1: k}, {n: Matrix.identity(field, k)})


def validate_complex(C: ChainComplex) -> list[tuple[int, str]]:
    """Violations as ``(degree, reason)``; empty when ``C`` is a valid complex."""
    out = []
    for n, m in sorted(C._d.items()):
        want = (C.dim(n - 1), C.dim(n))
        if m.shape != want:
            out.append((n, f"d_{n} has shape {m.shape}, expected {want}"))
    if out:
        return out
    for n in C.degree_range():
        if C.dim(n) and C.dim(n - 2):
            if not (C.diff(n - 1) @ C.diff(n)).is_zero():
                out.append((n, f"d_{n - 1} d_{n} != 0"))
    return out


class ChainMap:
    __slots__ = ("src", "tgt", "_c")

    def __init__(self, src: ChainComplex, tgt: ChainComplex, components: Mapping[int, Matrix] | None = None):
        if src.field != tgt.field:
            raise FieldMismatch(f"{src.field} vs {tgt.field}")
        self.src = src
        self.tgt = tgt
        self._c = {}
        for n, m in (components or {}).items():
            n = int(n)
            if m.field != src.field:
                raise FieldMismatch(f"component {n} over {m.field}")
            if not m.is_zero() or m.shape != (tgt.dim(n), src.dim(n)):
                self._c[n] = m

    @property
    def field(self) -> Field:
        return self.src.field

    def comp(self, n: int) -> Matrix:
        m = self._c.get(n)
        if m is None:
            return Matrix.zeros(self.field, self.tgt.dim(n), self.src.dim(n))
        return m

    def degrees(self) -> list[int]:
        return sorted(set(self.src.dims) | set(self.tgt.dims) | set(self._c))

    @classmethod
    def identity(cls, C: ChainComplex) -> "ChainMap":
        return cls(C, C, {n: Matrix.identity(C.field, k) for n, k in C.dims.items()})

    @classmethod
    def zero(cls, A: ChainComplex, B: ChainComplex) -> "ChainMap":
        return cls(A, B)

    def __matmul__(self, other: "ChainMap") -> "ChainMap":
        """``self ∘ other``."""
        if other.tgt is not self.src and other.tgt != self.src:
            raise DimensionMismatch("composing chain maps with mismatched complexes")
        return ChainMap(other.src, self.tgt,
                        {n: self.comp(n) @ other.comp(n) for n in other.src.dims if self.tgt.dim(n)})

    def __add__(self, other: "ChainMap") -> "ChainMap":
        if self.src != other.src or self.tgt != other.tgt:
            raise DimensionMismatch("adding chain maps with different endpoints")
        return ChainMap(self.src, self.tgt, {n: self.comp(n) + other.comp(n) for n in self.src.dims})

    def __neg__(self) -> "ChainMap":
        return ChainMap(self.src, self.tgt, {n: -m for n, m in self._c.items()})

    def __sub__(self, other: "ChainMap") -> "ChainMap":
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, ChainMap):
            return NotImplemented
        return (self.src == other.src and self.tgt == other.tgt
                and all(self.comp(n) == other.comp(n) for n in self.degrees()))

    def __hash__(self):
        return hash((self.src, self.tgt))

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self._c.values())

    def __repr__(self):
        return f"ChainMap({self.src!r} -> {self.tgt!r})"


def validate_chain_map(f: ChainMap) -> list[tuple[int, str]]:
    out = []
    for n, m in sorted(f._c.items()):
        want = (f.tgt.dim(n), f.src.dim(n))
        if m.shape != want:
            out.append((n, f"component {n} has shape {m.shape}, expected {want}"))
    if out:
        return out
    for n in sorted(set(f.src.degree_range()) | set(f.tgt.degree_range())):
        if f.src.dim(n) and f.tgt.dim(n - 1):
            if f.tgt.diff(n) @ f.comp(n) != f.comp(n - 1) @ f.src.diff(n):
                out.append((n, f"d f_{n} != f_{n - 1} d"))
    return out


def shift(C: ChainComplex, k: int) -> ChainComplex:
    """``C[k]_n = C_{n-k}`` with differential multiplied by ``(-1)^k``."""
    sign = -1 if k % 2 else 1
    return ChainComplex(C.field, {n + k: v for n, v in C.dims.items()},
                        {n + k: (m if sign == 1 else -m) for n, m in C._d.items()})


def shift_map(f: ChainMap, k: int) -> ChainMap:
    return ChainMap(shift(f.src, k), shift(f.tgt, k), {n + k: m for n, m in f._c.items()})


def cone(phi: ChainMap) -> tuple[ChainComplex, ChainMap, ChainMap]:
    """Mapping cone of ``phi: A -> B``.

    ``C_n = A_{n-1} + B_n`` with ``d(a, b) = (-d a, phi(a) + d b)``.  Returns
    ``(C, iota: B -> C, pi: C -> A[1])``.
    """
    A, B = phi.src, phi.tgt
    F = A.field
    degs = sorted({n + 1 for n in A.dims} | set(B.dims))
    dims = {n: A.dim(n - 1) + B.dim(n) for n in degs}
    d = {}
    for n in degs:
        if dims.get(n - 1, 0) == 0:
            continue
        rd = [A.dim(n - 2), B.dim(n - 1)]
        cd = [A.dim(n - 1), B.dim(n)]
        dA = A.diff(n - 1)
        d[n] = block(F, [[dA if _CONE_SIGN == 1 else -dA, None],
                         [phi.comp(n - 1), B.diff(n)]], rd, cd)
    C = ChainComplex(F, dims, d)
    iota = ChainMap(B, C, {n: block(F, [[None], [Matrix.identity(F, B.dim(n))]],
                                    [A.dim(n - 1), B.dim(n)], [B.dim(n)]) for n in B.dims})
    A1 = shift(A, 1)
    pi = ChainMap(C, A1, {n: block(F, [[Matrix.identity(F, A.dim(n - 1)), None]],
                                   [A.dim(n - 1)], [A.dim(n - 1), B.dim(n)]) for n in A1.dims})
    return C, iota, pi


def fib(psi: ChainMap) -> tuple[ChainComplex, ChainMap, ChainMap]:
    """Fibre of ``psi: A -> B``, equal to ``shift(cone(psi), -1)``.

    ``C_n = A_n + B_{n+1}`` with ``d(a, b) = (d a, -psi(a) - d b)``.  Returns
    ``(C, pi: C -> A, incl: B[-1] -> C)``.
    """
    A, B = psi.src, psi.tgt
    F = A.field
    degs = sorted(set(A.dims) | {n - 1 for n in B.dims})
    dims = {n: A.dim(n) + B.dim(n + 1) for n in degs}
    d = {}
    for n in degs:
        if dims.get(n - 1, 0) == 0:
            continue
        dA = A.diff(n)
        d[n] = block(F, [[dA if _CONE_SIGN == -1 else -dA, None],
                         [-psi.comp(n), -B.diff(n + 1)]],
                     [A.dim(n - 1), B.dim(n)], [A.dim(n), B.dim(n + 1)])
    C = ChainComplex(F, dims, d)
    pi = ChainMap(C, A, {n: block(F, [[Matrix.identity(F, A.dim(n)), None]],
                                  [A.dim(n)], [A.dim(n), B.dim(n + 1)]) for n in A.dims})
    Bm = shift(B, -1)
    incl = ChainMap(Bm, C, {n: block(F, [[None], [Matrix.identity(F, B.dim(n + 1))]],
                                     [A.dim(n), B.dim(n + 1)], [B.dim(n + 1)]) for n in Bm.dims})
    return C, pi, incl


def direct_sum(Cs: Sequence[ChainComplex], field: Field | None = None
               ) -> tuple[ChainComplex, list[ChainMap], list[ChainMap]]:
    """Degreewise block sum with canonical injections and projections."""
    if not Cs:
        if field is None:
            raise ValueError("empty direct sum needs an explicit field")
        return ChainComplex.zero(field), [], []
    F = Cs[0].field
    if field is not None and field != F or any(C.field != F for C in Cs):
        raise FieldMismatch("direct sum over mixed fields")
    degs = sorted(set().union(*(C.dims for C in Cs)))
    dims = {n: sum(C.dim(n) for C in Cs) for n in degs}
    d = {n: block_diag(F, [C.diff(n) for C in Cs]) for n in degs if dims.get(n - 1)}
    S = ChainComplex(F, dims, d)
    inj, proj = [], []
    for i, C in enumerate(Cs):
        inj.append(ChainMap(C, S, {n: block(F, [[Matrix.identity(F, C.dim(n)) if j == i else None]
                                                for j in range(len(Cs))],
                                            [D.dim(n) for D in Cs], [C.dim(n)]) for n in C.dims}))
        proj.append(ChainMap(S, C, {n: block(F, [[Matrix.identity(F, C.dim(n)) if j == i else None
                                                  for j in range(len(Cs))]],
                                             [C.dim(n)], [D.dim(n) for D in Cs]) for n in C.dims}))
    return S, inj, proj


def direct_sum_map(fs: Sequence[ChainMap], src: ChainComplex, tgt: ChainComplex) -> ChainMap:
    """Block-diagonal map between sums whose summands are ``f.src`` / ``f.tgt``."""
    F = src.field
    comps = {}
    for n in src.dims:
        if tgt.dim(n):
            comps[n] = block_diag(F, [f.comp(n) for f in fs])
    return ChainMap(src, tgt, comps)


def cone_map(f: ChainMap, g: ChainMap, C: ChainComplex, C2: ChainComplex) -> ChainMap:
    """Map ``C = cone(phi) -> C2 = cone(phi2)`` induced by a commuting square
    ``g ∘ phi = phi2 ∘ f``; blockwise ``diag(f_{n-1}, g_n)``."""
    F = C.field
    comps = {}
    for n in C.dims:
        if C2.dim(n):
            comps[n] = block(F, [[f.comp(n - 1), None], [None, g.comp(n)]],
                             [f.tgt.dim(n - 1), g.tgt.dim(n)], [f.src.dim(n - 1), g.src.dim(n)])
    return ChainMap(C, C2, comps)


def fib_map(f: ChainMap, g: ChainMap, C: ChainComplex, C2: ChainComplex) -> ChainMap:
    """Map ``C = fib(psi) -> C2 = fib(psi2)`` induced by ``g ∘ psi = psi2 ∘ f``;
    blockwise ``diag(f_n, g_{n+1})``."""
    F = C.field
    comps = {}
    for n in C.dims:
        if C2.dim(n):
            comps[n] = block(F, [[f.comp(n), None], [None, g.comp(n + 1)]],
                             [f.tgt.dim(n), g.tgt.dim(n + 1)], [f.src.dim(n), g.src.dim(n + 1)])
    return ChainMap(C, C2, comps)


def homology(C: ChainComplex, n: int) -> int:
    return C.dim(n) - rank(C.diff(n)) - rank(C.diff(n + 1))


def homology_dims(C: ChainComplex) -> dict[int, int]:
    """Nonzero homology dimensions by degree."""
    out = {}
    for n in C.dims:
        h = homology(C, n)
        if h:
            out[n] = h
    return out


def cycles_basis(C: ChainComplex, n: int) -> Matrix:
    return kernel_basis(C.diff(n))


def boundaries_basis(C: ChainComplex, n: int) -> Matrix:
    return image_basis(C.diff(n + 1))


def is_acyclic(C: ChainComplex) -> bool:
    return all(homology(C, n) == 0 for n in C.dims)


def is_quasi_iso(phi: ChainMap) -> bool:
    """True iff the cone of ``phi`` is acyclic."""
    return is_acyclic(cone(phi)[0])


def induced_on_homology_is_iso(phi: ChainMap) -> bool:
    """Independent criterion: ``H_n(phi)`` bijective for all ``n``.

    Image dimension of ``H_n(phi)`` is ``rank[phi Z_n(A) | B_n(B)] - rank B_n(B)``.
    """
    A, B = phi.src, phi.tgt
    F = A.field
    for n in sorted(set(A.dims) | set(B.dims)):
        ha, hb = homology(A, n), homology(B, n)
        if ha != hb:
            return False
        if ha == 0:
            continue
        Z = cycles_basis(A, n)
        bd = boundaries_basis(B, n)
        img = phi.comp(n) @ Z
        both = block(F, [[img, bd]], [B.dim(n)], [img.cols, bd.cols])
        if rank(both) - bd.cols != ha:
            return False
    return True


def euler_char(C: ChainComplex) -> int:
    return sum(-k if n % 2 else k for n, k in C.dims.items())
