"""JSON documents for fields, complexes, categories, diagrams, representations
and triples.

Conventions: fields are ``{"type": "fp", "p": 5}`` or ``{"type": "q"}``;
rational entries are ``"num/den"`` strings; complexes are
``{"dims": {deg: dim}, "d": {deg: matrix}}`` with row-major nested lists;
posets are given by objects and covers; categories by objects, morphisms and
composition triples ``[g, f, g∘f]``.  Representations over a poset shape list
maps for covering relations only.
"""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .chain import ChainComplex, ChainMap
from .exactlin import Field, Matrix
from .fincat import FinCat, FinPoset, Functor, from_poset, is_poset, poset_morphism_id, to_poset
from .groth import BipartiteDiagram, BipartiteQuiver, GrothCat, groth
from .reflect import TripleCa, TripleCoca
from .rep import NatTrans, Representation, complete_from_covers

SCHEMA_VERSION = 1


class InputError(ValueError):
    """Malformed or inconsistent input document."""


def _need(doc: dict, key: str, where: str):
    if not isinstance(doc, dict) or key not in doc:
        raise InputError(f"{where}: missing key {key!r}")
    return doc[key]


# -- scalars and matrices ----------------------------------------------------

def field_to_json(F: Field) -> dict:
    return {"type": "fp", "p": F.p} if F.kind == "fp" else {"type": "q"}


def field_from_json(doc: Any) -> Field:
    try:
        if doc["type"] == "fp":
            return Field.gf(int(doc["p"]))
        if doc["type"] == "q":
            return Field.rationals()
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"bad field description {doc!r}: {e}") from None
    raise InputError(f"bad field description {doc!r}")


def scalar_to_json(F: Field, x):
    if F.kind == "fp":
        return int(x)
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def matrix_to_json(M: Matrix) -> list:
    return [[scalar_to_json(M.field, x) for x in row] for row in M.entries]


def matrix_from_json(F: Field, doc: Any, rows: int, cols: int, where: str) -> Matrix:
    if not isinstance(doc, list) or len(doc) != rows or any(not isinstance(r, list) or len(r) != cols for r in doc):
        raise InputError(f"{where}: expected a {rows}x{cols} matrix")
    try:
        return Matrix(F, rows, cols, doc)
    except (TypeError, ValueError, ZeroDivisionError) as e:
        raise InputError(f"{where}: {e}") from None


# -- complexes ---------------------------------------------------------------

def complex_to_json(C: ChainComplex) -> dict:
    return {"dims": {str(n): k for n, k in C.dims.items()},
            "d": {str(n): matrix_to_json(C.diff(n)) for n in C.degree_range()
                  if C.dim(n) and C.dim(n - 1) and not C.diff(n).is_zero()}}


def complex_from_json(F: Field, doc: Any, where: str = "complex") -> ChainComplex:
    dims_doc = _need(doc, "dims", where)
    try:
        dims = {int(n): int(k) for n, k in dims_doc.items()}
    except (AttributeError, ValueError, TypeError):
        raise InputError(f"{where}: dims must map degrees to dimensions") from None
    if any(k < 0 for k in dims.values()):
        raise InputError(f"{where}: negative dimension")
    d = {}
    for n, m in doc.get("d", {}).items():
        try:
            n = int(n)
        except ValueError:
            raise InputError(f"{where}: bad degree {n!r}") from None
        d[n] = matrix_from_json(F, m, dims.get(n - 1, 0), dims.get(n, 0), f"{where} d_{n}")
    return ChainComplex(F, dims, d)


def chain_map_to_json(f: ChainMap) -> dict:
    return {str(n): matrix_to_json(f.comp(n)) for n in f.src.dims
            if f.tgt.dim(n) and not f.comp(n).is_zero()}


def chain_map_from_json(doc: Any, src: ChainComplex, tgt: ChainComplex, where: str) -> ChainMap:
    if not isinstance(doc, dict):
        raise InputError(f"{where}: chain map must be an object keyed by degree")
    comps = {}
    for n, m in doc.items():
        try:
            n = int(n)
        except ValueError:
            raise InputError(f"{where}: bad degree {n!r}") from None
        comps[n] = matrix_from_json(src.field, m, tgt.dim(n), src.dim(n), f"{where} degree {n}")
    return ChainMap(src, tgt, comps)


# -- categories --------------------------------------------------------------

def _is_plain_poset(C: FinCat) -> bool:
    return is_poset(C) and from_poset(to_poset(C)) == C


def category_to_json(C: FinCat) -> dict:
    if _is_plain_poset(C):
        P = to_poset(C)
        return {"kind": "poset", "objects": list(P.objects), "covers": [list(c) for c in P.covers()]}
    comp = [[g, f, h] for (g, f), h in C.composition.items()
            if not C.is_identity(g) and not C.is_identity(f)]
    return {"kind": "category", "objects": list(C.objects),
            "morphisms": [{"id": m, "src": s, "tgt": t} for m, (s, t) in C.morphisms.items()],
            "identities": dict(C.identities), "composition": comp}


def category_from_json(doc: Any, where: str = "category") -> FinCat:
    kind = _need(doc, "kind", where)
    obs = [str(x) for x in _need(doc, "objects", where)]
    if kind == "poset":
        covers = [tuple(map(str, c)) for c in doc.get("covers", [])]
        if any(len(c) != 2 for c in covers):
            raise InputError(f"{where}: covers must be pairs")
        P = FinPoset.from_covers(obs, covers)
        try:
            return from_poset(P)
        except ValueError as e:
            raise InputError(f"{where}: {e}") from None
    if kind == "category":
        try:
            mors = {m["id"]: (m["src"], m["tgt"]) for m in _need(doc, "morphisms", where)}
            comp = {(g, f): h for g, f, h in doc.get("composition", [])}
            return FinCat(obs, mors, _need(doc, "identities", where), comp)
        except (KeyError, TypeError, ValueError) as e:
            raise InputError(f"{where}: {e}") from None
    raise InputError(f"{where}: unknown kind {kind!r}")


# -- diagrams ----------------------------------------------------------------

def diagram_to_json(D: BipartiteDiagram) -> dict:
    arrows = []
    for a, (s, t) in D.quiver.arrows.items():
        F = D.functors[a]
        arrows.append({"id": a, "src": s, "tgt": t,
                       "functor": {"objects": dict(F.obj_map), "morphisms": dict(F.mor_map)}})
    return {"kind": "diagram", "version": SCHEMA_VERSION, "left": list(D.left), "right": list(D.right),
            "values": {q: category_to_json(C) for q, C in D.values.items()}, "arrows": arrows}


def diagram_from_json(doc: Any) -> BipartiteDiagram:
    where = "diagram"
    if _need(doc, "kind", where) != "diagram":
        raise InputError("expected a diagram document")
    left = [str(v) for v in _need(doc, "left", where)]
    right = [str(v) for v in _need(doc, "right", where)]
    values = {str(q): category_from_json(c, f"value at {q}") for q, c in _need(doc, "values", where).items()}
    arrows, functors = {}, {}
    for a in _need(doc, "arrows", where):
        aid, s, t = (str(_need(a, k, "arrow")) for k in ("id", "src", "tgt"))
        if aid in arrows:
            raise InputError(f"duplicate arrow id {aid}")
        arrows[aid] = (s, t)
        fdoc = _need(a, "functor", f"arrow {aid}")
        om = {str(k): str(v) for k, v in _need(fdoc, "objects", f"arrow {aid} functor").items()}
        if s not in values or t not in values:
            raise InputError(f"arrow {aid} mentions a vertex without a value")
        if "morphisms" in fdoc:
            functors[aid] = Functor(values[s], values[t], om, {str(k): str(v) for k, v in fdoc["morphisms"].items()})
        else:
            try:
                functors[aid] = Functor.between_posets(values[s], values[t], om)
            except (ValueError, KeyError) as e:
                raise InputError(f"arrow {aid}: morphism map required ({e})") from None
    return BipartiteDiagram(BipartiteQuiver(left, right, arrows), values, functors)


# -- representations ---------------------------------------------------------

def representation_to_json(M: Representation, shape: Any = None) -> dict:
    """``shape`` is a JSON shape reference; defaults to the inline category."""
    S = M.shape
    poset_shape = _is_plain_poset(S)
    if shape is None:
        shape = category_to_json(S)
    if poset_shape:
        P = to_poset(S)
        keys = [poset_morphism_id(x, y) for x, y in P.covers()]
    else:
        keys = S.non_identity_morphisms()
    return {"kind": "representation", "version": SCHEMA_VERSION, "field": field_to_json(M.field),
            "shape": shape, "at": {x: complex_to_json(M.at[x]) for x in S.objects},
            "on": {m: chain_map_to_json(M.on[m]) for m in keys}}


def groth_shape_ref(G: GrothCat) -> dict:
    return {"groth": G.variant, "diagram": diagram_to_json(G.diagram)}


def resolve_shape(doc: Any, diagram: BipartiteDiagram | None = None) -> tuple[FinCat, GrothCat | None]:
    """Shape of a representation document: inline category/poset or a
    Grothendieck construction of an inline or separately supplied diagram."""
    shape = _need(doc, "shape", "representation")
    if isinstance(shape, dict) and "groth" in shape:
        if shape["groth"] not in ("cov", "contra"):
            raise InputError(f"unknown Grothendieck variant {shape['groth']!r}")
        D = diagram
        if D is None:
            if "diagram" not in shape:
                raise InputError("representation over a Grothendieck construction needs a diagram")
            D = diagram_from_json(shape["diagram"])
        G = groth(D, shape["groth"])
        return G.cat, G
    return category_from_json(shape, "shape"), None


def representation_from_json(doc: Any, diagram: BipartiteDiagram | None = None
                             ) -> tuple[Representation, GrothCat | None]:
    if _need(doc, "kind", "document") != "representation":
        raise InputError("expected a representation document")
    F = field_from_json(_need(doc, "field", "representation"))
    S, G = resolve_shape(doc, diagram)
    at_doc = _need(doc, "at", "representation")
    at = {}
    for x in S.objects:
        if x not in at_doc:
            raise InputError(f"no complex given at object {x}")
        at[x] = complex_from_json(F, at_doc[x], f"complex at {x}")
    extra = set(at_doc) - set(S.objects)
    if extra:
        raise InputError(f"complexes given at unknown objects {sorted(extra)}")
    on_doc = doc.get("on", {})
    if G is None and _is_plain_poset(S):
        P = to_poset(S)
        cover_ids = {poset_morphism_id(x, y): (x, y) for x, y in P.covers()}
        bad = set(on_doc) - set(cover_ids)
        if bad:
            raise InputError(f"poset-shaped representations list cover maps only; unexpected {sorted(bad)}")
        maps = {}
        for m, (x, y) in cover_ids.items():
            maps[(x, y)] = chain_map_from_json(on_doc.get(m, {}), at[x], at[y], f"map {m}")
        return complete_from_covers(P, at, maps, F), None
    on = {}
    for m in on_doc:
        if m not in S.morphisms:
            raise InputError(f"map given for unknown morphism {m}")
    for m, (s, t) in S.morphisms.items():
        if S.is_identity(m) and m not in on_doc:
            continue
        on[m] = chain_map_from_json(on_doc.get(m, {}), at[s], at[t], f"map {m}")
    return Representation(S, F, at, on), G


# -- triples -----------------------------------------------------------------

def triple_to_json(t: TripleCa | TripleCoca) -> dict:
    ca = isinstance(t, TripleCa)
    eta = t.phi if ca else t.psi
    return {"kind": "triple", "version": SCHEMA_VERSION, "variant": "ca" if ca else "coca",
            "diagram": diagram_to_json(t.diagram),
            "b": representation_to_json(t.b), "a": representation_to_json(t.a),
            "phi" if ca else "psi": {x: chain_map_to_json(eta[x]) for x in t.a.shape.objects}}


def triple_from_json(doc: Any) -> TripleCa | TripleCoca:
    from .reflect import apply_F

    if _need(doc, "kind", "document") != "triple":
        raise InputError("expected a triple document")
    D = diagram_from_json(_need(doc, "diagram", "triple"))
    b, _ = representation_from_json(_need(doc, "b", "triple"))
    a, _ = representation_from_json(_need(doc, "a", "triple"))
    Fb = apply_F(D, b)
    if doc.get("variant") == "ca":
        comps = _need(doc, "phi", "triple")
        eta = NatTrans(a, Fb, {x: chain_map_from_json(comps.get(x, {}), a.at[x], Fb.at[x], f"phi at {x}")
                               for x in a.shape.objects})
        return TripleCa(D, b, a, eta)
    if doc.get("variant") == "coca":
        comps = _need(doc, "psi", "triple")
        eta = NatTrans(Fb, a, {x: chain_map_from_json(comps.get(x, {}), Fb.at[x], a.at[x], f"psi at {x}")
                               for x in a.shape.objects})
        return TripleCoca(D, b, a, eta)
    raise InputError("triple variant must be 'ca' or 'coca'")


def groth_to_json(G: GrothCat) -> dict:
    C = G.cat
    return {"kind": "groth", "version": SCHEMA_VERSION, "variant": G.variant, "is_poset": is_poset(C),
            "objects": [{"id": x, "vertex": G.obj_tag[x][0], "object": G.obj_tag[x][1]} for x in C.objects],
            "morphisms": [{"id": m, "src": s, "tgt": t, "tag": list(G.mor_tag[m])}
                          for m, (s, t) in C.morphisms.items()],
            "identities": dict(C.identities),
            "composition": [[g, f, h] for (g, f), h in C.composition.items()
                            if not C.is_identity(g) and not C.is_identity(f)]}


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def load_json(path: str) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: invalid JSON ({e})") from None
