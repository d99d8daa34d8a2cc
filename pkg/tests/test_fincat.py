import itertools

import pytest

from bgpreflect.fincat import (
    CategoryError,
    FinCat,
    FinPoset,
    Functor,
    PosetError,
    disjoint_union,
    find_isomorphism,
    from_poset,
    is_poset,
    opposite,
    point,
    poset_violations,
    to_poset,
    validate_category,
    validate_functor,
)
from bgpreflect.testkit import kronecker_category


def test_chain_category():
    C = from_poset(FinPoset.chain(3))
    assert C.objects == ("0", "1", "2")
    assert len(C.morphisms) == 6
    assert C.compose("1<=2", "0<=1") == "0<=2"
    assert not validate_category(C)
    assert is_poset(C)


def test_covers_of_diamond():
    P = FinPoset.from_covers(["b", "l", "r", "t"], [("b", "l"), ("b", "r"), ("l", "t"), ("r", "t")])
    assert P.le("b", "t")
    assert P.covers() == [("b", "l"), ("b", "r"), ("l", "t"), ("r", "t")]
    assert P.upper_bounds(["l", "r"]) == ["t"]
    assert P.lower_bounds(["l", "r"]) == ["b"]


def test_cycle_is_not_a_poset():
    P = FinPoset.from_covers(["a", "b"], [("a", "b"), ("b", "a")])
    assert poset_violations(P)
    with pytest.raises(PosetError):
        from_poset(P)


def test_parallel_arrows_not_a_poset():
    K = kronecker_category()
    assert not validate_category(K)
    assert not is_poset(K)
    with pytest.raises(PosetError):
        to_poset(K)


def test_missing_identity_rejected():
    with pytest.raises(CategoryError):
        FinCat(["a"], {}, {}, {})


def test_validate_category_finds_bad_composition():
    mors = {"i": ("a", "a"), "e": ("a", "a")}
    # e∘e = i would be fine; a missing composite is not
    C = FinCat(["a"], mors, {"a": "i"}, {})
    assert validate_category(C)
    C2 = FinCat(["a"], mors, {"a": "i"}, {("e", "e"): "e"})
    assert not validate_category(C2)


def test_opposite_is_involutive():
    C = from_poset(FinPoset.chain(3))
    O = opposite(C)
    assert O.morphisms["0<=1"] == ("1", "0")
    assert opposite(O) == C
    assert not validate_category(O)


def test_functor_validation():
    C2 = from_poset(FinPoset.chain(2))
    C3 = from_poset(FinPoset.chain(3))
    F = Functor.between_posets(C2, C3, {"0": "0", "1": "2"})
    assert not validate_functor(F)
    with pytest.raises(CategoryError):
        Functor.between_posets(C2, C3, {"0": "2", "1": "0"})
    bad = Functor(C2, C3, F.obj_map, {**F.mor_map, "0<=1": "0<=1"})
    assert validate_functor(bad)


def test_functor_composition():
    C2 = from_poset(FinPoset.chain(2))
    pt = point()
    F = Functor.constant(C2, pt, "*")
    G = Functor.constant(pt, C2, "1")
    H = G @ F
    assert H("0") == "1" and H.on_mor("0<=1") == "1<=1"
    assert not validate_functor(H)


def test_disjoint_union_tags():
    U, inj = disjoint_union([point(), from_poset(FinPoset.chain(2))], ["l", "r"])
    assert U.objects == ("(l,*)", "(r,0)", "(r,1)")
    assert inj[1].on_mor("0<=1") == "(r,0<=1)"
    assert not validate_category(U)
    assert all(not validate_functor(f) for f in inj)


def test_find_isomorphism_of_relabeled_chain():
    C = from_poset(FinPoset.chain(3))
    P = FinPoset(["z", "y", "x"], [("x", "y"), ("y", "z"), ("x", "z")])
    D = from_poset(P)
    iso = find_isomorphism(C, D)
    assert iso is not None and iso("0") == "x"
    assert not validate_functor(iso)
    assert find_isomorphism(C, from_poset(FinPoset.antichain(["a", "b", "c"]))) is None


def test_all_labeled_posets_on_three_points():
    # 19 labeled posets on 3 elements
    objs = ["0", "1", "2"]
    pairs = [(a, b) for a, b in itertools.permutations(objs, 2)]
    count = 0
    for bits in itertools.product([0, 1], repeat=len(pairs)):
        P = FinPoset(objs, [p for p, b in zip(pairs, bits) if b])
        if not poset_violations(P):
            count += 1
    assert count == 19
