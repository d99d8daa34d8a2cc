import itertools

from hypothesis import given, settings, strategies as st

from bgpreflect.chain import ChainMap, validate_complex
from bgpreflect.exactlin import Field, Matrix
from bgpreflect.fincat import FinPoset, from_poset, is_poset, validate_category
from bgpreflect.groth import build_star, groth_cov, validate_diagram
from bgpreflect.reflect import apply_F
from bgpreflect.rep import NatTrans, validate_nat, validate_rep
from bgpreflect.testkit import (
    Bounds,
    Limits,
    classical_sink_reflection,
    classical_source_reflection,
    count_small_diagrams,
    enumerate_limit_union,
    enumerate_small_diagrams,
    enumerate_star_reps,
    fixture_diagrams,
    make_rng,
    nat_space_dim,
    poset_iso_classes,
    random_complex,
    random_nat,
    random_rep,
    random_triple,
    recount_small_diagrams,
)

GF2 = Field.gf(2)
GF5 = Field.gf(5)
QQ = Field.rationals()


def test_same_seed_same_stream():
    a = [make_rng(42).getrandbits(64) for _ in range(3)]
    assert a == [make_rng(42).getrandbits(64) for _ in range(3)]
    assert random_complex(make_rng(9), 3, 2, QQ) == random_complex(make_rng(9), 3, 2, QQ)


def test_poset_class_counts():
    assert [len(poset_iso_classes(n)) for n in range(5)] == [1, 1, 2, 5, 16]


def test_zero_bounds_give_zero_triple():
    D = fixture_diagrams()["kronecker"]
    t = random_triple(make_rng(1), D, GF5, Bounds(max_dim=0))
    assert all(C.is_zero() for C in t.a.at.values())
    assert all(C.is_zero() for C in t.b.at.values())


def _brute_force_nat_count(M, N):
    """Count natural chain-map families over GF(2) by trying every matrix."""
    S = M.shape
    slots = [(x, n) for x in S.objects for n in sorted(M.at[x].dims) if N.at[x].dim(n)]
    shapes = [(N.at[x].dim(n), M.at[x].dim(n)) for x, n in slots]
    total = sum(r * c for r, c in shapes)
    assert total <= 16
    count = 0
    for bits in itertools.product([0, 1], repeat=total):
        comps, off = {x: {} for x in S.objects}, 0
        for (x, n), (r, c) in zip(slots, shapes):
            comps[x][n] = Matrix(GF2, r, c, [bits[off + i * c:off + (i + 1) * c] for i in range(r)])
            off += r * c
        eta = NatTrans(M, N, {x: ChainMap(M.at[x], N.at[x], comps[x]) for x in S.objects})
        if not validate_nat(eta):
            count += 1
    return count


def test_nat_space_dim_matches_brute_force():
    S = from_poset(FinPoset.chain(2))
    rng = make_rng(5)
    checked = 0
    while checked < 6:
        M = random_rep(rng, S, GF2, Bounds(max_deg=1, max_dim=2, density=0.8, max_total=3))
        N = random_rep(rng, S, GF2, Bounds(max_deg=1, max_dim=2, density=0.8, max_total=3))
        slots = sum(N.at[x].dim(n) * M.at[x].dim(n) for x in S.objects for n in M.at[x].dims)
        if not 0 < slots <= 14:
            continue
        assert 2 ** nat_space_dim(M, N) == _brute_force_nat_count(M, N)
        checked += 1


def test_generators_always_valid():
    rng = make_rng(2024)
    shapes = [groth_cov(D).cat for D in fixture_diagrams().values()]
    for i in range(1000):
        F = (GF2, GF5, QQ)[i % 3]
        C = random_complex(rng, 2, 2, F)
        assert not validate_complex(C)
        if i % 4 == 0:
            S = shapes[i % len(shapes)]
            M = random_rep(rng, S, F, Bounds())
            N = random_rep(rng, S, F, Bounds())
            assert not validate_rep(M) and not validate_rep(N)
            assert not validate_nat(random_nat(rng, M, N))


def test_enumeration_zero_arrows_is_disjoint_union():
    for D in enumerate_small_diagrams(Limits(2, 2, 0)):
        assert not D.quiver.arrows
        G = groth_cov(D)
        assert all(not G.cat.hom(f"(0,{x})", f"(1,{y})") for x in D.values["0"].objects
                   for y in D.values["1"].objects)


def test_enumeration_two_element_values():
    values = set()
    for D in enumerate_small_diagrams(Limits(2, 2, 1, min_size=2)):
        values.add(is_poset(D.values["0"]) and len(D.values["0"].morphisms))
        assert not validate_diagram(D)
    # chain (3 morphisms) and antichain (2)
    assert values == {2, 3}


def test_count_matches_recount():
    for lim in (Limits(2, 2, 2), Limits(1, 3, 2), Limits(3, 1, 3), Limits(2, 3, 1)):
        assert count_small_diagrams(lim) == recount_small_diagrams(lim)


def test_enumerated_diagrams_valid():
    for D in enumerate_small_diagrams(Limits(2, 2, 2)):
        assert not validate_diagram(D)
        assert not validate_category(groth_cov(D).cat)


def test_classical_source_reflection_examples():
    one = Matrix.identity(GF5, 1)
    assert classical_source_reflection(GF5, [one], 1).dim == 0
    r = classical_source_reflection(GF5, [one, one, one], 1)
    assert r.dim == 2
    # legs compose to zero with the assembled map
    total = sum((leg @ one for leg in r.legs[1:]), r.legs[0] @ one)
    assert total.is_zero()


def test_classical_sink_reflection_kernel():
    legs = [Matrix(QQ, 1, 1, [[1]]), Matrix(QQ, 1, 1, [[1]])]
    r = classical_sink_reflection(QQ, legs, 1)
    assert r.dim == 1
    assert (legs[0] @ r.legs[0] + legs[1] @ r.legs[1]).is_zero()


def test_star_enumeration_injective():
    seen = 0
    for m, ns, legs in enumerate_star_reps(GF5, 2, 2, make_rng(1), 2):
        assert m <= sum(ns)
        seen += 1
    # dimension vectors (m; n1, n2) with entries <= 2 and m <= n1 + n2
    vectors = sum(1 for m, a, b in itertools.product(range(3), repeat=3) if m <= a + b)
    assert seen == 2 * vectors


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10**9))
def test_random_triple_phi_natural(seed):
    D = fixture_diagrams()["multi"]
    t = random_triple(make_rng(seed), D, GF5, Bounds())
    assert not validate_nat(t.phi)
    assert t.phi.tgt == apply_F(D, t.b)
    s = random_triple(make_rng(seed), D, QQ, Bounds(), "coca")
    assert not validate_nat(s.psi)


def test_star_fixture_shape():
    D = build_star(from_poset(FinPoset.antichain(["a", "b"])), ["a", "b"])
    assert len(groth_cov(D).cat.objects) == 3


def test_limit_union_counts_each_diagram_once():
    lims = [Limits(2, 2, 2), Limits(1, 3, 2)]
    union = sum(1 for _ in enumerate_limit_union(lims))
    overlap = count_small_diagrams(Limits(1, 2, 2))
    assert union == count_small_diagrams(lims[0]) + count_small_diagrams(lims[1]) - overlap
