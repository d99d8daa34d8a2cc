import pytest

from bgpreflect.chain import ChainMap, cone, direct_sum, euler_char, homology_dims, is_acyclic, shift, sphere
from bgpreflect.cli import euler_defects
from bgpreflect.exactlin import Field, Matrix
from bgpreflect.fincat import FinPoset, from_poset, point
from bgpreflect.groth import build_cone, build_kronecker, build_star, groth_contra, groth_cov, kronecker_example
from bgpreflect.reflect import (
    InvalidInput,
    R_minus,
    R_plus,
    TripleCa,
    TripleCoca,
    apply_F,
    counit_comparison,
    pack_contra,
    pack_cov,
    reflect_minus,
    reflect_plus,
    unit_comparison,
    unpack_contra,
    unpack_cov,
    validate_triple,
    zero_triple,
)
from bgpreflect.rep import NatTrans, Representation, validate_nat, validate_rep
from bgpreflect.testkit import (
    Bounds,
    classical_bgp_oracle,
    fixture_diagrams,
    make_rng,
    random_rep,
    random_triple,
    star_rep,
)

GF5 = Field.gf(5)
QQ = Field.rationals()


def nonzero_homology(C):
    return {n: d for n, d in homology_dims(C).items() if d}


def a2_rep(F, target_dim=1, scalar=1):
    D = build_star(point(), ["*"])
    G = groth_cov(D)
    m = Matrix(F, target_dim, 1, [[scalar]] * target_dim)
    return D, G, star_rep(G, 1, [target_dim], [m])


def test_apply_F_no_outgoing_arrows_is_zero():
    D = build_kronecker(from_poset(FinPoset.chain(2)), point(), [])
    b = random_rep(make_rng(1), D.right_union()[0], QQ, Bounds())
    Fb = apply_F(D, b)
    assert all(C.is_zero() for C in Fb.at.values())


def test_apply_F_kronecker_dims():
    D = kronecker_example()
    Y = D.right_union()[0]
    b = Representation.constant(Y, sphere(QQ, 0))
    Fb = apply_F(D, b)
    assert Fb.at["(0,0)"].dims == {0: 2}
    assert Fb.at["(0,1)"].dims == {0: 2}
    assert not validate_rep(Fb)


def test_apply_F_star_is_direct_sum():
    A = from_poset(FinPoset.antichain(["a", "b"]))
    D = build_star(A, ["a", "b"])
    b = random_rep(make_rng(4), D.right_union()[0], GF5, Bounds(max_dim=2))
    Fb = apply_F(D, b)
    assert Fb.at["(0,*)"] == direct_sum([b.at["(1,a)"], b.at["(1,b)"]])[0]


def test_pack_arrow_category():
    D, G, M = a2_rep(QQ)
    t = pack_cov(M, G)
    assert t.a.at["(0,*)"] == sphere(QQ, 0) and t.b.at["(1,*)"] == sphere(QQ, 0)
    assert t.phi["(0,*)"] == ChainMap.identity(sphere(QQ, 0))
    assert unpack_cov(t, G) == M


def test_zero_triples():
    D = kronecker_example()
    t = zero_triple(D, GF5)
    M = unpack_cov(t)
    assert all(C.is_zero() for C in M.at.values())
    assert not validate_rep(M)
    eta, ok = unit_comparison(t)
    assert ok and all(f.is_zero() for f in eta.components.values())
    s = zero_triple(D, GF5, "coca")
    assert all(C.is_zero() for C in unpack_contra(s).at.values())
    assert counit_comparison(s)[1]
    G = groth_contra(D)
    Z = Representation.zero(G.cat, GF5)
    assert all(C.is_zero() for C in R_minus(Z, G).at.values())


def test_invalid_triple_rejected():
    D, G, M = a2_rep(QQ)
    t = pack_cov(M, G)
    zero_phi = TripleCa(D, t.b, t.a, NatTrans(t.a, t.phi.tgt, {"(0,*)": ChainMap.zero(t.a.at["(0,*)"],
                                                                                 t.phi.tgt.at["(0,*)"])}))
    assert not validate_triple(zero_phi)
    k = sphere(QQ, 0)
    k2 = sphere(QQ, 0, 2)
    a = Representation(t.a.shape, QQ, {"(0,*)": k2}, {})
    wrong = TripleCa(D, t.b, a, NatTrans(a, t.phi.tgt, {"(0,*)": ChainMap(k, k, {0: Matrix.identity(QQ, 1)})}))
    assert validate_triple(wrong)
    with pytest.raises(InvalidInput):
        reflect_plus(wrong)


def test_a2_reflection():
    D, G, M = a2_rep(GF5)
    N = R_plus(M, G)
    assert nonzero_homology(N.at["(0,*)"]) == {}
    assert nonzero_homology(N.at["(1,*)"]) == {0: 1}
    assert N.at["(1,*)"] == M.at["(1,*)"]


def test_simple_at_source_shifts():
    D = build_star(point(), ["*"])
    G = groth_cov(D)
    M = star_rep(G, 1, [0], [Matrix.zeros(QQ, 0, 1)])
    N = R_plus(M, G)
    assert nonzero_homology(N.at["(0,*)"]) == {1: 1}
    assert euler_char(N.at["(0,*)"]) == -1
    # the abelian oracle only sees the (zero) cokernel
    assert classical_bgp_oracle(G, M).dim == 0


def test_d4_star():
    A = from_poset(FinPoset.antichain(["a", "b", "c"]))
    G = groth_cov(build_star(A, ["a", "b", "c"]))
    one = Matrix.identity(GF5, 1)
    M = star_rep(G, 1, [1, 1, 1], [one] * 3)
    N = R_plus(M, G)
    dims = [nonzero_homology(N.at[x]).get(0, 0) for x in ("(0,*)", "(1,a)", "(1,b)", "(1,c)")]
    assert dims == [2, 1, 1, 1]
    assert classical_bgp_oracle(G, M).dim == 2


def test_sink_reflection_matches_kernel():
    A = from_poset(FinPoset.antichain(["a", "b"]))
    D = build_star(A, ["a", "b"])
    Gc = groth_contra(D)
    legs = [Matrix(QQ, 1, 1, [[1]]), Matrix(QQ, 1, 2, [[1, 2]])]
    M = star_rep(Gc, 1, [1, 2], legs)
    assert not validate_rep(M)
    N = R_minus(M, Gc)
    assert nonzero_homology(N.at["(0,*)"]) == {0: classical_bgp_oracle(Gc, M).dim} == {0: 2}


def test_phi_identity_gives_acyclic_cone():
    D, G, M = a2_rep(QQ)
    t2 = reflect_plus(pack_cov(M, G))
    assert is_acyclic(t2.a.at["(0,*)"])
    s = reflect_minus(t2)
    assert s.b == t2.b


def test_reflect_minus_zero_psi():
    rng = make_rng(8)
    D = kronecker_example()
    b = random_rep(rng, D.right_union()[0], QQ, Bounds())
    a = random_rep(rng, D.left_union()[0], QQ, Bounds())
    Fb = apply_F(D, b)
    t = reflect_minus(TripleCoca(D, b, a, NatTrans.zero(Fb, a)))
    for x in a.shape.objects:
        assert t.a.at[x] == direct_sum([Fb.at[x], shift(a.at[x], -1)])[0]


def test_cone_reflection():
    X = from_poset(FinPoset.from_covers(["a", "b", "c"], [("a", "b"), ("a", "c")]))
    D = build_cone(X)
    G = groth_cov(D)
    M = random_rep(make_rng(6), G.cat, QQ, Bounds(max_dim=2, density=0.9))
    N = R_plus(M, G)
    assert N.at["(1,*)"] == M.at["(1,*)"]
    for x in X.objects:
        assert N.at[f"(0,{x})"] == cone(M.on[G.kappa[("f1", x)]])[0]


@pytest.mark.parametrize("name", sorted(fixture_diagrams()))
def test_roundtrips_and_comparisons(name):
    D = fixture_diagrams()[name]
    G, Gc = groth_cov(D), groth_contra(D)
    rng = make_rng(sum(map(ord, name)))
    for F in (Field.gf(2), GF5, QQ):
        t = random_triple(rng, D, F, Bounds(max_dim=2))
        assert not validate_nat(t.phi)
        M = unpack_cov(t, G)
        assert not validate_rep(M)
        t2 = pack_cov(M, G)
        assert (t2.a, t2.b, t2.phi.components) == (t.a, t.b, t.phi.components)
        N = R_plus(M, G, Gc)
        assert not validate_rep(N)
        assert not euler_defects(M, N, G)
        for y in t.b.shape.objects:
            assert N.at[y] == M.at[y]
        assert unit_comparison(t)[1]
        s = random_triple(rng, D, F, Bounds(max_dim=2), "coca")
        P = unpack_contra(s, Gc)
        assert pack_contra(P, Gc).psi.components == s.psi.components
        assert not euler_defects(P, R_minus(P, Gc, G), Gc)
        assert counit_comparison(s)[1]
