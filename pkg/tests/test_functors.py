from __future__ import annotations

from collections import Counter

import pytest

from pzigzag import functors as fn
from pzigzag import ktheory as kt
from pzigzag import pcomplex as pc
from pzigzag import resolve as rs
from pzigzag.arith import CMat, CycInt
from pzigzag.pdgmod import LEFT, projective, simple
from pzigzag.zigzag import NormalPath, build_algebra


def reduced(c):
    return pc.noncontractible(pc.decompose(c), c.p)


def reduced_module(M):
    return reduced(M.complex)


# cup and cap -------------------------------------------------------------------
@pytest.mark.parametrize("p", [2, 3, 5])
def test_cup(p):
    alg = build_algebra(3, p, 1)
    L = fn.cup(alg, 2, pc.balanced(0, p))
    assert L.dim == 1 and L.lv.tolist() == [2]
    assert pc.is_acyclic(fn.cup(alg, 2, pc.indecomposable(p - 1, 0, p)).complex)
    V = pc.direct_sum(pc.balanced(1, p, 3), pc.balanced(0, p, -2))
    lhs = kt.symbol_module(fn.cup(alg, 2, V))
    assert lhs == kt.simple_class(3, p, 2).scale(pc.symbol(V))


@pytest.mark.parametrize("p", [2, 3])
def test_cap_of_projectives(p):
    alg = build_algebra(3, p, 1)
    for i in (1, 2):
        for j in (1, 2, 3):
            want = Counter({(0, 0): 1}) if i == j else Counter()
            assert reduced(fn.cap(alg, i, projective(alg, j))) == want


@pytest.mark.parametrize("p", [2, 3])
def test_cap_of_simples(p):
    alg = build_algebra(4, p, 1)
    assert reduced(fn.cap(alg, 2, simple(alg, 2))) == rs.expected_tensor_simples(p, 2, 2)
    assert reduced(fn.cap(alg, 1, simple(alg, 3))) == Counter()


@pytest.mark.parametrize("p", [2, 3])
def test_tl_functor_on_simples(p):
    alg = build_algebra(4, p, 1)
    L = simple(alg, 2).complex
    want = reduced(pc.direct_sum(pc.shift(L, 1, 1), pc.shift(L, -1, -1)))
    assert reduced_module(fn.tl_functor(alg, 2, simple(alg, 2))) == want
    for j in (1, 3):
        assert reduced_module(fn.tl_functor(alg, 2, simple(alg, j))) == Counter({(0, 0): 1})
    assert reduced_module(fn.tl_functor(alg, 1, simple(alg, 3))) == Counter()


# adjunctions --------------------------------------------------------------------
def test_unit_on_idempotents():
    alg = build_algebra(3, 3, 1)
    eta = fn.unit_map(alg, 2)
    for j in (1, 2, 3):
        col = eta.source.labels.index(NormalPath(j, j, 0))
        assert eta.M[0, col] == (1 if j == 2 else 0)
    assert eta.M.sum() == 1


@pytest.mark.parametrize("n,p", [(2, 2), (3, 3)])
def test_adjunction_maps_commute_with_d(n, p):
    alg = build_algebra(n, p, 1)
    for i in range(1, n):
        data = fn.adjunction_maps(alg, i)
        assert data.all_chain()
        assert data.eps1.is_linear() and data.eta2.is_linear()
        assert data.eps2.M.any() and data.eta1.M.any()


@pytest.mark.parametrize("n,p,lam", [(2, 2, 1), (3, 3, 1), (3, 3, 0)])
def test_dual_certificate(n, p, lam):
    alg = build_algebra(n, p, lam)
    for i in range(1, n):
        assert fn.dual_certificate(alg, i).verify()


# twists --------------------------------------------------------------------
def test_identity_bimodule_acts_trivially():
    alg = build_algebra(3, 3, 1)
    M = rs.ny_resolution(alg, 1).module
    out = fn.apply_bimodule(fn.identity_bimodule(alg), M)
    assert pc.decompose(out.complex) == pc.decompose(M.complex)
    assert kt.decat(alg, fn.identity_bimodule(alg)) == CMat.identity(3, CycInt, 3)


@pytest.mark.parametrize("p", [2, 3])
def test_twist_fixes_far_objects(p):
    alg = build_algebra(4, p, 1)
    T = fn.build_T(alg, 1)
    for j in (3, 4):
        P = projective(alg, j)
        assert reduced_module(fn.apply_bimodule(T, P)) == reduced_module(P)
    R = rs.ny_resolution(alg, 3)
    assert reduced_module(fn.apply_bimodule(T, R.module)) == Counter({(0, 0): 1})


@pytest.mark.parametrize("p", [2, 3])
def test_twist_on_its_own_simple(p):
    alg = build_algebra(3, p, 1)
    R = rs.ny_resolution(alg, 2)
    got = kt.symbol_module(fn.apply_bimodule(fn.build_T(alg, 2), R.module))
    want = kt.simple_class(3, p, 2).scale(-CycInt.q(p, 2))
    assert got.column().to_root() == want.column().to_root()


@pytest.mark.parametrize("n,p,lam", [(2, 3, 1), (3, 2, 0), (3, 3, 1)])
def test_decategorified_twists(n, p, lam):
    alg = build_algebra(n, p, lam)
    for i in range(1, n):
        T = kt.decat(alg, fn.build_T(alg, i))
        Tp = kt.matrix_of(alg, lambda P: fn.twist_inverse(alg, i, P))
        assert T == kt.twist_matrix(n, p, i)
        assert Tp == kt.twist_matrix(n, p, i, inverse=True)
        assert T @ Tp == CMat.identity(n, CycInt, p)
        assert T.to_root() == kt.closed_form_twist_matrix(n, p, i).to_root()
        assert Tp.to_root() == kt.closed_form_twist_matrix(n, p, i, inverse=True).to_root()
        assert kt.decat(alg, fn.build_T_prime(alg, i)) == Tp


def test_objectwise_twist_agrees_with_bimodule():
    alg = build_algebra(3, 3, 1)
    for j in (1, 2, 3):
        P = projective(alg, j)
        a = fn.twist(alg, 1, P)
        b = fn.apply_bimodule(fn.build_T(alg, 1), P)
        assert reduced_module(a) == reduced_module(b)


def test_composite_symbol_is_product():
    alg = build_algebra(3, 2, 1)
    word = [(1, 1), (2, 1), (1, -1)]
    got = kt.matrix_of(alg, lambda P: fn.apply_word(alg, word, P))
    assert got == kt.braid_word_matrix(3, 2, word)


# relations ------------------------------------------------------------------
@pytest.mark.parametrize("n,p", [(2, 3), (3, 2)])
def test_tl_certificates(n, p):
    certs = fn.verify_tl_relations(build_algebra(n, p, 1))
    assert certs and all(c.verify() for c in certs.values())
    kinds = {k[0] for k in certs}
    assert "i" in kinds and (n < 3 or "iii" in kinds)


def test_far_tl_relation_is_literal():
    certs = fn.verify_tl_relations(build_algebra(4, 2, 1))
    far = [c for k, c in certs.items() if k[0] == "ii"]
    assert far and all(c.start.dim == 0 and c.end.dim == 0 for c in far)


@pytest.mark.parametrize("n,p", [(2, 2), (2, 3), (3, 2)])
def test_second_braid_relation(n, p):
    alg = build_algebra(n, p, 1)
    for i in range(1, n):
        certs = fn.verify_braid_R2(alg, i)
        assert certs and all(c.verify() for c in certs)
        assert all(c.verify() for c in fn.verify_braid_R2_objectwise(alg, i).values())


@pytest.mark.parametrize("lam", [0, 1])
def test_third_braid_relation(lam):
    rep = fn.verify_braid_R3(build_algebra(3, 2, lam), 1)
    assert all(rep["checks"].values())
    assert set(rep["certificates"]) == {"P1", "P2", "P3"}
    assert all(c.verify() for c in rep["certificates"].values())


def test_far_commutation():
    certs = fn.verify_far_commutation(build_algebra(4, 2, 1), 1, 3)
    assert set(certs) == {"P1", "P2", "P3", "P4"}
    assert all(c.verify() for c in certs.values())
    with pytest.raises(fn.FunctorError):
        fn.verify_far_commutation(build_algebra(4, 2, 1), 1, 2)


def test_index_checks():
    alg = build_algebra(3, 3, 1)
    with pytest.raises(fn.FunctorError):
        fn.build_T(alg, 3)
    with pytest.raises(fn.FunctorError):
        fn.verify_braid_R3(alg, 2)
