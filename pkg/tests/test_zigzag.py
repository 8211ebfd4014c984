from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pzigzag.arith import Laurent
from pzigzag.zigzag import (AlgebraError, NormalPath, build_algebra, derivation_report, dimension_formula,
                            lambda_constraints, oracle_check, tau)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_dimension_formula(n):
    assert build_algebra(n, 3).dim == dimension_formula(n)


def test_small_dimensions():
    assert build_algebra(2, 3, 1).dim == 5
    assert build_algebra(3, 2, 0).dim == 14


@pytest.mark.parametrize("n,p", [(2, 2), (3, 3), (4, 5)])
def test_normal_form_matches_rewriting_oracle(n, p):
    assert all(r["ok"] for r in oracle_check(build_algebra(n, p)).values())


def test_graded_dimension_of_corner():
    A = build_algebra(3, 3)
    assert A.graded_dim(2, 2) == Laurent({0: 1, 2: 1})
    assert A.graded_dim(1, 3) == Laurent({2: 1})


def test_products():
    A = build_algebra(2, 3)
    assert (A.parse("(1|2)") * A.parse("(2|1)")).is_zero()
    assert A.parse("(2|1)") * A.parse("(1|2)") == A.loop(2)
    assert (A.loop(2) * A.loop(2)).is_zero()
    assert A.parse("(2|1|2)") == A.loop(2)


def test_loop_relation():
    A = build_algebra(4, 5)
    for i in (2, 3):
        assert A.walk([i, i - 1, i]) == A.walk([i, i + 1, i])
    assert A.walk([1, 2, 1]).is_zero()


def test_differential_examples():
    A = build_algebra(3, 3, 1)
    assert A.parse("(2|3)").d() == A.parse("(2|3)") * A.loop(3)
    for n in (2, 3, 4):
        B = build_algebra(n, 3, 1)
        assert B.parse("(1|2)").d().is_zero()
    for lam in (0, 1, 2):
        B = build_algebra(4, 5, lam)
        for i in range(1, 5):
            assert B.loop(i).d() == B.loop(i) * B.loop(i)


def test_tau_reverses_arrows():
    A = build_algebra(3, 3)
    assert tau(A.parse("(1|2)")) == A.parse("(2|1)")
    assert A.basis[0] == NormalPath(1, 1, 0)


def test_tau_intertwines_the_two_differentials():
    A1, A0 = build_algebra(3, 3, 1), build_algebra(3, 3, 0)
    x = A1.parse("(2|3)")
    assert x.d().tau(A0) == x.tau(A0).d()


@st.composite
def basis_pair(draw, n=4, p=5):
    A = build_algebra(n, p, draw(st.integers(0, p - 1)))
    a = draw(st.sampled_from(A.basis))
    b = draw(st.sampled_from(A.basis))
    ca, cb = draw(st.integers(1, p - 1)), draw(st.integers(1, p - 1))
    return A, A.elt({a: ca}), A.elt({b: cb})


@given(basis_pair())
def test_tau_is_an_anti_automorphism(data):
    A, a, b = data
    assert tau(a * b) == tau(b) * tau(a)


@given(basis_pair())
def test_leibniz_on_random_pairs(data):
    A, a, b = data
    assert (a * b).d() == a.d() * b + a * b.d()


@pytest.mark.parametrize("p", [2, 3, 5])
@pytest.mark.parametrize("n", [2, 3, 4])
def test_derivation_for_every_lambda(n, p):
    for lam in range(p):
        assert all(derivation_report(build_algebra(n, p, lam)).values())


def test_lambda_constraints():
    assert lambda_constraints(2) == {0, 1}
    assert lambda_constraints(3) == {1}
    assert lambda_constraints(5) == {1}
    assert lambda_constraints(7) == {1}


def test_bad_input():
    with pytest.raises(AlgebraError):
        build_algebra(1, 3)
    with pytest.raises(ValueError):
        build_algebra(3, 4)
    with pytest.raises(AlgebraError):
        build_algebra(3, 3).arrow(1, 3)
