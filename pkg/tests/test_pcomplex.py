from __future__ import annotations

from collections import Counter

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pzigzag import linalg as la
from pzigzag import pcomplex as pc
from pzigzag.arith import CycInt, Laurent, qint

PRIMES = [2, 3, 5]


def random_complex(seed: int, p: int, max_dim: int = 8):
    return pc.random_pcomplex(np.random.default_rng(seed), p, max_dim)


seeds = st.integers(0, 2 ** 32 - 1)
primes = st.sampled_from(PRIMES)


# validation ---------------------------------------------------------------
def test_one_dimensional_complex_is_valid():
    assert pc.validate(pc.PComplex(3, [0], [[0]])) is None


def test_long_chain_is_valid_for_p3_but_not_p2():
    blocks = {0: [[1]], 2: [[1]]}
    assert pc.validate(pc.PComplex.from_blocks(3, {0: 1, 2: 1, 4: 1}, blocks)) is None
    v = pc.validate(pc.PComplex.from_blocks(2, {0: 1, 2: 1, 4: 1}, blocks))
    assert v is not None and v.kind == "nilpotence"


def test_inhomogeneous_differential_is_rejected():
    c = pc.PComplex(3, [0, 1], [[0, 0], [1, 0]])
    assert pc.validate(c).kind == "degree"
    with pytest.raises(pc.PComplexError):
        pc.check(c)


def test_build_sorts_by_degree():
    c = pc.PComplex.build(3, [2, 0], [[0, 1], [0, 0]], labels=["top", "bottom"])
    assert list(c.degs) == [0, 2] and c.labels == ("bottom", "top")
    assert pc.validate(c) is None


# slash homology ------------------------------------------------------------------
@pytest.mark.parametrize("p", PRIMES)
def test_slash_homology_of_trivial_and_free(p):
    for k in range(1, p):
        assert pc.slash_homology(pc.balanced(0, p), k) == {0: 1}
        assert pc.slash_homology(pc.indecomposable(p - 1, 7, p), k) == {}


def test_slash_homology_of_two_dimensional_p3():
    c = pc.balanced(1, 3)
    assert pc.slash_homology(c, 1) == {1: 1}
    assert pc.slash_homology(c, 2) == {-1: 1}


@pytest.mark.parametrize("p", PRIMES)
def test_slash_homology_closed_form(p):
    # on V_j with bottom b: ker D^k is the top min(k, j+1) vectors, im D^{p-k} the top j+1-(p-k)
    for j in range(p):
        for k in range(1, p):
            got = pc.slash_homology(pc.indecomposable(j, 0, p), k)
            ker = set(range(max(0, j + 1 - k), j + 1))
            im = set(range(p - k, j + 1)) if j + 1 > p - k else set()
            assert got == {2 * i: 1 for i in sorted(ker - im)}


# decomposition --------------------------------------------------------------------
def test_decompose_explicit_sum():
    c = pc.direct_sum(pc.balanced(0, 3), pc.balanced(0, 3, 4))
    assert pc.decompose(c) == Counter({(0, 0): 1, (0, 4): 1})


@pytest.mark.parametrize("p", PRIMES)
def test_decompose_matches_greedy_oracle(p, rng):
    for _ in range(60):
        c, planted = pc.random_pcomplex(rng, p, 12, planted=True)
        got = pc.decompose(c)
        assert got == pc.decompose_greedy(c) == planted


@given(seed=seeds, p=primes)
def test_decompose_is_additive(seed, p):
    c, d = random_complex(seed, p), random_complex(seed + 1, p)
    assert pc.decompose(pc.direct_sum(c, d)) == pc.decompose(c) + pc.decompose(d)


@given(seed=seeds, p=primes)
def test_reassemble_roundtrip(seed, p):
    c = random_complex(seed, p)
    again = pc.reassemble(pc.decompose(c), p)
    assert pc.decompose(again) == pc.decompose(c)
    assert pc.stable_iso(c, again) is not None


@given(seed=seeds, p=primes)
def test_jordan_chains_form_a_basis(seed, p):
    c = random_complex(seed, p)
    chains = pc.jordan_chains(c)
    assert Counter(k for k, _ in chains) == pc.decompose(c)
    for (j, b), m in chains:
        assert not la.mod(c.D @ m[:, -1], p).any()


# symbol -----------------------------------------------------------------------
@pytest.mark.parametrize("p", PRIMES)
def test_symbol_examples(p):
    assert pc.symbol(pc.indecomposable(p - 1, 3, p)).is_zero()
    if p > 2:
        assert pc.symbol(pc.balanced(1, p)) == CycInt(Laurent({-1: 1, 1: 1}), p)


def test_symbol_after_reduction_p3():
    c = pc.balanced(1, 3, 2)            # degrees 1, 3
    assert pc.symbol(c) == -CycInt.q(3, -1)


@given(seed=seeds, p=primes)
def test_symbol_agrees_with_graded_dimension(seed, p):
    c = random_complex(seed, p)
    assert pc.symbol(c) == pc.graded_symbol(c)


@given(seed=seeds, p=primes)
def test_symbol_additive_and_multiplicative(seed, p):
    c, d = random_complex(seed, p, 6), random_complex(seed + 7, p, 6)
    assert pc.symbol(pc.direct_sum(c, d)) == pc.symbol(c) + pc.symbol(d)
    assert pc.symbol(pc.tensor(c, d)) == pc.symbol(c) * pc.symbol(d)


@given(seed=seeds, p=primes)
def test_tensor_unit(seed, p):
    c = random_complex(seed, p)
    assert pc.decompose(pc.tensor(c, pc.balanced(0, p))) == pc.decompose(c)


# shifts ------------------------------------------------------------------------
@pytest.mark.parametrize("p", PRIMES)
def test_shift_by_one(p):
    assert pc.decompose(pc.shift(pc.balanced(0, p), 1, 0)) == Counter({(p - 2, -p - (p - 2)): 1})


@pytest.mark.parametrize("p", PRIMES)
def test_shift_inverse_pair(p):
    prod = pc.tensor(pc.balanced(p - 2, p, -p), pc.balanced(p - 2, p, p))
    assert pc.noncontractible(pc.decompose(prod), p) == Counter({(0, 0): 1})


@given(seed=seeds, p=primes)
def test_shift_two_is_grading_shift(seed, p):
    c = random_complex(seed, p, 6)
    a, b = pc.shift(c, 2, 0), pc.shift(c, 0, -2 * p)
    f = pc.stable_iso(a, b)
    assert f is not None and f.is_chain() and pc.is_quasi_iso(f)


@given(seed=seeds, p=primes)
def test_shift_roundtrip(seed, p):
    c = random_complex(seed, p, 6)
    back = pc.shift(pc.shift(c, 1, 0), -1, 0)
    assert pc.noncontractible(pc.decompose(back), p) == pc.noncontractible(pc.decompose(c), p)


@given(seed=seeds, p=primes)
def test_symbol_of_shift(seed, p):
    # [1] multiplies symbols by a fixed unit whose square is q^{-2p} = 1
    c = random_complex(seed, p, 6)
    factor = pc.symbol(pc.shift_complex(p, 1))
    assert pc.symbol(pc.shift(c, 1, 3)) == pc.symbol(c) * factor * CycInt.q(p, 3)
    assert factor * factor == CycInt.q(p, -2 * p)


# maps, cones, acyclicity -----------------------------------------------------------
@given(seed=seeds, p=primes)
def test_cone_of_identity_is_acyclic(seed, p):
    c = random_complex(seed, p)
    assert pc.is_acyclic(pc.cone(pc.identity(c)))
    assert pc.is_acyclic(pc.cocone(pc.identity(c)))
    assert pc.is_quasi_iso(pc.identity(c))


@given(seed=seeds, p=primes)
def test_cone_of_zero_map(seed, p):
    c, d = random_complex(seed, p, 5), random_complex(seed + 3, p, 5)
    z = pc.PMap(c, d, la.zeros(d.dim, c.dim))
    lhs = pc.noncontractible(pc.decompose(pc.cone(z)), p)
    rhs = pc.noncontractible(pc.decompose(pc.direct_sum(d, pc.shift(c, 1, 0))), p)
    assert lhs == rhs


@pytest.mark.parametrize("p", PRIMES)
def test_acyclicity_examples(p):
    free = pc.direct_sum(*(pc.indecomposable(p - 1, b, p) for b in (0, 3, -5)))
    assert pc.is_acyclic(free)
    assert not pc.is_acyclic(pc.balanced(0, p))
    assert pc.is_acyclic(pc.PComplex.zero(p))


@pytest.mark.parametrize("p", PRIMES)
def test_null_homotopy_examples(p):
    v = pc.balanced(0, p)
    assert not pc.is_null_homotopic(pc.identity(v))
    assert pc.is_null_homotopic(pc.PMap(v, v, la.zeros(1, 1)))


@pytest.mark.parametrize("p", PRIMES)
def test_power_of_differential_is_null_homotopic(p, rng):
    c, d = pc.random_pcomplex(rng, p, 5), pc.random_pcomplex(rng, p, 5)
    h = pc.hom(c, d)
    deg = 2 - 2 * p
    if deg not in h.dims:
        c = pc.direct_sum(c, pc.balanced(0, p))
        d = pc.direct_sum(d, pc.balanced(0, p, deg))
        h = pc.hom(c, d)
    v = la.zeros(h.dim, 1)[:, 0]
    v[h.slot(deg)] = rng.integers(0, p, size=h.dims[deg])
    w = la.mod(np.linalg.matrix_power(h.D, p - 1) @ v, p)
    M = la.zeros(d.dim, c.dim)
    for k, (i, j) in enumerate(h.labels):
        M[i, j] = w[k]
    f = pc.PMap(c, d, M, 0)
    assert f.is_chain() and pc.is_null_homotopic(f)


# iota -----------------------------------------------------------------------------
def test_iota_components():
    f2 = pc.iota(2)
    assert f2.M.reshape(-1).tolist() == [1]
    f3 = pc.iota(3)
    pos = {lab: k for k, lab in enumerate(f3.target.labels)}
    col = f3.M[:, 0]
    assert col[pos[(0, 1)]] == 1 and col[pos[(1, 0)]] == 2 and col.sum() % 3 == 0


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_iota_is_quasi_iso(p):
    f = pc.iota(p)
    assert f.is_chain()
    assert pc.is_quasi_iso(f)
    assert pc.is_acyclic(pc.cone(f)) and pc.is_acyclic(pc.cocone(f))


def test_json_roundtrip(rng):
    c = pc.random_pcomplex(rng, 5)
    again = pc.PComplex.from_json(c.to_json(), 5)
    assert np.array_equal(again.D, c.D) and np.array_equal(again.degs, c.degs)


def test_quantum_dimension_of_indecomposable():
    for p in PRIMES:
        for j in range(p):
            assert pc.symbol(pc.balanced(j, p)) == qint(j + 1, p)
