from __future__ import annotations

from collections import Counter

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pzigzag import linalg as la
from pzigzag import pcomplex as pc
from pzigzag import resolve as rs
from pzigzag.pdgmod import (LEFT, RIGHT, CellDiagram, ModMap, ModuleError, cocone_mod, compile_diagram, cone_mod,
                            dual, dual_diagram, find_quasi_iso, hom_complex, identity, node_index, projective,
                            quasi_iso, regular, rhom,
                            direct_sum, translate, ses_extend, simple, tensor_over_A, truncated_splice, zero_map)
from pzigzag.zigzag import NormalPath, build_algebra


def corner(M, i):
    """e_i M as a p-complex."""
    keep = np.nonzero(M.lv == i)[0]
    return pc.PComplex(M.p, M.degs[keep], M.D[np.ix_(keep, keep)])


def reduced(c):
    return pc.noncontractible(pc.decompose(c), c.p)


def _library(n: int, p: int) -> list:
    alg = build_algebra(n, p, 1)
    mods = [projective(alg, i, LEFT, s) for i in range(1, n + 1) for s in (-1, 0, 3)]
    mods += [rs.ny_resolution(alg, i).module for i in range(1, n)]
    mods.append(compile_diagram(alg, CellDiagram(LEFT, [(2, 0, 0), (2, 0, 1)], [(1, 0, "(2|1|2)")])))
    return alg, mods


LIBRARY = _library(3, 3)


@st.composite
def random_cell_module(draw):
    """A direct sum of one or two modules from a small library of left cell modules."""
    alg, mods = LIBRARY
    picks = draw(st.lists(st.sampled_from(mods), min_size=1, max_size=2))
    shift = draw(st.integers(-2, 2))
    return alg, translate(direct_sum(*picks), shift)


# compiling ---------------------------------------------------------------------
def test_projective_graded_dims():
    A = build_algebra(2, 3)
    assert projective(A, 1).degs.tolist() == [0, 1]
    assert projective(A, 2).degs.tolist() == [0, 1, 2]


def test_two_generator_cell_module():
    # M = A v_0 + A v_1 with d(v_1) = c_2 v_0
    A = build_algebra(3, 3, 1)
    M = compile_diagram(A, CellDiagram(LEFT, [(2, 0, 0), (2, 0, 1)], [(1, 0, "(2|1|2)")]))
    assert M.dim == 2 * projective(A, 2).dim
    assert pc.validate(M.complex) is None


def test_edge_between_outer_neighbours():
    A = build_algebra(3, 3, 1)
    d = CellDiagram(LEFT, [(1, 1, 1), (3, 1, 0)], [(0, 1, "(1|2|3)")])
    M = compile_diagram(A, d)
    assert M.dim == projective(A, 1).dim + projective(A, 3).dim


def test_compile_rejects_bad_diagrams():
    A = build_algebra(3, 3, 1)
    with pytest.raises(ModuleError):
        compile_diagram(A, CellDiagram(LEFT, [(2, 0, 0), (2, 2, 1)], [(1, 0, "(2|1|2)")]))
    with pytest.raises(ModuleError):
        compile_diagram(A, CellDiagram(LEFT, [(2, 0, 1), (2, 0, 0)], [(1, 0, "(2|1|2)")]))
    with pytest.raises(ModuleError):
        compile_diagram(A, CellDiagram(LEFT, [(4, 0, 0)], []))


def test_diagram_json_roundtrip():
    d = CellDiagram(LEFT, [(1, 1, 1), (3, 1, 0)], [(0, 1, "(1|2|3)")])
    assert CellDiagram.from_json(d.to_json()).sorted_key() == d.sorted_key()


@given(random_cell_module())
def test_random_cell_modules_are_valid(data):
    alg, M = data
    assert M.is_valid()
    assert pc.validate(M.complex) is None


# simples -----------------------------------------------------------------------
@pytest.mark.parametrize("i", [1, 2, 3])
def test_simples(i):
    A = build_algebra(3, 3)
    L = simple(A, i)
    assert L.dim == 1 and L.degs.tolist() == [0]
    assert all(m.nnz == 0 for m in L.left.values())
    for j in (1, 2, 3):
        assert L.graded_dim(j).is_zero() == (i != j)


# Hom complexes -----------------------------------------------------------------
@given(random_cell_module())
def test_yoneda(data):
    alg, M = data
    for i in range(1, alg.n + 1):
        assert pc.decompose(hom_complex(projective(alg, i), M)) == pc.decompose(corner(M, i))


def test_hom_over_the_ground_field():
    h = pc.hom(pc.balanced(0, 3), pc.balanced(0, 3, 2))
    assert pc.decompose(h) == Counter({(0, 2): 1})


def test_hom_between_different_simples_vanishes():
    A = build_algebra(3, 3)
    assert hom_complex(simple(A, 1), simple(A, 2)).dim == 0


@pytest.mark.parametrize("p", [2, 3])
def test_rhom_of_simples(p):
    A = build_algebra(3, p, 1)
    R = rs.ny_resolution(A, 2)
    h = rhom(R.simple, simple(A, 2), R.module, R.augmentation)
    assert reduced(h) == reduced(pc.direct_sum(pc.balanced(0, p), pc.balanced(0, p, 2 * p - 2)))
    h = rhom(R.simple, simple(A, 1), R.module, R.augmentation)
    assert reduced(h) == reduced(pc.balanced(p - 2, p, p - 1))
    h = rhom(R.simple, simple(A, 3), R.module, R.augmentation)
    assert reduced(h) == reduced(pc.balanced(p - 2, p, p - 1))


def test_rhom_needs_a_quasi_iso():
    A = build_algebra(3, 3, 1)
    R = rs.ny_resolution(A, 1)
    bad = zero_map(R.module, R.simple)
    with pytest.raises(ModuleError):
        rhom(R.simple, simple(A, 1), R.module, bad)


# tensor over A ----------------------------------------------------------------
@given(random_cell_module())
def test_tensor_with_right_projective(data):
    alg, M = data
    for i in range(1, alg.n + 1):
        T = tensor_over_A(projective(alg, i, RIGHT), M)
        assert pc.decompose(T.complex) == pc.decompose(corner(M, i))


def test_tensor_with_regular_bimodule():
    A = build_algebra(3, 3, 1)
    M = rs.ny_resolution(A, 1).module
    T = tensor_over_A(regular(A), M)
    assert T.dim == M.dim
    assert pc.decompose(T.complex) == pc.decompose(M.complex)


# cones ---------------------------------------------------------------------
@given(random_cell_module())
def test_cone_of_identity(data):
    alg, M = data
    assert pc.is_acyclic(cone_mod(identity(M)).complex)
    assert pc.is_acyclic(cocone_mod(identity(M)).complex)


@given(random_cell_module(), random_cell_module())
def test_cone_of_zero_map(a, b):
    (alg, M), (_, N) = a, b
    C = cone_mod(zero_map(M, N))
    assert reduced(C.complex) == reduced(pc.direct_sum(N.complex, pc.shift(M.complex, 1, 0)))


def test_quasi_iso_examples():
    A = build_algebra(3, 3, 1)
    R = rs.ny_resolution(A, 2)
    assert quasi_iso(R.augmentation)
    assert quasi_iso(identity(R.module))
    assert not quasi_iso(zero_map(R.simple, R.simple))


# short exact sequences -----------------------------------------------------------
def augmentation_of_projective(P, i):
    F = la.zeros(1, P.dim)
    F[0, node_index(P, 0, NormalPath(i, i, 0))] = 1
    return ModMap(P, simple(P.alg, i), F)


@pytest.mark.parametrize("n,p,i", [(2, 2, 1), (3, 3, 1), (3, 3, 2), (4, 5, 2)])
def test_ses_extensions_are_acyclic(n, p, i):
    phi, psi, psi_full = rs.simple_ses(build_algebra(n, p, 1), i)
    v1, v2 = ses_extend(phi, psi, 1), ses_extend(phi, psi, 2)
    assert pc.is_acyclic(v1.complex) and pc.is_acyclic(v2.complex)
    assert reduced(v1.complex) == reduced(v2.complex)
    s = truncated_splice([phi, psi])
    assert pc.decompose(s.complex) == pc.decompose(v1.complex)
    longer = truncated_splice([phi, psi_full, augmentation_of_projective(psi_full.target, i)])
    assert pc.is_acyclic(longer.complex)


def test_trivial_ses():
    A = build_algebra(3, 3, 1)
    M = rs.ny_resolution(A, 1).module
    Z = compile_diagram(A, CellDiagram(LEFT))
    out = ses_extend(identity(M), zero_map(M, Z), 1)
    assert pc.is_acyclic(out.complex)


def test_splice_edge_cases():
    A = build_algebra(2, 3)
    assert truncated_splice([], A).dim == 0
    phi, psi, _ = rs.simple_ses(build_algebra(3, 3, 1), 1)
    with pytest.raises(ModuleError):
        truncated_splice([psi, phi])


# duals --------------------------------------------------------------------------
@pytest.mark.parametrize("i", [1, 2, 3])
def test_dual_of_projective(i):
    A = build_algebra(3, 3, 1)
    D = dual(A, CellDiagram(LEFT, [(i, 0, 0)], []))
    assert D.side == RIGHT
    assert D.graded_dim(i, RIGHT) == projective(A, i, RIGHT).graded_dim(i, RIGHT)
    assert D.dim == projective(A, i, RIGHT).dim


@pytest.mark.parametrize("n,p,i", [(2, 2, 1), (3, 3, 2)])
def test_dual_of_simple_resolution(n, p, i):
    A = build_algebra(n, p, 1)
    R = rs.ny_resolution(A, i)
    D = dual(A, R.diagram)
    target = simple(A, i, RIGHT, -2)
    shifted = pc.shift(target.complex, -2, 0)
    assert reduced(D.complex) == reduced(shifted)


@pytest.mark.parametrize("n,p,i", [(2, 3, 1), (3, 2, 2)])
def test_double_dual_is_the_original(n, p, i):
    A = build_algebra(n, p, 1)
    R = rs.ny_resolution(A, i)
    twice = compile_diagram(A, dual_diagram(dual_diagram(R.diagram)))
    f = find_quasi_iso(twice, R.simple)
    assert f is not None and quasi_iso(f)
