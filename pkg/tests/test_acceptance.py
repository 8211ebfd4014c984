"""One test per acceptance criterion; each prints a single PASS/FAIL line.

Run directly (python tests/test_acceptance.py) for just the nine lines, or
through pytest, where the lines are repeated in the terminal summary.
"""

from __future__ import annotations

import sys

import numpy as np
import pytest

from pzigzag import functors as fn
from pzigzag import ktheory as kt
from pzigzag import pcomplex as pc
from pzigzag import quantum as qu
from pzigzag import resolve as rs
from pzigzag.arith import CMat, CycInt
from pzigzag.pdgmod import LEFT, RIGHT, quasi_iso, ses_extend, truncated_splice
from pzigzag.zigzag import build_algebra, derivation_report, dimension_formula, lambda_constraints, oracle_check

RESULTS: dict = {}

TITLES = {
    1: "algebra dimension, rewriting oracle, d^p = 0, Leibniz, tau",
    2: "lambda constraints",
    3: "NY resolutions and the SES constructions",
    4: "RHOM and tensor tables between simples, dual certificate",
    5: "Temperley-Lieb certificates, K_0 presentation, hermitian u_i, Gram matrix",
    6: "braid relations R2/R3 and decategorified twists",
    7: "chain maps psi, phi between resolutions, and factorials",
    8: "quantum group, Burau matrices, commuting squares",
    9: "p-complex engine",
}


def report(k: int, ok: bool, detail: str = "") -> None:
    line = f"criterion {k}: {'PASS' if ok else 'FAIL'}  {TITLES[k]}" + (f"  [{detail}]" if detail else "")
    RESULTS[k] = line
    print(line)
    assert ok, line


def _all(items) -> tuple:
    """(all ok, first failing key) over (key, bool) pairs."""
    for key, ok in items:
        if not ok:
            return False, key
    return True, None


# 1 -------------------------------------------------------------------------------
def _criterion_1():
    for n in range(2, 6):
        yield ("dimension", n), build_algebra(n, 2).dim == dimension_formula(n)
    for p in (2, 3, 5):
        for n in range(2, 5):
            yield ("oracle", n, p), all(r["ok"] for r in oracle_check(build_algebra(n, p)).values())
            for lam in range(p):
                yield ("derivation", n, p, lam), all(derivation_report(build_algebra(n, p, lam)).values())


def test_criterion_1():
    ok, bad = _all(_criterion_1())
    report(1, ok, f"first failure {bad}" if bad else "")


# 2 -------------------------------------------------------------------------------
def test_criterion_2():
    got = {p: lambda_constraints(p) for p in (2, 3, 5, 7)}
    want = {2: {0, 1}, 3: {1}, 5: {1}, 7: {1}}
    report(2, got == want, str({p: sorted(v) for p, v in got.items()}))


# 3 -------------------------------------------------------------------------------
def _criterion_3():
    for p in (2, 3, 5):
        for n in range(2, 5):
            for lam in (0, 1):
                alg = build_algebra(n, p, lam)
                for i in range(1, n):
                    for side in (LEFT, RIGHT):
                        R = rs.ny_resolution(alg, i, side)
                        yield ("ny", n, p, lam, i, side), pc.validate(R.module.complex) is None and \
                            quasi_iso(R.augmentation)
            alg = build_algebra(n, p, 1)
            for i in range(1, n):
                phi, psi, _ = rs.simple_ses(alg, i)
                for v in (1, 2):
                    yield ("ses", n, p, i, v), pc.is_acyclic(ses_extend(phi, psi, v).complex)
                yield ("splice", n, p, i), pc.is_acyclic(truncated_splice([phi, psi]).complex)


def test_criterion_3():
    ok, bad = _all(_criterion_3())
    report(3, ok, f"first failure {bad}" if bad else "")


# 4 -------------------------------------------------------------------------------
def _criterion_4():
    for p in (2, 3, 5):
        for n in range(2, 5):
            for lam in (0, 1):
                alg = build_algebra(n, p, lam)
                for i in range(1, n):
                    for j in range(1, n + 1):
                        yield ("rhom", n, p, lam, i, j), rs.rhom_simples(alg, i, j) == rs.expected_rhom_simples(p, i, j)
                        yield ("tensor", n, p, lam, i, j), \
                            rs.tensor_simples(alg, i, j) == rs.expected_tensor_simples(p, i, j)
                    yield ("dual", n, p, lam, i), fn.dual_certificate(alg, i).verify()


def test_criterion_4():
    ok, bad = _all(_criterion_4())
    report(4, ok, f"first failure {bad}" if bad else "")


# 5 -------------------------------------------------------------------------------
def _criterion_5():
    for n in (2, 3):
        for p in (2, 3):
            for lam in (0, 1):
                alg = build_algebra(n, p, lam)
                certs = fn.verify_tl_relations(alg)
                yield ("tl", n, p, lam), bool(certs) and all(c.verify() for c in certs.values())
                for i in range(1, n):
                    m = kt.matrix_of(alg, lambda P, i=i: fn.tl_functor(alg, i, P))
                    yield ("k0_matrix", n, p, lam, i), m == kt.tl_matrix(n, p, i)
    for n in (2, 3, 4):
        for p in (2, 3, 5, 7):
            circle = -(CycInt.q(p) + CycInt.q(p, -1))
            u = [kt.tl_matrix(n, p, i) for i in range(1, n)]
            yield ("square", n, p), all(x @ x == x.scale(circle) for x in u)
            yield ("adjacent", n, p), all(u[a] @ u[a + 1] @ u[a] == u[a] and u[a + 1] @ u[a] @ u[a + 1] == u[a + 1]
                                          for a in range(n - 2))
            yield ("far", n, p), all(u[a] @ u[b] == u[b] @ u[a] for a in range(n - 1) for b in range(a + 2, n - 1))
            yield ("hermitian", n, p), all(kt.is_hermitian(x) for x in u)
            yield ("gram", n, p), kt.gram_perfect(n, p)


def test_criterion_5():
    ok, bad = _all(_criterion_5())
    report(5, ok, f"first failure {bad}" if bad else "")


# 6 -------------------------------------------------------------------------------
def _criterion_6():
    for n in (2, 3):
        for p in (2, 3):
            for lam in (0, 1):
                alg = build_algebra(n, p, lam)
                for i in range(1, n):
                    certs = fn.verify_braid_R2(alg, i)
                    yield ("R2", n, p, lam, i), bool(certs) and all(c.verify() for c in certs)
                    T = kt.decat(alg, fn.build_T(alg, i))
                    Tp = kt.matrix_of(alg, lambda P, i=i: fn.twist_inverse(alg, i, P))
                    yield ("twist", n, p, lam, i), T.to_root() == kt.closed_form_twist_matrix(n, p, i).to_root()
                    yield ("twist'", n, p, lam, i), \
                        Tp.to_root() == kt.closed_form_twist_matrix(n, p, i, inverse=True).to_root()
    for p in (2, 3):
        for lam in (0, 1):
            rep = fn.verify_braid_R3(build_algebra(3, p, lam), 1)
            yield ("R3", p, lam), all(rep["checks"].values()) and \
                all(c.verify() for c in rep["certificates"].values())
    for n in range(2, 7):
        for p in (2, 3, 5, 7):
            I = CMat.identity(n, CycInt, p)
            T = {(i, s): kt.twist_matrix(n, p, i, inverse=s < 0) for i in range(1, n) for s in (1, -1)}
            yield ("inverse", n, p), all(T[i, 1] @ T[i, -1] == I for i in range(1, n))
            yield ("braid", n, p), all(T[i, 1] @ T[i + 1, 1] @ T[i, 1] == T[i + 1, 1] @ T[i, 1] @ T[i + 1, 1]
                                       for i in range(1, n - 1))
            yield ("far", n, p), all(T[i, 1] @ T[j, 1] == T[j, 1] @ T[i, 1]
                                     for i in range(1, n) for j in range(i + 2, n))
            yield ("closed_form", n, p), all(T[i, 1].to_root() == kt.closed_form_twist_matrix(n, p, i).to_root() and
                                         T[i, -1].to_root() == kt.closed_form_twist_matrix(n, p, i, True).to_root()
                                         for i in range(1, n))


def test_criterion_6():
    ok, bad = _all(_criterion_6())
    report(6, ok, f"first failure {bad}" if bad else "closed-form twists compared after q -> zeta_2p")


# 7 -------------------------------------------------------------------------------
def _criterion_7():
    for p in (2, 3, 5):
        yield ("factorials", p), all(r % p for _, r in rs.factorials_used(p))
        for n in (3, 4):
            alg = build_algebra(n, p, 1)
            for i in range(1, n - 1):
                for name, m in (("psi", rs.psi_map(alg, i)), ("phi", rs.phi_map(alg, i))):
                    rep = rs.resolution_map_report(m)
                    yield (name, n, p, i), rep["chain"] and rep["nontrivial"] and rep["stable_dim"] == 1


def test_criterion_7():
    ok, bad = _all(_criterion_7())
    report(7, ok, f"first failure {bad}" if bad else "")


# 8 -------------------------------------------------------------------------------
def _criterion_8():
    for n in range(1, 7):
        for p in (2, 3, 5, 7):
            yield ("quantum", n, p), all(qu.tensor_rep(n, p).relations().values())
    for n in range(2, 7):
        for p in (2, 3, 5, 7):
            I = CMat.identity(n, CycInt, p)
            t = {(i, s): qu.burau_matrix(n, p, i, s) for i in range(1, n) for s in (1, -1)}
            yield ("burau_inverse", n, p), all(t[i, -1] @ t[i, 1] == I for i in range(1, n))
            yield ("burau_quadratic", n, p), all(((t[i, 1] + I.scale(CycInt.q(p, 2))) @ (t[i, 1] - I)).is_zero()
                                                 for i in range(1, n))
            yield ("burau_braid", n, p), all(t[i, 1] @ t[i + 1, 1] @ t[i, 1] == t[i + 1, 1] @ t[i, 1] @ t[i + 1, 1]
                                             for i in range(1, n - 1))
            yield ("burau_far", n, p), all(t[i, 1] @ t[j, 1] == t[j, 1] @ t[i, 1]
                                           for i in range(1, n) for j in range(i + 2, n))
    factors = set()
    for n in (2, 3):
        for p in (2, 3):
            for lam in (0, 1):
                for i in range(1, n):
                    for s in (1, -1):
                        sq = qu.commuting_square(n, p, lam, i, s)
                        factors.add((p, sq.factor))
                        yield ("square", n, p, lam, i, s), sq.at_root and bool(sq.factor)
    _criterion_8.factors = sorted(factors)


def test_criterion_8():
    ok, bad = _all(_criterion_8())
    factors = ", ".join(f"p={p}: {f}" for p, f in getattr(_criterion_8, "factors", []))
    report(8, ok, f"first failure {bad}" if bad else f"O_p discrepancy factor {factors}")


# 9 -------------------------------------------------------------------------------
def _criterion_9():
    rng = np.random.default_rng(9)
    for p in (2, 3, 5):
        agree = True
        for _ in range(500):
            c, planted = pc.random_pcomplex(rng, p, 12, planted=True)
            agree &= pc.decompose(c) == pc.decompose_greedy(c) == planted
        yield ("decompose", p), agree
        sym = True
        shift_ok = True
        for _ in range(50):
            c, d = pc.random_pcomplex(rng, p, 6), pc.random_pcomplex(rng, p, 6)
            sym &= pc.symbol(pc.direct_sum(c, d)) == pc.symbol(c) + pc.symbol(d)
            sym &= pc.symbol(pc.tensor(c, d)) == pc.symbol(c) * pc.symbol(d)
            f = pc.stable_iso(pc.shift(c, 2, 0), pc.shift(c, 0, -2 * p))
            shift_ok &= f is not None and f.is_chain() and pc.is_quasi_iso(f)
        yield ("symbol", p), sym
        yield ("shift", p), shift_ok
    for p in (2, 3, 5, 7):
        yield ("iota", p), pc.is_quasi_iso(pc.iota(p))


def test_criterion_9():
    ok, bad = _all(_criterion_9())
    report(9, ok, f"first failure {bad}" if bad else "")


if __name__ == "__main__":
    failed = 0
    for k in range(1, 10):
        try:
            globals()[f"test_criterion_{k}"]()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
