"""The zigzag algebra A_n^! over F_p with the differentials d_lambda.

Paths compose left to right: (i|j)*(j|k) = (i|j|k).  Every nonzero path
is a monotone walk from its source to its target followed by a power of
the loop c_t = (t|t+1|t) = (t|t-1|t) at the target; the power k is at
most min(source, target) - 1 because (1|2|1) = 0.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from itertools import product

import numpy as np

from . import linalg as la
from .arith import Laurent, check_prime


@dataclass(frozen=True, order=True)
class NormalPath:
    source: int
    target: int
    loops: int = 0

    @property
    def degree(self) -> int:
        return abs(self.source - self.target) + 2 * self.loops

    def walk(self, n: int) -> list[int]:
        s, t = self.source, self.target
        step = 1 if t >= s else -1
        verts = list(range(s, t + step, step)) if s != t else [s]
        for _ in range(self.loops):
            verts += [t + 1 if t < n else t - 1, t]
        return verts

    def render(self, n: int) -> str:
        return "(" + "|".join(map(str, self.walk(n))) + ")"


class AlgebraError(ValueError):
    pass


class ZigzagAlgebra:
    """A_n^! with differential d_lambda, built once and then read-only."""

    def __init__(self, n: int, p: int, lam: int = 1):
        if n < 2:
            raise AlgebraError("A_n^! needs n >= 2")
        check_prime(p)
        self.n, self.p, self.lam = n, p, lam % p
        self.basis = [
            NormalPath(s, t, k)
            for s in range(1, n + 1)
            for t in range(1, n + 1)
            for k in range(min(s, t))
        ]
        self.index = {b: i for i, b in enumerate(self.basis)}
        self.arrows = [(i, i + 1) for i in range(1, n)] + [(i + 1, i) for i in range(1, n)]

    def __repr__(self):
        return f"ZigzagAlgebra(n={self.n}, p={self.p}, lambda={self.lam})"

    @property
    def dim(self) -> int:
        return len(self.basis)

    def valid(self, s: int, t: int, k: int) -> bool:
        return 1 <= s <= self.n and 1 <= t <= self.n and 0 <= k <= min(s, t) - 1

    # basis level -------------------------------------------------------
    def mult_paths(self, a: NormalPath, b: NormalPath):
        """Product of two basis paths: a NormalPath or None."""
        if a.target != b.source:
            return None
        s, m, t = a.source, a.target, b.target
        if min(s, t) <= m <= max(s, t):
            turn = 0
        else:
            turn = min(abs(m - s), abs(t - m))
        k = a.loops + b.loops + turn
        return NormalPath(s, t, k) if self.valid(s, t, k) else None

    def d_path(self, a: NormalPath):
        """(coefficient, path) with d(a) = coefficient * path, or None."""
        s, t, k = a.source, a.target, a.loops
        steps = abs(t - s)
        per = self.lam if t > s else (1 - self.lam)
        coef = (steps * per + k) % self.p
        if coef == 0 or not self.valid(s, t, k + 1):
            return None
        return coef, NormalPath(s, t, k + 1)

    @staticmethod
    def tau_path(a: NormalPath) -> NormalPath:
        return NormalPath(a.target, a.source, a.loops)

    # elements ------------------------------------------------------------
    def elt(self, terms=None) -> "AlgElement":
        return AlgElement(self, terms or {})

    def e(self, i: int) -> "AlgElement":
        return self.elt({NormalPath(i, i, 0): 1})

    def one(self) -> "AlgElement":
        return self.elt({NormalPath(i, i, 0): 1 for i in range(1, self.n + 1)})

    def arrow(self, i: int, j: int) -> "AlgElement":
        if abs(i - j) != 1 or not (1 <= i <= self.n and 1 <= j <= self.n):
            raise AlgebraError(f"no arrow ({i}|{j}) in the quiver")
        return self.elt({NormalPath(i, j, 0): 1})

    def loop(self, i: int) -> "AlgElement":
        if not self.valid(i, i, 1):
            return self.elt()
        return self.elt({NormalPath(i, i, 1): 1})

    def walk(self, verts) -> "AlgElement":
        verts = list(verts)
        out = self.e(verts[0])
        for a, b in zip(verts, verts[1:]):
            out = out * self.arrow(a, b)
        return out

    def parse(self, text: str) -> "AlgElement":
        """Parse labels such as '(1|2)', '-(2|1|2)', '2*(1|2) + (1)', '-1', '1'."""
        text = text.strip()
        out = self.elt()
        for sign, coef, body in re.findall(r"([+-]?)\s*(\d+\s*\*?)?\s*(\([\d|\s]+\))?", text):
            if not coef and not body:
                continue
            c = int(coef.rstrip("*").strip()) if coef else 1
            if sign == "-":
                c = -c
            if body:
                verts = [int(v) for v in body.strip("()").split("|")]
                out = out + self.walk(verts) * c
            else:
                raise AlgebraError("a bare scalar label needs an idempotent context")
        return out

    def graded_dim(self, i: int | None = None, j: int | None = None) -> Laurent:
        """Graded dimension of e_i A e_j (or of all of A)."""
        out = {}
        for b in self.basis:
            if (i is None or b.source == i) and (j is None or b.target == j):
                out[b.degree] = out.get(b.degree, 0) + 1
        return Laurent(out)

    # matrices on the basis ------------------------------------------------
    @cached_property
    def d_matrix(self) -> np.ndarray:
        N = self.dim
        D = la.zeros(N, N)
        for j, b in enumerate(self.basis):
            r = self.d_path(b)
            if r:
                D[self.index[r[1]], j] = r[0]
        return D

    def vector(self, x: "AlgElement") -> np.ndarray:
        v = la.zeros(self.dim, 1)[:, 0]
        for b, c in x.terms.items():
            v[self.index[b]] = c
        return v


class AlgElement:
    """An F_p-linear combination of normal paths."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: ZigzagAlgebra, terms):
        self.alg = alg
        p = alg.p
        self.terms = {b: c % p for b, c in dict(terms).items() if c % p}

    def __add__(self, other):
        t = dict(self.terms)
        for b, c in other.terms.items():
            t[b] = t.get(b, 0) + c
        return AlgElement(self.alg, t)

    def __neg__(self):
        return AlgElement(self.alg, {b: -c for b, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return AlgElement(self.alg, {b: c * other for b, c in self.terms.items()})
        t: dict = {}
        for a, ca in self.terms.items():
            for b, cb in other.terms.items():
                r = self.alg.mult_paths(a, b)
                if r is not None:
                    t[r] = t.get(r, 0) + ca * cb
        return AlgElement(self.alg, t)

    def __rmul__(self, other: int):
        return self * other

    def __pow__(self, k: int):
        if k == 0:
            srcs = {b.source for b in self.terms} | {b.target for b in self.terms}
            return AlgElement(self.alg, {NormalPath(i, i, 0): 1 for i in srcs})
        out = self
        for _ in range(k - 1):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, AlgElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def d(self) -> "AlgElement":
        t: dict = {}
        for b, c in self.terms.items():
            r = self.alg.d_path(b)
            if r:
                t[r[1]] = t.get(r[1], 0) + c * r[0]
        return AlgElement(self.alg, t)

    def tau(self, alg: ZigzagAlgebra | None = None) -> "AlgElement":
        """Reverse every path; optionally land in another algebra (e.g. other lambda)."""
        return AlgElement(alg or self.alg, {ZigzagAlgebra.tau_path(b): c for b, c in self.terms.items()})

    def degrees(self) -> set:
        return {b.degree for b in self.terms}

    def ends(self) -> set:
        return {(b.source, b.target) for b in self.terms}

    def __repr__(self):
        return f"AlgElement({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        p, n = self.alg.p, self.alg.n
        parts = []
        for b, c in sorted(self.terms.items()):
            c = c if c <= p // 2 else c - p
            body = b.render(n)
            parts.append(body if c == 1 else ("-" + body if c == -1 else f"{c}*{body}"))
        return " + ".join(parts).replace("+ -", "- ")


def build_algebra(n: int, p: int, lam: int = 1) -> ZigzagAlgebra:
    return ZigzagAlgebra(n, p, lam)


def multiply(a: AlgElement, b: AlgElement) -> AlgElement:
    return a * b


def differential(a: AlgElement) -> AlgElement:
    return a.d()


def tau(a: AlgElement, alg: ZigzagAlgebra | None = None) -> AlgElement:
    return a.tau(alg)


def dimension_formula(n: int) -> int:
    return sum(min(i, j) for i in range(1, n + 1) for j in range(1, n + 1))


# the lambda constraints --------------------------------------------------------
def constraint_residuals(lam: int, p: int) -> tuple:
    l = lam
    e1 = 2 * (1 + l * (3 - l)) - ((l + 3 * l) + ((1 - l) + (3 - l)))
    e2 = 2 * ((1 - l) + (3 - l)) - (4 + ((1 - l) ** 2 + (1 - l) * (3 - l)))
    e3 = 2 * (l + 3 * l) - ((l ** 2 + (l + 2) * l) + 4)
    return (e1 % p, e2 % p, e3 % p)


def lambda_constraints(p: int) -> set:
    check_prime(p)
    return {l for l in range(p) if constraint_residuals(l, p) == (0, 0, 0)}


# brute-force oracle: free path algebra modulo the relation ideal ---------------
def quiver_walks(n: int, length: int):
    """All vertex sequences of the doubled A_n quiver with ``length`` arrows."""
    out = []
    for start in range(1, n + 1):
        walks = [[start]]
        for _ in range(length):
            walks = [w + [w[-1] + s] for w in walks for s in (-1, 1) if 1 <= w[-1] + s <= n]
        out.extend(tuple(w) for w in walks)
    return out


def _relations(n: int):
    rels = [{(1, 2, 1): 1}]
    for i in range(2, n):
        rels.append({(i, i - 1, i): 1, (i, i + 1, i): -1})
    return rels


def oracle_quotient(n: int, p: int, length: int):
    """Walks of a given length and a basis of the relation ideal in that degree."""
    walks = quiver_walks(n, length)
    idx = {w: i for i, w in enumerate(walks)}
    vecs = []
    if length >= 2:
        for rel in _relations(n):
            mid = next(iter(rel))
            s, t = mid[0], mid[-1]
            for left_len in range(length - 1):
                right_len = length - 2 - left_len
                lefts = [w for w in quiver_walks(n, left_len) if w[-1] == s]
                rights = [w for w in quiver_walks(n, right_len) if w[0] == t]
                for u, w in product(lefts, rights):
                    v = la.zeros(len(walks), 1)[:, 0]
                    for r, c in rel.items():
                        v[idx[u[:-1] + r + w[1:]]] += c
                    vecs.append(v)
    ideal = la.colspace(np.stack(vecs, axis=1) % p, p) if vecs else la.zeros(len(walks), 0)
    return walks, ideal


def oracle_check(alg: ZigzagAlgebra) -> dict:
    """Compare the normal form with the quotient of the free path algebra.

    For every degree: the quotient dimension equals the number of normal
    paths, and the normal-form map kills the ideal and is onto.
    """
    n, p = alg.n, alg.p
    report = {}
    for length in range(0, 2 * n - 1 + 2):
        walks, ideal = oracle_quotient(n, p, length)
        basis_d = [b for b in alg.basis if b.degree == length]
        quotient_dim = len(walks) - ideal.shape[1]
        F = la.zeros(len(basis_d), len(walks))
        pos = {b: i for i, b in enumerate(basis_d)}
        for j, w in enumerate(walks):
            x = alg.walk(w)
            for b, c in x.terms.items():
                F[pos[b], j] = c
        kills = not la.matmul(F, ideal, p).any() if ideal.shape[1] else True
        onto = la.rank(F, p) == len(basis_d) if basis_d else True
        report[length] = {
            "walks": len(walks),
            "quotient": quotient_dim,
            "normal": len(basis_d),
            "ok": quotient_dim == len(basis_d) and kills and onto,
        }
    return report


def derivation_report(alg: ZigzagAlgebra) -> dict:
    """d^p = 0, the Leibniz rule on all basis pairs, and tau d_lam = d_{1-lam} tau."""
    p = alg.p
    D = alg.d_matrix
    P = la.eye(alg.dim)
    for _ in range(p):
        P = la.matmul(D, P, p)
    nilpotent = not P.any()
    els = [alg.elt({b: 1}) for b in alg.basis]
    leibniz = all(
        (a * b).d() == a.d() * b + a * b.d()
        for a in els for b in els
    )
    other = ZigzagAlgebra(alg.n, p, 1 - alg.lam)
    intertwines = all(x.d().tau(other) == x.tau(other).d() for x in els)
    return {"nilpotent": nilpotent, "leibniz": leibniz, "tau": intertwines}
