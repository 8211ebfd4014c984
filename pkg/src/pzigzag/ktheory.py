"""The Grothendieck group K_0 over O_p = Z[q]/(Psi_p(q^2)), in the basis of projectives."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .arith import CMat, Cyc2p, CycInt, Laurent, is_unit
from .pdgmod import CellDiagram, Module, projective
from .zigzag import ZigzagAlgebra


@dataclass(frozen=True)
class K0Vector:
    coords: tuple          # CycInt per projective P_1..P_n
    p: int

    @classmethod
    def zero(cls, n: int, p: int) -> "K0Vector":
        return cls(tuple(CycInt(0, p) for _ in range(n)), p)

    @classmethod
    def unit(cls, n: int, p: int, j: int) -> "K0Vector":
        return cls(tuple(CycInt(int(k == j - 1), p) for k in range(n)), p)

    @classmethod
    def from_column(cls, m: CMat, c: int = 0) -> "K0Vector":
        return cls(tuple(m[r, c] for r in range(m.shape[0])), m.p)

    @property
    def n(self) -> int:
        return len(self.coords)

    def __add__(self, other: "K0Vector") -> "K0Vector":
        return K0Vector(tuple(a + b for a, b in zip(self.coords, other.coords)), self.p)

    def __sub__(self, other: "K0Vector") -> "K0Vector":
        return K0Vector(tuple(a - b for a, b in zip(self.coords, other.coords)), self.p)

    def __neg__(self) -> "K0Vector":
        return K0Vector(tuple(-a for a in self.coords), self.p)

    def scale(self, s) -> "K0Vector":
        return K0Vector(tuple(a * s for a in self.coords), self.p)

    def bar(self) -> "K0Vector":
        return K0Vector(tuple(a.bar() for a in self.coords), self.p)

    def column(self) -> CMat:
        return CMat((self.n, 1), CycInt, self.p, {(r, 0): a for r, a in enumerate(self.coords)})

    def to_json(self) -> list:
        return [a.to_json() for a in self.coords]

    def __str__(self):
        return " + ".join(f"({a})[P{k + 1}]" for k, a in enumerate(self.coords) if not a.is_zero()) or "0"


# ---------------------------------------------------------------------------
# Cartan matrix and the pairing
# ---------------------------------------------------------------------------
def _path_laurent(i: int, j: int) -> Laurent:
    """gdim e_i A e_j = q^{|i-j|} (1 + q^2 + ... + q^{2(min(i,j)-1)})."""
    return Laurent({abs(i - j) + 2 * k: 1 for k in range(min(i, j))})


@lru_cache(maxsize=None)
def cartan(n: int, p: int) -> CMat:
    """C_ij = gdim e_i A e_j; the Gram matrix of the pairing on projectives."""
    return CMat((n, n), CycInt, p, {(i, j): CycInt(_path_laurent(i + 1, j + 1), p)
                                    for i in range(n) for j in range(n)})


def cartan_from_algebra(alg: ZigzagAlgebra) -> CMat:
    """Same matrix, read off the basis of the algebra (used as a cross-check)."""
    n, p = alg.n, alg.p
    acc: dict = {}
    for b in alg.basis:
        key = (b.target - 1, b.source - 1)
        acc.setdefault(key, {})
        acc[key][b.degree] = acc[key].get(b.degree, 0) + 1
    return CMat((n, n), CycInt, p, {k: CycInt(Laurent(v), p) for k, v in acc.items()})


@lru_cache(maxsize=None)
def cartan_inverse(n: int, p: int) -> CMat:
    return cartan(n, p).inverse()


def gram(n: int, p: int) -> CMat:
    return cartan(n, p)


def gram_perfect(n: int, p: int) -> bool:
    return is_unit(cartan(n, p).det())


def pairing(x: K0Vector, y: K0Vector) -> CycInt:
    """<x, y>: bar-semilinear in x, linear in y."""
    C = cartan(x.n, x.p)
    out = CycInt(0, x.p)
    for i, a in enumerate(x.coords):
        if a.is_zero():
            continue
        ab = a.bar()
        for j, b in enumerate(y.coords):
            if not b.is_zero():
                out = out + ab * C[i, j] * b
    return out


# ---------------------------------------------------------------------------
# symbols
# ---------------------------------------------------------------------------
def simple_class(n: int, p: int, i: int) -> K0Vector:
    """[L_i] in the projective basis: column i of the inverse Cartan matrix."""
    return K0Vector.from_column(cartan_inverse(n, p), i - 1)


def simple_coordinates(M: Module) -> K0Vector:
    """Coordinates of [M] in the basis of simples: sum of q^d dim(e_i M_d)."""
    p = M.p
    coords = []
    for i in range(1, M.alg.n + 1):
        coords.append(CycInt(M.graded_dim(i), p))
    return K0Vector(tuple(coords), p)


def symbol_module(M: Module) -> K0Vector:
    """[M] for a finite-dimensional left module, filtered by degree into shifted simples."""
    n, p = M.alg.n, M.p
    if M.lv is None:
        raise ValueError("symbol needs a left module")
    return K0Vector.from_column(cartan_inverse(n, p) @ simple_coordinates(M).column())


def symbol_diagram(diagram: CellDiagram, n: int, p: int) -> K0Vector:
    """Sum over nodes of q^shift [P_node]."""
    acc: dict = {}
    for v, s, _ in diagram.nodes:
        acc.setdefault(v, {})
        acc[v][s] = acc[v].get(s, 0) + 1
    return K0Vector(tuple(CycInt(Laurent(acc.get(v, {})), p) for v in range(1, n + 1)), p)


# ---------------------------------------------------------------------------
# matrices of functors
# ---------------------------------------------------------------------------
def matrix_of(alg: ZigzagAlgebra, functor) -> CMat:
    """Columns [functor(P_j)] for a functor on left modules."""
    n, p = alg.n, alg.p
    cols = [symbol_module(functor(projective(alg, j))) for j in range(1, n + 1)]
    return CMat((n, n), CycInt, p, {(r, c): v.coords[r] for c, v in enumerate(cols) for r in range(n)})


def decat(alg: ZigzagAlgebra, B) -> CMat:
    """Matrix of a bimodule acting by tensor product."""
    from .functors import apply_bimodule
    return matrix_of(alg, lambda P: apply_bimodule(B, P))


def tl_matrix(n: int, p: int, i: int) -> CMat:
    """u_i = -q^{-1} [L_i] e_i^T, since the cap of P_j is the ground field exactly when j = i."""
    col = simple_class(n, p, i)
    c = CycInt.q(p, -1)
    return CMat((n, n), CycInt, p, {(r, i - 1): -c * col.coords[r] for r in range(n)})


def twist_matrix(n: int, p: int, i: int, inverse: bool = False) -> CMat:
    """Id + q u_i, or Id + q^{-1} u_i for the inverse twist (exact over O_p)."""
    e = -1 if inverse else 1
    return CMat.identity(n, CycInt, p) + tl_matrix(n, p, i).scale(CycInt.q(p, e))


def closed_form_twist_matrix(n: int, p: int, i: int, inverse: bool = False) -> CMat:
    """Id - q^{p+1} u_i (resp. Id - q^{p-1} u_i)."""
    e = p - 1 if inverse else p + 1
    return CMat.identity(n, CycInt, p) - tl_matrix(n, p, i).scale(CycInt.q(p, e))


def discrepancy_factor(p: int) -> CycInt:
    """The ratio -q^p between the closed-form and the exact twist coefficients; 1 only where q^p = -1."""
    return -CycInt.q(p, p)


def is_hermitian(u: CMat) -> bool:
    """<u x, y> = <x, u y> on all basis pairs, i.e. bar(u)^T C = C u."""
    n, p = u.shape[0], u.p
    C = cartan(n, p)
    return u.bar().transpose() @ C == C @ u


def braid_word_matrix(n: int, p: int, word, ring=CycInt) -> CMat:
    """Product of twist matrices for a word of (index, +-1), applied right to left."""
    out = CMat.identity(n, CycInt, p)
    for k, s in word:
        out = out @ twist_matrix(n, p, k, inverse=s < 0)
    return out.to_root() if ring is Cyc2p else out
