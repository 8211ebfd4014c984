"""The small quantum group on V_1^{(x)n}, the Burau representation and its comparison with K_0."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .arith import CMat, CycInt, qint
from . import ktheory as kt

def _q(p: int, e: int = 1) -> CycInt:
    return CycInt.q(p, e)


def kron(a: CMat, b: CMat) -> CMat:
    rb, cb = b.shape
    ent = {}
    for (i, j), x in a.entries.items():
        for (k, l), y in b.entries.items():
            ent[(i * rb + k, j * cb + l)] = x * y
    return CMat((a.shape[0] * rb, a.shape[1] * cb), a.ring, a.p, ent)


def kron_all(mats) -> CMat:
    out = mats[0]
    for m in mats[1:]:
        out = kron(out, m)
    return out


def index(bits) -> int:
    """Position of v_{b_1} (x) ... (x) v_{b_n}; the first factor is the most significant."""
    out = 0
    for b in bits:
        out = 2 * out + b
    return out


# ---------------------------------------------------------------------------
# V_1 and its tensor powers
# ---------------------------------------------------------------------------
def local_ops(p: int) -> dict:
    """E, F, K, K^{-1} on V_1: K v_i = q^{1-2i} v_i, F v_0 = v_1, E v_1 = v_0."""
    one = CycInt(1, p)
    return {
        "E": CMat((2, 2), CycInt, p, {(0, 1): one}),
        "F": CMat((2, 2), CycInt, p, {(1, 0): one}),
        "K": CMat((2, 2), CycInt, p, {(0, 0): _q(p), (1, 1): _q(p, -1)}),
        "Kinv": CMat((2, 2), CycInt, p, {(0, 0): _q(p, -1), (1, 1): _q(p)}),
    }


@dataclass
class TensorRep:
    n: int
    p: int
    E: CMat
    F: CMat
    K: CMat
    Kinv: CMat

    @property
    def dim(self) -> int:
        return 2 ** self.n

    def relations(self) -> dict:
        """The four defining relations, each as a boolean."""
        p, I = self.p, CMat.identity(self.dim, CycInt, self.p)
        E, F, K, Ki = self.E, self.F, self.K, self.Kinv
        q2, qm2 = _q(p, 2), _q(p, -2)
        comm = E @ F - F @ E
        return {
            "KKinv": K @ Ki == I and Ki @ K == I,
            "KE": K @ E == (E @ K).scale(q2) and Ki @ E == (E @ Ki).scale(qm2),
            "KF": K @ F == (F @ K).scale(qm2) and Ki @ F == (F @ Ki).scale(q2),
            "EF": comm.scale(_q(p) - _q(p, -1)) == K - Ki and comm == self.commutator_by_weight(),
            "nilpotent": (E ** p).is_zero() and (F ** p).is_zero(),
        }

    def commutator_by_weight(self) -> CMat:
        """Diagonal [m] on a vector of K-weight m; EF - FE must equal it."""
        ent = {}
        for k in range(self.dim):
            ones = bin(k).count("1")
            m = self.n - 2 * ones
            v = qint(abs(m), self.p)
            ent[(k, k)] = v if m >= 0 else -v
        return CMat((self.dim, self.dim), CycInt, self.p, ent)


@lru_cache(maxsize=None)
def tensor_rep(n: int, p: int, opposite: bool = False) -> TensorRep:
    """Iterated coproduct: E = sum K..K E 1..1, F = sum 1..1 F K^-1..K^-1, K = K..K.

    With opposite=True the tensor factors are read in reverse order
    (E = sum 1..1 E K..K, F = sum K^-1..K^-1 F 1..1); this is the coproduct
    whose action commutes with the local braid operators below.
    """
    ops = local_ops(p)
    I2 = CMat.identity(2, CycInt, p)
    dim = 2 ** n
    E = CMat.zero((dim, dim), CycInt, p)
    F = CMat.zero((dim, dim), CycInt, p)
    for k in range(n):
        if opposite:
            E = E + kron_all([I2] * k + [ops["E"]] + [ops["K"]] * (n - k - 1))
            F = F + kron_all([ops["Kinv"]] * k + [ops["F"]] + [I2] * (n - k - 1))
        else:
            E = E + kron_all([ops["K"]] * k + [ops["E"]] + [I2] * (n - k - 1))
            F = F + kron_all([I2] * k + [ops["F"]] + [ops["Kinv"]] * (n - k - 1))
    K = kron_all([ops["K"]] * n)
    Kinv = kron_all([ops["Kinv"]] * n)
    return TensorRep(n, p, E, F, K, Kinv)


def weight_space(n: int, p: int, weight: int) -> list:
    """Basis (tensor-basis indices) of the K-eigenspace with eigenvalue q^weight.

    K is diagonal in the tensor basis, so the eigenspace is spanned by the
    basis vectors with n - 2 (number of v_1 factors) = weight.
    """
    K = tensor_rep(n, p).K
    target = _q(p, weight)
    return [k for k in range(2 ** n) if K[k, k] == target and (n - weight) % 2 == 0
            and n - 2 * bin(k).count("1") == weight]


def l_basis(n: int, p: int) -> CMat:
    """Columns l_1..l_n in the tensor basis."""
    if n < 2:
        raise ValueError("the l basis needs n >= 2")
    ent = {}
    for r in range(1, n + 1):
        if r == n:
            bits = [0] * (n - 1) + [1]
            ent[(index(bits), r - 1)] = CycInt(1, p)
            continue
        a = [0] * n
        a[r - 1] = 1
        b = [0] * n
        b[r] = 1
        ent[(index(a), r - 1)] = CycInt(1, p)
        ent[(index(b), r - 1)] = -_q(p)
    return CMat((2 ** n, n), CycInt, p, ent)


def local_braid(p: int, sign: int = 1) -> CMat:
    """t~ (sign +1) or t~' (sign -1) on V_1 (x) V_1, basis v0v0, v0v1, v1v0, v1v1."""
    q, qi, one = _q(p), _q(p, -1), CycInt(1, p)
    if sign > 0:
        ent = {(0, 0): one, (3, 3): one,
               (2, 1): q, (1, 1): one - _q(p, 2),
               (1, 2): q}
    else:
        ent = {(0, 0): one, (3, 3): one,
               (2, 1): qi,
               (2, 2): one - _q(p, -2), (1, 2): qi}
    return CMat((4, 4), CycInt, p, ent)


def braid_op(n: int, p: int, i: int, sign: int = 1) -> CMat:
    if not 1 <= i <= n - 1:
        raise ValueError(f"index {i} outside 1..{n - 1}")
    I2 = CMat.identity(2, CycInt, p)
    return kron_all([I2] * (i - 1) + [local_braid(p, sign)] + [I2] * (n - i - 1))


def burau_matrix(n: int, p: int, i: int, sign: int = 1) -> CMat:
    """t_i (or t_i') on the l basis: l_i -> -q^{+-2} l_i, l_{i+-1} -> q^{+-1} l_i + l_{i+-1}."""
    if not 1 <= i <= n - 1:
        raise ValueError(f"index {i} outside 1..{n - 1}")
    e = 1 if sign > 0 else -1
    M = CMat.identity(n, CycInt, p)
    ent = dict(M.entries)
    ent[(i - 1, i - 1)] = -_q(p, 2 * e)
    for j in (i - 1, i + 1):
        if 1 <= j <= n:
            ent[(i - 1, j - 1)] = _q(p, e)
    return CMat((n, n), CycInt, p, ent)


def restrict_to_l_basis(op: CMat, n: int, p: int) -> CMat | None:
    """The matrix of op on span(l_1..l_n), or None if the span is not stable."""
    L = l_basis(n, p)
    rows = weight_space(n, p, n - 2)
    Lw = L.submatrix(rows, list(range(n)))          # n x n, invertible
    inv = Lw.inverse()
    image = op @ L
    coords = inv @ image.submatrix(rows, list(range(n)))
    return coords if L @ coords == image else None


def commutes_with_quantum_group(n: int, p: int, i: int, sign: int = 1, opposite: bool = False) -> dict:
    """Which of E, F, K commute with t_i; only K does for the default coproduct."""
    rep = tensor_rep(n, p, opposite)
    t = braid_op(n, p, i, sign)
    return {name: t @ getattr(rep, name) == getattr(rep, name) @ t for name in ("E", "F", "K")}


# ---------------------------------------------------------------------------
# comparison with K_0
# ---------------------------------------------------------------------------
def to_simple_basis(m: CMat) -> CMat:
    """An operator in the projective basis rewritten in the basis of simples: C m C^{-1}."""
    n, p = m.shape[0], m.p
    return kt.cartan(n, p) @ m @ kt.cartan_inverse(n, p)


@dataclass
class SquareReport:
    n: int
    p: int
    lam: int
    i: int
    sign: int
    exact: bool           # decategorified functor = Burau over O_p
    at_root: bool         # the same after q -> zeta_{2p}
    closed_form_at_root: bool  # closed form Id - q^{p+1} u (resp. q^{p-1}) = Burau over O_{2p}
    closed_form_exact: bool    # the closed form over O_p
    factor: str           # -q^p, the ratio of the two twist coefficients

    def to_json(self) -> dict:
        return dict(self.__dict__)


def commuting_square(n: int, p: int, lam: int, i: int, sign: int = 1, functor_matrix: CMat | None = None) -> SquareReport:
    """Compare [T_i] (or [T_i']) on K_0, with [L_j] -> l_j, against the Burau matrix."""
    if functor_matrix is None:
        from .zigzag import build_algebra
        from . import functors as fn
        alg = build_algebra(n, p, lam)
        if sign > 0:
            functor_matrix = kt.decat(alg, fn.build_T(alg, i))
        else:
            functor_matrix = kt.matrix_of(alg, lambda P: fn.twist_inverse(alg, i, P))
    B = burau_matrix(n, p, i, sign)
    in_l = to_simple_basis(functor_matrix)
    closed = to_simple_basis(kt.closed_form_twist_matrix(n, p, i, inverse=sign < 0))
    return SquareReport(n, p, lam, i, sign,
                        exact=in_l == B,
                        at_root=in_l.to_root() == B.to_root(),
                        closed_form_at_root=closed.to_root() == B.to_root(),
                        closed_form_exact=closed == B,
                        factor=str(kt.discrepancy_factor(p)))


def parse_word(word: str) -> list:
    """'s1 S2 s1' -> [(1, 1), (2, -1), (1, 1)]; capital letters are inverses."""
    out = []
    for tok in word.replace(",", " ").split():
        if len(tok) < 2 or tok[0] not in "sS" or not tok[1:].isdigit():
            raise ValueError(f"bad braid letter {tok!r}")
        out.append((int(tok[1:]), 1 if tok[0] == "s" else -1))
    return out


def burau_word(n: int, p: int, word) -> CMat:
    """Product of Burau matrices, leftmost letter outermost."""
    out = CMat.identity(n, CycInt, p)
    for k, s in word:
        out = out @ burau_matrix(n, p, k, s)
    return out
