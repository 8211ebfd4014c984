"""Finite graded p-complexes over F_p.

A p-complex is stored with its basis sorted by q-degree and one global
matrix ``D`` (column j is the differential of basis vector j).  The
differential has degree +2 and satisfies D^p = 0.

Indecomposables are named by bottom degree: ``(j, b)`` spans degrees
b, b+2, ..., b+2j.  The balanced one of length j+1 is ``(j, -j)``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from . import linalg as la
from .arith import CycInt, Laurent, qint


class PComplexError(ValueError):
    pass


@dataclass(frozen=True)
class Violation:
    degree: int
    kind: str
    witness: list

    def to_json(self):
        return {"degree": self.degree, "kind": self.kind, "witness": self.witness}


@dataclass(eq=False)
class PComplex:
    p: int
    degs: np.ndarray
    D: np.ndarray
    labels: tuple = field(default=None)

    def __post_init__(self):
        self.degs = np.asarray(self.degs, dtype=np.int64).reshape(-1)
        n = len(self.degs)
        self.D = la.mod(np.asarray(self.D, dtype=np.int64).reshape(n, n), self.p)
        if n and np.any(np.diff(self.degs) < 0):
            raise PComplexError("basis must be sorted by degree; use PComplex.build")
        if self.labels is None:
            self.labels = tuple(range(n))
        self._slots = None
        self._powers = {}
        self._powers_of = None
        self._dims = dict(Counter(int(d) for d in self.degs))

    # construction --------------------------------------------------------
    @classmethod
    def build(cls, p: int, degs, D, labels=None):
        """Sort an arbitrary homogeneous basis by degree."""
        degs = np.asarray(degs, dtype=np.int64).reshape(-1)
        order = np.argsort(degs, kind="stable")
        D = np.asarray(D, dtype=np.int64).reshape(len(degs), len(degs))
        labs = None if labels is None else tuple(labels[i] for i in order)
        return cls(p, degs[order], D[np.ix_(order, order)], labs)

    @classmethod
    def from_blocks(cls, p: int, dims: dict, diff: dict):
        degrees = sorted(d for d, k in dims.items() if k)
        degs = [d for d in degrees for _ in range(dims[d])]
        C = cls(p, degs, la.zeros(len(degs), len(degs)))
        D = C.D
        for d, block in diff.items():
            block = np.asarray(block, dtype=np.int64)
            if block.size == 0:
                continue
            s, t = C.slot(d), C.slot(d + 2)
            D[t, s] = block
        C.D = la.mod(D, p)
        return C

    @classmethod
    def zero(cls, p: int):
        return cls(p, [], la.zeros(0, 0))

    # views ---------------------------------------------------------------
    @property
    def dim(self) -> int:
        return len(self.degs)

    @property
    def dims(self) -> dict:
        return self._dims

    @property
    def diff(self) -> dict:
        out = {}
        for d in self.dims:
            if d + 2 in self.dims:
                out[d] = self.D[self.slot(d + 2), self.slot(d)]
        return out

    def slot(self, d: int) -> slice:
        if self._slots is None:
            sl = {}
            for i, e in enumerate(self.degs):
                e = int(e)
                if e in sl:
                    sl[e] = slice(sl[e].start, i + 1)
                else:
                    sl[e] = slice(i, i + 1)
            self._slots = sl
        return self._slots.get(int(d), slice(0, 0))

    def power_block(self, d: int, k: int) -> np.ndarray:
        """The block of D^k from degree d to degree d + 2k (memoised; callers must not mutate it)."""
        if self._powers_of is not self.D:
            self._powers, self._powers_of = {}, self.D
        key = (int(d), k)
        if key not in self._powers:
            if k == 0:
                s = self.slot(d)
                out = la.eye(s.stop - s.start)
            else:
                prev = self.power_block(d, k - 1)
                blk = self.D[self.slot(d + 2 * k), self.slot(d + 2 * k - 2)]
                out = la.matmul(blk, prev, self.p)
            self._powers[key] = out
        return self._powers[key]

    def graded_dim(self) -> Laurent:
        return Laurent(self.dims)

    def to_json(self) -> dict:
        return {
            "dims": {str(d): k for d, k in sorted(self.dims.items())},
            "diff": {str(d): m.tolist() for d, m in sorted(self.diff.items()) if m.size and m.any()},
        }

    @classmethod
    def from_json(cls, obj, p: int):
        dims = {int(d): k for d, k in obj["dims"].items()}
        diff = {int(d): np.array(m, dtype=np.int64) for d, m in obj["diff"].items()}
        return cls.from_blocks(p, dims, diff)

    def __repr__(self):
        return f"PComplex(p={self.p}, dims={dict(sorted(self.dims.items()))})"


def indecomposable(j: int, b: int, p: int) -> PComplex:
    """The (j+1)-dimensional indecomposable with bottom degree b."""
    if not 0 <= j <= p - 1:
        raise PComplexError(f"indecomposables have 0 <= j <= p-1, got j={j}")
    n = j + 1
    D = la.zeros(n, n)
    for i in range(j):
        D[i + 1, i] = 1
    return PComplex(p, [b + 2 * i for i in range(n)], D)


def balanced(j: int, p: int, shift: int = 0) -> PComplex:
    """V~_j{shift}: degrees -j+shift .. j+shift."""
    return indecomposable(j, -j + shift, p)


def direct_sum(*cs: PComplex) -> PComplex:
    p = cs[0].p
    degs = np.concatenate([c.degs for c in cs]) if cs else np.zeros(0, dtype=np.int64)
    n = len(degs)
    D = la.zeros(n, n)
    labels = []
    o = 0
    for k, c in enumerate(cs):
        D[o:o + c.dim, o:o + c.dim] = c.D
        labels.extend((k, l) for l in c.labels)
        o += c.dim
    return PComplex.build(p, degs, D, labels)


def translate(c: PComplex, l: int) -> PComplex:
    return PComplex(c.p, c.degs + l, c.D, c.labels)


# validation ----------------------------------------------------------------
def validate(c: PComplex):
    """None if c is a p-complex, otherwise the first Violation found."""
    p = c.p
    degs = c.degs
    rows, cols = np.nonzero(c.D)
    for i, j in zip(rows, cols):
        if degs[i] != degs[j] + 2:
            return Violation(int(degs[j]), "degree", [int(j), int(i)])
    for d in sorted(c.dims):
        blk = c.power_block(d, p)
        if blk.size and blk.any():
            return Violation(d, "nilpotence", blk.tolist())
    return None


def check(c: PComplex) -> PComplex:
    v = validate(c)
    if v is not None:
        raise PComplexError(f"not a p-complex: {v.kind} fails at degree {v.degree}")
    return c


# homology and decomposition --------------------------------------------------
def _power_rank(c: PComplex, d: int, k: int) -> int:
    if k == 0:
        return c.dims.get(d, 0)
    blk = c.power_block(d, k)
    return la.rank(blk, c.p) if blk.size else 0


def slash_homology(c: PComplex, k: int) -> dict:
    p = c.p
    if not 1 <= k <= p - 1:
        raise PComplexError("slash homology needs 1 <= k <= p-1")
    out = {}
    for d, n in c.dims.items():
        ker = n - _power_rank(c, d, k)
        im = _power_rank(c, d - 2 * (p - k), p - k)
        if ker - im:
            out[d] = ker - im
    return out


def decompose(c: PComplex) -> Counter:
    """Multiset of summands (j, b) from ranks of powers of the differential.

    r_k(b) counts chains meeting degree b that survive k more steps, so
    chains with bottom exactly b and top at least b+2k number
    r_k(b) - r_{k+1}(b-2).
    """
    p = c.p
    degs = sorted(c.dims)
    cache = {}

    def r(d, k):
        if (d, k) not in cache:
            cache[(d, k)] = _power_rank(c, d, k) if d in c.dims else 0
        return cache[(d, k)]

    def starting(b, k):
        return r(b, k) - r(b - 2, k + 1)

    out = Counter()
    for b in degs:
        for j in range(p):
            m = starting(b, j) - starting(b, j + 1)
            if m:
                out[(j, b)] += m
    return out


def decompose_greedy(c: PComplex) -> Counter:
    """Oracle: repeatedly split off the cyclic span of a vector of maximal height."""
    p = c.p
    degs = c.degs.copy()
    D = c.D.copy()
    out = Counter()
    while len(degs):
        n = len(degs)
        power = la.eye(n)
        best = None
        for k in range(1, p + 1):
            power = la.matmul(D, power, p)
            cols = np.nonzero(power.any(axis=0))[0]
            if cols.size == 0:
                break
            best = (k, int(cols[0]))
        if best is None:
            height, j0 = 0, 0
        else:
            height, j0 = best
        v = la.zeros(n, 1)
        v[j0, 0] = 1
        chain = [v]
        for _ in range(height):
            chain.append(la.matmul(D, chain[-1], p))
        W = np.concatenate(chain, axis=1)
        out[(height, int(degs[j0]))] += 1
        comp = la.complement_basis(W, n, p)
        B = np.concatenate([W, la.eye(n)[:, comp]], axis=1)
        Dn = la.matmul(la.inverse(B, p), la.matmul(D, B, p), p)
        k = W.shape[1]
        D = Dn[k:, k:]
        degs = degs[comp]
    return out


def reassemble(summands: Counter, p: int) -> PComplex:
    parts = [indecomposable(j, b, p) for (j, b), m in sorted(summands.items()) for _ in range(m)]
    return direct_sum(*parts) if parts else PComplex.zero(p)


def noncontractible(summands: Counter, p: int) -> Counter:
    return Counter({k: m for k, m in summands.items() if k[0] != p - 1 and m})


def symbol(c: PComplex) -> CycInt:
    p = c.p
    total = CycInt(0, p)
    for (j, b), m in decompose(c).items():
        if j == p - 1:
            continue
        total = total + CycInt(Laurent.mono(b + j, m), p) * qint(j + 1, p)
    return total


def graded_symbol(c: PComplex) -> CycInt:
    return CycInt(c.graded_dim(), c.p)


def is_acyclic(c: PComplex) -> bool:
    by_summands = not noncontractible(decompose(c), c.p)
    by_homology = all(not slash_homology(c, k) for k in range(1, c.p))
    if by_summands != by_homology:
        raise PComplexError("acyclicity criteria disagree")
    return by_summands


# tensor, shift -----------------------------------------------------------------
def tensor(c: PComplex, d: PComplex) -> PComplex:
    p = c.p
    degs = (c.degs[:, None] + d.degs[None, :]).reshape(-1)
    D = np.kron(c.D, la.eye(d.dim)) + np.kron(la.eye(c.dim), d.D)
    labels = [(a, b) for a in c.labels for b in d.labels]
    return PComplex.build(p, degs, la.mod(D, p), labels)


def shift_complex(p: int, h: int) -> PComplex:
    """The p-complex representing [h]: V~_{p-2}{-p} tensored h times (inverse for h<0)."""
    one = balanced(p - 2, p, -p if h > 0 else p)
    out = balanced(0, p)
    for _ in range(abs(h)):
        out = tensor(out, one)
    return out


def shift(c: PComplex, h: int, l: int) -> PComplex:
    out = c
    if h:
        out = tensor(c, shift_complex(c.p, h))
    return translate(out, l)


# maps ----------------------------------------------------------------------------
@dataclass(eq=False)
class PMap:
    source: PComplex
    target: PComplex
    M: np.ndarray
    qdeg: int = 0

    def __post_init__(self):
        self.M = la.mod(np.asarray(self.M, dtype=np.int64).reshape(self.target.dim, self.source.dim),
                        self.source.p)

    @property
    def blocks(self) -> dict:
        out = {}
        for d in self.source.dims:
            t = self.target.slot(d + self.qdeg)
            out[d] = self.M[t, self.source.slot(d)]
        return out

    def is_homogeneous(self) -> bool:
        rows, cols = np.nonzero(self.M)
        return bool(np.all(self.target.degs[rows] == self.source.degs[cols] + self.qdeg))

    def is_chain(self) -> bool:
        p = self.source.p
        lhs = la.matmul(self.M, self.source.D, p)
        rhs = la.matmul(self.target.D, self.M, p)
        return self.is_homogeneous() and np.array_equal(lhs, rhs)

    def compose(self, other: "PMap") -> "PMap":
        """self after other."""
        return PMap(other.source, self.target, la.matmul(self.M, other.M, self.source.p),
                    self.qdeg + other.qdeg)


def identity(c: PComplex) -> PMap:
    return PMap(c, c, la.eye(c.dim))


def _cone_matrix(src_D, tgt_D, f, p, copies_first: bool):
    """Assemble (copies of source) -> target, or source -> (copies of target)."""
    ns, nt = src_D.shape[0], tgt_D.shape[0]
    if copies_first:
        n = (p - 1) * ns + nt
        D = la.zeros(n, n)
        for c in range(p - 1):
            o = c * ns
            D[o:o + ns, o:o + ns] = src_D
            if c < p - 2:
                D[o + ns:o + 2 * ns, o:o + ns] = la.eye(ns)
            else:
                D[(p - 1) * ns:, o:o + ns] = -f
        D[(p - 1) * ns:, (p - 1) * ns:] = tgt_D
    else:
        n = ns + (p - 1) * nt
        D = la.zeros(n, n)
        D[:ns, :ns] = src_D
        D[ns:ns + nt, :ns] = -f
        for c in range(p - 1):
            o = ns + c * nt
            D[o:o + nt, o:o + nt] = tgt_D
            if c < p - 2:
                D[o + nt:o + 2 * nt, o:o + nt] = la.eye(nt)
    return la.mod(D, p)


def cone(f: PMap) -> PComplex:
    """Source{2-2p} = ... = Source{-2} --(-f)--> Target{0}."""
    if not f.is_chain():
        raise PComplexError("cone needs a chain map")
    p = f.source.p
    s, t = f.source, f.target
    degs = [s.degs + f.qdeg - 2 * (p - 1 - c) for c in range(p - 1)] + [t.degs]
    labels = [("src", c, l) for c in range(p - 1) for l in s.labels] + [("tgt", l) for l in t.labels]
    D = _cone_matrix(s.D, t.D, f.M, p, True)
    return PComplex.build(p, np.concatenate(degs), D, labels)


def cocone(f: PMap) -> PComplex:
    """Source{0} --(-f)--> Target{2} = ... = Target{2p-2}."""
    if not f.is_chain():
        raise PComplexError("cocone needs a chain map")
    p = f.source.p
    s, t = f.source, f.target
    degs = [s.degs] + [t.degs - f.qdeg + 2 * (c + 1) for c in range(p - 1)]
    labels = [("src", l) for l in s.labels] + [("tgt", c, l) for c in range(p - 1) for l in t.labels]
    D = _cone_matrix(s.D, t.D, f.M, p, False)
    return PComplex.build(p, np.concatenate(degs), D, labels)


def homology_map_is_iso(f: PMap) -> bool:
    """Does f induce isomorphisms on every slash homology?"""
    p = f.source.p
    s, t = f.source, f.target
    for k in range(1, p):
        degrees = set(s.dims) | {d + f.qdeg for d in t.dims}
        for d in degrees:
            ns, nt = s.dims.get(d, 0), t.dims.get(d + f.qdeg, 0)
            kerS = la.nullspace(s.power_block(d, k), p) if ns else la.zeros(0, 0)
            imS_blk = s.power_block(d - 2 * (p - k), p - k)
            imT_blk = t.power_block(d + f.qdeg - 2 * (p - k), p - k)
            kerT = la.nullspace(t.power_block(d + f.qdeg, k), p) if nt else la.zeros(0, 0)
            hs = kerS.shape[1] - (la.rank(imS_blk, p) if imS_blk.size else 0)
            im_t = la.rank(imT_blk, p) if imT_blk.size else 0
            ht = kerT.shape[1] - im_t
            if hs != ht:
                return False
            if hs == 0:
                continue
            fblk = f.M[t.slot(d + f.qdeg), s.slot(d)]
            img = la.matmul(fblk, kerS, p)
            both = np.concatenate([img, imT_blk], axis=1) if imT_blk.size else img
            if la.rank(both, p) - im_t != hs:
                return False
    return True


def is_quasi_iso(f: PMap) -> bool:
    by_cone = is_acyclic(cone(f))
    by_homology = homology_map_is_iso(f)
    if by_cone != by_homology:
        raise PComplexError("quasi-isomorphism criteria disagree")
    return by_cone


# internal hom and null-homotopy ------------------------------------------------------
def hom(c: PComplex, d: PComplex) -> PComplex:
    """All linear maps c -> d; a map h of degree s has differential D_d h - h D_c."""
    p = c.p
    # vec(h) with h[target, source] flattened row-major
    n_c, n_d = c.dim, d.dim
    degs = (d.degs[:, None] - c.degs[None, :]).reshape(-1)
    L = np.kron(d.D, la.eye(n_c))
    R = np.kron(la.eye(n_d), c.D.T)
    labels = [(i, j) for i in range(n_d) for j in range(n_c)]
    return PComplex.build(p, degs, la.mod(L - R, p), labels)


def in_image_of_power(h: PComplex, vec: np.ndarray, k: int) -> bool:
    """Is the homogeneous vector ``vec`` (in h's basis) in the image of D^k?"""
    p = h.p
    nz = np.nonzero(la.mod(vec, p))[0]
    if nz.size == 0:
        return True
    d = int(h.degs[nz[0]])
    blk = h.power_block(d - 2 * k, k)
    target = la.mod(vec[h.slot(d)], p)
    if blk.size == 0:
        return False
    return la.solve(blk, target, p) is not None


def map_vector(f: PMap, h: PComplex) -> np.ndarray:
    flat = f.M.reshape(-1)
    pos = {lab: i for i, lab in enumerate(h.labels)}
    out = la.zeros(h.dim, 1)[:, 0]
    for idx, lab in enumerate((i, j) for i in range(f.target.dim) for j in range(f.source.dim)):
        out[pos[lab]] = flat[idx]
    return out


def is_null_homotopic(f: PMap) -> bool:
    if not f.is_chain():
        raise PComplexError("null-homotopy test needs a chain map")
    h = hom(f.source, f.target)
    return in_image_of_power(h, map_vector(f, h), f.source.p - 1)


# the canonical map iota --------------------------------------------------------------
def iota(p: int) -> PMap:
    """V~_0 -> V~_{p-2} (x) V~_{p-2},  u_0 -> sum_i (-1)^i v_i (x) v_{p-2-i}."""
    v = balanced(p - 2, p)
    vv = tensor(v, v)
    u = balanced(0, p)
    pos = {lab: k for k, lab in enumerate(vv.labels)}
    M = la.zeros(vv.dim, 1)
    for i in range(p - 1):
        M[pos[(i, p - 2 - i)], 0] = (-1) ** i
    return PMap(u, vv, M, 0)


def random_pcomplex(rng, p: int, max_dim: int = 12, degree_span: int = 4, planted: bool = False):
    """A random p-complex: planted indecomposables scrambled by a graded change of basis."""
    parts = []
    total = 0
    target = int(rng.integers(1, max_dim + 1))
    while total < target:
        j = int(rng.integers(0, min(p, target - total)))
        b = 2 * int(rng.integers(-degree_span, degree_span + 1)) + int(rng.integers(0, 2))
        parts.append(indecomposable(j, b, p))
        total += j + 1
    c = direct_sum(*parts)
    g = la.zeros(c.dim, c.dim)
    for d in c.dims:
        s = c.slot(d)
        k = s.stop - s.start
        while True:
            blk = la.mod(rng.integers(0, p, size=(k, k)), p)
            if la.rank(blk, p) == k:
                break
        g[s, s] = blk
    gi = la.inverse(g, p)
    out = PComplex(p, c.degs, la.matmul(g, la.matmul(c.D, gi, p), p))
    if planted:
        return out, Counter((len(x.degs) - 1, int(x.degs[0])) for x in parts)
    return out


# explicit Jordan chains and stable isomorphisms ---------------------------------------
def _block_kernel(c: PComplex, d: int, h: int) -> np.ndarray:
    s = c.slot(d)
    k = s.stop - s.start
    if h <= 0:
        return la.zeros(k, 0)
    if h >= c.p:
        return la.eye(k)
    blk = c.power_block(d, h)
    return la.nullspace(blk, c.p) if blk.shape[0] else la.eye(k)


def jordan_chains(c: PComplex) -> list:
    """A basis of c made of chains v, Dv, ..., D^j v, one per indecomposable summand.

    Returns a list of ((j, b), columns) with ``columns`` the dim x (j+1) matrix of
    the chain in the original coordinates.  For each degree and length h the
    chain heads complement ker D^{h-1} + D ker D^{h+1} inside ker D^h.
    """
    p = c.p
    out = []
    for d in sorted(c.dims):
        s = c.slot(d)
        k = s.stop - s.start
        for h in range(p, 0, -1):
            Kh = _block_kernel(c, d, h)
            if Kh.shape[1] == 0:
                continue
            lower = _block_kernel(c, d, h - 1)
            prev = c.dims.get(d - 2, 0)
            if prev:
                up = la.matmul(c.D[s, c.slot(d - 2)], _block_kernel(c, d - 2, h + 1), p)
            else:
                up = la.zeros(k, 0)
            U = np.concatenate([lower, up], axis=1)
            r = la.rank(U, p) if U.size else 0
            _, piv = la.rref(np.concatenate([U, Kh], axis=1), p)
            heads = [col - U.shape[1] for col in piv if col >= U.shape[1]]
            assert len(piv) - len(heads) == r
            for col in heads:
                v = la.zeros(c.dim, 1)[:, 0]
                v[s] = Kh[:, col]
                vecs = [v]
                for _ in range(h - 1):
                    vecs.append(la.mod(c.D @ vecs[-1], p))
                out.append(((h - 1, d), np.stack(vecs, axis=1)))
    total = sum(m.shape[1] for _, m in out)
    if total != c.dim:
        raise PComplexError("Jordan chain extraction did not produce a basis")
    return out


def stable_iso(c: PComplex, d: PComplex, qdeg: int = 0) -> PMap | None:
    """A quasi-isomorphism c -> d of degree qdeg, or None if none exists.

    Non-contractible chains of c are sent onto chains of d of the same shape
    (shifted by qdeg); contractible chains go to zero.
    """
    p = c.p
    if c.p != d.p:
        raise PComplexError("different characteristics")
    cc, dc = jordan_chains(c), jordan_chains(d)
    pool: dict = {}
    for (j, b), m in dc:
        if j != p - 1:
            pool.setdefault((j, b - qdeg), []).append(m)
    need = Counter(k for k, _ in cc if k[0] != p - 1)
    if need != Counter({k: len(v) for k, v in pool.items()}):
        return None
    B = np.concatenate([m for _, m in cc], axis=1) if cc else la.zeros(0, 0)
    T = la.zeros(d.dim, c.dim)
    col = 0
    for key, m in cc:
        w = m.shape[1]
        if key[0] != p - 1:
            T[:, col:col + w] = pool[key].pop()
        col += w
    F = la.matmul(T, la.inverse(B, p), p) if c.dim else T
    return PMap(c, d, F, qdeg)
