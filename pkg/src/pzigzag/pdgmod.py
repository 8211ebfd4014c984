"""Finite-dimensional p-DG modules and bimodules over A_n^!.

A ``Module`` is a p-complex (basis sorted by degree, dense differential)
together with sparse matrices for the action of each arrow (i|j) on the
left and/or on the right.  Every basis vector lies in e_v M (left) and
M e_w (right) for a single vertex; those vertices are ``lv`` and ``rv``.

Modules that are free on a side carry their free presentation: for each
basis vector a pair (generator, path) meaning the vector equals
path * generator (left) or generator * path (right).  Hom complexes and
tensor products use it to avoid solving linear systems.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.sparse as sp

from . import linalg as la
from . import pcomplex as pc
from .zigzag import AlgElement, NormalPath, ZigzagAlgebra

LEFT, RIGHT = "left", "right"


class ModuleError(ValueError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


def _sparse(m, p: int):
    out = sp.csr_array(m, dtype=np.int64)
    out.data %= p
    out.eliminate_zeros()
    return out


def _sp_zero(r: int, c: int | None = None):
    return sp.csr_array((r, r if c is None else c), dtype=np.int64)


def _sp_mul(a, b, p: int):
    return _sparse(a @ b, p)


def _dense(m) -> np.ndarray:
    return m.toarray() if sp.issparse(m) else np.asarray(m, dtype=np.int64)


def _left_dense(dense: np.ndarray, s, p: int) -> np.ndarray:
    """dense @ sparse, mod p."""
    return la.mod((s.T @ dense.T).T, p)


# ---------------------------------------------------------------------------
@dataclass(eq=False)
class Module:
    alg: ZigzagAlgebra
    degs: np.ndarray
    D: np.ndarray
    lv: np.ndarray | None = None
    rv: np.ndarray | None = None
    left: dict | None = None
    right: dict | None = None
    labels: tuple | None = None
    lfree: tuple | None = None
    rfree: tuple | None = None

    def __post_init__(self):
        p = self.alg.p
        self.degs = np.asarray(self.degs, dtype=np.int64).reshape(-1)
        N = len(self.degs)
        self.D = la.mod(np.asarray(self.D, dtype=np.int64).reshape(N, N), p)
        if N and np.any(np.diff(self.degs) < 0):
            raise ModuleError("basis must be sorted by degree; use Module.build")
        if self.labels is None:
            self.labels = tuple(range(N))
        for name in ("lv", "rv"):
            v = getattr(self, name)
            if v is not None:
                setattr(self, name, np.asarray(v, dtype=np.int64).reshape(-1))
        for name in ("left", "right"):
            acts = getattr(self, name)
            if acts is not None:
                setattr(self, name, {a: _sparse(m, p) for a, m in acts.items()})
        self._lcache: dict = {}
        self._rcache: dict = {}

    @classmethod
    def build(cls, alg, degs, D, lv=None, rv=None, left=None, right=None,
              labels=None, lfree=None, rfree=None) -> "Module":
        """Sort an arbitrary homogeneous basis by degree."""
        degs = np.asarray(degs, dtype=np.int64).reshape(-1)
        order = np.argsort(degs, kind="stable")
        N = len(degs)
        D = np.asarray(D, dtype=np.int64).reshape(N, N)[np.ix_(order, order)]

        def perm(acts):
            if acts is None:
                return None
            return {a: sp.csr_array(m)[order][:, order] for a, m in acts.items()}

        def pick(seq):
            return None if seq is None else tuple(seq[i] for i in order)

        return cls(alg, degs[order], D,
                   None if lv is None else np.asarray(lv)[order],
                   None if rv is None else np.asarray(rv)[order],
                   perm(left), perm(right), pick(labels), pick(lfree), pick(rfree))

    # views ----------------------------------------------------------------
    @property
    def p(self) -> int:
        return self.alg.p

    @property
    def dim(self) -> int:
        return len(self.degs)

    @property
    def side(self) -> str:
        if self.left is not None and self.right is not None:
            return "bi"
        if self.left is not None:
            return LEFT
        if self.right is not None:
            return RIGHT
        return "space"

    def has(self, side: str) -> bool:
        return (self.left if side == LEFT else self.right) is not None

    def vertices(self, side: str) -> np.ndarray:
        return self.lv if side == LEFT else self.rv

    def free(self, side: str):
        return self.lfree if side == LEFT else self.rfree

    @cached_property
    def complex(self) -> pc.PComplex:
        return pc.PComplex(self.p, self.degs, self.D, self.labels)

    def graded_dim(self, vertex: int | None = None, side: str = LEFT):
        from .arith import Laurent

        out: dict = {}
        vs = self.vertices(side)
        for k, d in enumerate(self.degs):
            if vertex is None or vs[k] == vertex:
                out[int(d)] = out.get(int(d), 0) + 1
        return Laurent(out)

    def __repr__(self):
        return f"Module({self.side}, dim={self.dim}, {self.alg!r})"

    # action matrices -------------------------------------------------------
    def lpath(self, b: NormalPath):
        """Matrix of x -> b.x."""
        if b not in self._lcache:
            verts = b.walk(self.alg.n)
            if len(verts) == 1:
                m = sp.diags((self.lv == verts[0]).astype(np.int64), format="csr", dtype=np.int64)
                m = sp.csr_array(m)
            else:
                m = self.left[(verts[0], verts[1])]
                for a, c in zip(verts[1:], verts[2:]):
                    m = _sp_mul(m, self.left[(a, c)], self.p)
            self._lcache[b] = m
        return self._lcache[b]

    def rpath(self, b: NormalPath):
        """Matrix of x -> x.b."""
        if b not in self._rcache:
            verts = b.walk(self.alg.n)
            if len(verts) == 1:
                m = sp.csr_array(sp.diags((self.rv == verts[0]).astype(np.int64), format="csr", dtype=np.int64))
            else:
                m = self.right[(verts[0], verts[1])]
                for a, c in zip(verts[1:], verts[2:]):
                    m = _sp_mul(self.right[(a, c)], m, self.p)
            self._rcache[b] = m
        return self._rcache[b]

    def path(self, side: str, b: NormalPath):
        return self.lpath(b) if side == LEFT else self.rpath(b)

    def act(self, side: str, a: AlgElement):
        out = _sp_zero(self.dim)
        for b, c in a.terms.items():
            out = out + c * self.path(side, b)
        return _sparse(out, self.p)

    # validation -------------------------------------------------------------
    def validate(self) -> "Module":
        """Raise ModuleError (with a witness basis index) on the first violated invariant."""
        p, n = self.p, self.alg.n
        v = pc.validate(self.complex)
        if v is not None:
            raise ModuleError(f"underlying p-complex fails: {v.kind} at degree {v.degree}", v.witness)
        rows, cols = np.nonzero(self.D)
        for side in (LEFT, RIGHT):
            if not self.has(side):
                continue
            vs = self.vertices(side)
            if vs is None or len(vs) != self.dim:
                raise ModuleError(f"{side} vertex labels missing")
            if np.any((vs < 1) | (vs > n)):
                raise ModuleError("vertex label out of range", int(np.nonzero((vs < 1) | (vs > n))[0][0]))
            bad = np.nonzero(vs[rows] != vs[cols])[0]
            if bad.size:
                raise ModuleError(f"differential mixes {side} idempotents", int(cols[bad[0]]))
            acts = self.left if side == LEFT else self.right
            for (i, j), m in acts.items():
                r, c = m.nonzero()
                src, dst = (j, i) if side == LEFT else (i, j)
                bad = np.nonzero((vs[c] != src) | (vs[r] != dst) | (self.degs[r] != self.degs[c] + 1))[0]
                if bad.size:
                    raise ModuleError(f"{side} action of ({i}|{j}) misplaced", int(c[bad[0]]))
            self._check_relations(side)
            self._check_leibniz(side)
        if self.side == "bi":
            for a, ml in self.left.items():
                for b, mr in self.right.items():
                    diff = _sparse(ml @ mr - mr @ ml, p)
                    if diff.nnz:
                        raise ModuleError(f"left {a} and right {b} actions do not commute",
                                          int(diff.nonzero()[1][0]))
        return self

    def _check_relations(self, side: str):
        p, n = self.p, self.alg.n
        acts = self.left if side == LEFT else self.right

        def two(i, m, j):
            # matrix of the length-two walk (i|m|j) acting on this side
            if side == LEFT:
                return _sp_mul(acts[(i, m)], acts[(m, j)], p)
            return _sp_mul(acts[(m, j)], acts[(i, m)], p)

        checks = [("(1|2|1)", two(1, 2, 1))]
        for i in range(2, n):
            checks.append((f"({i}|{i-1}|{i}) - ({i}|{i+1}|{i})", _sparse(two(i, i - 1, i) - two(i, i + 1, i), p)))
        for name, m in checks:
            if m.nnz:
                raise ModuleError(f"{side} relation {name} fails", int(m.nonzero()[1][0]))

    def _check_leibniz(self, side: str):
        # d(a.x) = d(a).x + a.d(x) and d(x.a) = d(x).a + x.d(a): both read D X - X D = X_{d(a)}
        p = self.p
        acts = self.left if side == LEFT else self.right
        for (i, j), m in acts.items():
            lhs = la.mod(_left_dense(self.D, m, p) - m @ self.D, p)
            r = self.alg.d_path(NormalPath(i, j, 0))
            rhs = la.zeros(self.dim, self.dim) if r is None else la.mod(r[0] * self.path(side, r[1]).toarray(), p)
            if not np.array_equal(lhs, rhs):
                bad = np.nonzero((lhs != rhs).any(axis=0))[0][0]
                raise ModuleError(f"Leibniz rule fails for {side} ({i}|{j})", int(bad))

    def is_valid(self) -> bool:
        try:
            self.validate()
        except ModuleError:
            return False
        return True

    # free presentations -------------------------------------------------------
    def free_gens(self, side: str) -> list:
        """[(generator key, basis index, vertex)] for a side with a free presentation."""
        cache = f"_gens_{side}"
        if not hasattr(self, cache):
            fr = self.free(side)
            if fr is None:
                raise ModuleError(f"module has no {side} free presentation")
            gens = [(g, k, b.source) for k, (g, b) in enumerate(fr) if b.loops == 0 and b.source == b.target]
            setattr(self, cache, gens)
        return getattr(self, cache)

    def free_expansion(self, side: str, vec: np.ndarray) -> list:
        """Write a vector as a list of (generator position, path, coefficient)."""
        fr = self.free(side)
        pos = {g: i for i, (g, _, _) in enumerate(self.free_gens(side))}
        return [(pos[fr[k][0]], fr[k][1], int(vec[k])) for k in np.nonzero(la.mod(vec, self.p))[0]]


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------
def _path_elt(alg, b):
    return AlgElement(alg, {b: 1})


def regular(alg: ZigzagAlgebra) -> Module:
    """A as a bimodule over itself, free on both sides."""
    basis = alg.basis
    idx = alg.index
    N = len(basis)
    left = {a: _sp_zero(N).tolil() for a in alg.arrows}
    right = {a: _sp_zero(N).tolil() for a in alg.arrows}
    for k, b in enumerate(basis):
        for a in alg.arrows:
            ap = NormalPath(a[0], a[1], 0)
            r = alg.mult_paths(ap, b)
            if r is not None:
                left[a][idx[r], k] = 1
            r = alg.mult_paths(b, ap)
            if r is not None:
                right[a][idx[r], k] = 1
    lfree = tuple((("A", b.target), b) for b in basis)
    rfree = tuple((("A", b.source), b) for b in basis)
    return Module.build(alg, [b.degree for b in basis], alg.d_matrix,
                        [b.source for b in basis], [b.target for b in basis],
                        left, right, tuple(basis), lfree, rfree)


def simple(alg: ZigzagAlgebra, i: int, side: str = LEFT, shift: int = 0) -> Module:
    z = {a: _sp_zero(1) for a in alg.arrows}
    if side == LEFT:
        return Module(alg, [shift], la.zeros(1, 1), lv=[i], left=z, labels=(("L", i),))
    return Module(alg, [shift], la.zeros(1, 1), rv=[i], right=z, labels=(("L", i),))


def space(alg: ZigzagAlgebra, c: pc.PComplex) -> Module:
    """A p-complex viewed as a module with no action."""
    return Module(alg, c.degs, c.D, labels=c.labels)


# ---------------------------------------------------------------------------
# cell diagrams
# ---------------------------------------------------------------------------
@dataclass
class CellDiagram:
    """Shifted projectives (nodes) joined by labelled arrows pointing down the filtration."""

    side: str
    nodes: list = field(default_factory=list)   # (vertex, shift, pos)
    edges: list = field(default_factory=list)   # (from, to, label text)

    def add(self, vertex: int, shift: int, pos: int) -> int:
        self.nodes.append((vertex, shift, pos))
        return len(self.nodes) - 1

    def connect(self, src: int, tgt: int, label) -> None:
        self.edges.append((src, tgt, str(label)))

    def to_json(self) -> dict:
        return {
            "side": self.side,
            "nodes": [{"P": v, "shift": s, "pos": t} for v, s, t in self.nodes],
            "edges": [{"from": a, "to": b, "label": lab} for a, b, lab in self.edges],
        }

    @classmethod
    def from_json(cls, obj) -> "CellDiagram":
        nodes = [(int(x["P"]), int(x["shift"]), int(x["pos"])) for x in obj["nodes"]]
        edges = [(int(x["from"]), int(x["to"]), str(x["label"])) for x in obj["edges"]]
        return cls(obj.get("side", LEFT), nodes, edges)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    def shifted(self, l: int) -> "CellDiagram":
        return CellDiagram(self.side, [(v, s + l, t) for v, s, t in self.nodes], list(self.edges))

    def tau(self, alg: ZigzagAlgebra) -> "CellDiagram":
        """Transport along the anti-automorphism: left <-> right, every label reversed."""
        side = RIGHT if self.side == LEFT else LEFT
        edges = []
        for a, b, lab in self.edges:
            x = edge_label(alg, lab, self.nodes[a][0], self.nodes[b][0])
            edges.append((a, b, str(x.tau())))
        return CellDiagram(side, list(self.nodes), edges)

    def sorted_key(self):
        """Canonical form for comparing diagrams up to node order."""
        order = sorted(range(len(self.nodes)), key=lambda k: (self.nodes[k][2], self.nodes[k][0], self.nodes[k][1], k))
        where = {k: i for i, k in enumerate(order)}
        nodes = tuple(self.nodes[k] for k in order)
        edges = tuple(sorted((where[a], where[b], lab) for a, b, lab in self.edges))
        return self.side, nodes, edges


_SCALAR = re.compile(r"^\s*([+-]?)\s*(\d*)\s*$")


def edge_label(alg: ZigzagAlgebra, label, v_from: int, v_to: int) -> AlgElement:
    """Parse an edge label; '=' and bare scalars mean multiples of the idempotent."""
    if isinstance(label, AlgElement):
        return label
    text = str(label).strip()
    if text == "=":
        text = "1"
    m = _SCALAR.match(text)
    if m:
        if v_from != v_to:
            raise ModuleError(f"scalar label {text!r} between different vertices {v_from}, {v_to}")
        c = int(m.group(2) or 1) * (-1 if m.group(1) == "-" else 1)
        return alg.e(v_from) * c
    return alg.parse(text)


def compile_diagram(alg: ZigzagAlgebra, diagram: CellDiagram, validate: bool = True) -> Module:
    """The filtered module: a sum of shifted projectives, differential = internal + edge maps.

    Left: node (v, s) is A e_v {s}, basis = paths ending at v; an edge labelled a in
    e_v A e_w sends the generator g_v to a g_w.  Right: node is e_v A {s}, basis =
    paths starting at v; an edge k -> l labelled a in e_l A e_k sends g_k to g_l a.
    """
    side = diagram.side
    nodes = diagram.nodes
    n, p = alg.n, alg.p
    for k, (v, s, t) in enumerate(nodes):
        if not 1 <= v <= n:
            raise ModuleError(f"node {k} refers to P_{v}, outside 1..{n}", k)
    basis = []
    for k, (v, s, t) in enumerate(nodes):
        for b in alg.basis:
            if (b.target if side == LEFT else b.source) == v:
                basis.append((k, b))
    index = {x: i for i, x in enumerate(basis)}
    N = len(basis)
    degs = [nodes[k][1] + b.degree for k, b in basis]
    D = la.zeros(N, N)
    out_edges: dict = {}
    for a, b, lab in diagram.edges:
        va, sa, ta = nodes[a]
        vb, sb, tb = nodes[b]
        if ta <= tb:
            raise ModuleError(f"edge {a}->{b} does not lower the filtration position", (a, b))
        x = edge_label(alg, lab, va, vb)
        want = {(va, vb)} if side == LEFT else {(vb, va)}
        if x.ends() - want:
            raise ModuleError(f"label {lab} on edge {a}->{b} has wrong endpoints", (a, b))
        if x.degrees() - {sa + 2 - sb}:
            raise ModuleError(f"label {lab} on edge {a}->{b} has degree {sorted(x.degrees())}, "
                              f"needs {sa + 2 - sb}", (a, b))
        out_edges.setdefault(a, []).append((b, x))
    for j, (k, b) in enumerate(basis):
        r = alg.d_path(b)
        if r:
            D[index[(k, r[1])], j] += r[0]
        for tgt, x in out_edges.get(k, ()):
            be = _path_elt(alg, b)
            prod = be * x if side == LEFT else x * be
            for c, coef in prod.terms.items():
                D[index[(tgt, c)], j] += coef
    acts = {a: _sp_zero(N).tolil() for a in alg.arrows}
    for j, (k, b) in enumerate(basis):
        for a in alg.arrows:
            ap = NormalPath(a[0], a[1], 0)
            r = alg.mult_paths(ap, b) if side == LEFT else alg.mult_paths(b, ap)
            if r is not None:
                acts[a][index[(k, r)], j] = 1
    free = tuple((k, b) for k, b in basis)
    if side == LEFT:
        M = Module.build(alg, degs, D, lv=[b.source for _, b in basis], left=acts,
                         labels=tuple(basis), lfree=free)
    else:
        M = Module.build(alg, degs, D, rv=[b.target for _, b in basis], right=acts,
                         labels=tuple(basis), rfree=free)
    if validate:
        M.validate()
    return M


def projective(alg: ZigzagAlgebra, i: int, side: str = LEFT, shift: int = 0) -> Module:
    return compile_diagram(alg, CellDiagram(side, [(i, shift, 0)], []))


def node_index(M: Module, node: int, path: NormalPath) -> int:
    """Basis index of path * g_node (left) or g_node * path (right) in a compiled module."""
    if not hasattr(M, "_label_pos"):
        M._label_pos = {lab: k for k, lab in enumerate(M.labels)}
    return M._label_pos[(node, path)]


# ---------------------------------------------------------------------------
# maps
# ---------------------------------------------------------------------------
@dataclass(eq=False)
class ModMap:
    source: Module
    target: Module
    M: np.ndarray
    qdeg: int = 0

    def __post_init__(self):
        self.M = la.mod(np.asarray(self.M, dtype=np.int64).reshape(self.target.dim, self.source.dim),
                        self.source.p)

    @property
    def pmap(self) -> pc.PMap:
        return pc.PMap(self.source.complex, self.target.complex, self.M, self.qdeg)

    def is_chain(self) -> bool:
        return self.pmap.is_chain()

    def is_linear(self) -> bool:
        p = self.source.p
        for side in (LEFT, RIGHT):
            if not (self.source.has(side) and self.target.has(side)):
                continue
            sv, tv = self.source.vertices(side), self.target.vertices(side)
            r, c = np.nonzero(self.M)
            if np.any(sv[c] != tv[r]):
                return False
            sa = self.source.left if side == LEFT else self.source.right
            ta = self.target.left if side == LEFT else self.target.right
            for a in sa:
                lhs = la.mod(ta[a] @ self.M, p)
                rhs = _left_dense(self.M, sa[a], p)
                if not np.array_equal(lhs, rhs):
                    return False
        return True

    def check(self) -> "ModMap":
        if not self.pmap.is_homogeneous():
            raise ModuleError("map is not homogeneous of the stated degree")
        if not self.is_chain():
            bad = np.nonzero(la.mod(self.M @ self.source.D - self.target.D @ self.M, self.source.p).any(axis=0))[0]
            raise ModuleError("map does not commute with the differentials", int(bad[0]))
        if not self.is_linear():
            raise ModuleError("map is not A-linear")
        return self

    def compose(self, other: "ModMap") -> "ModMap":
        """self after other."""
        return ModMap(other.source, self.target, la.matmul(self.M, other.M, self.source.p),
                      self.qdeg + other.qdeg)

    def __neg__(self):
        return ModMap(self.source, self.target, -self.M, self.qdeg)

    def scale(self, c: int) -> "ModMap":
        return ModMap(self.source, self.target, c * self.M, self.qdeg)


def identity(M: Module) -> ModMap:
    return ModMap(M, M, la.eye(M.dim))


def zero_map(M: Module, N: Module, qdeg: int = 0) -> ModMap:
    return ModMap(M, N, la.zeros(N.dim, M.dim), qdeg)


def quasi_iso(f: ModMap) -> bool:
    """Cone acyclic; the slash-homology criterion is computed too and must agree."""
    return pc.is_quasi_iso(f.pmap)


# ---------------------------------------------------------------------------
# assembling filtered modules
# ---------------------------------------------------------------------------
def _common_structure(pieces):
    mods = [m for m, _ in pieces]
    has_l = all(m.has(LEFT) for m in mods)
    has_r = all(m.has(RIGHT) for m in mods)
    return has_l, has_r


def assemble(alg: ZigzagAlgebra, pieces: list, arrows: dict | None = None, validate: bool = False) -> Module:
    """Direct sum of shifted pieces plus off-diagonal maps.

    ``pieces`` is a list of (Module, shift); ``arrows[(s, t)]`` is a dense matrix
    from piece s to piece t (A-linear, raising total degree by 2).
    """
    arrows = arrows or {}
    p = alg.p
    sizes = [m.dim for m, _ in pieces]
    offs = np.concatenate([[0], np.cumsum(sizes)]).astype(int)
    N = int(offs[-1])
    degs = np.concatenate([m.degs + s for m, s in pieces]) if pieces else np.zeros(0, dtype=np.int64)
    D = la.zeros(N, N)
    for k, (m, _) in enumerate(pieces):
        D[offs[k]:offs[k + 1], offs[k]:offs[k + 1]] = m.D
    for (s, t), mat in arrows.items():
        D[offs[t]:offs[t + 1], offs[s]:offs[s + 1]] += np.asarray(mat, dtype=np.int64)
    has_l, has_r = _common_structure(pieces)

    def blockdiag(side):
        acts = {}
        for a in alg.arrows:
            mats = [(m.left if side == LEFT else m.right)[a] for m, _ in pieces]
            acts[a] = sp.block_diag(mats, format="csr") if mats else _sp_zero(0)
        return acts

    def cat(name):
        vals = [getattr(m, name) for m, _ in pieces]
        return np.concatenate(vals) if vals else np.zeros(0, dtype=np.int64)

    def free(name):
        vals = [getattr(m, name) for m, _ in pieces]
        if any(v is None for v in vals):
            return None
        return tuple(((k, g), b) for k, v in enumerate(vals) for g, b in v)

    labels = tuple((k, lab) for k, (m, _) in enumerate(pieces) for lab in m.labels)
    M = Module.build(alg, degs, la.mod(D, p),
                     cat("lv") if has_l else None, cat("rv") if has_r else None,
                     blockdiag(LEFT) if has_l else None, blockdiag(RIGHT) if has_r else None,
                     labels, free("lfree") if has_l else None, free("rfree") if has_r else None)
    if validate:
        M.validate()
    return M


def direct_sum(*mods: Module) -> Module:
    return assemble(mods[0].alg, [(m, 0) for m in mods])


def translate(M: Module, l: int) -> Module:
    """M{l}."""
    return Module(M.alg, M.degs + l, M.D, M.lv, M.rv, M.left, M.right, M.labels, M.lfree, M.rfree)


def tensor_space(M: Module, V: pc.PComplex) -> Module:
    """M (x) V over the ground field; A acts on the M factor."""
    p = M.p
    n = V.dim
    I_v = sp.identity(n, dtype=np.int64, format="csr")
    degs = (M.degs[:, None] + V.degs[None, :]).reshape(-1)
    D = np.kron(M.D, la.eye(n)) + np.kron(la.eye(M.dim), V.D)

    def kr(acts):
        return None if acts is None else {a: sp.kron(m, I_v, format="csr") for a, m in acts.items()}

    def rep(v):
        return None if v is None else np.repeat(v, n)

    def fr(f):
        return None if f is None else tuple(((g, vl), b) for g, b in f for vl in V.labels)

    labels = tuple((a, b) for a in M.labels for b in V.labels)
    return Module.build(M.alg, degs, la.mod(D, p), rep(M.lv), rep(M.rv), kr(M.left), kr(M.right),
                        labels, fr(M.lfree), fr(M.rfree))


def shift(M: Module, h: int, l: int = 0) -> Module:
    """M[h]{l}."""
    out = tensor_space(M, pc.shift_complex(M.p, h)) if h else M
    return translate(out, l)


def outer(X: Module, Y: Module) -> Module:
    """X (x)_k Y: left action from X, right action from Y."""
    p = X.p
    nX, nY = X.dim, Y.dim
    IX = sp.identity(nX, dtype=np.int64, format="csr")
    IY = sp.identity(nY, dtype=np.int64, format="csr")
    degs = (X.degs[:, None] + Y.degs[None, :]).reshape(-1)
    D = np.kron(X.D, la.eye(nY)) + np.kron(la.eye(nX), Y.D)
    left = None if X.left is None else {a: sp.kron(m, IY, format="csr") for a, m in X.left.items()}
    right = None if Y.right is None else {a: sp.kron(IX, m, format="csr") for a, m in Y.right.items()}
    lv = None if X.lv is None else np.repeat(X.lv, nY)
    rv = None if Y.rv is None else np.tile(Y.rv, nX)
    lfree = None
    if X.lfree is not None:
        lfree = tuple(((g, y), b) for g, b in X.lfree for y in range(nY))
    rfree = None
    if Y.rfree is not None:
        rfree = tuple(((x, g), b) for x in range(nX) for g, b in Y.rfree)
    labels = tuple((a, b) for a in X.labels for b in Y.labels)
    return Module.build(X.alg, degs, la.mod(D, p), lv, rv, left, right, labels, lfree, rfree)


def submodule(M: Module, idx) -> Module:
    """The span of the basis vectors ``idx``, which must be closed under d and the actions."""
    idx = np.asarray(sorted(set(int(i) for i in idx)), dtype=int)
    rest = np.setdiff1d(np.arange(M.dim), idx)
    mats = [M.D] + [m.toarray() for acts in (M.left, M.right) if acts for m in acts.values()]
    for m in mats:
        if rest.size and idx.size and np.any(m[np.ix_(rest, idx)]):
            raise ModuleError("span is not a submodule")
    return _restrict(M, idx)


def quotient(M: Module, idx) -> Module:
    """M modulo the coordinate submodule spanned by ``idx``."""
    submodule(M, idx)
    rest = np.setdiff1d(np.arange(M.dim), np.asarray(list(idx), dtype=int))
    return _restrict(M, rest)


def _restrict(M: Module, keep: np.ndarray) -> Module:
    keep = np.asarray(keep, dtype=int)

    def acts(a):
        return None if a is None else {k: sp.csr_array(m)[keep][:, keep] for k, m in a.items()}

    def sel(v):
        return None if v is None else np.asarray(v)[keep]

    return Module(M.alg, M.degs[keep], M.D[np.ix_(keep, keep)], sel(M.lv), sel(M.rv),
                  acts(M.left), acts(M.right), tuple(M.labels[k] for k in keep))


def _operators(M: Module) -> list:
    ops = [sp.csr_array(M.D)]
    for acts in (M.left, M.right):
        if acts:
            ops += list(acts.values())
    return ops


def generated_submodule(M: Module, vecs) -> np.ndarray:
    """Columns spanning the smallest d-stable, action-stable subspace containing ``vecs``."""
    p = M.p
    ops = _operators(M)
    vecs = [np.asarray(v, dtype=np.int64).reshape(-1) for v in vecs]
    if not vecs:
        return la.zeros(M.dim, 0)
    basis = la.colspace(la.mod(np.stack(vecs, axis=1), p), p)
    frontier = basis
    while frontier.shape[1]:
        images = np.concatenate([la.mod(o @ frontier, p) for o in ops], axis=1)
        grown = la.colspace(np.concatenate([basis, images], axis=1), p)
        if grown.shape[1] == basis.shape[1]:
            break
        frontier = images
        basis = grown
    return basis


def quotient_by(M: Module, S: np.ndarray) -> tuple:
    """M / span(S) on a complement of standard basis vectors, with the projection map.

    S must span a sub-bimodule; it is brought to echelon form so that the
    projection is x |-> x[comp] - S[comp] x[piv].
    """
    p = M.p
    if S.shape[1] == 0:
        return M, ModMap(M, M, la.eye(M.dim))
    R, piv = la.rref(S.T.copy(), p)
    R = R[:len(piv)]
    comp = np.setdiff1d(np.arange(M.dim), piv)
    Sc = sp.csr_array(R[:, comp].T)               # S'[comp]
    Ec = sp.csr_array((np.ones(len(comp), dtype=np.int64), (np.arange(len(comp)), comp)),
                      shape=(len(comp), M.dim))
    Ep = sp.csr_array((np.ones(len(piv), dtype=np.int64), (np.arange(len(piv)), piv)),
                      shape=(len(piv), M.dim))
    q = (Ec - Sc @ Ep).tocsr()

    def red(m):
        m = sp.csr_array(m)
        return _sparse((q @ m)[:, comp], p)

    Q = Module(M.alg, M.degs[comp], red(M.D).toarray(),
               None if M.lv is None else M.lv[comp], None if M.rv is None else M.rv[comp],
               None if M.left is None else {a: red(m) for a, m in M.left.items()},
               None if M.right is None else {a: red(m) for a, m in M.right.items()},
               tuple(M.labels[k] for k in comp))
    return Q, ModMap(M, Q, q.toarray(), 0)


# ---------------------------------------------------------------------------
# cones and the short-exact-sequence constructions
# ---------------------------------------------------------------------------
def cone_mod(f: ModMap) -> Module:
    """Source = ... = Source (p-1 copies) --(-f)--> Target, target in degree shift 0."""
    f.check()
    p = f.source.p
    pieces = [(f.source, f.qdeg - 2 * (p - 1 - c)) for c in range(p - 1)] + [(f.target, 0)]
    arrows = {(c, c + 1): la.eye(f.source.dim) for c in range(p - 2)}
    arrows[(p - 2, p - 1)] = -f.M
    return assemble(f.source.alg, pieces, arrows)


def cocone_mod(f: ModMap) -> Module:
    """Source --(-f)--> Target = ... = Target (p-1 copies), source in degree shift 0."""
    f.check()
    p = f.source.p
    pieces = [(f.source, 0)] + [(f.target, -f.qdeg + 2 * (c + 1)) for c in range(p - 1)]
    arrows = {(0, 1): -f.M}
    for c in range(1, p - 1):
        arrows[(c, c + 1)] = la.eye(f.target.dim)
    return assemble(f.source.alg, pieces, arrows)


def check_exact(maps: list) -> None:
    """maps[k]: X_k -> X_{k+1}; checks 0 -> X_0 -> ... -> X_m -> 0 is exact."""
    if not maps:
        return
    p = maps[0].source.p
    for f in maps:
        f.check()
        if f.qdeg != 0:
            raise ModuleError("exact sequences use degree-zero maps")
    ranks = [la.rank(f.M, p) for f in maps]
    if ranks[0] != maps[0].source.dim:
        raise ModuleError("first map is not injective")
    if ranks[-1] != maps[-1].target.dim:
        raise ModuleError("last map is not surjective")
    for k in range(len(maps) - 1):
        comp = la.matmul(maps[k + 1].M, maps[k].M, p)
        if comp.any():
            raise ModuleError(f"maps {k} and {k + 1} do not compose to zero")
        if maps[k].target.dim - ranks[k + 1] != ranks[k]:
            raise ModuleError(f"not exact at term {k + 1}")


def ses_extend(phi: ModMap, psi: ModMap, variant: int = 1) -> Module:
    """The filtered module built from 0 -> K -> L -> M -> 0 with repeated terms.

    Variant 1 repeats L; variant 2 repeats K and M.  The rightmost term sits
    at shift 0 and the others are shifted so every arrow has degree 2.
    """
    check_exact([phi, psi])
    p = phi.source.p
    K, L, M = phi.source, phi.target, psi.target
    if variant == 1:
        pieces = [(K, -2 * p)] + [(L, -2 * p + 2 + 2 * c) for c in range(p - 1)] + [(M, 0)]
        arrows = {(0, 1): phi.M, (p - 1, p): psi.M}
        for c in range(1, p - 1):
            arrows[(c, c + 1)] = la.eye(L.dim)
    elif variant == 2:
        top = -2 * (p - 2)
        lshift = top - 2
        pieces = [(K, lshift - 2 - 2 * (p - 2 - c)) for c in range(p - 1)] + [(L, lshift)] + \
                 [(M, top + 2 * c) for c in range(p - 1)]
        arrows = {(c, c + 1): la.eye(K.dim) for c in range(p - 2)}
        arrows[(p - 2, p - 1)] = phi.M
        arrows[(p - 1, p)] = psi.M
        for c in range(p, 2 * p - 2):
            arrows[(c, c + 1)] = la.eye(M.dim)
    else:
        raise ModuleError("variant must be 1 or 2")
    return assemble(K.alg, pieces, arrows)


def truncated_splice(maps: list, alg: ZigzagAlgebra | None = None) -> Module:
    """0 -> X_0 -> X_1 -> ... -> X_m -> 0 exact; X_m single at shift 0, then
    alternately repeated p-1 times / single going up the sequence."""
    if not maps:
        if alg is None:
            raise ModuleError("empty splice needs the algebra")
        return Module(alg, [], la.zeros(0, 0))
    check_exact(maps)
    alg = maps[0].source.alg
    p = alg.p
    terms = [f.source for f in maps] + [maps[-1].target]
    m = len(terms) - 1
    pieces, first, last = [], {}, {}
    cur = 0
    for k in range(m, -1, -1):
        reps = p - 1 if (m - k) % 2 == 1 else 1
        block = []
        for c in range(reps):
            block.append(len(pieces) + (reps - 1 - c))
        shifts = [cur - 2 * (reps - 1 - c) for c in range(reps)]
        # pieces for this term listed top (lowest shift) to bottom
        start = len(pieces)
        for c in range(reps):
            pieces.append((terms[k], shifts[reps - 1 - c]))
        # pieces[start] has the highest shift (nearest the target); pieces[start+reps-1] the lowest
        first[k] = start + reps - 1
        last[k] = start
        cur = shifts[0] - 2
    arrows = {}
    for k in range(m + 1):
        reps = last[k] - first[k]
        for c in range(first[k], last[k], -1):
            arrows[(c, c - 1)] = la.eye(terms[k].dim)
        if k < m:
            arrows[(last[k], first[k + 1])] = maps[k].M
    return assemble(alg, pieces, arrows)


# ---------------------------------------------------------------------------
# Hom complexes
# ---------------------------------------------------------------------------
class HomSpace:
    """Hom_A(M, N) on one side, graded by the degree shift of the maps.

    A map of degree d sends M_e into N_{e+d}; its differential is
    d_N f - f d_M.  When M is free on the side, a map is determined by the
    images of the generators (y in e_u N for a generator at vertex u).
    """

    def __init__(self, M: Module, N: Module, side: str | None = None):
        if side is None:
            side = LEFT if (M.has(LEFT) and N.has(LEFT)) else RIGHT
        if not (M.has(side) and N.has(side)):
            raise ModuleError(f"both modules need a {side} action")
        self.M, self.N, self.side = M, N, side
        self.p = M.p
        self.free = M.free(side) is not None
        if self.free:
            self._setup_free()
        else:
            self._setup_generic()

    # free presentation -----------------------------------------------------
    def _setup_free(self):
        M, N, side = self.M, self.N, self.side
        self.gens = M.free_gens(side)
        Nv = N.vertices(side)
        self.targets = [np.nonzero(Nv == u)[0] for _, _, u in self.gens]
        # incoming[g] = [(g2, path, coef)]: d(h_g2) contains coef * path . h_g
        self.incoming = {g: [] for g in range(len(self.gens))}
        for g2, (_, k, _) in enumerate(self.gens):
            for g, b, c in M.free_expansion(side, M.D[:, k]):
                self.incoming[g].append((g2, b, c))
        self.index: dict = {}
        self.by_degree: dict = {}
        for g, (_, k, _) in enumerate(self.gens):
            dh = int(M.degs[k])
            for y in self.targets[g]:
                d = int(N.degs[y]) - dh
                lst = self.by_degree.setdefault(d, [])
                self.index[(g, int(y))] = (d, len(lst))
                lst.append((g, int(y)))

    def _setup_generic(self):
        M, N, side, p = self.M, self.N, self.side, self.p
        Mv, Nv = M.vertices(side), N.vertices(side)
        pairs = [(int(y), int(x)) for y in range(N.dim) for x in range(M.dim) if Nv[y] == Mv[x]]
        Ma = M.left if side == LEFT else M.right
        Na = N.left if side == LEFT else N.right
        Mad = {a: m.toarray() for a, m in Ma.items()}
        Nad = {a: m.toarray() for a, m in Na.items()}
        self.by_degree, self.kernels = {}, {}
        groups: dict = {}
        for y, x in pairs:
            groups.setdefault(int(N.degs[y] - M.degs[x]), []).append((y, x))
        for d, vars_ in sorted(groups.items()):
            ys = np.array([v[0] for v in vars_])
            xs = np.array([v[1] for v in vars_])
            rows = []
            for a in Ma:
                # (N_a F - F M_a)[y', x] for all y', x
                blk = la.zeros(N.dim * M.dim, len(vars_))
                for c, (y, x) in enumerate(vars_):
                    col = np.outer(Nad[a][:, y], np.eye(1, M.dim, x)[0]) - np.outer(
                        np.eye(1, N.dim, y)[0], Mad[a][x, :])
                    blk[:, c] = col.reshape(-1)
                rows.append(blk[np.any(blk, axis=1)])
            C = np.concatenate(rows, axis=0) if rows else la.zeros(0, len(vars_))
            K = la.nullspace(la.mod(C, p), p)
            if K.shape[1]:
                self.by_degree[d] = vars_
                self.kernels[d] = K
        self._ys_xs = {d: (np.array([v[0] for v in vs]), np.array([v[1] for v in vs]))
                       for d, vs in self.by_degree.items()}

    # common interface ----------------------------------------------------------
    def degrees(self) -> list:
        return sorted(self.by_degree)

    def dim(self, d: int) -> int:
        if d not in self.by_degree:
            return 0
        return len(self.by_degree[d]) if self.free else self.kernels[d].shape[1]

    def diff_block(self, d: int) -> np.ndarray:
        """Matrix of the differential from degree d to degree d+2."""
        p = self.p
        nd, nt = self.dim(d), self.dim(d + 2)
        if nd == 0 or nt == 0:
            return la.zeros(nt, nd)
        if self.free:
            return self._free_diff(d)
        F = self._generic_maps(d)
        out = la.zeros(nt, nd)
        ys, xs = self._ys_xs[d + 2]
        K2 = self.kernels[d + 2]
        for c, Fm in enumerate(F):
            G = la.mod(self.N.D @ Fm - Fm @ self.M.D, p)
            v = G[ys, xs]
            sol = la.solve(K2, v, p)
            if sol is None:
                raise ModuleError("hom differential left the space of A-linear maps")
            out[:, c] = sol
        return out

    def _free_diff(self, d: int) -> np.ndarray:
        p, N, side = self.p, self.N, self.side
        cols = self.by_degree[d]
        rows = self.by_degree[d + 2]
        out = la.zeros(len(rows), len(cols))
        col_by_gen: dict = {}
        for c, (g, y) in enumerate(cols):
            col_by_gen.setdefault(g, []).append((c, y))
        row_pos = {gy: r for r, gy in enumerate(rows)}
        for g, entries in col_by_gen.items():
            cidx = np.array([c for c, _ in entries])
            ys = np.array([y for _, y in entries])
            terms = [(g, None, 1)] + [(g2, b, -c) for g2, b, c in self.incoming[g]]
            for g2, b, coef in terms:
                T = self.targets[g2]
                mat = N.D[np.ix_(T, ys)] if b is None else N.path(side, b)[T][:, ys].toarray()
                r_nz, c_nz = np.nonzero(mat)
                for r, c in zip(r_nz, c_nz):
                    out[row_pos[(g2, int(T[r]))], cidx[c]] += coef * mat[r, c]
        return la.mod(out, p)

    def _generic_maps(self, d: int) -> list:
        ys, xs = self._ys_xs[d]
        K = self.kernels[d]
        out = []
        for c in range(K.shape[1]):
            F = la.zeros(self.N.dim, self.M.dim)
            F[ys, xs] = K[:, c]
            out.append(F)
        return out

    def complex(self) -> pc.PComplex:
        degs = self.degrees()
        dims = {d: self.dim(d) for d in degs}
        diff = {d: self.diff_block(d) for d in degs if d + 2 in dims}
        return pc.PComplex.from_blocks(self.p, dims, diff)

    def to_map(self, vec, d: int) -> ModMap:
        """The A-linear map of degree d with coordinates vec."""
        p, M, N, side = self.p, self.M, self.N, self.side
        vec = la.mod(np.asarray(vec, dtype=np.int64).reshape(-1), p)
        if not self.free:
            F = la.zeros(N.dim, M.dim)
            if d in self.kernels:
                ys, xs = self._ys_xs[d]
                F[ys, xs] = la.matmul(self.kernels[d], vec.reshape(-1, 1), p)[:, 0]
            return ModMap(M, N, F, d)
        G = la.zeros(N.dim, len(self.gens))
        for c, (g, y) in enumerate(self.by_degree.get(d, [])):
            G[y, g] = vec[c]
        F = la.zeros(N.dim, M.dim)
        by_path: dict = {}
        for k, (gkey, b) in enumerate(M.free(side)):
            by_path.setdefault(b, []).append(k)
        gpos = {g: i for i, (g, _, _) in enumerate(self.gens)}
        fr = M.free(side)
        for b, ks in by_path.items():
            gcols = [gpos[fr[k][0]] for k in ks]
            F[:, ks] = la.mod(N.path(side, b) @ G[:, gcols], p)
        return ModMap(M, N, F, d)

    def from_map(self, f: ModMap) -> np.ndarray:
        d = f.qdeg
        if not self.free:
            ys, xs = self._ys_xs[d]
            sol = la.solve(self.kernels[d], f.M[ys, xs], self.p)
            if sol is None:
                raise ModuleError("map is not A-linear")
            return sol
        out = la.zeros(self.dim(d), 1)[:, 0]
        for c, (g, y) in enumerate(self.by_degree.get(d, [])):
            out[c] = f.M[y, self.gens[g][1]]
        return out

    def cycles(self, d: int) -> np.ndarray:
        """Columns spanning the degree-d chain maps."""
        blk = self.diff_block(d)
        if blk.shape[0] == 0:
            return la.eye(self.dim(d))
        return la.nullspace(blk, self.p)

    def boundaries(self, d: int) -> np.ndarray:
        """Image of d^{p-1} landing in degree d (null-homotopic chain maps)."""
        p = self.p
        k = p - 1
        start = d - 2 * k
        if self.dim(start) == 0:
            return la.zeros(self.dim(d), 0)
        mat = la.eye(self.dim(start))
        for s in range(k):
            blk = self.diff_block(start + 2 * s)
            mat = la.matmul(blk, mat, p) if blk.size else la.zeros(self.dim(start + 2 * s + 2), mat.shape[1])
        return mat

    def stable_dim(self, d: int) -> int:
        """dim of degree-d chain maps modulo null-homotopic ones."""
        Z = self.cycles(d)
        B = self.boundaries(d)
        rz = Z.shape[1]
        rb = la.rank(B, self.p) if B.size else 0
        return rz - rb

    def is_null_homotopic(self, f: ModMap) -> bool:
        B = self.boundaries(f.qdeg)
        v = self.from_map(f)
        return la.in_span(B, v, self.p)

    def module(self) -> Module:
        """The hom as a module over the remaining action of N (free case only)."""
        if not self.free:
            raise ModuleError("module structure on Hom needs a free source")
        N, side, p = self.N, self.side, self.p
        other = RIGHT if side == LEFT else LEFT
        basis = [(d, gy) for d in self.degrees() for gy in self.by_degree[d]]
        pos = {gy: k for k, (_, gy) in enumerate(basis)}
        T = len(basis)
        D = la.zeros(T, T)
        for d in self.degrees():
            if d + 2 in self.by_degree:
                blk = self._free_diff(d)
                ci = [pos[gy] for gy in self.by_degree[d]]
                ri = [pos[gy] for gy in self.by_degree[d + 2]]
                D[np.ix_(ri, ci)] = blk
        degs = [d for d, _ in basis]
        labels = tuple(gy for _, gy in basis)
        acts, verts, free = None, None, None
        if N.has(other):
            Na = N.left if other == LEFT else N.right
            gy_idx = np.array([gy[1] for _, gy in basis])
            gens = np.array([gy[0] for _, gy in basis])
            acts = {}
            for a, m in Na.items():
                sub = m[gy_idx][:, gy_idx].tocoo()
                keep = gens[sub.row] == gens[sub.col]
                acts[a] = sp.csr_array((sub.data[keep], (sub.row[keep], sub.col[keep])), shape=(T, T))
            verts = N.vertices(other)[gy_idx]
            nf = N.free(other)
            if nf is not None:
                free = tuple(((g, nf[y][0]), nf[y][1]) for g, y in labels)
        kwargs = {"left": acts, "lv": verts, "lfree": free} if other == LEFT else \
            {"right": acts, "rv": verts, "rfree": free}
        return Module.build(N.alg, degs, D, labels=labels, **kwargs)


def hom_complex(M: Module, N: Module, side: str | None = None) -> pc.PComplex:
    return HomSpace(M, N, side).complex()


def rhom(M: Module, N: Module, replacement: Module, augmentation: ModMap) -> pc.PComplex:
    """RHOM via a cofibrant replacement, after checking its augmentation to M."""
    if augmentation.source is not replacement or augmentation.target is not M:
        raise ModuleError("augmentation must go from the replacement to M")
    augmentation.check()
    if not quasi_iso(augmentation):
        raise ModuleError("replacement is not quasi-isomorphic to M")
    return hom_complex(replacement, N)


def chain_maps(M: Module, N: Module, qdeg: int = 0, side: str | None = None) -> list:
    H = HomSpace(M, N, side)
    Z = H.cycles(qdeg)
    return [H.to_map(Z[:, c], qdeg) for c in range(Z.shape[1])]


# ---------------------------------------------------------------------------
# tensor products over A
# ---------------------------------------------------------------------------
def tensor_over_A(X: Module, Y: Module) -> Module:
    """X (x)_A Y for X with a right action and Y with a left action.

    Uses the free presentation of Y (left) or of X (right) when present;
    otherwise forms the quotient of X (x)_k Y by the balancing relations.
    Remaining actions (left from X, right from Y) are kept.
    """
    if not (X.has(RIGHT) and Y.has(LEFT)):
        raise ModuleError("tensor over A needs a right module and a left module")
    if Y.lfree is not None:
        return _tensor_free_right_factor(X, Y)
    if X.rfree is not None:
        return _tensor_free_left_factor(X, Y)
    return _tensor_generic(X, Y)


def _tensor_free_right_factor(X: Module, Y: Module) -> Module:
    # basis (x, h): x in X e_{u_h}, h a left generator of Y
    p, alg = X.p, X.alg
    gens = Y.free_gens(LEFT)
    blocks = [np.nonzero(X.rv == u)[0] for _, _, u in gens]
    offs = np.concatenate([[0], np.cumsum([len(b) for b in blocks])]).astype(int)
    N = int(offs[-1])
    degs = np.concatenate([X.degs[b] + Y.degs[k] for b, (_, k, _) in zip(blocks, gens)]) if gens else []
    D = la.zeros(N, N)
    for g, (_, k, _) in enumerate(gens):
        B = blocks[g]
        D[offs[g]:offs[g + 1], offs[g]:offs[g + 1]] += X.D[np.ix_(B, B)]
        for g2, b, c in Y.free_expansion(LEFT, Y.D[:, k]):
            # x (x) b h' = (x b) (x) h'
            R = X.rpath(b)[blocks[g2]][:, B].toarray()
            D[offs[g2]:offs[g2 + 1], offs[g]:offs[g + 1]] += c * R
    left = lv = lfree = None
    if X.has(LEFT):
        left = {a: sp.block_diag([m[B][:, B] for B in blocks], format="csr") for a, m in X.left.items()}
        lv = np.concatenate([X.lv[B] for B in blocks])
        if X.lfree is not None:
            lfree = tuple(((X.lfree[x][0], gk), X.lfree[x][1])
                          for B, (gk, _, _) in zip(blocks, gens) for x in B)
    right = rv = None
    if Y.has(RIGHT):
        right = {}
        for a, m in Y.right.items():
            mat = sp.lil_array((N, N), dtype=np.int64)
            for g, (_, k, _) in enumerate(gens):
                col = m[:, [k]].toarray()[:, 0]
                for g2, b, c in Y.free_expansion(LEFT, col):
                    R = X.rpath(b)[blocks[g2]][:, blocks[g]].tocoo()
                    for r, cc, v in zip(R.row, R.col, R.data):
                        mat[offs[g2] + r, offs[g] + cc] += c * v
            right[a] = mat
        rv = np.concatenate([np.full(len(B), Y.rv[k]) for B, (_, k, _) in zip(blocks, gens)])
    labels = tuple((X.labels[x], Y.labels[k]) for B, (_, k, _) in zip(blocks, gens) for x in B)
    return Module.build(alg, degs, la.mod(D, p), lv, rv, left, right, labels, lfree, None)


def _tensor_free_left_factor(X: Module, Y: Module) -> Module:
    # basis (g, y): g a right generator of X at vertex w, y in e_w Y
    p, alg = X.p, X.alg
    gens = X.free_gens(RIGHT)
    blocks = [np.nonzero(Y.lv == w)[0] for _, _, w in gens]
    offs = np.concatenate([[0], np.cumsum([len(b) for b in blocks])]).astype(int)
    N = int(offs[-1])
    degs = np.concatenate([X.degs[k] + Y.degs[b] for b, (_, k, _) in zip(blocks, gens)]) if gens else []
    D = la.zeros(N, N)
    for g, (_, k, _) in enumerate(gens):
        B = blocks[g]
        D[offs[g]:offs[g + 1], offs[g]:offs[g + 1]] += Y.D[np.ix_(B, B)]
        for g2, b, c in X.free_expansion(RIGHT, X.D[:, k]):
            # g' b (x) y = g' (x) b y
            Lm = Y.lpath(b)[blocks[g2]][:, B].toarray()
            D[offs[g2]:offs[g2 + 1], offs[g]:offs[g + 1]] += c * Lm
    right = rv = rfree = None
    if Y.has(RIGHT):
        right = {a: sp.block_diag([m[B][:, B] for B in blocks], format="csr") for a, m in Y.right.items()}
        rv = np.concatenate([Y.rv[B] for B in blocks])
        if Y.rfree is not None:
            rfree = tuple(((gk, Y.rfree[y][0]), Y.rfree[y][1])
                          for B, (gk, _, _) in zip(blocks, gens) for y in B)
    left = lv = None
    if X.has(LEFT):
        left = {}
        for a, m in X.left.items():
            mat = sp.lil_array((N, N), dtype=np.int64)
            for g, (_, k, _) in enumerate(gens):
                col = m[:, [k]].toarray()[:, 0]
                for g2, b, c in X.free_expansion(RIGHT, col):
                    Lm = Y.lpath(b)[blocks[g2]][:, blocks[g]].tocoo()
                    for r, cc, v in zip(Lm.row, Lm.col, Lm.data):
                        mat[offs[g2] + r, offs[g] + cc] += c * v
            left[a] = mat
        lv = np.concatenate([np.full(len(B), X.lv[k]) for B, (_, k, _) in zip(blocks, gens)])
    labels = tuple((X.labels[k], Y.labels[y]) for B, (_, k, _) in zip(blocks, gens) for y in B)
    return Module.build(alg, degs, la.mod(D, p), lv, rv, left, right, labels, None, rfree)


def _tensor_generic(X: Module, Y: Module) -> Module:
    p, alg = X.p, X.alg
    pairs = [(x, y) for x in range(X.dim) for y in range(Y.dim) if X.rv[x] == Y.lv[y]]
    pos = {xy: k for k, xy in enumerate(pairs)}
    V = len(pairs)
    xs = np.array([x for x, _ in pairs], dtype=int)
    ys = np.array([y for _, y in pairs], dtype=int)
    rels = []
    for a in alg.arrows:
        R, Lm = X.right[a].tocsc(), Y.left[a].tocsc()
        for x in np.nonzero(X.rv == a[0])[0]:
            for y in np.nonzero(Y.lv == a[1])[0]:
                v = la.zeros(V, 1)[:, 0]
                col = R[:, [x]].tocoo()
                for r, val in zip(col.row, col.data):
                    v[pos[(int(r), int(y))]] += val
                col = Lm[:, [y]].tocoo()
                for r, val in zip(col.row, col.data):
                    v[pos[(int(x), int(r))]] -= val
                if v.any():
                    rels.append(v)
    Rm = np.stack(rels, axis=1) if rels else la.zeros(V, 0)
    Rm = la.colspace(la.mod(Rm, p), p)
    keep = la.complement_basis(Rm, V, p)
    # change of basis: columns of Rm then kept coordinates
    B = np.concatenate([Rm, la.eye(V)[:, keep]], axis=1) if V else la.zeros(0, 0)
    Binv = la.inverse(B, p) if V else B
    r = Rm.shape[1]
    proj = Binv[r:, :]
    incl = la.eye(V)[:, keep]

    def induced(mat):
        return la.matmul(proj, la.matmul(mat, incl, p), p)

    DV = la.zeros(V, V)
    XD, YD = X.D, Y.D
    for k, (x, y) in enumerate(pairs):
        for r in np.nonzero(XD[:, x])[0]:
            DV[pos[(int(r), y)], k] += XD[r, x]
        for r in np.nonzero(YD[:, y])[0]:
            DV[pos[(x, int(r))], k] += YD[r, y]
    degs = (X.degs[xs] + Y.degs[ys])[keep] if V else []
    left = lv = right = rv = None
    if X.has(LEFT):
        left = {}
        for a, m in X.left.items():
            A = la.zeros(V, V)
            md = m.toarray()
            for k, (x, y) in enumerate(pairs):
                for rr in np.nonzero(md[:, x])[0]:
                    A[pos[(int(rr), y)], k] += md[rr, x]
            left[a] = induced(A)
        lv = X.lv[xs][keep]
    if Y.has(RIGHT):
        right = {}
        for a, m in Y.right.items():
            A = la.zeros(V, V)
            md = m.toarray()
            for k, (x, y) in enumerate(pairs):
                for rr in np.nonzero(md[:, y])[0]:
                    A[pos[(x, int(rr))], k] += md[rr, y]
            right[a] = induced(A)
        rv = Y.rv[ys][keep]
    labels = tuple((X.labels[pairs[k][0]], Y.labels[pairs[k][1]]) for k in keep)
    return Module.build(alg, degs, induced(DV), lv, rv, left, right, labels)


# ---------------------------------------------------------------------------
# duals
# ---------------------------------------------------------------------------
def dual_diagram(diagram: CellDiagram) -> CellDiagram:
    """Hom into A, node by node: P_a{r} -x-> P_b{s} becomes _bP{-s} -(-x)-> _aP{-r}."""
    side = RIGHT if diagram.side == LEFT else LEFT
    nodes = [(v, -s, -t) for v, s, t in diagram.nodes]
    edges = [(b, a, _negate_label(lab)) for a, b, lab in diagram.edges]
    return CellDiagram(side, nodes, edges)


def _negate_label(lab: str) -> str:
    lab = lab.strip()
    if lab == "=":
        return "-1"
    if lab.startswith("-") and "+" not in lab[1:] and "-" not in lab[1:]:
        return lab[1:].strip()
    return "-(" + lab + ")" if not lab.startswith("(") or "+" in lab or "-" in lab[1:] else "-" + lab


def dual(alg: ZigzagAlgebra, diagram: CellDiagram) -> Module:
    return compile_diagram(alg, dual_diagram(diagram))


# ---------------------------------------------------------------------------
# quasi-isomorphism certificates
# ---------------------------------------------------------------------------
class CertificateError(ModuleError):
    pass


@dataclass
class Leg:
    map: ModMap
    direction: str           # "forward": current -> next; "backward": next -> current
    witness: dict

    def to_json(self) -> dict:
        r, c = np.nonzero(self.map.M)
        return {
            "direction": self.direction,
            "qdeg": self.map.qdeg,
            "shape": [self.map.target.dim, self.map.source.dim],
            "entries": [[int(i), int(j), int(self.map.M[i, j])] for i, j in zip(r, c)],
            "witness": self.witness,
        }


def acyclicity_witness(c: pc.PComplex) -> dict:
    dec = pc.decompose(c)
    contractible = sum(m for (j, _), m in dec.items() if j == c.p - 1)
    return {"cone_dim": c.dim, "contractible_summands": contractible,
            "other_summands": sum(m for (j, _), m in dec.items() if j != c.p - 1)}


def make_leg(f: ModMap, direction: str) -> Leg:
    f.check()
    if not quasi_iso(f):
        raise CertificateError("map is not a quasi-isomorphism")
    return Leg(f, direction, acyclicity_witness(pc.cone(f.pmap)))


@dataclass
class QuasiIsoCertificate:
    """A zig-zag of quasi-isomorphisms joining ``start`` to ``end``."""

    start: Module
    end: Module
    legs: list = field(default_factory=list)
    note: str = ""

    def chains(self) -> bool:
        """The legs join start to end (no re-check of the maps themselves)."""
        cur = self.start
        for leg in self.legs:
            f = leg.map
            src, tgt = (f.source, f.target) if leg.direction == "forward" else (f.target, f.source)
            if src is not cur:
                return False
            cur = tgt
        return cur is self.end

    def verify(self) -> bool:
        cur = self.start
        for leg in self.legs:
            f = leg.map
            src, tgt = (f.source, f.target) if leg.direction == "forward" else (f.target, f.source)
            if src is not cur:
                return False
            f.check()
            if not quasi_iso(f):
                return False
            cur = tgt
        return cur is self.end

    def to_json(self) -> dict:
        return {"note": self.note, "start_dim": self.start.dim, "end_dim": self.end.dim,
                "legs": [leg.to_json() for leg in self.legs]}


def certify(start: Module, end: Module, steps: list, note: str = "") -> QuasiIsoCertificate:
    """steps: list of (ModMap, direction)."""
    cert = QuasiIsoCertificate(start, end, [make_leg(f, d) for f, d in steps], note)
    if not cert.chains():
        raise CertificateError("certificate legs do not chain from start to end")
    return cert


def find_quasi_iso(X: Module, Y: Module, qdeg: int = 0, side: str | None = None,
                   seed: int = 0, tries: int = 20) -> ModMap | None:
    """Search the chain maps X -> Y of the given degree for a quasi-isomorphism."""
    H = HomSpace(X, Y, side)
    Z = H.cycles(qdeg)
    if Z.shape[1] == 0:
        return None
    p = X.p
    rng = np.random.default_rng(seed)
    for t in range(tries):
        if t < Z.shape[1] and Z.shape[1] <= 3:
            coeffs = np.eye(1, Z.shape[1], t, dtype=np.int64)[0]
        else:
            coeffs = rng.integers(0, p, Z.shape[1])
        v = la.matmul(Z, coeffs.reshape(-1, 1), p)[:, 0]
        if not v.any():
            continue
        f = H.to_map(v, qdeg)
        if quasi_iso(f):
            return f
    return None
