"""Finite cell resolutions of the simple modules and maps between them."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from math import factorial

import numpy as np

from . import linalg as la
from . import pcomplex as pc
from .pdgmod import (LEFT, RIGHT, CellDiagram, ModMap, Module, ModuleError, compile_diagram,
                     edge_label, node_index, quasi_iso, rhom, simple, tensor_over_A)
from .zigzag import AlgElement, NormalPath, ZigzagAlgebra


class ResolutionError(ValueError):
    pass


@dataclass(eq=False)
class Resolution:
    """A compiled cell diagram with named nodes and (optionally) an augmentation."""

    alg: ZigzagAlgebra
    diagram: CellDiagram
    names: dict
    params: dict = field(default_factory=dict)
    vertex: int | None = None          # the simple being resolved

    @cached_property
    def module(self) -> Module:
        return compile_diagram(self.alg, self.diagram)

    @property
    def side(self) -> str:
        return self.diagram.side

    def node(self, name) -> int:
        return self.names[name]

    @cached_property
    def simple(self) -> Module:
        return simple(self.alg, self.vertex, self.side)

    @cached_property
    def augmentation(self) -> ModMap:
        """Projection of the bottom generator onto the simple, coefficient +1."""
        M = self.module
        k = node_index(M, self.names["bottom"], NormalPath(self.vertex, self.vertex, 0))
        F = la.zeros(1, M.dim)
        F[0, k] = 1
        return ModMap(M, self.simple, F, 0)


def _check_range(alg: ZigzagAlgebra, i: int, hi: int):
    if not 1 <= i <= hi:
        raise ResolutionError(f"index {i} outside 1..{hi} for n={alg.n}")


def ny_template(n: int, p: int, i: int, lam: int) -> tuple:
    """Left resolution of L_i: P_i{2-2p} over two rows of p-1 copies of P_{i-1}, P_{i+1}, onto P_i.

    The vertical arrows run from the P_{i-1} row to the P_{i+1} row when lam = 1
    and the other way when lam = 0.  Rows for P_0 are omitted.
    """
    d = CellDiagram(LEFT)
    names = {}
    up, down = ("A", "B") if lam == 1 else ("B", "A")
    names["top"] = d.add(i, 2 - 2 * p, 2 * p)
    rows = {"A": i - 1, "B": i + 1}
    for m in range(p - 1):
        for r, v in rows.items():
            if not 1 <= v <= n:
                continue
            pos = 2 * (p - 1 - m) + (1 if r == up else 0)
            names[(r, m)] = d.add(v, 3 - 2 * p + 2 * m, pos)
    names["bottom"] = d.add(i, 0, 0)
    first = {"A": f"({i}|{i-1})", "B": f"-({i}|{i+1})"}
    last = {"A": f"({i-1}|{i})", "B": f"({i+1}|{i})"}
    for r in rows:
        if (r, 0) not in names:
            continue
        d.connect(names["top"], names[(r, 0)], first[r])
        for m in range(p - 2):
            d.connect(names[(r, m)], names[(r, m + 1)], "=")
        d.connect(names[(r, p - 2)], names["bottom"], last[r])
    if ("A", 0) in names and ("B", 0) in names:
        a, b = rows[up], rows[down]
        for m in range(p - 1):
            d.connect(names[(up, m)], names[(down, m)], f"({a}|{i}|{b})")
    return d, names


def ny_resolution(alg: ZigzagAlgebra, i: int, side: str = LEFT) -> Resolution:
    """Resolution of L_i (left) or _iL (right); lam in {0, 1} is read from the algebra."""
    _check_range(alg, i, alg.n - 1)
    lam = alg.lam
    if lam not in (0, 1):
        raise ResolutionError("resolutions are given for lambda in {0, 1}")
    if side == LEFT:
        d, names = ny_template(alg.n, alg.p, i, lam)
    else:
        # a right module over (A, d_lam) is tau of a left module over (A, d_{1-lam})
        d, names = ny_template(alg.n, alg.p, i, 1 - lam)
        d = d.tau(alg)
    return Resolution(alg, d, names, {"i": i, "side": side, "lambda": lam}, i)


def ln_diagram(n: int, p: int, side: str) -> tuple:
    """P_{n-1}{3-2p} = ... = P_{n-1}{-1} -> P_n; the right version uses (n|n-1)."""
    d = CellDiagram(side)
    names = {}
    for m in range(p - 1):
        names[("A", m)] = d.add(n - 1, 3 - 2 * p + 2 * m, p - 1 - m)
    names["bottom"] = d.add(n, 0, 0)
    for m in range(p - 2):
        d.connect(names[("A", m)], names[("A", m + 1)], "=")
    d.connect(names[("A", p - 2)], names["bottom"], f"({n-1}|{n})" if side == LEFT else f"({n}|{n-1})")
    return d, names


def ln_resolution(alg: ZigzagAlgebra, side: str = LEFT) -> Resolution:
    """Two-row resolution of L_n (left, lambda = 0) or _nL (right, lambda = 1).

    The right diagram is the tau-transport of the left one, so it lives over
    d_1.  Over d_0 the same right diagram is not a p-DG module once n >= 3,
    because d_0 (n|n-1) is nonzero (see ``ln_diagram`` and the tests).
    """
    need = 0 if side == LEFT else 1
    if alg.lam != need:
        raise ResolutionError(f"the {side} two-row resolution of the last simple needs lambda = {need}")
    d, names = ln_diagram(alg.n, alg.p, side)
    return Resolution(alg, d, names, {"i": alg.n, "side": side, "lambda": alg.lam}, alg.n)


def shifted_resolution(alg: ZigzagAlgebra, j: int, offset: int) -> Resolution:
    """Left cell module for L_j[1]{2p-1+offset}: the repeated-ends form of the same SES.

    P_j{3-2p} = ... = P_j{-1} -> (P_{j-1} -> P_{j+1}) -> P_j{1} = ... = P_j{2p-3}, all shifted by offset.
    """
    n, p = alg.n, alg.p
    if alg.lam != 1:
        raise ResolutionError("psi and phi are built for lambda = 1 only")
    d = CellDiagram(LEFT)
    names = {}
    for r in range(p - 1):
        names[("K", r)] = d.add(j, 3 - 2 * p + 2 * r + offset, 2 * p + 1 - r)
    if j - 1 >= 1:
        names["low"] = d.add(j - 1, offset, p + 1)
    if j + 1 <= n:
        names["high"] = d.add(j + 1, offset, p)
    for r in range(p - 1):
        names[("M", r)] = d.add(j, 1 + 2 * r + offset, p - 1 - r)
    for r in range(p - 2):
        d.connect(names[("K", r)], names[("K", r + 1)], "=")
        d.connect(names[("M", r)], names[("M", r + 1)], "=")
    last = names[("K", p - 2)]
    if "low" in names:
        d.connect(last, names["low"], f"({j}|{j-1})")
        d.connect(names["low"], names[("M", 0)], f"({j-1}|{j})")
    if "high" in names:
        d.connect(last, names["high"], f"-({j}|{j+1})")
        d.connect(names["high"], names[("M", 0)], f"({j+1}|{j})")
    if "low" in names and "high" in names:
        d.connect(names["low"], names["high"], f"({j-1}|{j}|{j+1})")
    return Resolution(alg, d, names, {"j": j, "offset": offset}, None)


# ---------------------------------------------------------------------------
# maps between left cell modules
# ---------------------------------------------------------------------------
@dataclass(eq=False)
class ResolutionMap:
    source: Resolution
    target: Resolution
    components: dict          # (source node name, target node name) -> AlgElement
    qdeg: int = 0
    homological: int = 0

    @cached_property
    def map(self) -> ModMap:
        return cell_map(self.source, self.target, self.components, self.qdeg)


def cell_map(src: Resolution, tgt: Resolution, components: dict, qdeg: int = 0) -> ModMap:
    """The left-module map sending c.g_a to sum over components c.x.g_b."""
    alg = src.alg
    S, T = src.module, tgt.module
    F = la.zeros(T.dim, S.dim)
    for (a, b), x in components.items():
        na, nb = src.node(a), tgt.node(b)
        va, sa, _ = src.diagram.nodes[na]
        vb, sb, _ = tgt.diagram.nodes[nb]
        if x.ends() - {(va, vb)}:
            raise ResolutionError(f"component {a}->{b} has wrong endpoints")
        if x.degrees() - {sa - sb + qdeg}:
            raise ResolutionError(f"component {a}->{b} has degree {x.degrees()}, needs {sa - sb + qdeg}")
        for c in alg.basis:
            if c.target != va:
                continue
            col = node_index(S, na, c)
            prod = AlgElement(alg, {c: 1}) * x
            for r, coef in prod.terms.items():
                F[node_index(T, nb, r), col] += coef
    return ModMap(S, T, la.mod(F, alg.p), qdeg)


def _inv(k: int, p: int) -> int:
    if k % p == 0:
        raise ResolutionError(f"{k} is not invertible mod {p}")
    return pow(k, -1, p)


def factorials_used(p: int) -> list:
    """Every factorial appearing in the coefficient list, with its residue mod p."""
    return [(k, factorial(k) % p) for k in range(0, p - 1)]


def psi_components(alg: ZigzagAlgebra, i: int, identity_copies_only: bool = False) -> dict:
    """psi_{i+1}: identity on the P_{i+1} copies; completed by the identity on the middle P_i.

    With ``identity_copies_only`` the P_i component is left out, which does not commute
    with the differentials (the last P_{i+1} copy hits P_i in both modules).
    """
    p = alg.p
    comps = {}
    e = alg.e(i + 1)
    for r in range(p - 1):
        comps[(("K", r), ("B", r))] = e
    if not identity_copies_only:
        comps[("low", "bottom")] = alg.e(i)
    return comps


def psi_map(alg: ZigzagAlgebra, i: int, identity_copies_only: bool = False) -> ResolutionMap:
    """L_{i+1}[1]{2p-1} -> L_i between their cell resolutions (lambda = 1)."""
    _check_range(alg, i, alg.n - 2)
    src = shifted_resolution(alg, i + 1, 0)
    tgt = ny_resolution(alg, i, LEFT)
    return ResolutionMap(src, tgt, psi_components(alg, i, identity_copies_only), 0, 1)


def phi_components(alg: ZigzagAlgebra, i: int) -> dict:
    """Components of phi_i: L_i -> L_{i+1}[1]{1}; node names follow ny_template / shifted_resolution."""
    p, n = alg.p, alg.n
    W = alg.walk

    def cpow(x: AlgElement, k: int) -> AlgElement:
        return x ** k if k > 0 else x ** 0

    c1 = W([i + 1, i, i + 1])
    c2 = W([i + 2, i + 1, i + 2])
    has_low = i - 1 >= 1
    comps: dict = {}

    def put(a, b, x):
        if not x.is_zero():
            comps[(a, b)] = comps.get((a, b), alg.elt()) + x

    # source names: top, ("A", m) = P_{i-1}{3-2p+2m}, ("B", m) = P_{i+1}{3-2p+2m}, bottom
    # target names: ("K", r), "low" = P_i, "high" = P_{i+2}, ("M", r) = P_{i+1}{-2p+3+2r}
    def B(k):   # P_{i+1}{-1-2k}
        return ("B", p - 2 - k)

    def A(k):   # P_{i-1}{-1-2k}
        return ("A", p - 2 - k)

    for j in range(p - 1):
        coef = (-1) ** (j + 1) * factorial(p - j - 2)
        put("bottom", ("M", j), W([i, i + 1]) * cpow(c1, p - j - 2) * coef)
    put("bottom", "high", W([i, i + 1, i + 2]) * cpow(c2, p - 2) * -1)
    for k in range(p - 1):
        for j in range(0, p - 2 - k):
            coef = (-1) ** (k + j) * factorial(p - 2 - j) * _inv(factorial(k + 1), p)
            put(B(k), ("M", j), cpow(c1, p - j - k - 2) * alg.e(i + 1) * coef)
        put(B(k), ("M", p - 2 - k), alg.e(i + 1) * -1)
        if has_low:
            for j in range(0, p - 2 - k):
                coef = (-1) ** (k + 1) * k * _inv(factorial(k + 1) * factorial(j + 1), p)
                put(A(k), ("M", j), W([i - 1, i, i + 1]) * cpow(c1, p - j - k - 3) * coef)
    for k in range(0, p - 2):
        coef = (-1) ** k * _inv(factorial(k + 1), p)
        put(B(k), "high", W([i + 1, i + 2]) * cpow(c2, p - k - 2) * coef)
    put(B(p - 2), "high", W([i + 1, i + 2]) * -1)
    put(B(p - 2), "low", W([i + 1, i]) * 2)
    if has_low:
        for k in range(1, p - 2):
            coef = (-1) ** (k + 1) * k * _inv(factorial(k + 1), p)
            put(A(k), "high", W([i - 1, i, i + 1, i + 2]) * cpow(c2, p - k - 3) * coef)
        put(A(p - 2), "low", W([i - 1, i]) * 2)
    put("top", "low", alg.e(i))
    return comps


def phi_map(alg: ZigzagAlgebra, i: int) -> ResolutionMap:
    _check_range(alg, i, alg.n - 2)
    if alg.lam != 1:
        raise ResolutionError("psi and phi are built for lambda = 1 only")
    src = ny_resolution(alg, i, LEFT)
    tgt = shifted_resolution(alg, i + 1, 2 - 2 * alg.p)
    return ResolutionMap(src, tgt, phi_components(alg, i), 0, 1)


# ---------------------------------------------------------------------------
# the short exact sequence behind the resolution
# ---------------------------------------------------------------------------
def simple_ses(alg: ZigzagAlgebra, i: int):
    """(phi, psi) for 0 -> P_i{2} -> (P_{i-1}{1} -> P_{i+1}{1}) -> rad P_i -> 0 (lambda = 1)."""
    from .pdgmod import submodule

    _check_range(alg, i, alg.n - 1)
    K = Resolution(alg, CellDiagram(LEFT, [(i, 2, 0)], []), {"g": 0})
    mid = CellDiagram(LEFT)
    names = {}
    if i - 1 >= 1:
        names["low"] = mid.add(i - 1, 1, 1)
    names["high"] = mid.add(i + 1, 1, 0)
    if "low" in names:
        mid.connect(names["low"], names["high"], f"({i-1}|{i}|{i+1})")
    L = Resolution(alg, mid, names)
    P = Resolution(alg, CellDiagram(LEFT, [(i, 0, 0)], []), {"g": 0})
    comps = {("g", "high"): alg.walk([i, i + 1]) * -1}
    if "low" in names:
        comps[("g", "low")] = alg.walk([i, i - 1])
    phi = cell_map(K, L, comps)
    to_p = {("high", "g"): alg.walk([i + 1, i])}
    if "low" in names:
        to_p[("low", "g")] = alg.walk([i - 1, i])
    psi_full = cell_map(L, P, to_p)
    Pm = P.module
    rad = [k for k, (node, b) in enumerate(Pm.labels) if b.degree > 0]
    R = submodule(Pm, rad)
    psi = ModMap(L.module, R, psi_full.M[rad, :], 0)
    return phi, psi, psi_full


def jordan_holder_p1(alg: ZigzagAlgebra) -> list:
    """Subquotients of left P_1 filtered by the spans of the paths (n-j+1|...|1), top to bottom."""
    from .pdgmod import _restrict, submodule

    P = compile_diagram(alg, CellDiagram(LEFT, [(1, 0, 0)], []))
    n = alg.n
    layers = []
    for j in range(1, n + 1):
        # the path from vertex j to vertex 1 spans e_j P_1
        layers.append([k for k, (_, b) in enumerate(P.labels) if b.source == j])
    out = []
    for j in range(n, 0, -1):
        sub = sorted(x for lay in layers[j - 1:] for x in lay)
        submodule(P, sub)
        out.append(_restrict(P, np.array(layers[j - 1])))
    return out


# RHOM and derived tensor tables between simples ----------------------------------
def _reduced(c: pc.PComplex) -> Counter:
    return pc.noncontractible(pc.decompose(c), c.p)


def expected_rhom_simples(p: int, i: int, j: int) -> Counter:
    """Non-contractible part of RHOM(L_i, L_j)."""
    if i == j:
        return _reduced(pc.direct_sum(pc.balanced(0, p), pc.balanced(0, p, 2 * p - 2)))
    if abs(i - j) == 1:
        return _reduced(pc.balanced(p - 2, p, p - 1))
    return Counter()


def expected_tensor_simples(p: int, i: int, j: int) -> Counter:
    """Non-contractible part of _iL (x)^L L_j; [2] is applied as a real shift, not as {-2p}."""
    if i == j:
        return _reduced(pc.direct_sum(pc.shift(pc.balanced(0, p), 2, 2), pc.balanced(0, p)))
    if abs(i - j) == 1:
        return _reduced(pc.balanced(p - 2, p, 1 - p))
    return Counter()


def rhom_simples(alg: ZigzagAlgebra, i: int, j: int) -> Counter:
    R = ny_resolution(alg, i, LEFT)
    return _reduced(rhom(R.simple, simple(alg, j, LEFT), R.module, R.augmentation))


def tensor_simples(alg: ZigzagAlgebra, i: int, j: int) -> Counter:
    R = ny_resolution(alg, i, RIGHT)
    if not quasi_iso(R.augmentation):
        raise ResolutionError("right resolution is not quasi-isomorphic to its simple")
    return _reduced(tensor_over_A(R.module, simple(alg, j, LEFT)).complex)


def resolution_map_report(m: ResolutionMap) -> dict:
    """Chain map, not null-homotopic, one-dimensional stable hom space."""
    from .pdgmod import HomSpace

    f = m.map
    H = HomSpace(f.source, f.target, LEFT)
    return {
        "chain": f.is_chain(),
        "linear": f.is_linear(),
        "nontrivial": f.is_chain() and not H.is_null_homotopic(f),
        "stable_dim": H.stable_dim(f.qdeg),
    }
