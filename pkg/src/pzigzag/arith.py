"""Exact coefficient arithmetic.

Integer Laurent polynomials in q, the quotient ring Z[q]/(Psi_p(q^2)) (here
``CycInt``), its image Z[q]/(Phi_{2p}(q)) (``Cyc2p``), the bar involution and
quantum integers.  Coefficients are Python ints, so nothing overflows.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def check_prime(p: int) -> int:
    if not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"p must be a prime, got {p!r}")
    return p


@dataclass(frozen=True)
class Fp:
    """A residue class mod a prime."""

    residue: int
    p: int

    def __post_init__(self):
        object.__setattr__(self, "residue", self.residue % self.p)

    def _coerce(self, other) -> int:
        if isinstance(other, Fp):
            if other.p != self.p:
                raise ValueError("mixed moduli")
            return other.residue
        return int(other)

    def __add__(self, other):
        return Fp(self.residue + self._coerce(other), self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return Fp(self.residue - self._coerce(other), self.p)

    def __rsub__(self, other):
        return Fp(self._coerce(other) - self.residue, self.p)

    def __mul__(self, other):
        return Fp(self.residue * self._coerce(other), self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return Fp(-self.residue, self.p)

    def inverse(self) -> "Fp":
        if self.residue == 0:
            raise ZeroDivisionError("0 has no inverse in F_p")
        return Fp(pow(self.residue, -1, self.p), self.p)

    def __truediv__(self, other):
        return self * Fp(self._coerce(other), self.p).inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return Fp(pow(self.residue, k, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, Fp):
            return self.p == other.p and self.residue == other.residue
        if isinstance(other, int):
            return self.residue == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.residue, self.p))

    def __int__(self):
        return self.residue


class Laurent:
    """Finitely supported integer Laurent polynomial in q."""

    __slots__ = ("_c",)

    def __init__(self, coeffs=None):
        items = {}
        if coeffs:
            for e, c in dict(coeffs).items():
                c = int(c)
                if c:
                    items[int(e)] = items.get(int(e), 0) + c
        self._c = tuple(sorted((e, c) for e, c in items.items() if c))

    @classmethod
    def mono(cls, e: int, c: int = 1) -> "Laurent":
        return cls({e: c})

    @property
    def coeffs(self) -> dict:
        return dict(self._c)

    def items(self):
        return self._c

    def is_zero(self) -> bool:
        return not self._c

    def __add__(self, other):
        other = _as_laurent(other)
        d = dict(self._c)
        for e, c in other._c:
            d[e] = d.get(e, 0) + c
        return Laurent(d)

    __radd__ = __add__

    def __neg__(self):
        return Laurent({e: -c for e, c in self._c})

    def __sub__(self, other):
        return self + (-_as_laurent(other))

    def __rsub__(self, other):
        return _as_laurent(other) - self

    def __mul__(self, other):
        other = _as_laurent(other)
        d: dict = {}
        for e1, c1 in self._c:
            for e2, c2 in other._c:
                d[e1 + e2] = d.get(e1 + e2, 0) + c1 * c2
        return Laurent(d)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Laurent.mono(0)
        for _ in range(k):
            out = out * self
        return out

    def shift(self, k: int) -> "Laurent":
        return Laurent({e + k: c for e, c in self._c})

    def bar(self) -> "Laurent":
        return Laurent({-e: c for e, c in self._c})

    def __eq__(self, other):
        if isinstance(other, int):
            other = Laurent.mono(0, other)
        if not isinstance(other, Laurent):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(self._c)

    def __repr__(self):
        return f"Laurent({dict(self._c)})"

    def __str__(self):
        return _fmt(self._c)

    def to_json(self) -> dict:
        return {"coeffs": {str(e): c for e, c in self._c}}

    @classmethod
    def from_json(cls, obj) -> "Laurent":
        return cls({int(e): int(c) for e, c in obj["coeffs"].items()})


def _as_laurent(x) -> Laurent:
    if isinstance(x, Laurent):
        return x
    if isinstance(x, int):
        return Laurent.mono(0, x)
    raise TypeError(f"cannot use {type(x).__name__} as a Laurent polynomial")


def _fmt(items) -> str:
    if not items:
        return "0"
    parts = []
    for e, c in items:
        mon = "" if e == 0 else ("q" if e == 1 else f"q^{e}")
        if mon == "":
            parts.append(str(c))
        elif c == 1:
            parts.append(mon)
        elif c == -1:
            parts.append("-" + mon)
        else:
            parts.append(f"{c}{mon}")
    return " + ".join(parts).replace("+ -", "- ")


def psi_poly(p: int) -> list[int]:
    """Coefficients (low to high) of Psi_p(q^2) = 1 + q^2 + ... + q^{2p-2}."""
    out = [0] * (2 * p - 1)
    for k in range(p):
        out[2 * k] = 1
    return out


@lru_cache(maxsize=None)
def phi2p_poly(p: int) -> tuple:
    """Coefficients of the cyclotomic polynomial Phi_{2p}(q), p prime."""
    if p == 2:
        return (1, 0, 1)
    return tuple((-1) ** k for k in range(p))


def reduce_mod_monic(coeffs: dict, modulus, period: int) -> dict:
    """Reduce a Laurent polynomial modulo a monic polynomial dividing q^period - 1."""
    deg = len(modulus) - 1
    work: dict = {}
    for e, c in coeffs.items():
        e = e % period
        work[e] = work.get(e, 0) + c
    top = max(work) if work else -1
    arr = [0] * (max(top, deg - 1) + 1)
    for e, c in work.items():
        arr[e] += c
    for e in range(len(arr) - 1, deg - 1, -1):
        c = arr[e]
        if c:
            arr[e] = 0
            base = e - deg
            for k in range(deg):
                arr[base + k] -= c * modulus[k]
    return {e: c for e, c in enumerate(arr) if c}


class _Quot:
    """Shared arithmetic for the two quotient rings."""

    __slots__ = ("p", "rep")

    def __init__(self, x, p: int):
        self.p = p
        x = _as_laurent(x) if not isinstance(x, _Quot) else x.rep
        self.rep = Laurent(self._reduce(x.coeffs, p))

    @staticmethod
    def _reduce(coeffs, p):
        raise NotImplementedError

    def _same(self, other):
        if isinstance(other, _Quot):
            if type(other) is not type(self) or other.p != self.p:
                raise ValueError("incompatible cyclotomic rings")
            return other.rep
        return _as_laurent(other)

    def __add__(self, other):
        return type(self)(self.rep + self._same(other), self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return type(self)(self.rep - self._same(other), self.p)

    def __rsub__(self, other):
        return type(self)(self._same(other) - self.rep, self.p)

    def __neg__(self):
        return type(self)(-self.rep, self.p)

    def __mul__(self, other):
        return type(self)(self.rep * self._same(other), self.p)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = type(self)(1, self.p)
        for _ in range(k):
            out = out * self
        return out

    def bar(self):
        return type(self)(self.rep.bar(), self.p)

    def is_zero(self) -> bool:
        return self.rep.is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, Laurent)):
            other = type(self)(other, self.p)
        if type(other) is not type(self):
            return NotImplemented
        return self.p == other.p and self.rep == other.rep

    def __hash__(self):
        return hash((type(self).__name__, self.p, self.rep))

    def __str__(self):
        return str(self.rep)

    def to_json(self) -> dict:
        return self.rep.to_json()


class CycInt(_Quot):
    """Element of Z[q]/(Psi_p(q^2)); canonical exponents 0..2p-3."""

    @staticmethod
    def _reduce(coeffs, p):
        return reduce_mod_monic(coeffs, psi_poly(p), 2 * p)

    def __repr__(self):
        return f"CycInt({self.rep}, p={self.p})"

    @classmethod
    def from_json(cls, obj, p: int) -> "CycInt":
        return cls(Laurent.from_json(obj), p)

    @classmethod
    def q(cls, p: int, e: int = 1) -> "CycInt":
        return cls(Laurent.mono(e), p)


class Cyc2p(_Quot):
    """Element of Z[q]/(Phi_{2p}(q)), where q^p = -1."""

    @staticmethod
    def _reduce(coeffs, p):
        return reduce_mod_monic(coeffs, phi2p_poly(p), 2 * p)

    def __repr__(self):
        return f"Cyc2p({self.rep}, p={self.p})"

    @classmethod
    def q(cls, p: int, e: int = 1) -> "Cyc2p":
        return cls(Laurent.mono(e), p)


def cyc_reduce(x, p: int) -> CycInt:
    return CycInt(x, p)


def bar(x):
    return x.bar()


def to_root(x: CycInt) -> Cyc2p:
    # Phi_{2p}(q) divides Psi_p(q^2), so reducing the representative is a ring map
    return Cyc2p(x.rep, x.p)


def qint_laurent(m: int) -> Laurent:
    if m < 0:
        raise ValueError("quantum integer needs m >= 0")
    return Laurent({e: 1 for e in range(-m + 1, m, 2)})


def qint(m: int, p: int) -> CycInt:
    """[m] = q^{1-m} + q^{3-m} + ... + q^{m-1}, reduced."""
    return CycInt(qint_laurent(m), p)


# units -------------------------------------------------------------------------
def _ring_rank(x: _Quot) -> int:
    return 2 * x.p - 2 if isinstance(x, CycInt) else len(phi2p_poly(x.p)) - 1


def mult_matrix(x: _Quot) -> list:
    """Integer matrix of multiplication by x on the basis 1, q, ..., q^{r-1}."""
    r = _ring_rank(x)
    cols = []
    for k in range(r):
        y = (x * type(x)(Laurent.mono(k), x.p)).rep.coeffs
        cols.append([y.get(e, 0) for e in range(r)])
    return [[cols[c][row] for c in range(r)] for row in range(r)]


def _frac_solve(A: list, b: list):
    """Exact solution of a square integer system, or None if singular."""
    from fractions import Fraction

    n = len(A)
    M = [[Fraction(v) for v in row] + [Fraction(b[i])] for i, row in enumerate(A)]
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            return None
        M[c], M[piv] = M[piv], M[c]
        inv = 1 / M[c][c]
        M[c] = [v * inv for v in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [a - f * b2 for a, b2 in zip(M[r], M[c])]
    return [M[r][n] for r in range(n)]


def norm(x: _Quot) -> int:
    """det of multiplication by x; up to sign the resultant with the defining polynomial."""
    from fractions import Fraction

    A = [[Fraction(v) for v in row] for row in mult_matrix(x)]
    n, det = len(A), Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det *= A[c][c]
        for r in range(c + 1, n):
            f = A[r][c] / A[c][c]
            A[r] = [a - f * b for a, b in zip(A[r], A[c])]
    return int(det)


def is_unit(x: _Quot) -> bool:
    return abs(norm(x)) == 1


def inverse(x: _Quot) -> _Quot:
    if not is_unit(x):
        raise ZeroDivisionError(f"{x} is not a unit")
    r = _ring_rank(x)
    sol = _frac_solve(mult_matrix(x), [1] + [0] * (r - 1))
    return type(x)(Laurent({e: int(c) for e, c in enumerate(sol)}), x.p)


# matrices ------------------------------------------------------------------------
class CMat:
    """Sparse matrix over CycInt or Cyc2p, stored as {(row, col): entry}."""

    __slots__ = ("shape", "ring", "p", "entries")

    def __init__(self, shape, ring, p: int, entries=None):
        self.shape = tuple(shape)
        self.ring, self.p = ring, p
        self.entries = {}
        for (r, c), v in (entries or {}).items():
            v = v if isinstance(v, ring) else ring(v, p)
            if not v.is_zero():
                self.entries[(r, c)] = v

    @classmethod
    def identity(cls, n: int, ring, p: int) -> "CMat":
        return cls((n, n), ring, p, {(i, i): 1 for i in range(n)})

    @classmethod
    def zero(cls, shape, ring, p: int) -> "CMat":
        return cls(shape, ring, p)

    @classmethod
    def from_rows(cls, rows, ring, p: int) -> "CMat":
        ent = {(r, c): v for r, row in enumerate(rows) for c, v in enumerate(row)}
        return cls((len(rows), len(rows[0]) if rows else 0), ring, p, ent)

    def __getitem__(self, rc):
        return self.entries.get(rc, self.ring(0, self.p))

    def _like(self, entries, shape=None):
        return CMat(shape or self.shape, self.ring, self.p, entries)

    def __add__(self, other: "CMat") -> "CMat":
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out[k] + v if k in out else v
        return self._like(out)

    def __neg__(self):
        return self._like({k: -v for k, v in self.entries.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s) -> "CMat":
        return self._like({k: v * s for k, v in self.entries.items()})

    def __matmul__(self, other: "CMat") -> "CMat":
        if self.shape[1] != other.shape[0]:
            raise ValueError("shape mismatch")
        rows: dict = {}
        for (r, c), v in other.entries.items():
            rows.setdefault(r, []).append((c, v))
        out: dict = {}
        for (r, k), a in self.entries.items():
            for c, b in rows.get(k, ()):
                out[(r, c)] = out[(r, c)] + a * b if (r, c) in out else a * b
        return self._like(out, (self.shape[0], other.shape[1]))

    def __pow__(self, k: int) -> "CMat":
        out = CMat.identity(self.shape[0], self.ring, self.p)
        for _ in range(k):
            out = out @ self
        return out

    def __eq__(self, other):
        if not isinstance(other, CMat):
            return NotImplemented
        return self.shape == other.shape and (self - other).is_zero()

    __hash__ = None

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.entries.values())

    def transpose(self) -> "CMat":
        return self._like({(c, r): v for (r, c), v in self.entries.items()}, self.shape[::-1])

    def bar(self) -> "CMat":
        return self._like({k: v.bar() for k, v in self.entries.items()})

    def to_root(self) -> "CMat":
        if self.ring is not CycInt:
            return self
        return CMat(self.shape, Cyc2p, self.p, {k: Cyc2p(v.rep, self.p) for k, v in self.entries.items()})

    def submatrix(self, rows, cols) -> "CMat":
        rpos = {r: i for i, r in enumerate(rows)}
        cpos = {c: j for j, c in enumerate(cols)}
        return self._like({(rpos[r], cpos[c]): v for (r, c), v in self.entries.items()
                           if r in rpos and c in cpos}, (len(rows), len(cols)))

    def rows(self) -> list:
        return [[self[(r, c)] for c in range(self.shape[1])] for r in range(self.shape[0])]

    def det(self):
        """Laplace expansion; meant for the small square matrices of K_0."""
        n = self.shape[0]
        if n == 0:
            return self.ring(1, self.p)
        if n == 1:
            return self[(0, 0)]
        total = self.ring(0, self.p)
        for c in range(n):
            a = self[(0, c)]
            if a.is_zero():
                continue
            minor = self.submatrix(range(1, n), [k for k in range(n) if k != c])
            term = a * minor.det()
            total = total + term if c % 2 == 0 else total - term
        return total

    def inverse(self) -> "CMat":
        """Adjugate over the determinant, which must be a unit."""
        n = self.shape[0]
        dinv = inverse(self.det())
        out = {}
        for r in range(n):
            for c in range(n):
                minor = self.submatrix([k for k in range(n) if k != c], [k for k in range(n) if k != r])
                v = minor.det() * dinv
                out[(r, c)] = v if (r + c) % 2 == 0 else -v
        return self._like(out)

    def to_json(self) -> list:
        return [[v.to_json() for v in row] for row in self.rows()]

    def __repr__(self):
        return f"CMat({self.shape}, {self.ring.__name__}, p={self.p})"

    def __str__(self):
        return "\n".join("[" + ", ".join(str(v) for v in row) + "]" for row in self.rows())
