"""Dense linear algebra over F_p on int64 numpy arrays."""

from __future__ import annotations

import numpy as np

_EXACT = float(2 ** 52)


def mod(a, p: int) -> np.ndarray:
    return np.mod(np.asarray(a, dtype=np.int64), p)


def zeros(r: int, c: int) -> np.ndarray:
    return np.zeros((r, c), dtype=np.int64)


def eye(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Product mod p; goes through float64 BLAS when that is exact."""
    if a.shape[1] == 0 or a.shape[0] == 0 or b.shape[1] == 0:
        return zeros(a.shape[0], b.shape[1])
    if a.shape[1] * (p - 1) ** 2 < _EXACT:
        out = a.astype(np.float64) @ b.astype(np.float64)
        return np.mod(out, p).astype(np.int64)
    return np.mod(a @ b, p)


def rref(a: np.ndarray, p: int):
    """Reduced row echelon form; returns (matrix, pivot columns)."""
    m = mod(a, p).copy()
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            m[[r, k]] = m[[k, r]]
        inv = pow(int(m[r, c]), -1, p)
        m[r] = (m[r] * inv) % p
        others = np.nonzero(m[:, c])[0]
        others = others[others != r]
        if others.size:
            m[others] = (m[others] - np.outer(m[others, c], m[r])) % p
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a: np.ndarray, p: int) -> int:
    if a.size == 0:
        return 0
    # eliminate along the shorter side
    if a.shape[0] > a.shape[1]:
        a = a.T
    return len(rref(a, p)[1])


def nullspace(a: np.ndarray, p: int) -> np.ndarray:
    """Columns spanning {x : a x = 0}."""
    rows, cols = a.shape
    if rows == 0:
        return eye(cols)
    r, piv = rref(a, p)
    free = [c for c in range(cols) if c not in set(piv)]
    out = zeros(cols, len(free))
    for j, f in enumerate(free):
        out[f, j] = 1
        for i, pc in enumerate(piv):
            out[pc, j] = (-r[i, f]) % p
    return out


def colspace(a: np.ndarray, p: int) -> np.ndarray:
    """A basis (as columns) of the column space of a."""
    if a.size == 0:
        return zeros(a.shape[0], 0)
    _, piv = rref(a, p)
    return mod(a[:, piv], p)


def solve(a: np.ndarray, b: np.ndarray, p: int):
    """Some x with a x = b (b may be a matrix), or None if inconsistent."""
    b2 = b.reshape(b.shape[0], -1)
    rows, cols = a.shape
    aug = np.concatenate([mod(a, p), mod(b2, p)], axis=1)
    r, piv = rref(aug, p)
    if any(c >= cols for c in piv):
        return None
    x = zeros(cols, b2.shape[1])
    for i, c in enumerate(piv):
        x[c] = r[i, cols:]
    return x.reshape((cols,) + b.shape[1:])


def inverse(a: np.ndarray, p: int) -> np.ndarray:
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    aug = np.concatenate([mod(a, p), eye(n)], axis=1)
    r, piv = rref(aug, p)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise ZeroDivisionError("singular matrix over F_p")
    return r[:, n:].copy()


def in_span(basis: np.ndarray, v: np.ndarray, p: int) -> bool:
    if basis.shape[1] == 0:
        return not np.any(mod(v, p))
    return rank(np.concatenate([basis, v.reshape(len(v), -1)], axis=1), p) == rank(basis, p)


def complement_basis(sub: np.ndarray, n: int, p: int) -> list[int]:
    """Standard basis indices completing the columns of ``sub`` to a basis."""
    aug = np.concatenate([mod(sub, p), eye(n)], axis=1)
    _, piv = rref(aug, p)
    k = sub.shape[1]
    return [c - k for c in piv if c >= k]
