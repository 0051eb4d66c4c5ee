"""Exact dense linear algebra over GF(p) and Q.

GF(p) matrices are int64 numpy arrays with entries in [0, p); rational
matrices are object arrays of Fraction.  Everything is plain Gaussian
elimination -- no floating point anywhere.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np


def zeros(m: int, n: int, field) -> np.ndarray:
    if field.char == 0:
        return np.full((m, n), Fraction(0), dtype=object)
    return np.zeros((m, n), dtype=np.int64)


def identity(n: int, field) -> np.ndarray:
    A = zeros(n, n, field)
    for i in range(n):
        A[i, i] = field.one
    return A


def rref(A: np.ndarray, field) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form.  Returns (R, pivot column indices)."""
    A = A.copy()
    m, n = A.shape
    pivots: list[int] = []
    if m == 0 or n == 0:
        return A, pivots
    if field.char == 0:
        return _rref_qq(A)
    p = field.char
    r = 0
    for c in range(n):
        col = A[r:, c]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i], :] = A[[i, r], :]
        inv = pow(int(A[r, c]), p - 2, p)
        A[r, :] = (A[r, :] * inv) % p
        other = np.nonzero(A[:, c])[0]
        other = other[other != r]
        if other.size:
            A[other, :] = (A[other, :] - np.outer(A[other, c], A[r, :])) % p
        pivots.append(c)
        r += 1
        if r == m:
            break
    return A, pivots


def _rref_qq(A: np.ndarray) -> tuple[np.ndarray, list[int]]:
    m, n = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(n):
        piv = None
        for i in range(r, m):
            if A[i, c] != 0:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            A[[r, piv], :] = A[[piv, r], :]
        A[r, :] = A[r, :] / A[r, c]
        for i in range(m):
            if i != r and A[i, c] != 0:
                A[i, :] = A[i, :] - A[i, c] * A[r, :]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return A, pivots


def rank(A: np.ndarray, field) -> int:
    return len(rref(A, field)[1])


def nullspace(A: np.ndarray, field) -> tuple[int, np.ndarray]:
    """Rank and a basis of the right kernel (columns of the result)."""
    m, n = A.shape
    R, pivots = rref(A, field)
    rk = len(pivots)
    free = [c for c in range(n) if c not in set(pivots)]
    K = zeros(n, len(free), field)
    for k, c in enumerate(free):
        K[c, k] = field.one
        for i, pc in enumerate(pivots):
            v = R[i, c]
            if v != 0:
                K[pc, k] = field.neg(v)
    return rk, K


def solve(A: np.ndarray, B: np.ndarray, field):
    """Solve A X = B columnwise.  Returns X or None if inconsistent."""
    m, n = A.shape
    if B.ndim == 1:
        B = B.reshape(-1, 1)
    k = B.shape[1]
    aug = zeros(m, n + k, field)
    if m:
        aug[:, :n] = A
        aug[:, n:] = B
    R, pivots = rref(aug, field)
    for i, pc in enumerate(pivots):
        if pc >= n:
            return None
    X = zeros(n, k, field)
    for i, pc in enumerate(pivots):
        X[pc, :] = R[i, n:]
    return X


def column_space_pivots(A: np.ndarray, field) -> list[int]:
    """Indices of a maximal independent subset of the columns of A."""
    return rref(A, field)[1]


def extend_to_basis(I: np.ndarray, K: np.ndarray, field) -> list[int]:
    """Columns of K that extend span(I) to span(I) + span(K).

    Both matrices must have the same number of rows; returns indices into K.
    """
    if K.shape[1] == 0:
        return []
    if I.shape[1] == 0:
        return column_space_pivots(K, field)
    A = np.concatenate([I, K], axis=1)
    piv = column_space_pivots(A, field)
    nI = I.shape[1]
    return [c - nI for c in piv if c >= nI]
