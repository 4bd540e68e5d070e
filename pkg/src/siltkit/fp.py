"""
Dense linear algebra over a prime field F_p.

Matrices are numpy int64 arrays whose entries are residues in [0, p).
Everything is exact: entries stay below p**2 between reductions, so no
intermediate ever overflows for the sizes used here (a few hundred
columns at most).
"""

from __future__ import annotations

import numpy as np

from .errors import Inconsistent

DEFAULT_PRIME = 10007

FpMatrix = np.ndarray


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def as_fp(M, p: int) -> FpMatrix:
    """Copy ``M`` into a fresh int64 array reduced modulo ``p``."""
    return np.array(M, dtype=np.int64) % p


def matmul(A, B, p: int) -> FpMatrix:
    return (np.asarray(A, dtype=np.int64) @ np.asarray(B, dtype=np.int64)) % p


def rref(M, p: int):
    """Reduced row echelon form.

    Args:
        M: matrix over F_p (any integer array, reduced on entry).
        p: prime modulus.

    Returns:
        (R, pivots): R in reduced row echelon form and the list of pivot
        column indices, in increasing order.
    """
    A = as_fp(M, p)
    if A.ndim != 2:
        raise ValueError("rref expects a 2-d array")
    rows, cols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            A[[r, k]] = A[[k, r]]
        inv = pow(int(A[r, c]), p - 2, p)
        A[r] = (A[r] * inv) % p
        col = A[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            A[hit] = (A[hit] - np.outer(col[hit], A[r])) % p
        pivots.append(c)
        r += 1
    return A, pivots


def rank(M, p: int) -> int:
    M = np.asarray(M)
    if M.size == 0:
        return 0
    # eliminate along the shorter side
    if M.shape[0] > M.shape[1]:
        M = M.T
    return len(rref(M, p)[1])


def nullspace(M, p: int) -> FpMatrix:
    """Basis of the kernel of ``M``, one basis vector per column."""
    M = np.asarray(M)
    cols = M.shape[1]
    if M.shape[0] == 0:
        return np.eye(cols, dtype=np.int64)
    R, pivots = rref(M, p)
    free = [c for c in range(cols) if c not in set(pivots)]
    B = np.zeros((cols, len(free)), dtype=np.int64)
    for j, f in enumerate(free):
        B[f, j] = 1
        for i, pc in enumerate(pivots):
            B[pc, j] = (-R[i, f]) % p
    return B


def solve(M, b, p: int) -> FpMatrix:
    """Return some ``x`` with ``M x = b``.

    ``b`` may be a vector or a matrix of right-hand sides (one per
    column).  Raises Inconsistent when some right-hand side lies outside
    the column space.
    """
    M = np.asarray(M, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    vec = b.ndim == 1
    B = b.reshape(-1, 1) if vec else b
    rows, cols = M.shape
    if B.shape[0] != rows:
        raise ValueError("dimension mismatch in solve")
    if rows == 0:
        X = np.zeros((cols, B.shape[1]), dtype=np.int64)
        return X[:, 0] if vec else X
    R, pivots = rref(np.hstack([M, B]), p)
    if pivots and pivots[-1] >= cols:
        raise Inconsistent("right-hand side outside the column space")
    X = np.zeros((cols, B.shape[1]), dtype=np.int64)
    for i, pc in enumerate(pivots):
        X[pc] = R[i, cols:]
    return X[:, 0] if vec else X


def inverse(M, p: int) -> FpMatrix:
    M = np.asarray(M, dtype=np.int64)
    n = M.shape[0]
    if M.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    R, pivots = rref(np.hstack([M, np.eye(n, dtype=np.int64)]), p)
    if sum(1 for c in pivots if c < n) < n:
        raise Inconsistent("matrix is singular")
    return R[:, n:]


def independent_columns(M, p: int, start: int = 0) -> list[int]:
    """Indices ``j >= start`` of columns independent modulo the earlier ones.

    Columns ``0..start-1`` form the relation block; the returned columns
    give a basis of span(M) modulo span(M[:, :start]).
    """
    M = np.asarray(M)
    if M.shape[1] == 0 or M.shape[0] == 0:
        return []
    _, pivots = rref(M, p)
    return [c for c in pivots if c >= start]


def column_basis(M, p: int) -> FpMatrix:
    M = np.asarray(M, dtype=np.int64)
    if M.size == 0:
        return np.zeros((M.shape[0], 0), dtype=np.int64)
    return M[:, independent_columns(M, p)] % p
