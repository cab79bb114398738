"""Dense linear algebra over a table field, batched over a leading axis.

Two paths with identical output: numpy batches (the default) and a plain
per-matrix Python path used to cross-check the vectorised one.
"""
from __future__ import annotations

import numpy as np

from .field import Field


def rref(M: np.ndarray, F: Field) -> tuple[np.ndarray, np.ndarray]:
    """Reduced row echelon forms and ranks of a batch of matrices (B, R, C)."""
    M = np.array(M, dtype=np.int64, copy=True)
    B, R, C = M.shape
    rank = np.zeros(B, dtype=np.int64)
    rows = np.arange(R)
    for col in range(C):
        cand = (M[:, :, col] != 0) & (rows[None, :] >= rank[:, None])
        has = cand.any(axis=1)
        if not has.any():
            continue
        sel = np.nonzero(has)[0]
        piv = cand[sel].argmax(axis=1)
        rk = rank[sel]
        prow = M[sel, piv].copy()
        M[sel, piv] = M[sel, rk]
        prow = F.mul[F.inv[prow[:, col]][:, None], prow]
        M[sel, rk] = prow
        f = M[sel, :, col].copy()
        f[np.arange(len(sel)), rk] = 0
        M[sel] = F.sub[M[sel], F.mul[f[:, :, None], prow[:, None, :]]]
        rank[sel] += 1
    return M, rank


def rank(M: np.ndarray, F: Field) -> np.ndarray:
    return rref(M, F)[1]


def matmul(A: np.ndarray, B: np.ndarray, F: Field) -> np.ndarray:
    """Batched product (.., n, k) @ (.., k, m) in the field."""
    out = np.zeros(A.shape[:-1] + B.shape[-1:], dtype=np.int64)
    for k in range(A.shape[-1]):
        out = F.add[out, F.mul[A[..., :, k, None], B[..., None, k, :]]]
    return out


def commutator_system(A: np.ndarray, F: Field) -> np.ndarray:
    """Matrices of X -> AX - XA on row-major vec(X), batched: (B, n^2, n^2).

    Entry ((i,j),(k,l)) is A_ik [j=l] - [i=k] A_lj.
    """
    A = np.asarray(A, dtype=np.int64)
    B, n, _ = A.shape
    eye = np.eye(n, dtype=np.int64)
    left = A[:, :, None, :, None] * eye[None, None, :, None, :]
    right = eye[None, :, None, :, None] * A.transpose(0, 2, 1)[:, None, :, None, :]
    return F.sub[left, right].reshape(B, n * n, n * n)


def commutant_dim(A: np.ndarray, F: Field) -> np.ndarray:
    """Dimension of {X : AX = XA} for a batch of square matrices."""
    n = A.shape[-1]
    return n * n - rank(commutator_system(A, F), F)


def nullspace(R: np.ndarray, rk: int, F: Field) -> np.ndarray:
    """Basis (k, C) of the kernel of a single matrix given in RREF with rank rk."""
    C = R.shape[1]
    pivots = [int(np.argmax(R[i] != 0)) for i in range(rk)]
    free = [c for c in range(C) if c not in set(pivots)]
    basis = np.zeros((len(free), C), dtype=np.int64)
    for b, f in enumerate(free):
        basis[b, f] = 1
        for i, pc in enumerate(pivots):
            basis[b, pc] = F.neg[R[i, f]]
    return basis


def span(basis: np.ndarray, F: Field, start: int = 0, stop: int | None = None) -> np.ndarray:
    """Elements start..stop-1 of the span, coefficient vectors in base-q order."""
    k, C = basis.shape
    q = F.q
    stop = q**k if stop is None else stop
    idx = np.arange(start, stop, dtype=np.int64)
    acc = np.zeros((len(idx), C), dtype=np.int64)
    for b in range(k):
        coef = (idx // q ** (k - 1 - b)) % q
        acc = F.add[acc, F.mul[coef[:, None], basis[b][None, :]]]
    return acc


# -- reference path ---------------------------------------------------------


def rref_scalar(M, F: Field) -> tuple[list[list[int]], int]:
    """Same contract as ``rref`` for one matrix, element by element."""
    M = [[int(x) for x in row] for row in M]
    R = len(M)
    C = len(M[0]) if R else 0
    r = 0
    for col in range(C):
        piv = next((i for i in range(r, R) if M[i][col]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        s = int(F.inv[M[r][col]])
        M[r] = [int(F.mul[s, x]) for x in M[r]]
        for i in range(R):
            if i != r and M[i][col]:
                f = M[i][col]
                M[i] = [int(F.sub[x, F.mul[f, y]]) for x, y in zip(M[i], M[r])]
        r += 1
    return M, r
