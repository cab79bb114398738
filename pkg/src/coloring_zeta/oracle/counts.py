"""Brute-force counts over M_n(F_q): class numbers, commuting pairs, unipotents.

Every count is a sum over all q^(n^2) matrices, enumerated as a row-major
base-q counter (entry (0,0) most significant).  Ranges of that counter are
independent, so they can be farmed out to worker processes and summed.
"""
from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .field import Field, FieldSpec, field_ops
from .linalg import commutator_system, matmul, nullspace, rank, rref, rref_scalar, span

DEFAULT_BUDGET = 5_000_000
MAX_N = 4
BLOCK = 2048
BUDGET_ENV = "COLORING_ZETA_BUDGET"

KINDS = ("gl-classes", "mn-classes", "unipotent", "commuting", "commuting-glmn", "centralizer", "gl-order")


class BudgetExceeded(RuntimeError):
    """An enumeration would exceed the configured budget."""


class OracleError(ValueError):
    """Bad oracle request (dimension, field, matrix)."""


def resolve_budget(budget: int | None = None) -> int:
    """Explicit budget (or the default), capped by the environment variable if set."""
    b = DEFAULT_BUDGET if budget is None else int(budget)
    env = os.environ.get(BUDGET_ENV)
    if env:
        try:
            b = min(b, int(env))
        except ValueError:
            raise OracleError(f"{BUDGET_ENV} must be an integer, got {env!r}") from None
    if b < 1:
        raise OracleError("budget must be positive")
    return b


def as_field_spec(field) -> FieldSpec:
    if isinstance(field, FieldSpec):
        return field
    return FieldSpec.of_order(int(field))


@dataclass(frozen=True)
class OracleResult:
    kind: str
    n: int
    q: int
    count: int
    elapsed_ms: int

    def to_json(self, timing: bool = True) -> dict:
        out = {"count": str(self.count), "n": self.n, "q": self.q, "kind": self.kind}
        if timing:
            out["elapsed_ms"] = self.elapsed_ms
        return out


def decode(start: int, stop: int, n: int, q: int) -> np.ndarray:
    idx = np.arange(start, stop, dtype=np.int64)
    pos = q ** np.arange(n * n - 1, -1, -1, dtype=np.int64)
    return ((idx[:, None] // pos[None, :]) % q).reshape(-1, n, n)


def encode(A: Sequence[Sequence[int]], q: int) -> int:
    acc = 0
    for x in np.asarray(A).reshape(-1):
        acc = acc * q + int(x)
    return acc


def _check_budget(size: int, budget: int, what: str):
    if size > budget:
        raise BudgetExceeded(f"{what} needs {size} matrices, budget is {budget}")


# -- per-matrix kernels -------------------------------------------------------


class _Kernel:
    """Shared cache of 'units in a commutant' keyed by the commutant itself."""

    def __init__(self, F: Field, n: int, budget: int):
        self.F, self.n, self.budget = F, n, budget
        self.cache: dict[bytes, int] = {}
        self._group = None

    @property
    def group_order(self) -> int:
        if self._group is None:
            q, n = self.F.q, self.n
            g = 1
            for k in range(n):
                g *= q**n - q**k
            self._group = g
        return self._group

    def is_scalar(self, A: np.ndarray) -> np.ndarray:
        n = self.n
        off = ~np.eye(n, dtype=bool)
        d = A[:, np.arange(n), np.arange(n)]
        return (A[:, off] == 0).all(axis=1) & (d == d[:, :1]).all(axis=1)

    def _units_in_span(self, basis: np.ndarray) -> int:
        k = basis.shape[0]
        q, n = self.F.q, self.n
        _check_budget(q**k, self.budget, "commutant enumeration")
        total = 0
        for s in range(0, q**k, BLOCK):
            elems = span(basis, self.F, s, min(q**k, s + BLOCK)).reshape(-1, n, n)
            total += int((self.ranks(elems) == n).sum())
        return total


class BatchKernel(_Kernel):
    def ranks(self, A):
        return rank(A, self.F)

    def nilpotent(self, N):
        P = N
        for _ in range(self.n - 1):
            P = matmul(P, N, self.F)
        return (P == 0).all(axis=(1, 2))

    def dims(self, A):
        return self.n * self.n - rank(commutator_system(A, self.F), self.F)

    def units(self, A) -> list[int]:
        out = [0] * len(A)
        scalar = self.is_scalar(A)
        rest = np.nonzero(~scalar)[0]
        for i in np.nonzero(scalar)[0]:
            out[i] = self.group_order
        if len(rest):
            R, rk = rref(commutator_system(A[rest], self.F), self.F)
            for j, i in enumerate(rest):
                r = int(rk[j])
                key = R[j, :r].astype(np.int8).tobytes()
                hit = self.cache.get(key)
                if hit is None:
                    hit = self._units_in_span(nullspace(R[j], r, self.F))
                    self.cache[key] = hit
                out[i] = hit
        return out


class ScalarKernel(_Kernel):
    """Element-by-element reference; no numpy elimination, no caching."""

    def ranks(self, A):
        return np.array([rref_scalar(a, self.F)[1] for a in A], dtype=np.int64)

    def nilpotent(self, N):
        F, n = self.F, self.n
        out = []
        for a in N:
            a = [[int(x) for x in row] for row in a]
            p = a
            for _ in range(n - 1):
                p = [
                    [
                        _dot([p[i][k] for k in range(n)], [a[k][j] for k in range(n)], F)
                        for j in range(n)
                    ]
                    for i in range(n)
                ]
            out.append(all(x == 0 for row in p for x in row))
        return np.array(out, dtype=bool)

    def dims(self, A):
        L = commutator_system(A, self.F)
        return np.array([self.n * self.n - rref_scalar(m, self.F)[1] for m in L], dtype=np.int64)

    def units(self, A):
        out = []
        L = commutator_system(A, self.F)
        for m in L:
            R, r = rref_scalar(m, self.F)
            out.append(self._units_in_span(nullspace(np.array(R, dtype=np.int64), r, self.F)))
        return out


def _dot(u, v, F: Field) -> int:
    acc = 0
    for x, y in zip(u, v):
        acc = int(F.add[acc, F.mul[x, y]])
    return acc


KERNELS = {"batch": BatchKernel, "scalar": ScalarKernel}


# -- range sums -----------------------------------------------------------------


def _range_sum(kind: str, n: int, spec: FieldSpec, start: int, stop: int, method: str, budget: int):
    """(sum of the kind's summand, number of invertible matrices) over a counter range."""
    F = field_ops(spec)
    q = F.q
    K = KERNELS[method](F, n, budget)
    eye = np.eye(n, dtype=np.int64)
    total = 0
    invertible = 0
    for s in range(start, stop, BLOCK):
        A = decode(s, min(stop, s + BLOCK), n, q)
        inv_mask = K.ranks(A) == n
        invertible += int(inv_mask.sum())
        if kind == "gl-order":
            total += int(inv_mask.sum())
        elif kind == "unipotent":
            total += int(K.nilpotent(F.sub[A, eye[None]]).sum())
        elif kind == "commuting":
            total += _power_sum(K.dims(A), q)
        elif kind == "mn-classes":
            G = A[inv_mask]
            total += _power_sum(K.dims(G), q) if len(G) else 0
        elif kind == "gl-classes":
            G = A[inv_mask]
            total += sum(K.units(G)) if len(G) else 0
        elif kind == "commuting-glmn":
            total += sum(K.units(A))
        else:
            raise OracleError(f"unknown count kind {kind!r}")
    return total, invertible


def _power_sum(dims: np.ndarray, q: int) -> int:
    counts = np.bincount(dims)
    return sum(int(c) * q**d for d, c in enumerate(counts) if c)


def _check_request(n: int, max_n: int):
    if n < 1:
        raise OracleError("n must be >= 1")
    if n > max_n:
        raise OracleError(f"n = {n} exceeds the configured bound {max_n}")


def enumerate_sum(
    kind: str,
    n: int,
    field,
    *,
    budget: int | None = None,
    workers: int = 1,
    method: str = "batch",
    max_n: int = MAX_N,
) -> tuple[int, int]:
    """Sum a kind's summand over all of M_n(F_q); returns (sum, |GL_n(F_q)|)."""
    _check_request(n, max_n)
    if method not in KERNELS:
        raise OracleError(f"unknown method {method!r}")
    spec = as_field_spec(field)
    budget = resolve_budget(budget)
    size = spec.q ** (n * n)
    _check_budget(size, budget, f"enumerating M_{n}(F_{spec.q})")
    if workers <= 1 or size < 4 * BLOCK:
        return _range_sum(kind, n, spec, 0, size, method, budget)
    step = -(-size // (4 * workers))
    ranges = [(s, min(size, s + step)) for s in range(0, size, step)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futs = [pool.submit(_range_sum, kind, n, spec, a, b, method, budget) for a, b in ranges]
        parts = [f.result() for f in futs]
    return sum(p[0] for p in parts), sum(p[1] for p in parts)


def _exact_div(num: int, den: int, what: str) -> int:
    if num % den:
        raise ArithmeticError(f"{what}: {num} is not divisible by {den}")
    return num // den


# -- public counts --------------------------------------------------------------


def gl_order_enum(n: int, field, **kw) -> int:
    return enumerate_sum("gl-order", n, field, **kw)[0]


def count_unipotent(n: int, field, **kw) -> int:
    """#{A : (A - I)^n = 0}; such A are automatically invertible."""
    return enumerate_sum("unipotent", n, field, **kw)[0]


def count_classes_gl(n: int, field, **kw) -> int:
    """Burnside: (1/|G|) sum_{g in G} |C_G(g)|."""
    total, g = enumerate_sum("gl-classes", n, field, **kw)
    return _exact_div(total, g, "GL class count")


def count_classes_mn(n: int, field, **kw) -> int:
    """Burnside for G acting on M_n: (1/|G|) sum_{g in G} q^dim C(g)."""
    total, g = enumerate_sum("mn-classes", n, field, **kw)
    return _exact_div(total, g, "M_n class count")


def gamma(n: int, field, **kw) -> int:
    """Commuting pairs in M_n x M_n: sum_A q^dim C(A)."""
    return enumerate_sum("commuting", n, field, **kw)[0]


def gamma_prime(n: int, field, **kw) -> int:
    """Commuting pairs in GL_n x M_n.

    Counted from the M_n side (units in each commutant), then checked against
    |GL_n| * (number of classes in M_n), which comes from the GL side.
    """
    total, g = enumerate_sum("commuting-glmn", n, field, **kw)
    classes = count_classes_mn(n, field, **kw)
    if total != g * classes:
        raise AssertionError(
            f"Burnside identity failed: gamma' = {total} but |G| * classes = {g} * {classes}"
        )
    return total


def _single(A, field, max_n: int):
    spec = as_field_spec(field)
    A = np.asarray(A, dtype=np.int64)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise OracleError("matrix must be square")
    _check_request(A.shape[0], max_n)
    if ((A < 0) | (A >= spec.q)).any():
        raise OracleError(f"entries must lie in 0..{spec.q - 1}")
    return spec, A


def commutant_dim(A, field, max_n: int = MAX_N) -> int:
    spec, A = _single(A, field, max_n)
    F = field_ops(spec)
    n = A.shape[0]
    return int(n * n - rank(commutator_system(A[None], F), F)[0])


def centralizer_order_gl(A, field, *, budget: int | None = None, max_n: int = MAX_N) -> int:
    """|{h in GL_n : hA = Ah}| by enumerating the commutant algebra of A."""
    spec, A = _single(A, field, max_n)
    F = field_ops(spec)
    n = A.shape[0]
    K = BatchKernel(F, n, resolve_budget(budget))
    if int(K.ranks(A[None])[0]) != n:
        raise OracleError("centralizer_order_gl needs an invertible matrix")
    R, rk = rref(commutator_system(A[None], F), F)
    return K._units_in_span(nullspace(R[0], int(rk[0]), F))


def run(kind: str, n: int, field, *, matrix=None, **kw) -> OracleResult:
    """Dispatch by kind name, timing the call."""
    spec = as_field_spec(field)
    t0 = time.perf_counter()
    if kind == "centralizer":
        if matrix is None:
            raise OracleError("kind 'centralizer' needs a matrix")
        kw.pop("workers", None)
        kw.pop("method", None)
        count = centralizer_order_gl(matrix, spec, **kw)
        n = len(matrix)
    else:
        fn = {
            "gl-classes": count_classes_gl,
            "mn-classes": count_classes_mn,
            "unipotent": count_unipotent,
            "commuting": gamma,
            "commuting-glmn": gamma_prime,
            "gl-order": gl_order_enum,
        }.get(kind)
        if fn is None:
            raise OracleError(f"unknown count kind {kind!r}; choose from {', '.join(KINDS)}")
        count = fn(n, spec, **kw)
    ms = int(round((time.perf_counter() - t0) * 1000))
    return OracleResult(kind, n, spec.q, count, ms)
