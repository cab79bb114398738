"""Integer partitions and the centralizer statistics n(lambda), b_lambda, a_lambda.

Polynomials in q are returned as coefficient tuples, lowest degree first.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property, lru_cache


@dataclass(frozen=True, order=True)
class Partition:
    parts: tuple[int, ...] = ()

    def __post_init__(self):
        parts = tuple(self.parts)
        if any(p < 1 for p in parts):
            raise ValueError(f"parts must be positive: {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError(f"parts must be non-increasing: {parts}")
        object.__setattr__(self, "parts", parts)

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)

    def __repr__(self):
        return f"Partition({list(self.parts)})"

    @property
    def size(self) -> int:
        return sum(self.parts)

    @cached_property
    def n(self) -> int:
        """n(lambda) = sum (i-1) lambda_i."""
        return sum(i * p for i, p in enumerate(self.parts))

    @cached_property
    def multiplicities(self) -> dict[int, int]:
        """m_i(lambda) for the parts i that occur."""
        return dict(sorted(Counter(self.parts).items()))

    def m(self, i: int) -> int:
        return self.multiplicities.get(i, 0)

    @property
    def pairing(self) -> int:
        """<lambda, lambda> = |lambda| + 2 n(lambda)."""
        return self.size + 2 * self.n

    def to_json(self) -> list[int]:
        return list(self.parts)


@dataclass(frozen=True)
class PartitionStats:
    n: int
    multiplicities: dict = field(hash=False)
    pairing: int


def stats(lam: Partition) -> PartitionStats:
    return PartitionStats(lam.n, dict(lam.multiplicities), lam.pairing)


@lru_cache(maxsize=None)
def partitions_of(n: int) -> tuple[Partition, ...]:
    """All partitions of n in reverse-lexicographic order."""
    if n < 0:
        raise ValueError("n must be non-negative")
    out: list[Partition] = []

    def rec(rem, largest, prefix):
        if rem == 0:
            out.append(Partition(tuple(prefix)))
            return
        for p in range(min(rem, largest), 0, -1):
            prefix.append(p)
            rec(rem - p, p, prefix)
            prefix.pop()

    rec(n, n, [])
    return tuple(out)


def _pmul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


@lru_cache(maxsize=None)
def phi(m: int) -> tuple[int, ...]:
    """phi_m(q) = (1-q)(1-q^2)...(1-q^m)."""
    if m < 0:
        raise ValueError("m must be non-negative")
    out = [1]
    for k in range(1, m + 1):
        out = _pmul(out, [1] + [0] * (k - 1) + [-1])
    return tuple(out)


def b_lambda(lam: Partition) -> tuple[int, ...]:
    out = [1]
    for mult in lam.multiplicities.values():
        out = _pmul(out, phi(mult))
    return tuple(out)


@lru_cache(maxsize=None)
def a_lambda(lam: Partition) -> tuple[int, ...]:
    """a_lambda(q) = q^(|lambda| + 2 n(lambda)) b_lambda(1/q), as a polynomial."""
    b = b_lambda(lam)
    shift = lam.pairing
    out = [0] * (shift + 1)
    for k, c in enumerate(b):
        e = shift - k
        assert e >= 0, "a_lambda picked up a negative power of q"
        out[e] += c
    return tuple(out)


def evaluate(poly, q):
    """Value at q of a coefficient sequence (Horner) or an ``{exponent: coeff}`` map."""
    if isinstance(poly, dict):
        return sum(c * q**e for e, c in poly.items())
    acc = 0
    for c in reversed(poly):
        acc = acc * q + c
    return acc


def a_lambda_at(lam: Partition, q) -> int:
    return evaluate(a_lambda(lam), q)
