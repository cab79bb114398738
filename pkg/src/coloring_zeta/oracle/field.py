"""Small finite fields as lookup tables.

Element i of F_{p^e} is the polynomial sum c_k x^k over F_p with i = sum c_k p^k,
so 0 and 1 are the field's zero and one.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

from ..arith import is_prime, prime_power

MAX_Q = 9

# Monic irreducible moduli, low degree first, leading 1 included.
DEFAULT_MODULI = {
    4: (1, 1, 1),  # x^2 + x + 1
    8: (1, 1, 0, 1),  # x^3 + x + 1
    9: (1, 0, 1),  # x^2 + 1
}


class FieldError(ValueError):
    pass


def _polymod(a: list[int], f: tuple[int, ...], p: int) -> list[int]:
    a = [c % p for c in a]
    e = len(f) - 1
    lead_inv = pow(f[-1], -1, p)
    for top in range(len(a) - 1, e - 1, -1):
        c = a[top] * lead_inv % p
        if c:
            for k in range(e + 1):
                a[top - e + k] = (a[top - e + k] - c * f[k]) % p
    a = a[:e] + [0] * max(0, e - len(a))
    return a


def is_irreducible(f: tuple[int, ...], p: int) -> bool:
    """Exhaustive check: no monic factor of degree 1..deg/2 divides f."""
    e = len(f) - 1
    if e < 1 or f[-1] % p == 0:
        return False
    for d in range(1, e // 2 + 1):
        for low in product(range(p), repeat=d):
            g = tuple(low) + (1,)
            if not any(_polymod(list(f), g, p)):
                return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    p: int
    e: int = 1
    modulus: tuple[int, ...] | None = None

    def __post_init__(self):
        if not is_prime(self.p):
            raise FieldError(f"characteristic {self.p} is not prime")
        if self.e < 1:
            raise FieldError("extension degree must be >= 1")
        if self.e > 1:
            mod = self.modulus or DEFAULT_MODULI.get(self.p**self.e)
            if mod is None:
                raise FieldError(f"no default modulus for q = {self.p ** self.e}; supply one")
            mod = tuple(int(c) % self.p for c in mod)
            if len(mod) != self.e + 1 or mod[-1] != 1:
                raise FieldError(f"modulus must be monic of degree {self.e}")
            if not is_irreducible(mod, self.p):
                raise FieldError(f"modulus {mod} is reducible over F_{self.p}")
            object.__setattr__(self, "modulus", mod)
        elif self.modulus is not None:
            raise FieldError("prime fields take no modulus")

    @property
    def q(self) -> int:
        return self.p**self.e

    @classmethod
    def of_order(cls, q: int, modulus=None, max_q: int = MAX_Q) -> "FieldSpec":
        pe = prime_power(q)
        if pe is None:
            raise FieldError(f"q = {q} is not a prime power")
        if q > max_q:
            raise FieldError(f"q = {q} exceeds the configured bound {max_q}")
        return cls(pe[0], pe[1], tuple(modulus) if modulus else None)


class Field:
    """add/sub/mul tables (q x q), plus neg and inv vectors; inv[0] is -1."""

    def __init__(self, spec: FieldSpec):
        self.spec = spec
        q, p, e = spec.q, spec.p, spec.e
        self.q = q
        digits = [[(i // p**k) % p for k in range(e)] for i in range(q)]

        def encode(c):
            return sum(int(x) * p**k for k, x in enumerate(c))

        add = np.zeros((q, q), dtype=np.int64)
        mul = np.zeros((q, q), dtype=np.int64)
        for i in range(q):
            for j in range(q):
                add[i, j] = encode([(a + b) % p for a, b in zip(digits[i], digits[j])])
                if e == 1:
                    mul[i, j] = i * j % p
                else:
                    prod = [0] * (2 * e - 1)
                    for a, x in enumerate(digits[i]):
                        for b, y in enumerate(digits[j]):
                            prod[a + b] += x * y
                    mul[i, j] = encode(_polymod(prod, spec.modulus, p))
        neg = np.array([int(np.where(add[i] == 0)[0][0]) for i in range(q)], dtype=np.int64)
        inv = np.full(q, -1, dtype=np.int64)
        for i in range(1, q):
            inv[i] = int(np.where(mul[i] == 1)[0][0])
        self.add, self.mul, self.neg, self.inv = add, mul, neg, inv
        self.sub = add[:, neg]
        for t in (self.add, self.mul, self.neg, self.inv, self.sub):
            t.setflags(write=False)


@lru_cache(maxsize=None)
def field_ops(spec: FieldSpec) -> Field:
    return Field(spec)


def gf(q: int, modulus=None) -> Field:
    return field_ops(FieldSpec.of_order(q, modulus))
