"""Zeta functions and Frobenius orbit counts of polynomial-count varieties."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import series as S
from .arith import divisors, mobius
from .context import Context
from .partitions import evaluate
from .series import Laurent, TruncatedSeries


class InconsistencyError(RuntimeError):
    """Two routes that must agree did not."""


@dataclass(frozen=True)
class VarietySpec:
    """X given by its counting polynomial N_X(q) = sum coeffs[j] q^j."""

    coeffs: tuple[int, ...]
    name: str = ""

    def __post_init__(self):
        coeffs = list(self.coeffs)
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coeffs", tuple(int(c) for c in coeffs))
        if not self.name:
            object.__setattr__(self, "name", "poly:" + ",".join(map(str, self.coeffs)))

    @classmethod
    def parse(cls, text: str) -> "VarietySpec":
        key = text.strip().lower()
        if key in BUILTINS:
            return BUILTINS[key]
        if key.startswith("poly:"):
            body = key[5:]
            try:
                coeffs = tuple(int(c) for c in body.split(",") if c.strip())
            except ValueError:
                raise ValueError(f"bad counting polynomial {text!r}") from None
            return cls(coeffs)
        raise ValueError(f"unknown variety {text!r}; use point, ga, gm or poly:c0,c1,...")

    def count_at(self, q):
        return evaluate(self.coeffs, q)

    def poly(self, ctx: Context) -> Laurent:
        """N_X(q) in the context's coefficient ring."""
        return ctx.q_poly(self.coeffs)


POINT = VarietySpec((1,), "point")
GA = VarietySpec((0, 1), "ga")
GM = VarietySpec((-1, 1), "gm")
BUILTINS = {"point": POINT, "ga": GA, "gm": GM}


@dataclass(frozen=True)
class FactoredZeta:
    """Z(X,T) = prod (1 - q^j T)^(-n_j), stored as pairs (j, n_j)."""

    factors: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class OrbitProfile:
    """Number of Frobenius orbits of each size d = 1..d_max."""

    values: tuple  # index d-1
    q: Fraction | None

    def __getitem__(self, d: int):
        return self.values[d - 1]

    @property
    def d_max(self) -> int:
        return len(self.values)


def counts(spec: VarietySpec, ctx: Context, r_max: int) -> list:
    """N_r = N_X(q^r) for r = 1..r_max (ints in numeric mode, exact slices otherwise)."""
    if r_max < 1:
        raise ValueError("r_max must be >= 1")
    out = []
    for r in range(1, r_max + 1):
        if ctx.symbolic:
            out.append(Laurent.q_polynomial({j * r: c for j, c in enumerate(spec.coeffs)}, ctx.nvars))
        else:
            v = Fraction(spec.count_at(ctx.q**r))
            out.append(int(v) if v.denominator == 1 else v)
    return out


def orbit_profile(spec: VarietySpec, ctx: Context, d_max: int) -> OrbitProfile:
    """Möbius inversion of N_r = sum_{d | r} d * orbits_d."""
    if d_max < 1:
        raise ValueError("d_max must be >= 1")
    N = counts(spec, ctx, d_max)
    vals = []
    for d in range(1, d_max + 1):
        acc = 0
        for e in divisors(d):
            mu = mobius(e)
            if mu:
                acc = acc + N[d // e - 1] * mu
        if ctx.symbolic:
            vals.append(acc.scale(Fraction(1, d)))
        else:
            v = Fraction(acc, d)
            if v.denominator != 1:
                raise ValueError(
                    f"non-integral orbit count {v} at d={d}, q={ctx.q}: "
                    f"{spec.name} is not a valid counting polynomial"
                )
            vals.append(int(v))
    return OrbitProfile(tuple(vals), ctx.q)


def _as_slice(x, ctx: Context) -> Laurent:
    return x if isinstance(x, Laurent) else ctx.const(x)


def zeta_series(spec: VarietySpec, ctx: Context) -> TruncatedSeries:
    """Z(X,T) computed as exp(sum N_r T^r / r) and as the Euler product; both must agree."""
    T_cap = ctx.tmax
    one = ctx.series_one()
    if T_cap == 0:
        return one
    N = counts(spec, ctx, T_cap)
    slices = [ctx.zero()] + [_as_slice(N[r - 1], ctx).scale(Fraction(1, r)) for r in range(1, T_cap + 1)]
    via_exp = S.exp(ctx.series(slices))

    prof = orbit_profile(spec, ctx, T_cap)
    via_euler = one
    for d in range(1, T_cap + 1):
        # (1 - T^d)^(-n) = sum_m n(n+1)...(n+m-1)/m! T^(dm)
        n = _as_slice(prof[d], ctx)
        fac = [ctx.zero() for _ in range(T_cap + 1)]
        c = ctx.const(1)
        fac[0] = c
        for m in range(1, T_cap // d + 1):
            c = (c * (n + (m - 1))).scale(Fraction(1, m))
            fac[d * m] = c
        via_euler = S.mul(via_euler, ctx.series(fac))
    diff = via_exp.first_difference(via_euler)
    if diff is not None:
        raise InconsistencyError(f"zeta routes disagree for {spec.name}: {diff}")
    return via_exp


def factored(spec: VarietySpec) -> FactoredZeta:
    return FactoredZeta(tuple((j, c) for j, c in enumerate(spec.coeffs) if c))


def gl_order_poly(n: int) -> tuple[int, ...]:
    """|GL_n(F_q)| = prod_{k<n} (q^n - q^k) as integer coefficients in q."""
    if n < 0:
        raise ValueError("n must be non-negative")
    out = [1]
    for k in range(n):
        f = [0] * (n + 1)
        f[n] += 1
        f[k] -= 1
        new = [0] * (len(out) + n)
        for i, x in enumerate(out):
            if x:
                for j, y in enumerate(f):
                    new[i + j] += x * y
        out = new
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return tuple(out)


def gl_order(n: int, q=None, ctx: Context | None = None):
    """|GL_n(F_q)|: an integer for numeric q, else an exact slice in ``ctx``."""
    if q is not None:
        acc = 1
        for k in range(n):
            acc *= q**n - q**k
        return acc
    ctx = ctx or Context()
    return ctx.q_poly(gl_order_poly(n))
