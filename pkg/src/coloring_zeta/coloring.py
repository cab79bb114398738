"""Coloring zeta functions Z_C(X, t, T) and the four ways of computing them.

A coloring setup is data: an enumerator of colors by degree and a weight
W(color) in the coefficient ring.  Weights are applied at orbit size d by
raising every variable (q included) to the d-th power; in numeric mode that
means evaluating the weight at q^d.

Every product formula below is evaluated exactly.  In symbolic mode the
products over (d, m) are finite because only exponents inside the precision
window are known; the window of the result is obtained by running the same
identity through exp/Log, where window propagation is automatic, and the two
evaluations are required to agree on it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterator, Sequence

from . import series as S
from .arith import divisors, falling, mobius
from .context import Context
from .partitions import Partition, a_lambda, partitions_of
from .series import (
    INF,
    Laurent,
    PrecisionError,
    PrecisionWindow,
    TruncatedSeries,
    VariableSpec,
)
from .variety import InconsistencyError, VarietySpec, factored, orbit_profile, zeta_series


class NonIntegralError(ValueError):
    """Plethystic exponents that must be integers were not."""


class SymbolicOnlyError(ValueError):
    """The requested check only makes sense with q kept symbolic."""


class EnumerationLimitError(RuntimeError):
    """Exhaustive enumeration would exceed the configured guard."""


# ---------------------------------------------------------------------------
# setups


@dataclass(frozen=True, eq=False)
class ColoringSetup:
    """The coloring data C = (colors, degree, weight).

    ``colors(k)`` lists the colors of degree k >= 1; ``weight(color, ctx)``
    returns W(color) as a slice in ``ctx``.  ``tvars`` names the extra graded
    Laurent variables the weights use.
    """

    name: str
    colors: Callable[[int], Sequence]
    weight: Callable[[object, Context], Laurent]
    zero_color: object
    degree: Callable[[object], int]
    homogeneous: bool = False
    tvars: tuple[str, ...] = ()

    def colors_of_degree(self, k: int) -> list:
        if k == 0:
            return [self.zero_color]
        return list(self.colors(k))

    def check(self, ctx: Context):
        missing = [v for v in self.tvars if v not in ctx.tvars]
        if missing:
            raise ValueError(f"setup {self.name!r} needs Laurent variables {missing}")


def _unit_weight(color, ctx: Context) -> Laurent:
    return ctx.const(1)


def _centralizer_weight(lam: Partition, ctx: Context) -> Laurent:
    return ctx.q_rational([1], a_lambda(lam))


def _commuting_weight(lam: Partition, ctx: Context) -> Laurent:
    return ctx.q_rational({lam.pairing: 1}, a_lambda(lam))


STANDARD = ColoringSetup(
    "standard", lambda k: [k], _unit_weight, 0, lambda n: n
)
PARTITION = ColoringSetup(
    "partition", partitions_of, _unit_weight, Partition(), lambda lam: lam.size
)
CENTRALIZER = ColoringSetup(
    "centralizer", partitions_of, _centralizer_weight, Partition(), lambda lam: lam.size
)
COMMUTING = ColoringSetup(
    "commuting", partitions_of, _commuting_weight, Partition(), lambda lam: lam.size
)
SETUPS = {s.name: s for s in (STANDARD, PARTITION, CENTRALIZER, COMMUTING)}


def get_setup(name: str) -> ColoringSetup:
    try:
        return SETUPS[name]
    except KeyError:
        raise ValueError(f"unknown setup {name!r}; choose from {sorted(SETUPS)}") from None


def graded(setup: ColoringSetup, var: str = "t") -> ColoringSetup:
    """Same colors, weights multiplied by t^|color| (homogeneous of degree |color|)."""

    def weight(color, ctx: Context) -> Laurent:
        key = [0] * ctx.nvars
        key[ctx.tindex(var)] = setup.degree(color)
        return setup.weight(color, ctx) * Laurent.monomial(key)

    return ColoringSetup(
        f"{setup.name}[{var}]",
        setup.colors,
        weight,
        setup.zero_color,
        setup.degree,
        homogeneous=True,
        tvars=setup.tvars + (var,),
    )


@lru_cache(maxsize=None)
def color_weight(setup: ColoringSetup, color, d: int, ctx: Context) -> Laurent:
    """W(color) with every variable raised to the d-th power."""
    return setup.weight(color, ctx.at_power(d)).adams(d)


@dataclass(frozen=True)
class ColoringType:
    """Multiplicities m_{d,color} of a coloring, as (d, color, m) triples."""

    entries: tuple
    degree_of: Callable = field(default=None, compare=False, repr=False)

    @property
    def degree(self) -> int:
        return sum(m * d * self.degree_of(c) for d, c, m in self.entries)


# ---------------------------------------------------------------------------
# point zeta and first form


@lru_cache(maxsize=None)
def point_zeta(setup: ColoringSetup, ctx: Context, power: int = 1) -> TruncatedSeries:
    """Z_C(point, t^power, T^power) = sum W(color)(t^power) T^(power*|color|)."""
    setup.check(ctx)
    slices = [ctx.zero() for _ in range(ctx.tmax + 1)]
    slices[0] = ctx.const(1)
    for k in range(1, ctx.tmax // power + 1):
        acc = ctx.zero()
        for color in setup.colors_of_degree(k):
            acc = acc + color_weight(setup, color, power, ctx)
        slices[k * power] = acc
    return ctx.series(slices)


def first_form(setup: ColoringSetup, variety: VarietySpec, ctx: Context) -> TruncatedSeries:
    """prod_d Z_C(point, t^d, T^d)^(orbits of size d)."""
    prof = orbit_profile(variety, ctx, max(ctx.tmax, 1))
    result = ctx.series_one()
    for d in range(1, ctx.tmax + 1):
        n = prof[d]
        factor = point_zeta(setup, ctx, d)
        if ctx.symbolic:
            if n.is_zero():
                continue
            result = S.mul(result, S.power(factor, n))
        else:
            if n == 0:
                continue
            result = S.mul(result, S.pow_int(factor, n))
    return result


# ---------------------------------------------------------------------------
# plethystic logarithm


@dataclass(frozen=True)
class PlethFactorization:
    """Exponents v_{d,m} of prod (1 - x^m T^d)^(-v_{d,m}); slice d holds sum_m v_{d,m} x^m."""

    variables: VariableSpec
    slices: tuple
    q_value: Fraction | None = None

    @property
    def T_cap(self) -> int:
        return len(self.slices) - 1

    @property
    def integral(self) -> bool:
        return all(v.denominator == 1 for s in self.slices for v in s.terms.values())

    @property
    def exact(self) -> bool:
        return all(s.is_exact() for s in self.slices)

    def items(self) -> Iterator[tuple[int, tuple, Fraction]]:
        for d, s in enumerate(self.slices):
            for k in sorted(s.terms):
                yield d, k, s.terms[k]

    def __getitem__(self, key) -> Fraction:
        d, exps = key
        s = self.slices[d]
        if any(e > c for e, c in zip(exps, s.cap)):
            raise PrecisionError(f"v_{d},{exps} lies outside the known window")
        return s.terms.get(tuple(exps), Fraction(0))

    def as_series(self) -> TruncatedSeries:
        return TruncatedSeries(self.variables, self.slices, self.q_value)

    def to_json(self) -> dict:
        return {
            "variables": list(self.variables.laurent),
            "integral": self.integral,
            "window": self.as_series().window.to_json(),
            "exponents": [
                {"d": str(d), "exps": [str(e) for e in k], "v": str(v)} for d, k, v in self.items()
            ],
        }


def pleth_log(z: TruncatedSeries) -> PlethFactorization:
    """Getzler's Log, computed by Möbius inversion and by recursion; both must agree.

    Adams operations act on the Laurent variables of ``z`` (if q has been
    specialised, it is a constant here).
    """
    L = S.log(z)
    cap = z.T_cap
    via_mobius = None
    for k in range(1, cap + 1):
        mu = mobius(k)
        if not mu:
            continue
        term = S.scale_degrees(L, k) * Fraction(mu, k)
        via_mobius = term if via_mobius is None else S.add(via_mobius, term)
    nv = z.nvars
    v: list[Laurent] = [Laurent.zero(nv)]
    for D in range(1, cap + 1):
        acc = L.slices[D]
        for k in divisors(D):
            if k >= 2:
                acc = acc - v[D // k].adams(k).scale(Fraction(1, k))
        v.append(acc)
    via_rec = TruncatedSeries(z.variables, v, z.q_value)
    if via_mobius is not None:
        diff = via_mobius.first_difference(via_rec)
        if diff is not None:
            raise InconsistencyError(f"Log routes disagree at {diff}")
    return PlethFactorization(z.variables, tuple(v), z.q_value)


def pleth_exp(log_series: TruncatedSeries) -> TruncatedSeries:
    """exp(sum_s psi_s(L)/s): the product prod (1 - x^m T^d)^(-v) with windows."""
    acc = None
    for s in range(1, log_series.T_cap + 1):
        term = S.scale_degrees(log_series, s) * Fraction(1, s)
        acc = term if acc is None else S.add(acc, term)
    if acc is None:
        return TruncatedSeries.one(log_series.variables, log_series.T_cap, log_series.q_value)
    return S.exp(acc)


def _binomial_factor(variables, T_cap, q_value, d, exps, c, v) -> TruncatedSeries:
    """(1 - c x^exps T^d)^(-v)."""
    nv = variables.nvars
    base = [Laurent.zero(nv) for _ in range(T_cap + 1)]
    base[0] = Laurent.const(1, nv)
    if d <= T_cap:
        base[d] = Laurent.monomial(exps, -Fraction(c))
    b = TruncatedSeries(variables, base, q_value)
    v = Fraction(v)
    if v.denominator == 1:
        return S.pow_int(b, -int(v))
    return S.power(b, Laurent.const(-v, nv))


def pleth_product(f: PlethFactorization) -> TruncatedSeries:
    """prod (1 - x^m T^d)^(-v_{d,m}) truncated, on the window implied by f."""
    literal = TruncatedSeries.one(f.variables, f.T_cap, f.q_value)
    for d, k, v in f.items():
        literal = S.mul(literal, _binomial_factor(f.variables, f.T_cap, f.q_value, d, k, 1, v))
    return _adopt_window(literal, pleth_exp(f.as_series()), "pleth_product")


def _adopt_window(literal: TruncatedSeries, reference: TruncatedSeries, what: str):
    diff = literal.first_difference(reference)
    if diff is not None:
        raise InconsistencyError(f"{what}: literal product disagrees with exp route at {diff}")
    if all(s.is_exact() for s in reference.slices):
        return literal
    return S.restrict(literal, reference.window)


def point_pleth(setup: ColoringSetup, ctx: Context) -> PlethFactorization:
    """Log of the point zeta with q symbolic (even when ``ctx`` is numeric)."""
    sym = ctx.with_(q=None)
    return pleth_log(point_zeta(setup, sym))


def _require_integral(f: PlethFactorization, setup: ColoringSetup):
    if not f.integral:
        bad = next((d, k, v) for d, k, v in f.items() if v.denominator != 1)
        raise NonIntegralError(f"setup {setup.name!r} has non-integral exponent v{bad[:2]} = {bad[2]}")


@lru_cache(maxsize=None)
def point_log(setup: ColoringSetup, ctx: Context) -> TruncatedSeries:
    """Log Z_C(point) with Adams operations acting on q as well.

    Numeric mode uses psi_k(f)(q) = f(q^k): the point zeta is re-evaluated at q^k.
    """
    if ctx.symbolic:
        return point_pleth(setup, ctx).as_series()
    acc = None
    for k in range(1, ctx.tmax + 1):
        mu = mobius(k)
        if not mu:
            continue
        lk = S.log(point_zeta(setup, ctx.at_power(k)))
        term = S.scale_degrees(lk, k) * Fraction(mu, k)
        term = TruncatedSeries(term.variables, term.slices, ctx.q)
        acc = term if acc is None else S.add(acc, term)
    if acc is None:
        return ctx.series([ctx.zero() for _ in range(ctx.tmax + 1)])
    return acc


def _psi(series_at: Callable[[int], TruncatedSeries], s: int, ctx: Context) -> TruncatedSeries:
    """psi_s of a q-dependent series (already evaluated at q^s when numeric)."""
    x = S.scale_degrees(series_at(s), s)
    return TruncatedSeries(x.variables, x.slices, ctx.q)


def _grouped_log(ctx: Context, setup: ColoringSetup, base: Callable[[Context], Laurent]) -> TruncatedSeries:
    """sum_s psi_s(base) / s * psi_s(Log Z_C(point)).

    ``base(ctx)`` is a coefficient such as N_X(q); psi_s raises its variables to
    the s-th power (numerically: evaluate at q^s).
    """
    if ctx.symbolic:
        log_pt = point_log(setup, ctx)
        at = lambda s: log_pt  # noqa: E731
    else:
        at = lambda s: point_log(setup, ctx.at_power(s))  # noqa: E731
    acc = ctx.series([ctx.zero() for _ in range(ctx.tmax + 1)])
    for s in range(1, ctx.tmax + 1):
        c = base(ctx.at_power(s)).adams(s).scale(Fraction(1, s))
        acc = S.add(acc, _psi(at, s, ctx) * c)
    return acc


# ---------------------------------------------------------------------------
# second and third forms


def second_form(setup: ColoringSetup, variety: VarietySpec, ctx: Context) -> TruncatedSeries:
    """prod_{d,m} Z(X, x^m T^d)^(v_{d,m})."""
    f = point_pleth(setup, ctx)
    _require_integral(f, setup)
    grouped = S.exp(_grouped_log(ctx, setup, variety.poly))
    if not ctx.symbolic and not f.exact:
        # infinitely many q-exponents per T-degree: only the grouped evaluation is finite
        return grouped
    Z = zeta_series(variety, ctx)
    literal = ctx.series_one()
    for d, k, v in f.items():
        if ctx.symbolic:
            factor = S.subst_T_monomial(Z, (d, k))
        else:
            factor = S.subst_T_monomial(Z, (d, k[1:]), coeff=ctx.q ** k[0])
        literal = S.mul(literal, S.pow_int(factor, int(v)))
    return _adopt_window(literal, grouped, "second form")


def third_form(setup: ColoringSetup, variety: VarietySpec, ctx: Context) -> TruncatedSeries:
    """prod_j Z_C(u = q^j, t, T)^(n_j) from the factored zeta of X."""
    f = point_pleth(setup, ctx)
    _require_integral(f, setup)
    result = ctx.series_one()
    for j, nj in factored(variety).factors:
        grouped = S.exp(_grouped_log(ctx, setup, lambda c: c.q_monomial(j)))
        if not ctx.symbolic and not f.exact:
            zu = grouped
        else:
            zu = ctx.series_one()
            for d, k, v in f.items():
                if ctx.symbolic:
                    key = (k[0] + j,) + k[1:]
                    zu = S.mul(zu, _binomial_factor(ctx.variables, ctx.tmax, None, d, key, 1, v))
                else:
                    c = ctx.q ** (k[0] + j)
                    zu = S.mul(zu, _binomial_factor(ctx.variables, ctx.tmax, ctx.q, d, k[1:], c, v))
            zu = _adopt_window(zu, grouped, "third form")
        result = S.mul(result, S.pow_int(zu, nj))
    return result


# ---------------------------------------------------------------------------
# direct enumeration of coloring types


def coloring_types(setup: ColoringSetup, n: int, guard: int = 200_000) -> Iterator[ColoringType]:
    """All types {m_{d,color}} of total degree n."""
    cells = [
        (d, color, d * k)
        for d in range(1, n + 1)
        for k in range(1, n // d + 1)
        for color in setup.colors_of_degree(k)
    ]
    count = 0
    chosen: list = []

    def rec(i, rem):
        nonlocal count
        if rem == 0:
            count += 1
            if count > guard:
                raise EnumerationLimitError(f"more than {guard} coloring types of degree {n}")
            yield ColoringType(tuple(chosen), setup.degree)
            return
        if i == len(cells):
            return
        d, color, deg = cells[i]
        yield from rec(i + 1, rem)
        m = 1
        while m * deg <= rem:
            chosen.append((d, color, m))
            yield from rec(i + 1, rem - m * deg)
            chosen.pop()
            m += 1

    yield from rec(0, n)


def direct_enum(
    setup: ColoringSetup, variety: VarietySpec, ctx: Context, n: int, guard: int = 200_000
) -> Laurent:
    """T^n coefficient of Z_C(X) as a sum over coloring types.

    A type with m_d orbits of size d colored m_{d,c} times with c contributes
    binom(orbits_d, m_d) m_d!/prod m_{d,c}! prod W(c)(x^d)^m_{d,c}.
    """
    setup.check(ctx)
    if n == 0:
        return ctx.const(1)
    prof = orbit_profile(variety, ctx, n)
    total = ctx.zero()
    for typ in coloring_types(setup, n, guard):
        by_d: dict[int, list] = {}
        for d, color, m in typ.entries:
            by_d.setdefault(d, []).append((color, m))
        term = ctx.const(1)
        for d, cells in by_d.items():
            md = sum(m for _, m in cells)
            ways = falling(prof[d], md)
            denom = 1
            for _, m in cells:
                for i in range(2, m + 1):
                    denom *= i
            if isinstance(ways, Laurent):
                term = term * ways.scale(Fraction(1, denom))
            else:
                if ways == 0:
                    term = ctx.zero()
                    break
                term = term.scale(Fraction(ways, denom))
            for color, m in cells:
                term = term * (color_weight(setup, color, d, ctx) ** m)
        total = total + term
    return total


def direct_series(setup, variety, ctx: Context, guard: int = 200_000) -> TruncatedSeries:
    return ctx.series([direct_enum(setup, variety, ctx, n, guard) for n in range(ctx.tmax + 1)])


FORMS = {
    "first": first_form,
    "second": second_form,
    "third": third_form,
    "direct": direct_series,
}


# ---------------------------------------------------------------------------
# comparison reports


@dataclass
class Report:
    identity: str
    status: str
    first_mismatch: dict | None
    window: dict
    values: list | None = None
    detail: dict | None = None

    @property
    def ok(self) -> bool:
        return self.status == "equal"

    def to_json(self) -> dict:
        out = {
            "identity": self.identity,
            "status": self.status,
            "first_mismatch": self.first_mismatch,
            "window": self.window,
        }
        if self.values is not None:
            out["values"] = [str(v) for v in self.values]
        if self.detail is not None:
            out["detail"] = self.detail
        return out


def common_window(a: TruncatedSeries, b: TruncatedSeries) -> PrecisionWindow:
    cap = min(a.T_cap, b.T_cap)
    floors, caps = [], []
    for n in range(cap + 1):
        x, y = a.slices[n], b.slices[n]
        floors.append(tuple(min(u, v) for u, v in zip(x.floor, y.floor)))
        caps.append(tuple(min(u, v) for u, v in zip(x.cap, y.cap)))
    return PrecisionWindow(cap, tuple(floors), tuple(caps))


def checked_width(a: Laurent, b: Laurent, j: int = 0):
    """Exponents of variable j compared, counted from the lower of the two floors."""
    cap = min(a.cap[j], b.cap[j])
    if cap == INF:
        return INF
    lo = min(a.floor[j], b.floor[j])
    if lo == INF:
        return INF
    return cap - lo + 1


def compare(identity: str, lhs: TruncatedSeries, rhs: TruncatedSeries, min_width=None) -> Report:
    """Exact comparison on the common window.

    With ``min_width`` every T-degree must have at least that many q-exponents
    compared (q is Laurent variable 0), otherwise PrecisionError.
    """
    if min_width is not None and lhs.nvars:
        for n in range(min(lhs.T_cap, rhs.T_cap) + 1):
            w = checked_width(lhs.slices[n], rhs.slices[n])
            if w < min_width:
                raise PrecisionError(
                    f"{identity}: only {w} q-exponents known at T^{n}, need {min_width}"
                )
    win = common_window(lhs, rhs)
    diff = lhs.first_difference(rhs)
    mismatch = None
    if diff is not None:
        n, k, a, b = diff
        mismatch = {"T": str(n), "exps": [str(e) for e in k], "lhs": str(a), "rhs": str(b)}
    return Report(identity, "mismatch" if diff else "equal", mismatch, win.to_json())


def fourth_form_check(setup: ColoringSetup, variety: VarietySpec, ctx: Context, min_width=None) -> Report:
    """Log Z_C(X) == N_X(q) * Log Z_C(point), compared on the common window."""
    if not ctx.symbolic:
        raise SymbolicOnlyError("the fourth form multiplies Log by the polynomial N_X(q); use symbolic q")
    lhs = pleth_log(first_form(setup, variety, ctx)).as_series()
    rhs = point_pleth(setup, ctx).as_series() * variety.poly(ctx)
    return compare(f"fourth-form[{setup.name},{variety.name}]", lhs, rhs, min_width)


def is_homogeneous(z: TruncatedSeries, tvars: Sequence[str]) -> bool:
    """Every T^n coefficient has total degree n in the graded variables."""
    idx = [z.variables.index(v) for v in tvars]
    return all(
        sum(k[i] for i in idx) == n for n, s in enumerate(z.slices) for k in s.terms
    )
