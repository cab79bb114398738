"""Exact truncated arithmetic in R[[T]], R = Z[[t1..tN]][t1^-1..tN^-1].

A series is stored as one coefficient slice per power of T.  Each slice is a
multivariate Laurent polynomial together with a box of validity: for every
Laurent variable j a ``floor`` (no term, known or unknown, has a smaller
exponent) and a ``cap`` (every monomial whose exponents are all <= the caps is
known exactly).  ``cap = inf`` means the slice is exact in that variable.

Precision is tracked per power of T because the valuation in q of the T^n
coefficients of the series we care about falls roughly like -n^2/2; a single
window for the whole series would throw away most of the information.

Rational functions of q are always expanded at q = 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Sequence

INF = math.inf


class PrecisionError(ValueError):
    """A requested quantity lies outside the exactly known window."""


class ModeError(ValueError):
    """Operands live in incompatible rings or coefficient modes."""


def _bound(x):
    return INF if x == INF else int(x)


def _fmt_bound(x) -> str:
    return "inf" if x == INF else str(int(x))


def _parse_bound(s: str):
    return INF if s == "inf" else int(s)


class Laurent:
    """Laurent polynomial with exact rational coefficients and a validity box."""

    __slots__ = ("terms", "floor", "cap")

    def __init__(self, terms: Mapping[tuple, object], floor: Sequence, cap: Sequence):
        floor = tuple(_bound(f) for f in floor)
        cap = tuple(_bound(c) for c in cap)
        if len(floor) != len(cap):
            raise ValueError("floor and cap must have the same length")
        nv = len(cap)
        clean = {}
        for k, v in terms.items():
            k = tuple(int(e) for e in k)
            if len(k) != nv:
                raise ValueError(f"exponent vector {k} has wrong length (expected {nv})")
            v = Fraction(v)
            if not v:
                continue
            if any(e > c for e, c in zip(k, cap)):
                continue
            if any(e < f for e, f in zip(k, floor)):
                raise ValueError(f"term {k} lies below the declared floor {floor}")
            clean[k] = v
        if nv == 0:
            floor = cap = ()
        elif all(c == INF for c in cap):
            if clean:
                floor = tuple(min(k[j] for k in clean) for j in range(nv))
            else:
                floor = (INF,) * nv
        elif nv == 1 and clean:
            floor = (max(floor[0], min(k[0] for k in clean)),)
        cap = tuple(c if c == INF else max(c, f - 1) for c, f in zip(cap, floor))
        self.terms = clean
        self.floor = floor
        self.cap = cap

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "Laurent":
        return cls({}, (INF,) * nvars, (INF,) * nvars)

    @classmethod
    def const(cls, c, nvars: int) -> "Laurent":
        return cls({(0,) * nvars: c}, (0,) * nvars, (INF,) * nvars)

    @classmethod
    def monomial(cls, exps: Sequence[int], c=1) -> "Laurent":
        exps = tuple(exps)
        return cls({exps: c}, exps, (INF,) * len(exps))

    @classmethod
    def polynomial(cls, terms: Mapping[tuple, object], nvars: int) -> "Laurent":
        """An exact Laurent polynomial."""
        lo = [min((k[j] for k in terms), default=0) for j in range(nvars)]
        return cls(terms, lo, (INF,) * nvars)

    @classmethod
    def q_polynomial(cls, coeffs: Mapping[int, object] | Sequence, nvars: int, qindex: int = 0):
        """Exact polynomial in the variable at position ``qindex``."""
        items = coeffs.items() if isinstance(coeffs, Mapping) else enumerate(coeffs)
        terms = {}
        for e, c in items:
            if c:
                key = [0] * nvars
                key[qindex] = e
                terms[tuple(key)] = Fraction(c)
        return cls.polynomial(terms, nvars)

    # -- basic properties ---------------------------------------------------

    @property
    def nvars(self) -> int:
        return len(self.cap)

    def is_exact(self) -> bool:
        return all(c == INF for c in self.cap)

    def is_zero(self) -> bool:
        """True when the slice is known to vanish identically."""
        return not self.terms and self.is_exact()

    def constant(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def effective_floor(self) -> tuple:
        """Floor used for precision propagation.

        A univariate slice with no known term keeps its structural floor (so
        the width of a comparison can be measured), but every true term sits
        above the cap.
        """
        if self.nvars == 1 and not self.terms and self.cap[0] != INF:
            return (max(self.floor[0], self.cap[0] + 1),)
        return self.floor

    def width(self, j: int = 0):
        """Number of exactly known exponents of variable j, from the floor up."""
        if self.cap[j] == INF:
            return INF
        return self.cap[j] - self.floor[j] + 1

    def __repr__(self):
        return f"Laurent({self.format()}, floor={self.floor}, cap={self.cap})"

    def format(self, names: Sequence[str] | None = None) -> str:
        if not self.terms:
            body = "0"
        else:
            names = names or [f"x{j}" for j in range(self.nvars)]
            parts = []
            for k in sorted(self.terms):
                c = self.terms[k]
                mono = "*".join(
                    n if e == 1 else f"{n}^{e}" for n, e in zip(names, k) if e
                )
                if not mono:
                    parts.append(str(c))
                elif c == 1:
                    parts.append(mono)
                elif c == -1:
                    parts.append("-" + mono)
                else:
                    parts.append(f"{c}*{mono}")
            body = " + ".join(parts).replace("+ -", "- ")
        if not self.is_exact():
            names = names or [f"x{j}" for j in range(self.nvars)]
            big = ",".join(f"{n}^{_fmt_bound(c + 1)}" for n, c in zip(names, self.cap) if c != INF)
            body += f" + O({big})"
        return body

    def same_as(self, other: "Laurent") -> bool:
        return self.terms == other.terms and self.floor == other.floor and self.cap == other.cap

    __eq__ = same_as
    __hash__ = None

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other: "Laurent"):
        if self.nvars != other.nvars:
            raise ModeError("Laurent slices over different variable sets")

    def __add__(self, other):
        if not isinstance(other, Laurent):
            other = Laurent.const(other, self.nvars)
        self._check(other)
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = terms.get(k, 0) + v
        floor = tuple(min(a, b) for a, b in zip(self.floor, other.floor))
        cap = tuple(min(a, b) for a, b in zip(self.cap, other.cap))
        return Laurent(terms, floor, cap)

    __radd__ = __add__

    def __neg__(self):
        return Laurent({k: -v for k, v in self.terms.items()}, self.floor, self.cap)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Laurent":
        c = Fraction(c)
        if not c:
            return Laurent.zero(self.nvars)
        return Laurent({k: v * c for k, v in self.terms.items()}, self.floor, self.cap)

    def __mul__(self, other):
        if not isinstance(other, Laurent):
            return self.scale(other)
        self._check(other)
        if self.is_zero() or other.is_zero():
            return Laurent.zero(self.nvars)
        floor = tuple(a + b for a, b in zip(self.floor, other.floor))
        cap = tuple(
            min(ca + fb, cb + fa)
            for ca, cb, fa, fb in zip(
                self.cap, other.cap, self.effective_floor(), other.effective_floor()
            )
        )
        terms: dict = {}
        for ka, va in self.terms.items():
            for kb, vb in other.terms.items():
                k = tuple(x + y for x, y in zip(ka, kb))
                if any(e > c for e, c in zip(k, cap)):
                    continue
                terms[k] = terms.get(k, 0) + va * vb
        return Laurent(terms, floor, cap)

    __rmul__ = __mul__

    def shift(self, exps: Sequence[int]) -> "Laurent":
        """Multiply by the monomial x^exps."""
        exps = tuple(exps)
        terms = {tuple(a + b for a, b in zip(k, exps)): v for k, v in self.terms.items()}
        return Laurent(
            terms,
            tuple(f + e for f, e in zip(self.floor, exps)),
            tuple(c + e for c, e in zip(self.cap, exps)),
        )

    def adams(self, k: int) -> "Laurent":
        """Substitute x_j -> x_j^k for every variable."""
        if k <= 0:
            raise ValueError("Adams operation needs k >= 1")
        terms = {tuple(e * k for e in key): v for key, v in self.terms.items()}
        floor = tuple(f * k for f in self.floor)
        # unknown terms sat above cap, so their images sit at k*(cap+1) or higher
        cap = tuple(c if c == INF else c * k + k - 1 for c in self.cap)
        return Laurent(terms, floor, cap)

    def restrict(self, cap: Sequence) -> "Laurent":
        """Forget information above ``cap`` (componentwise)."""
        new = tuple(min(a, _bound(b)) for a, b in zip(self.cap, cap))
        return Laurent(self.terms, self.floor, new)

    def inv(self) -> "Laurent":
        """Multiplicative inverse, expanded around the leading monomial."""
        nv = self.nvars
        if not self.terms:
            raise PrecisionError("cannot invert a slice with no known nonzero term")
        if nv == 0:
            return Laurent.const(1 / self.terms[()], 0)
        alpha = tuple(min(k[j] for k in self.terms) for j in range(nv))
        if alpha not in self.terms:
            raise ValueError("slice has no leading monomial; inversion is not defined")
        lead = self.terms[alpha]
        floor = tuple(f - 2 * a for f, a in zip(self.floor, alpha))
        cap = tuple(c if c == INF else c - 2 * a for c, a in zip(self.cap, alpha))
        # u = self / (lead x^alpha) - 1, all exponents >= 0
        u = {
            tuple(e - a for e, a in zip(k, alpha)): v / lead
            for k, v in self.terms.items()
            if k != alpha
        }
        for k in u:
            if not any(e > 0 and c != INF for e, c, in zip(k, self.cap)):
                raise ValueError(
                    "geometric series does not terminate: a non-leading term is not "
                    "bounded by any finite precision cap"
                )
        rel_cap = tuple(c if c == INF else c - a for c, a in zip(self.cap, alpha))
        acc = {(0,) * nv: Fraction(1)}
        power = {(0,) * nv: Fraction(1)}
        while power:
            nxt: dict = {}
            for kp, vp in power.items():
                for ku, vu in u.items():
                    k = tuple(x + y for x, y in zip(kp, ku))
                    if any(e > c for e, c in zip(k, rel_cap)):
                        continue
                    nxt[k] = nxt.get(k, 0) - vp * vu
            power = {k: v for k, v in nxt.items() if v}
            for k, v in power.items():
                acc[k] = acc.get(k, 0) + v
        terms = {tuple(e - a for e, a in zip(k, alpha)): v / lead for k, v in acc.items()}
        return Laurent(terms, floor, cap)

    def __pow__(self, k: int) -> "Laurent":
        if k < 0:
            return self.inv() ** (-k)
        result = Laurent.const(1, self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def evaluate(self, values: Mapping[int, object]) -> "Laurent":
        """Substitute exact numbers for some variables (by index); they must be exact."""
        for j in values:
            if self.cap[j] != INF:
                raise PrecisionError("cannot specialise a variable that is only known to finite precision")
        keep = [j for j in range(self.nvars) if j not in values]
        terms: dict = {}
        for k, v in self.terms.items():
            for j, x in values.items():
                v = v * Fraction(x) ** k[j]
            kk = tuple(k[j] for j in keep)
            terms[kk] = terms.get(kk, 0) + v
        return Laurent(terms, [self.floor[j] for j in keep], [self.cap[j] for j in keep])

    def diff(self, other: "Laurent"):
        """First monomial (canonical order) where the two differ on the common window.

        Returns ``None`` when they agree.
        """
        self._check(other)
        cap = tuple(min(a, b) for a, b in zip(self.cap, other.cap))
        keys = sorted(set(self.terms) | set(other.terms))
        for k in keys:
            if any(e > c for e, c in zip(k, cap)):
                continue
            a = self.terms.get(k, Fraction(0))
            b = other.terms.get(k, Fraction(0))
            if a != b:
                return k, a, b
        return None


def laurent_rational(num, den, width: int, nvars: int = 1, qindex: int = 0) -> Laurent:
    """Expand num(q)/den(q) at q = 0, exact on ``width`` exponents from the valuation.

    ``num`` and ``den`` are integer (or rational) coefficient lists, low degree
    first, or ``{exponent: coeff}`` maps.  If ``den`` divides ``num`` exactly the
    result is an exact polynomial.
    """
    n = _as_qpoly(num)
    d = _as_qpoly(den)
    if not d:
        raise ZeroDivisionError("zero denominator")
    if not n:
        return Laurent.zero(nvars)
    quotient = _exact_division(n, d)
    if quotient is not None:
        return Laurent.q_polynomial(quotient, nvars, qindex)
    vn, vd = min(n), min(d)
    floor = vn - vd
    d0 = d[vd]
    ns = {e - vn: c for e, c in n.items()}
    ds = {e - vd: c for e, c in d.items()}
    s: list[Fraction] = []
    for k in range(width):
        acc = Fraction(ns.get(k, 0))
        for i in range(1, k + 1):
            di = ds.get(i)
            if di:
                acc -= di * s[k - i]
        s.append(acc / d0)
    terms = {}
    for k, c in enumerate(s):
        if c:
            key = [0] * nvars
            key[qindex] = floor + k
            terms[tuple(key)] = c
    fl = [0] * nvars
    cp = [INF] * nvars
    fl[qindex] = floor
    cp[qindex] = floor + width - 1
    return Laurent(terms, fl, cp)


def _as_qpoly(p) -> dict[int, Fraction]:
    items = p.items() if isinstance(p, Mapping) else enumerate(p)
    return {int(e): Fraction(c) for e, c in items if c}


def _exact_division(n: dict, d: dict):
    """Quotient n/d as a Laurent polynomial if d divides n exactly, else None."""
    vd = min(d)
    if len(d) == 1:
        c = d[vd]
        return {e - vd: v / c for e, v in n.items()}
    rem = dict(n)
    top_d = max(d)
    lead = d[top_d]
    q: dict[int, Fraction] = {}
    while rem and max(rem) - top_d >= min(rem) - vd:
        t = max(rem)
        c = rem[t] / lead
        s = t - top_d
        q[s] = c
        for e, v in d.items():
            x = rem.get(e + s, 0) - c * v
            if x:
                rem[e + s] = x
            else:
                rem.pop(e + s, None)
    return None if rem else q


# ---------------------------------------------------------------------------
# series in T


@dataclass(frozen=True)
class VariableSpec:
    laurent: tuple[str, ...] = ()
    series: str = "T"

    def __post_init__(self):
        names = list(self.laurent) + [self.series]
        if len(set(names)) != len(names):
            raise ValueError(f"variable names must be distinct: {names}")

    @property
    def nvars(self) -> int:
        return len(self.laurent)

    def index(self, name: str) -> int:
        return self.laurent.index(name)


class MonomialKey(NamedTuple):
    d: int
    exps: tuple


@dataclass(frozen=True)
class PrecisionWindow:
    """T-cap plus the (floor, cap) box of every retained T-degree."""

    T_cap: int
    floors: tuple
    caps: tuple

    def to_json(self) -> dict:
        return {
            "T_cap": str(self.T_cap),
            "slices": [
                {"T": str(n), "floor": [_fmt_bound(x) for x in f], "cap": [_fmt_bound(x) for x in c]}
                for n, (f, c) in enumerate(zip(self.floors, self.caps))
            ],
        }


class TruncatedSeries:
    """Power series in T, exact modulo T^(T_cap+1), with Laurent slices."""

    __slots__ = ("variables", "slices", "q_value")

    def __init__(self, variables: VariableSpec, slices: Sequence[Laurent], q_value=None):
        if not slices:
            raise ValueError("a series needs at least the T^0 slice")
        for s in slices:
            if s.nvars != variables.nvars:
                raise ModeError("slice does not match the variable spec")
        self.variables = variables
        self.slices = tuple(slices)
        self.q_value = None if q_value is None else Fraction(q_value)

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_terms(cls, variables: VariableSpec, T_cap: int, terms: Mapping, q_value=None):
        """Exact series from ``{(d, exps): coeff}`` (or ``{d: coeff}`` with no Laurent vars)."""
        nv = variables.nvars
        per: list[dict] = [{} for _ in range(T_cap + 1)]
        for key, c in terms.items():
            if isinstance(key, int):
                d, exps = key, (0,) * nv
            else:
                d, exps = key
            if d <= T_cap:
                per[d][tuple(exps)] = per[d].get(tuple(exps), 0) + Fraction(c)
        return cls(variables, [Laurent.polynomial(t, nv) for t in per], q_value)

    @classmethod
    def one(cls, variables: VariableSpec, T_cap: int, q_value=None):
        nv = variables.nvars
        return cls(variables, [Laurent.const(1, nv)] + [Laurent.zero(nv)] * T_cap, q_value)

    @classmethod
    def constant(cls, c: Laurent, variables: VariableSpec, T_cap: int, q_value=None):
        return cls(variables, [c] + [Laurent.zero(variables.nvars)] * T_cap, q_value)

    @classmethod
    def geometric(cls, variables: VariableSpec, T_cap: int, q_value=None):
        """1/(1-T)."""
        nv = variables.nvars
        return cls(variables, [Laurent.const(1, nv)] * (T_cap + 1), q_value)

    # -- properties ---------------------------------------------------------

    @property
    def T_cap(self) -> int:
        return len(self.slices) - 1

    @property
    def nvars(self) -> int:
        return self.variables.nvars

    @property
    def window(self) -> PrecisionWindow:
        return PrecisionWindow(
            self.T_cap, tuple(s.floor for s in self.slices), tuple(s.cap for s in self.slices)
        )

    def __getitem__(self, n: int) -> Laurent:
        return coeff_of_T(self, n)

    def __repr__(self):
        return f"TruncatedSeries({self.format()})"

    def format(self) -> str:
        names = self.variables.laurent
        T = self.variables.series
        parts = []
        for n, s in enumerate(self.slices):
            if s.is_zero():
                continue
            body = s.format(names)
            if n == 0:
                parts.append(body)
            elif body == "1":
                parts.append(f"{T}^{n}" if n > 1 else T)
            else:
                parts.append(f"({body})*{T}^{n}" if n > 1 else f"({body})*{T}")
        parts.append(f"O({T}^{self.T_cap + 1})")
        return " + ".join(parts)

    def terms(self):
        """Known terms in canonical order: T-degree, then Laurent exponents."""
        for n, s in enumerate(self.slices):
            for k in sorted(s.terms):
                yield MonomialKey(n, k), s.terms[k]

    def truncate(self, T_cap: int) -> "TruncatedSeries":
        if T_cap > self.T_cap:
            raise PrecisionError(f"series only known to T^{self.T_cap}")
        return TruncatedSeries(self.variables, self.slices[: T_cap + 1], self.q_value)

    def map_slices(self, fn) -> "TruncatedSeries":
        return TruncatedSeries(self.variables, [fn(s) for s in self.slices], self.q_value)

    # operator sugar
    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return add(self, other.map_slices(lambda s: -s))

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return mul(self, other)
        return self.map_slices(lambda s: s * other)

    __rmul__ = __mul__

    def __neg__(self):
        return self.map_slices(lambda s: -s)

    def __pow__(self, k: int):
        return pow_int(self, k)

    def same_as(self, other: "TruncatedSeries") -> bool:
        return (
            self.variables == other.variables
            and self.q_value == other.q_value
            and len(self.slices) == len(other.slices)
            and all(a.same_as(b) for a, b in zip(self.slices, other.slices))
        )

    def first_difference(self, other: "TruncatedSeries"):
        """First (T-degree, exps, lhs, rhs) disagreement on the common window, or None."""
        _compatible(self, other)
        for n in range(min(self.T_cap, other.T_cap) + 1):
            d = self.slices[n].diff(other.slices[n])
            if d is not None:
                return (n,) + d
        return None

    def agrees_with(self, other: "TruncatedSeries") -> bool:
        return self.first_difference(other) is None

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        out = {
            "variables": list(self.variables.laurent),
            "series_variable": self.variables.series,
            "T_cap": str(self.T_cap),
            "window": self.window.to_json(),
            "terms": [
                {"T": str(key.d), "exps": [str(e) for e in key.exps], "coeff": str(c)}
                for key, c in self.terms()
            ],
        }
        if self.q_value is not None:
            out["q"] = str(self.q_value)
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> "TruncatedSeries":
        variables = VariableSpec(tuple(data["variables"]), data.get("series_variable", "T"))
        T_cap = int(data["T_cap"])
        per: list[dict] = [{} for _ in range(T_cap + 1)]
        for t in data["terms"]:
            per[int(t["T"])][tuple(int(e) for e in t["exps"])] = Fraction(t["coeff"])
        slices = []
        for n, w in enumerate(data["window"]["slices"]):
            slices.append(
                Laurent(
                    per[n],
                    [_parse_bound(x) for x in w["floor"]],
                    [_parse_bound(x) for x in w["cap"]],
                )
            )
        q = data.get("q")
        return cls(variables, slices, None if q is None else Fraction(q))


def _compatible(a: TruncatedSeries, b: TruncatedSeries):
    if a.variables != b.variables:
        raise ModeError(f"incompatible variables {a.variables} vs {b.variables}")
    if a.q_value is not None and b.q_value is not None and a.q_value != b.q_value:
        raise ModeError(f"series specialised at different q ({a.q_value} vs {b.q_value})")
    return a.q_value if a.q_value is not None else b.q_value


def add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    q = _compatible(a, b)
    cap = min(a.T_cap, b.T_cap)
    return TruncatedSeries(a.variables, [a.slices[n] + b.slices[n] for n in range(cap + 1)], q)


def mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    q = _compatible(a, b)
    cap = min(a.T_cap, b.T_cap)
    nv = a.nvars
    out = []
    for n in range(cap + 1):
        acc = Laurent.zero(nv)
        for i in range(n + 1):
            x, y = a.slices[i], b.slices[n - i]
            if x.is_zero() or y.is_zero():
                continue
            acc = acc + x * y
        out.append(acc)
    return TruncatedSeries(a.variables, out, q)


def inv(a: TruncatedSeries) -> TruncatedSeries:
    """Multiplicative inverse; the T^0 slice must be invertible."""
    a0 = a.slices[0]
    if not a0.terms:
        raise ZeroDivisionError("T^0 part is zero")
    b0 = a0.inv()
    out = [b0]
    nv = a.nvars
    for n in range(1, a.T_cap + 1):
        acc = Laurent.zero(nv)
        for i in range(1, n + 1):
            x = a.slices[i]
            if x.is_zero():
                continue
            acc = acc + x * out[n - i]
        out.append(-(b0 * acc))
    return TruncatedSeries(a.variables, out, a.q_value)


def pow_int(a: TruncatedSeries, k: int) -> TruncatedSeries:
    if k < 0:
        return pow_int(inv(a), -k)
    result = TruncatedSeries.one(a.variables, a.T_cap, a.q_value)
    base = a
    while k:
        if k & 1:
            result = mul(result, base)
        k >>= 1
        if k:
            base = mul(base, base)
    return result


def power(a: TruncatedSeries, exponent: Laurent) -> TruncatedSeries:
    """(1 + z)^N = sum_m N(N-1)...(N-m+1)/m! z^m for a Laurent exponent N.

    ``a`` must have T^0 part exactly 1.
    """
    _require_unit_constant(a)
    z = TruncatedSeries(a.variables, [Laurent.zero(a.nvars)] + list(a.slices[1:]), a.q_value)
    result = TruncatedSeries.one(a.variables, a.T_cap, a.q_value)
    term = TruncatedSeries.one(a.variables, a.T_cap, a.q_value)
    coeff = Laurent.const(1, a.nvars)
    for m in range(1, a.T_cap + 1):
        term = mul(term, z)
        coeff = (coeff * (exponent - (m - 1))).scale(Fraction(1, m))
        result = add(result, term.map_slices(lambda s: s * coeff))
    return result


def _require_unit_constant(a: TruncatedSeries):
    a0 = a.slices[0]
    if not (a0.is_exact() and a0.terms == {(0,) * a.nvars: 1}):
        raise ValueError("series must have constant term exactly 1")


def log(a: TruncatedSeries) -> TruncatedSeries:
    """Formal logarithm of a series with constant term 1."""
    _require_unit_constant(a)
    nv = a.nvars
    c = [Laurent.zero(nv)]
    for n in range(1, a.T_cap + 1):
        acc = Laurent.zero(nv)
        for k in range(1, n):
            y = a.slices[n - k]
            if y.is_zero() or c[k].is_zero():
                continue
            acc = acc + (c[k] * y).scale(k)
        c.append(a.slices[n] - acc.scale(Fraction(1, n)))
    return TruncatedSeries(a.variables, c, a.q_value)


def exp(a: TruncatedSeries) -> TruncatedSeries:
    """Formal exponential of a series with zero constant term."""
    if not a.slices[0].is_zero():
        raise ValueError("exp needs a series with constant term exactly 0")
    nv = a.nvars
    b = [Laurent.const(1, nv)]
    for n in range(1, a.T_cap + 1):
        acc = Laurent.zero(nv)
        for k in range(1, n + 1):
            x = a.slices[k]
            if x.is_zero():
                continue
            acc = acc + (x * b[n - k]).scale(k)
        b.append(acc.scale(Fraction(1, n)))
    return TruncatedSeries(a.variables, b, a.q_value)


def adams(a: TruncatedSeries, k: int) -> TruncatedSeries:
    """Substitute every variable (Laurent ones and T) by its k-th power.

    Not available once q has been specialised to a number: the substitution
    q -> q^k can no longer be carried out.
    """
    if a.q_value is not None:
        raise ModeError(
            "Adams operations need the symbolic q; evaluate at q**k before specialising"
        )
    return scale_degrees(a, k)


def scale_degrees(a: TruncatedSeries, k: int) -> TruncatedSeries:
    """Adams operation on the variables actually present (q, if specialised, is left alone)."""
    if k <= 0:
        raise ValueError("Adams operation needs k >= 1")
    nv = a.nvars
    out = [Laurent.zero(nv) for _ in range(a.T_cap + 1)]
    for n, s in enumerate(a.slices):
        if n * k <= a.T_cap:
            out[n * k] = s.adams(k)
    return TruncatedSeries(a.variables, out, a.q_value)


def subst_T_monomial(a: TruncatedSeries, key, coeff=1) -> TruncatedSeries:
    """T -> coeff * x^exps * T^d, with d >= 1."""
    d, exps = key
    if d < 1:
        raise ValueError("T must map to a monomial of positive T-degree")
    exps = tuple(exps)
    if len(exps) != a.nvars:
        raise ModeError("exponent vector does not match the variables")
    coeff = Fraction(coeff)
    nv = a.nvars
    out = [Laurent.zero(nv) for _ in range(a.T_cap + 1)]
    for n, s in enumerate(a.slices):
        if n * d > a.T_cap:
            break
        out[n * d] = s.shift(tuple(e * n for e in exps)).scale(coeff**n)
    return TruncatedSeries(a.variables, out, a.q_value)


def coeff_of_T(a: TruncatedSeries, n: int) -> Laurent:
    if n < 0:
        raise ValueError("negative T-degree")
    if n > a.T_cap:
        raise PrecisionError(f"T^{n} lies beyond the T-cap {a.T_cap}")
    return a.slices[n]


def expand_rational_q(num, den, width: int, variables: VariableSpec | None = None, T_cap: int = 0):
    """Laurent expansion at q = 0 of num(q)/den(q), as a series constant in T."""
    variables = variables or VariableSpec(("q",))
    qi = variables.index("q")
    s = laurent_rational(num, den, width, variables.nvars, qi)
    return TruncatedSeries.constant(s, variables, T_cap)


def restrict(a: TruncatedSeries, window: PrecisionWindow) -> TruncatedSeries:
    """Keep the values of ``a`` but adopt ``window``'s floors and caps.

    Only sound when ``window`` is known to bound the true series ``a`` represents.
    """
    out = []
    for n in range(min(a.T_cap, window.T_cap) + 1):
        s = a.slices[n]
        f, c = window.floors[n], window.caps[n]
        terms = {k: v for k, v in s.terms.items() if all(e <= cc for e, cc in zip(k, c))}
        out.append(Laurent(terms, f, c))
    return TruncatedSeries(a.variables, out, a.q_value)


def sum_series(items: Iterable[TruncatedSeries]) -> TruncatedSeries:
    items = iter(items)
    acc = next(items)
    for x in items:
        acc = add(acc, x)
    return acc
