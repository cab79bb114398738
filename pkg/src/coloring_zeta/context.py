"""Coefficient mode and precision settings shared by every computation."""
from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

from .partitions import evaluate
from .series import Laurent, TruncatedSeries, VariableSpec, laurent_rational

DEFAULT_TMAX = 6
DEFAULT_QWINDOW = 24


@dataclass(frozen=True)
class Context:
    """Symbolic mode when ``q`` is None, otherwise q is the exact rational ``q``.

    In symbolic mode q is the first Laurent variable, followed by ``tvars``.
    """

    q: Fraction | None = None
    tmax: int = DEFAULT_TMAX
    qwindow: int = DEFAULT_QWINDOW
    tvars: tuple[str, ...] = ()

    def __post_init__(self):
        if self.q is not None:
            object.__setattr__(self, "q", Fraction(self.q))
        if self.tmax < 0:
            raise ValueError("tmax must be non-negative")
        if self.qwindow < 1:
            raise ValueError("qwindow must be positive")

    @property
    def symbolic(self) -> bool:
        return self.q is None

    @property
    def variables(self) -> VariableSpec:
        return VariableSpec((("q",) if self.symbolic else ()) + tuple(self.tvars))

    @property
    def nvars(self) -> int:
        return self.variables.nvars

    def tindex(self, name: str) -> int:
        return self.variables.index(name)

    def at_power(self, k: int) -> "Context":
        """Numeric context with q replaced by q^k (symbolic contexts are returned unchanged)."""
        return self if self.symbolic else replace(self, q=self.q**k)

    def with_(self, **kw) -> "Context":
        return replace(self, **kw)

    # -- building coefficients ---------------------------------------------

    def const(self, c) -> Laurent:
        return Laurent.const(c, self.nvars)

    def zero(self) -> Laurent:
        return Laurent.zero(self.nvars)

    def q_poly(self, coeffs) -> Laurent:
        """An integer polynomial in q: exact Laurent slice, or its value."""
        if self.symbolic:
            return Laurent.q_polynomial(coeffs, self.nvars, 0)
        return self.const(evaluate(coeffs, self.q))

    def q_monomial(self, e: int, c=1) -> Laurent:
        if self.symbolic:
            key = [0] * self.nvars
            key[0] = e
            return Laurent.monomial(key, c)
        return self.const(Fraction(c) * self.q**e)

    def q_rational(self, num, den) -> Laurent:
        """num(q)/den(q): expanded at q = 0 to ``qwindow`` exponents, or evaluated."""
        if self.symbolic:
            return laurent_rational(num, den, self.qwindow, self.nvars, 0)
        d = evaluate(den, self.q)
        if not d:
            raise ZeroDivisionError(f"denominator vanishes at q = {self.q}")
        return self.const(Fraction(evaluate(num, self.q)) / d)

    def series_one(self) -> TruncatedSeries:
        return TruncatedSeries.one(self.variables, self.tmax, self.q)

    def series(self, slices) -> TruncatedSeries:
        return TruncatedSeries(self.variables, slices, self.q)

    def laurent_key(self, q_exp: int = 0, tm: tuple = ()) -> tuple:
        """Exponent vector for q^q_exp t^tm in this context's layout."""
        tm = tuple(tm) + (0,) * (len(self.tvars) - len(tuple(tm)))
        return ((q_exp,) if self.symbolic else ()) + tm
