"""Catalog of identities, each checked by two independent routes.

Every entry returns a ``Report``.  Identities whose right-hand side has
infinitely many q-contributions per T-coefficient are symbolic only; the ones
that call the brute-force oracle are numeric only.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from . import series as S
from .coloring import (
    CENTRALIZER,
    COMMUTING,
    PARTITION,
    SETUPS,
    Report,
    SymbolicOnlyError,
    compare,
    direct_series,
    first_form,
    fourth_form_check,
    get_setup,
    second_form,
    third_form,
)
from .context import DEFAULT_QWINDOW, DEFAULT_TMAX, Context
from .oracle import (
    count_classes_gl,
    count_classes_mn,
    count_unipotent,
    gamma,
    gamma_prime,
    gl_order_enum,
)
from .partitions import a_lambda, evaluate, partitions_of
from .series import INF, PrecisionError, TruncatedSeries
from .variety import GA, GM, POINT, VarietySpec, gl_order


class NumericOnlyError(ValueError):
    """The identity needs a numeric q (it calls the finite-field oracle)."""


@dataclass(frozen=True)
class VerifyOptions:
    q: int | None = None
    tmax: int = DEFAULT_TMAX
    qwindow: int = DEFAULT_QWINDOW
    nmax: int = 3
    setup: str | None = None
    variety: str | None = None
    budget: int | None = None
    workers: int = 1
    extra_widths: tuple = (0, 8, 16, 32)

    def ctx(self, **kw) -> Context:
        base = dict(q=self.q, tmax=self.tmax, qwindow=self.qwindow)
        base.update(kw)
        return Context(**base)

    @property
    def oracle_kw(self) -> dict:
        return {"budget": self.budget, "workers": self.workers}


def _need_symbolic(name: str, opts: VerifyOptions):
    if opts.q is not None:
        raise SymbolicOnlyError(
            f"{name} has infinitely many q-contributions per T-coefficient; "
            "it can only be checked with symbolic q"
        )


def _need_numeric(name: str, opts: VerifyOptions):
    if opts.q is None:
        raise NumericOnlyError(f"{name} compares against finite-field counts; pass a numeric q")


def _compare_lists(identity: str, lhs: list, rhs: list, start: int = 1, detail=None) -> Report:
    """Entrywise comparison of two value lists indexed start, start+1, ..."""
    mismatch = None
    for i, (a, b) in enumerate(zip(lhs, rhs)):
        if a != b:
            mismatch = {"T": str(start + i), "exps": [], "lhs": str(a), "rhs": str(b)}
            break
    if len(lhs) != len(rhs) and mismatch is None:
        mismatch = {"T": str(start + min(len(lhs), len(rhs))), "exps": [], "lhs": "?", "rhs": "?"}
    return Report(
        identity,
        "mismatch" if mismatch else "equal",
        mismatch,
        {"T_cap": str(start + len(lhs) - 1)},
        values=list(lhs),
        detail=detail,
    )


def _at_width(identity: str, opts: VerifyOptions, build: Callable[[Context], tuple]) -> Report:
    """Compare lhs/rhs with at least ``opts.qwindow`` q-exponents per T-degree.

    Cancellation can eat into the window, so inputs are re-expanded wider until
    the comparison covers the requested width.
    """
    last = None
    for extra in opts.extra_widths:
        ctx = opts.ctx(qwindow=opts.qwindow + extra)
        lhs, rhs = build(ctx)
        try:
            rep = compare(identity, lhs, rhs, min_width=opts.qwindow)
        except PrecisionError as exc:
            last = exc
            continue
        rep.detail = {"expansion_width": str(ctx.qwindow), "q_window": str(opts.qwindow)}
        return rep
    raise last


def _truncated_product(ctx: Context, factors, qcap: int) -> TruncatedSeries:
    """prod of exact factors (1 + c q^e T^d)^sign, known up to q^qcap in every slice.

    ``factors`` yields (d, e, c, sign); the caller guarantees that every
    omitted factor only contributes q-exponents above ``qcap``.
    """
    out = ctx.series_one()
    for d, e, c, sign in factors:
        if d > ctx.tmax:
            continue
        if ctx.symbolic:
            terms = {(0, (0,)): 1, (d, (e,)): c}
        else:
            terms = {(0, ()): 1, (d, ()): c * ctx.q**e}
        f = S.TruncatedSeries.from_terms(ctx.variables, ctx.tmax, terms, ctx.q)
        out = S.mul(out, f if sign > 0 else S.inv(f))
    if not ctx.symbolic:
        return out
    return out.map_slices(lambda s: s.restrict((qcap,)))


def _max_cap(z: TruncatedSeries) -> int:
    caps = [s.cap[0] for s in z.slices if s.cap[0] != INF]
    return max(caps, default=0)


def _qprod(polys) -> list[int]:
    out = [1]
    for p in polys:
        new = [0] * (len(out) + len(p) - 1)
        for i, x in enumerate(out):
            for j, y in enumerate(p):
                new[i + j] += x * y
        out = new
    return out


def _euler_denominator(n: int) -> list[int]:
    """(q^n - 1)(q^(n-1) - 1)...(q - 1)."""
    return _qprod([[-1] + [0] * (i - 1) + [1] for i in range(1, n + 1)])


# -- catalog ---------------------------------------------------------------------


def euler(opts: VerifyOptions) -> Report:
    """sum_n q^(n(n+1)/2) T^n / ((q^n-1)...(q-1)) == prod_{n>=1} (1 - q^n T)."""
    _need_symbolic("euler", opts)

    def build(ctx: Context):
        slices = [ctx.const(1)]
        for n in range(1, ctx.tmax + 1):
            num = {n * (n + 1) // 2: 1}
            slices.append(ctx.q_rational(num, _euler_denominator(n)))
        lhs = ctx.series(slices)
        cap = _max_cap(lhs)
        rhs = _truncated_product(ctx, ((1, n, -1, 1) for n in range(1, cap + 1)), cap)
        return lhs, rhs

    return _at_width("euler", opts, build)


def euler_coeffs(opts: VerifyOptions) -> Report:
    """Coefficients of Euler's identity at numeric q.

    The T^n coefficient q^(n(n+1)/2)/((q^n-1)...(q-1)) = |M_n|/|G_n| is the
    weighted count of n-colorings of G_a, i.e. [T^n] of the centralizer setup on
    G_a.  The sum over single partitions, sum_{|lambda|=n} 1/a_lambda(q), is the
    point count u_n/|G_n| and carries q^(n(n-1)/2) instead; both are checked.
    The detail records whether sum 1/a_lambda equals the G_a coefficient
    (it does not: already at n = 1 it is 1/(q-1) against q/(q-1)).
    """
    _need_numeric("euler-coeffs", opts)
    q = opts.q
    z = first_form(CENTRALIZER, GA, opts.ctx())
    colorings, euler_rhs, partition_sums, point_rhs = [], [], [], []
    for n in range(1, opts.tmax + 1):
        den = evaluate(_euler_denominator(n), q)
        colorings.append(z[n].constant())
        euler_rhs.append(Fraction(q ** (n * (n + 1) // 2), den))
        partition_sums.append(sum(Fraction(1, evaluate(a_lambda(lam), q)) for lam in partitions_of(n)))
        point_rhs.append(Fraction(q ** (n * (n - 1) // 2), den))
    rep = _compare_lists("euler-coeffs", colorings, euler_rhs)
    if rep.ok:
        rep = _compare_lists("euler-coeffs", partition_sums, point_rhs)
        rep.values = colorings
    rep.detail = {
        "sum_inverse_a_lambda": [str(v) for v in partition_sums],
        "sum_inverse_a_lambda_equals_Ga_coefficient": partition_sums == euler_rhs,
    }
    return rep


def _plain(x):
    x = Fraction(x)
    return int(x) if x.denominator == 1 else x


def _coeffs(z: TruncatedSeries, nmax: int) -> list:
    out = []
    for n in range(1, nmax + 1):
        c = z[n].constant()
        out.append(_plain(c))
    return out


def conj_gl(opts: VerifyOptions) -> Report:
    """Second form of the partition setup on G_m vs Burnside class counts of GL_n."""
    _need_numeric("conj-gl", opts)
    z = second_form(PARTITION, GM, opts.ctx(tmax=opts.nmax))
    series_vals = _coeffs(z, opts.nmax)
    oracle_vals = [count_classes_gl(n, opts.q, **opts.oracle_kw) for n in range(1, opts.nmax + 1)]
    return _compare_lists("conj-gl", series_vals, oracle_vals)


def conj_mn(opts: VerifyOptions) -> Report:
    """prod_n (1 - q T^n)^-1 vs Burnside class counts of M_n (and the second form on G_a)."""
    _need_numeric("conj-mn", opts)
    ctx = opts.ctx(tmax=opts.nmax)
    prod = _truncated_product(ctx, ((n, 1, -1, -1) for n in range(1, ctx.tmax + 1)), INF)
    prod_vals = _coeffs(prod, opts.nmax)
    form_vals = _coeffs(second_form(PARTITION, GA, ctx), opts.nmax)
    oracle_vals = [count_classes_mn(n, opts.q, **opts.oracle_kw) for n in range(1, opts.nmax + 1)]
    rep = _compare_lists("conj-mn", prod_vals, oracle_vals)
    if rep.ok and form_vals != prod_vals:
        rep = _compare_lists("conj-mn", form_vals, prod_vals)
    rep.detail = {"second_form": [str(v) for v in form_vals]}
    return rep


def unipotent(opts: VerifyOptions) -> Report:
    """Enumerated unipotent count vs q^(n^2-n) and vs |GL_n| sum_{|lambda|=n} 1/a_lambda."""
    _need_numeric("unipotent", opts)
    q = opts.q
    ns = range(1, opts.nmax + 1)
    oracle_vals = [count_unipotent(n, q, **opts.oracle_kw) for n in ns]
    closed = [q ** (n * n - n) for n in ns]
    via_classes = [
        _plain(gl_order(n, q) * sum(Fraction(1, evaluate(a_lambda(lam), q)) for lam in partitions_of(n))) for n in ns
    ]
    rep = _compare_lists("unipotent", oracle_vals, closed)
    if rep.ok:
        rep = _compare_lists("unipotent", via_classes, closed)
        rep.values = oracle_vals
    return rep


def feit_fine(opts: VerifyOptions) -> Report:
    """first_form(commuting, G_a) == prod_{i,n>=1} (1 - q^(n+1) T^i).

    Symbolic: exact series comparison.  Numeric: |GL_n| [T^n] of the first form
    against brute-force commuting-pair counts.
    """
    if opts.q is None:

        def build(ctx: Context):
            lhs = first_form(COMMUTING, GA, ctx)
            cap = max(_max_cap(lhs), 2)
            facs = ((i, n + 1, -1, 1) for i in range(1, ctx.tmax + 1) for n in range(1, cap))
            return lhs, _truncated_product(ctx, facs, cap)

        return _at_width("feit-fine", opts, build)
    z = first_form(COMMUTING, GA, opts.ctx(tmax=opts.nmax))
    series_vals = [_plain(gl_order(n, opts.q) * c) for n, c in enumerate(_coeffs(z, opts.nmax), 1)]
    oracle_vals = [gamma(n, opts.q, **opts.oracle_kw) for n in range(1, opts.nmax + 1)]
    return _compare_lists("feit-fine", series_vals, oracle_vals)


def burnside(opts: VerifyOptions) -> Report:
    """gamma'_n (counted over M_n) == |GL_n| * #classes(M_n) (counted over GL_n)."""
    _need_numeric("burnside", opts)
    q = opts.q
    lhs, rhs = [], []
    for n in range(1, opts.nmax + 1):
        try:
            lhs.append(gamma_prime(n, q, **opts.oracle_kw))
        except AssertionError as exc:
            return Report("burnside", "mismatch", {"T": str(n), "exps": [], "lhs": str(exc), "rhs": ""}, {})
        rhs.append(gl_order_enum(n, q, **opts.oracle_kw) * count_classes_mn(n, q, **opts.oracle_kw))
    return _compare_lists("burnside", lhs, rhs)


def _selected(opts: VerifyOptions):
    setups = [get_setup(opts.setup)] if opts.setup else list(SETUPS.values())
    varieties = [VarietySpec.parse(opts.variety)] if opts.variety else [POINT, GA, GM]
    return setups, varieties


def _forms_checks(setup, variety, ctx: Context, min_width=None) -> list[Report]:
    first = first_form(setup, variety, ctx)
    others = {
        "second": second_form(setup, variety, ctx),
        "third": third_form(setup, variety, ctx),
        "direct": direct_series(setup, variety, ctx),
    }
    reps = [
        compare(f"first=={k}[{setup.name},{variety.name}]", first, z, min_width) for k, z in others.items()
    ]
    if ctx.symbolic:
        reps.append(fourth_form_check(setup, variety, ctx, min_width))
    return reps


def forms_agree(opts: VerifyOptions) -> Report:
    """First, second, third form and direct enumeration agree; fourth form holds (symbolic).

    In symbolic mode every comparison covers at least ``opts.qwindow`` q-exponents
    per T-degree; inputs are re-expanded wider when cancellation eats the window.
    """
    checks = []
    failed = None
    for setup in _selected(opts)[0]:
        for variety in _selected(opts)[1]:
            if opts.q is not None:
                reps = _forms_checks(setup, variety, opts.ctx())
            else:
                reps, last = None, None
                for extra in opts.extra_widths:
                    try:
                        reps = _forms_checks(setup, variety, opts.ctx(qwindow=opts.qwindow + extra), opts.qwindow)
                        break
                    except PrecisionError as exc:
                        last = exc
                if reps is None:
                    raise last
            for r in reps:
                checks.append({"check": r.identity, "status": r.status})
                if failed is None and not r.ok:
                    failed = r
    status = "mismatch" if failed else "equal"
    mismatch = None
    if failed:
        mismatch = dict(failed.first_mismatch, check=failed.identity)
    window = {"T_cap": str(opts.tmax), "q_window": str(opts.qwindow) if opts.q is None else "numeric"}
    return Report("forms-agree", status, mismatch, window, detail={"checks": checks})


def centr_gm(opts: VerifyOptions) -> Report:
    """The centralizer setup on G_m has every T^n coefficient equal to 1."""
    ctx = opts.ctx()
    lhs = first_form(CENTRALIZER, GM, ctx)
    rhs = TruncatedSeries.geometric(ctx.variables, ctx.tmax, ctx.q)
    rep = compare("centr-gm", lhs, rhs)
    if not ctx.symbolic:
        rep.values = _coeffs(lhs, ctx.tmax)
    return rep


CATALOG: dict[str, Callable[[VerifyOptions], Report]] = {
    "euler": euler,
    "euler-coeffs": euler_coeffs,
    "conj-gl": conj_gl,
    "conj-mn": conj_mn,
    "unipotent": unipotent,
    "feit-fine": feit_fine,
    "burnside": burnside,
    "forms-agree": forms_agree,
    "centr-gm": centr_gm,
}


def verify(name: str, opts: VerifyOptions) -> Report:
    fn = CATALOG.get(name)
    if fn is None:
        raise KeyError(f"unknown identity {name!r}; choose from {', '.join(CATALOG)}")
    return fn(opts)
