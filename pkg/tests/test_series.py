import json
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coloring_zeta import series as S
from coloring_zeta.series import (
    INF,
    Laurent,
    ModeError,
    PrecisionError,
    TruncatedSeries,
    VariableSpec,
    laurent_rational,
)

Q = VariableSpec(("q",))
NONE = VariableSpec(())


def ser(terms, T_cap=6, variables=Q):
    return TruncatedSeries.from_terms(variables, T_cap, terms)


def tser(coeffs, T_cap=6):
    """Series in T alone from {d: c}."""
    return TruncatedSeries.from_terms(NONE, T_cap, coeffs)


def qpoly(coeffs, cap=INF):
    return Laurent.q_polynomial(coeffs, 1).restrict((cap,))


def qslice(s, n):
    """{exponent: coeff} of the T^n slice."""
    return {k[0]: v for k, v in s[n].terms.items()}


GEOM = TruncatedSeries.geometric


# -- add / mul -----------------------------------------------------------------


def test_add_cancels():
    assert (tser({0: 1, 1: -1}) + tser({1: 1})).same_as(tser({0: 1}))


def test_add_symmetric_pair():
    a = ser({(0, (0,)): 1, (1, (1,)): 1})
    b = ser({(0, (0,)): 1, (1, (1,)): -1})
    assert (a + b).same_as(ser({(0, (0,)): 2}))


def test_add_window_is_intersection():
    a = TruncatedSeries.constant(qpoly([1] * 11, cap=10), Q, 0)
    b = TruncatedSeries.constant(qpoly([1] * 6, cap=5), Q, 0)
    s = (a + b)[0]
    assert (s.floor, s.cap) == ((0,), (5,))
    assert qslice(a + b, 0) == {e: 2 for e in range(6)}


def test_mul_inverse_pair():
    assert (tser({0: 1, 1: -1}) * GEOM(NONE, 6)).same_as(tser({0: 1}))


def test_mul_shift_window():
    a = TruncatedSeries.constant(qpoly([1] * 10, cap=9), Q, 0)
    b = TruncatedSeries.constant(Laurent.monomial((2,)), Q, 0)
    p = (a * b)[0]
    assert (p.floor, p.cap) == ((2,), (11,))
    assert {k[0] for k in p.terms} == set(range(2, 12))


def test_mul_expansion():
    a = ser({(0, (0,)): 1, (1, (1,)): -1}, 3)
    b = ser({(0, (0,)): 1, (1, (2,)): -1}, 3)
    want = ser({(0, (0,)): 1, (1, (1,)): -1, (1, (2,)): -1, (2, (3,)): 1}, 3)
    assert (a * b).same_as(want)


def test_mul_min_rule():
    a = Laurent({(0,): 1, (1,): 1}, (0,), (5,))
    b = Laurent({(3,): 1}, (3,), (4,))
    assert (a * b).cap == (min(5 + 3, 4 + 0),)


# -- inv / pow ---------------------------------------------------------------------


def test_inv_geometric():
    assert S.inv(tser({0: 1, 1: -1})).same_as(GEOM(NONE, 6))


def test_inv_q_minus_one():
    x = qpoly([-1, 1], cap=11).inv()
    assert x.terms == {(e,): -1 for e in range(12)}
    assert x.cap == (11,)


def test_inv_leading_monomial_shift():
    a = qpoly([0, 0, 1, 1], cap=12)  # q^2 (1 + q)
    b = a.inv()
    assert b.floor == (-2,)
    assert {k[0]: v for k, v in b.terms.items()} == {e - 2: (-1) ** e for e in range(b.cap[0] + 3)}
    # multiply back: 1 on the window
    one = a * b
    assert one.terms == {(0,): 1} and one.cap[0] >= 8


def test_inv_zero_constant_rejected():
    with pytest.raises(ZeroDivisionError):
        S.inv(tser({1: 1}))


def test_inv_needs_finite_cap_for_geometric_tail():
    with pytest.raises(ValueError):
        Laurent.q_polynomial([1, 1], 1).inv()


def test_pow_int_square_of_geometric():
    assert S.pow_int(GEOM(NONE, 6), 2).same_as(tser({n: n + 1 for n in range(7)}))


def test_pow_zero_is_one():
    a = ser({(0, (0,)): 1, (1, (3,)): 5})
    assert S.pow_int(a, 0).same_as(TruncatedSeries.one(Q, 6))


def test_pow_negative_three():
    a = ser({(0, (0,)): 1, (1, (1,)): -1}, 4)
    got = S.pow_int(a, -3)
    # binomial series: (1 - x)^-3 = sum C(n+2, 2) x^n
    for n in range(5):
        assert got[n].terms == {(n,): comb(n + 2, 2)}
    assert qslice(got, 2) == {2: 6}


# -- log / exp -------------------------------------------------------------------


def test_log_of_geometric():
    assert S.log(GEOM(NONE, 6)).same_as(tser({k: Fraction(1, k) for k in range(1, 7)}))


def test_log_exp_round_trip_on_T():
    assert S.log(S.exp(tser({1: 1}))).same_as(tser({1: 1}))


def test_log_inverse_linear():
    z = S.inv(ser({(0, (0,)): 1, (1, (1,)): -1}, 3))
    got = S.log(z)
    for k in range(1, 4):
        assert got[k].terms == {(k,): Fraction(1, k)}


def test_exp_point_zeta():
    assert S.exp(tser({r: Fraction(1, r) for r in range(1, 7)})).same_as(GEOM(NONE, 6))


def test_exp_ga_zeta():
    z = S.exp(ser({(r, (r,)): Fraction(1, r) for r in range(1, 7)}))
    assert all(z[n].terms == {(n,): 1} for n in range(7))


def test_exp_zero():
    assert S.exp(tser({})).same_as(tser({0: 1}))


def test_log_requires_unit_constant():
    with pytest.raises(ValueError):
        S.log(tser({0: 2, 1: 1}))


def test_exp_requires_zero_constant():
    with pytest.raises(ValueError):
        S.exp(tser({0: 1}))


# -- adams / substitution ------------------------------------------------------------


def test_adams_linear():
    a = ser({(0, (0,)): 1, (1, (1,)): -1}, 4)
    assert S.adams(a, 2).same_as(ser({(0, (0,)): 1, (2, (2,)): -1}, 4))


def test_adams_geometric():
    got = S.adams(GEOM(NONE, 7), 3)
    assert got.same_as(tser({0: 1, 3: 1, 6: 1}, 7))
    assert got.T_cap == 7


def test_adams_of_inverse():
    x = TruncatedSeries.constant(qpoly([-1, 1], cap=9).inv(), Q, 0)
    y = S.adams(x, 2)
    assert qslice(y, 0) == {e: -1 for e in range(0, 19, 2)}
    assert y[0].cap == (19,)
    direct = qpoly([-1, 0, 1], cap=19).inv()
    assert y[0].diff(direct) is None


def test_adams_rejects_nonpositive():
    with pytest.raises(ValueError):
        S.adams(GEOM(Q, 3), 0)


def test_adams_rejects_numeric_q():
    with pytest.raises(ModeError):
        S.adams(GEOM(NONE, 3, q_value=2), 2)


def test_subst_geometric():
    got = S.subst_T_monomial(GEOM(Q, 6), (2, (1,)))
    assert got.same_as(ser({(2 * k, (k,)): 1 for k in range(4)}))


def test_subst_gm_zeta_shape():
    gm = ser({(0, (0,)): 1, (1, (0,)): -1}) * S.inv(ser({(0, (0,)): 1, (1, (1,)): -1}))
    got = S.subst_T_monomial(gm, (3, (0,)))
    want = ser({(0, (0,)): 1, (3, (0,)): -1}) * S.inv(ser({(0, (0,)): 1, (3, (1,)): -1}))
    assert got.same_as(want)


def test_subst_point_zeta():
    got = S.subst_T_monomial(GEOM(Q, 5), (1, (2,)))
    assert got.same_as(S.inv(ser({(0, (0,)): 1, (1, (2,)): -1}, 5)))


def test_subst_rejects_degree_zero():
    with pytest.raises(ValueError):
        S.subst_T_monomial(GEOM(Q, 3), (0, (1,)))


# -- coefficients / rational expansion ---------------------------------------------


def test_coeff_of_gm_zeta():
    gm = ser({(0, (0,)): 1, (1, (0,)): -1}) * S.inv(ser({(0, (0,)): 1, (1, (1,)): -1}))
    c = S.coeff_of_T(gm, 2)
    assert c.terms == {(2,): 1, (1,): -1}
    # multiply back by (1 - qT): recovers 1 - T
    back = gm * ser({(0, (0,)): 1, (1, (1,)): -1})
    assert back.same_as(ser({(0, (0,)): 1, (1, (0,)): -1}))


def test_coeff_of_one_beyond_nothing():
    one = TruncatedSeries.one(Q, 5)
    assert S.coeff_of_T(one, 5).is_zero()
    with pytest.raises(PrecisionError):
        S.coeff_of_T(one, 6)


def test_coeff_of_partition_product():
    z = TruncatedSeries.one(Q, 4)
    for n in range(1, 5):
        z = z * S.inv(ser({(0, (0,)): 1, (n, (1,)): -1}, 4))
    assert S.coeff_of_T(z, 2).terms == {(2,): 1, (1,): 1}
    # at q = 2 this is 6, the number of conjugacy classes of M_2(F_2)
    assert S.coeff_of_T(z, 2).evaluate({0: 2}).constant() == 6


def test_expand_rational_paper_anchor():
    s = S.expand_rational_q([1], [-1, 1], 10)[0]
    assert s.terms == {(e,): -1 for e in range(10)}


def test_expand_rational_shifted():
    s = S.expand_rational_q([0, 1], [-1, 1], 10)[0]
    base = S.expand_rational_q([1], [-1, 1], 10)[0]
    assert s.diff(base * Laurent.monomial((1,))) is None
    assert min(k[0] for k in s.terms) == 1


def test_expand_rational_exact_division():
    s = S.expand_rational_q([-1, 0, 1], [-1, 1], 10)[0]
    assert s.is_exact() and s.terms == {(0,): 1, (1,): 1}


def test_expand_rational_zero_denominator():
    with pytest.raises(ZeroDivisionError):
        S.expand_rational_q([1], [0], 5)


# -- serialization ----------------------------------------------------------------


def test_json_round_trip_bit_exact():
    z = S.inv(ser({(0, (0,)): 1, (1, (1,)): Fraction(-2, 3), (2, (-1,)): 5}, 4))
    z = z * TruncatedSeries.constant(qpoly([1, -1], cap=7), Q, 4)
    doc = z.to_json()
    text = json.dumps(doc)
    back = TruncatedSeries.from_json(json.loads(text))
    assert back.same_as(z)
    assert json.dumps(back.to_json()) == text


def test_json_canonical_order():
    z = ser({(1, (3,)): 1, (0, (0,)): 1, (1, (-2,)): 4})
    keys = [(int(t["T"]), [int(e) for e in t["exps"]]) for t in z.to_json()["terms"]]
    assert keys == sorted(keys)


def test_incompatible_modes():
    with pytest.raises(ModeError):
        S.add(GEOM(NONE, 3, q_value=2), GEOM(NONE, 3, q_value=3))
    with pytest.raises(ModeError):
        S.mul(GEOM(NONE, 3), GEOM(Q, 3))


# -- properties -------------------------------------------------------------------

coef = st.integers(-3, 3).map(Fraction) | st.fractions(min_value=-2, max_value=2, max_denominator=4)


@st.composite
def slices(draw, lo=-2, nterms=4, exact=None):
    floor = draw(st.integers(lo, lo + 2))
    exps = draw(st.lists(st.integers(floor, floor + 5), max_size=nterms))
    terms = {(e,): draw(coef) for e in exps}
    if exact is None:
        exact = draw(st.booleans())
    cap = INF if exact else floor + draw(st.integers(3, 8))
    return Laurent(terms, (floor,), (cap,))


@st.composite
def series(draw, T_cap=3, constant="unit"):
    out = []
    if constant == "unit":
        out.append(Laurent.const(1, 1))
    elif constant == "zero":
        out.append(Laurent.zero(1))
    else:
        e = draw(st.integers(-2, 2))
        c = draw(st.sampled_from([1, -1, 2, Fraction(1, 2)]))
        tail = draw(slices(lo=e + 1, exact=False))
        out.append(Laurent({(e,): c}, (e,), (INF,)) + Laurent(tail.terms, tail.floor, tail.cap))
    for _ in range(T_cap):
        out.append(draw(slices()))
    return TruncatedSeries(Q, out)


def agree(a, b):
    return a.first_difference(b) is None


@settings(max_examples=60, deadline=None)
@given(series(constant="unit"))
def test_exp_log_round_trip(a):
    back = S.exp(S.log(a))
    assert agree(back, a)


@settings(max_examples=60, deadline=None)
@given(series(constant="zero"))
def test_log_exp_round_trip(b):
    assert agree(S.log(S.exp(b)), b)


@settings(max_examples=60, deadline=None)
@given(series(constant="any"), series(constant="any"), series(constant="any"))
def test_mul_associative_commutative(a, b, c):
    assert agree(a * b, b * a)
    assert agree((a * b) * c, a * (b * c))


@settings(max_examples=60, deadline=None)
@given(series(constant="any"))
def test_inverse_times_self_is_one(a):
    prod = S.inv(a) * a
    assert agree(prod, TruncatedSeries.one(Q, a.T_cap))


@settings(max_examples=60, deadline=None)
@given(series(T_cap=6, constant="any"), st.integers(1, 3), st.integers(1, 3))
def test_adams_composes(a, j, k):
    assert S.adams(S.adams(a, j), k).same_as(S.adams(a, j * k))


poly = st.lists(st.integers(-3, 3), min_size=1, max_size=5).filter(any)


@settings(max_examples=80, deadline=None)
@given(poly, poly, st.integers(4, 20))
def test_expand_rational_times_denominator(P, Qd, width):
    x = laurent_rational(P, Qd, width)
    back = x * Laurent.q_polynomial(Qd, 1)
    assert back.diff(Laurent.q_polynomial(P, 1)) is None
    assert back.is_exact() or back.cap[0] >= back.floor[0]


def _pipeline(width):
    """A small pipeline with an infinite q-expansion in every coefficient."""
    a = laurent_rational([1], [1, -1, 0, 1], width)
    b = laurent_rational([0, 2], [-1, 0, 1], width)
    z = TruncatedSeries(Q, [Laurent.const(1, 1), a, b, a * b])
    return S.exp(S.log(S.inv(z)) * 3) * S.adams(z, 2)


@pytest.mark.parametrize("small,large", [(6, 12), (8, 20), (10, 11)])
def test_precision_soundness(small, large):
    lo, hi = _pipeline(small), _pipeline(large)
    for x, y in zip(lo.slices, hi.slices):
        assert x.cap <= y.cap
        assert x.floor <= y.floor or not x.terms
        assert x.diff(y) is None
