import itertools

import numpy as np
import pytest

from coloring_zeta.oracle import (
    BudgetExceeded,
    FieldError,
    FieldSpec,
    OracleError,
    centralizer_order_gl,
    commutant_dim,
    count_classes_gl,
    count_classes_mn,
    count_unipotent,
    gamma,
    gamma_prime,
    gf,
    gl_order_enum,
    run,
)
from coloring_zeta.oracle.counts import decode, encode, enumerate_sum
from coloring_zeta.oracle.field import is_irreducible
from coloring_zeta.oracle.linalg import matmul, rank, rref, rref_scalar
from coloring_zeta.variety import gl_order

# -- fields ----------------------------------------------------------------------------


def test_f2_addition():
    assert gf(2).add[1, 1] == 0


def test_f4_x_squared():
    F = gf(4)
    x = 2  # element x of F_2[x]/(x^2+x+1)
    assert F.mul[x, x] == 3  # x + 1


def test_f3_inverse():
    assert gf(3).inv[2] == 2


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9])
def test_field_axioms(q):
    F = gf(q)
    els = range(q)
    for a, b, c in itertools.product(els, repeat=3):
        assert F.mul[a, F.add[b, c]] == F.add[F.mul[a, b], F.mul[a, c]]
        assert F.mul[F.mul[a, b], c] == F.mul[a, F.mul[b, c]]
    for a in range(1, q):
        assert F.mul[a, F.inv[a]] == 1
        assert F.add[a, F.neg[a]] == 0
    # multiplicative group is cyclic of order q - 1
    orders = []
    for a in range(1, q):
        x, k = a, 1
        while x != 1:
            x, k = F.mul[x, a], k + 1
        orders.append(k)
    assert max(orders) == q - 1


def test_reducible_modulus_rejected():
    with pytest.raises(FieldError):
        FieldSpec(2, 2, (1, 0, 1))  # x^2 + 1 = (x + 1)^2 over F_2
    with pytest.raises(FieldError):
        FieldSpec.of_order(6)
    with pytest.raises(FieldError):
        FieldSpec.of_order(16)


def test_irreducibility_check():
    assert is_irreducible((1, 1, 0, 1), 2)
    assert not is_irreducible((1, 0, 0, 1), 2)  # x^3 + 1 has root 1
    assert is_irreducible((2, 2, 1), 3)
    assert not is_irreducible((1, 0, 1), 5)  # x^2 + 1 has roots 2, 3 mod 5


def test_custom_modulus_same_counts():
    # x^2 + x + 2 is another irreducible quadratic over F_3
    spec = FieldSpec(3, 2, (2, 1, 1))
    assert count_classes_gl(2, spec) == count_classes_gl(2, 9) == 80


# -- linear algebra ----------------------------------------------------------------------


def test_commutant_dims():
    assert commutant_dim([[0, 0], [0, 0]], 2) == 4
    assert commutant_dim([[1, 0], [0, 0]], 2) == 2
    assert commutant_dim([[0, 1], [0, 0]], 2) == 2


@pytest.mark.parametrize("q", [2, 3, 4])
def test_batch_rref_matches_scalar(q):
    F = gf(q)
    M = np.random.default_rng(q).integers(0, q, (150, 4, 6))
    R, rk = rref(M, F)
    for i in range(len(M)):
        r2, k2 = rref_scalar(M[i], F)
        assert k2 == rk[i]
        assert (np.array(r2) == R[i]).all()


def test_rank_of_identity_and_products():
    F = gf(5)
    A = decode(0, 625, 2, 5)
    AB = matmul(A, A[::-1], F)
    ra, rb, rab = rank(A, F), rank(A[::-1], F), rank(AB, F)
    assert (rab <= np.minimum(ra, rb)).all()
    assert ((ra == 2) & (rb == 2) <= (rab == 2)).all()


def test_encode_decode():
    A = [[1, 0, 2], [0, 2, 1], [1, 1, 1]]
    i = encode(A, 3)
    assert (decode(i, i + 1, 3, 3)[0] == np.array(A)).all()
    assert (decode(0, 1, 2, 2)[0] == 0).all()


@pytest.mark.parametrize("q", [2, 3])
def test_commutant_dim_bounds_and_nonderogatory(q):
    """dim >= n always; equality exactly for non-derogatory A (n = 2: non-scalar)."""
    for idx in range(q**4):
        A = decode(idx, idx + 1, 2, q)[0]
        dim = commutant_dim(A, q)
        scalar = A[0, 1] == 0 and A[1, 0] == 0 and A[0, 0] == A[1, 1]
        assert dim >= 2
        assert (dim == 2) == (not scalar)


# -- counts ----------------------------------------------------------------------------------


def test_unipotent_examples():
    assert count_unipotent(1, 2) == 1
    assert count_unipotent(2, 2) == 4
    assert count_unipotent(3, 3) == 729


@pytest.mark.parametrize("n,q", [(1, 2), (2, 2), (3, 2), (2, 3), (3, 3), (4, 2), (2, 4), (2, 5)])
def test_unipotent_formula(n, q):
    assert count_unipotent(n, q) == q ** (n * n - n)


def test_gl_classes_examples():
    assert [count_classes_gl(1, q) for q in (2, 3, 4, 5)] == [1, 2, 3, 4]
    assert count_classes_gl(2, 2) == 3
    assert count_classes_gl(3, 2) == 6


def test_mn_classes_examples():
    assert [count_classes_mn(1, q) for q in (2, 3)] == [2, 3]
    assert count_classes_mn(2, 2) == 6
    assert count_classes_mn(3, 2) == 14


def test_gamma_examples():
    assert gamma(1, 3) == 9
    assert gamma(2, 2) == 88  # 2 scalars * 16 + 14 others * 4


def test_gamma_prime_examples():
    assert gamma_prime(1, 3) == 3 * 2
    assert gamma_prime(2, 2) == 36
    assert gamma_prime(2, 3) == 48 * 12


def test_gl_order_enumeration():
    assert [gl_order_enum(n, 2) for n in (1, 2, 3)] == [1, 6, 168]
    assert gl_order_enum(2, 3) == 48


def test_centralizer_orders():
    assert centralizer_order_gl([[1, 0], [0, 1]], 2) == 6
    assert centralizer_order_gl([[1, 1, 0], [0, 1, 0], [0, 0, 1]], 2) == 8
    assert centralizer_order_gl([[1, 0], [0, 2]], 3) == 4


def test_centralizer_needs_invertible():
    with pytest.raises(OracleError):
        centralizer_order_gl([[1, 1], [1, 1]], 2)


def _class_reps(n, q):
    """Conjugacy class representatives of GL_n(F_q) by explicit orbit sweeping."""
    F = gf(q)
    allm = decode(0, q ** (n * n), n, q)
    G = allm[rank(allm, F) == n]
    inv = {}
    for g in G:
        for h in G:
            if (matmul(g[None], h[None], F)[0] == np.eye(n, dtype=int)).all():
                inv[encode(g, q)] = h
                break
    seen, reps = set(), []
    for g in G:
        key = encode(g, q)
        if key in seen:
            continue
        reps.append(g)
        for h in G:
            c = matmul(matmul(h[None], g[None], F), inv[encode(h, q)][None], F)[0]
            seen.add(encode(c, q))
    return G, reps


@pytest.mark.parametrize("q", [2, 3])
def test_class_equation(q):
    G, reps = _class_reps(2, q)
    assert len(reps) == count_classes_gl(2, q)
    assert sum(len(G) // centralizer_order_gl(r, q) for r in reps) == len(G)


@pytest.mark.parametrize("n,q", [(1, 2), (2, 2), (3, 2), (1, 3), (2, 3), (3, 3)])
def test_burnside_identity(n, q):
    assert gamma_prime(n, q) == gl_order(n, q) * count_classes_mn(n, q)


# -- paths, budgets, determinism ------------------------------------------------------------


@pytest.mark.parametrize("kind", ["unipotent", "commuting", "mn-classes", "gl-classes", "commuting-glmn"])
@pytest.mark.parametrize("n,q", [(2, 2), (2, 3), (2, 4)])
def test_scalar_and_batch_paths_agree(kind, n, q):
    assert enumerate_sum(kind, n, q, method="scalar") == enumerate_sum(kind, n, q, method="batch")


def test_parallel_matches_sequential():
    for kind in ("commuting", "gl-classes"):
        seq = enumerate_sum(kind, 3, 2, workers=1)
        par = enumerate_sum(kind, 3, 2, workers=2)
        assert seq == par


def test_budget_exceeded():
    with pytest.raises(BudgetExceeded):
        gamma(3, 2, budget=100)


def test_budget_env_caps(monkeypatch):
    monkeypatch.setenv("COLORING_ZETA_BUDGET", "50")
    with pytest.raises(BudgetExceeded):
        gamma(3, 2, budget=10**6)
    monkeypatch.setenv("COLORING_ZETA_BUDGET", "nope")
    with pytest.raises(OracleError):
        gamma(1, 2)


def test_bounds():
    with pytest.raises(OracleError):
        gamma(5, 2)
    with pytest.raises(OracleError):
        gamma(0, 2)
    with pytest.raises(FieldError):
        gamma(1, 11)


def test_run_report():
    res = run("mn-classes", 2, 3)
    doc = res.to_json()
    assert doc["count"] == "12" and doc["kind"] == "mn-classes" and doc["q"] == 3
    assert "elapsed_ms" in doc and "elapsed_ms" not in res.to_json(timing=False)
    with pytest.raises(OracleError):
        run("bogus", 2, 2)
