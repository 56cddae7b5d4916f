from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ffmoments import Poly, factor, field_from_q, parse_poly
from ffmoments.errors import BoundTooLarge, MissingK, ZeroPolynomial
from ffmoments.multfn import (
    ARITH_NAMES,
    PMINUS_ONE,
    SUMMATORY_NAMES,
    arith_fn,
    binomial_identity,
    binomial_identity_holds,
    divisors,
    dk_sq_summatory_growth,
    dk_squared_series,
    dk_truncated,
    monic_table,
    p_k_poly,
    summatory,
    table_value,
    two_omega_degree_brute,
    two_omega_degree_coeffs,
)
from ffmoments.polyring import gcd, iter_monic

F2, F3 = field_from_q(2), field_from_q(3)


def P(F, text):
    return parse_poly(F, text)


def test_arith_examples():
    one = Poly.const(F2, 1)
    assert arith_fn("d", one) == 1 and arith_fn("mu", one) == 1 and arith_fn("phi", one) == 1
    assert arith_fn("phi", P(F2, "1,1,0,1")) == 7
    assert arith_fn("mu", P(F2, "1,0,1")) == 0
    assert arith_fn("p_plus", one) == 0
    assert arith_fn("p_minus", one) == PMINUS_ONE


def test_arith_errors():
    with pytest.raises(ZeroPolynomial):
        arith_fn("d", Poly.from_code(F2, 0))
    with pytest.raises(MissingK):
        arith_fn("d_k", P(F2, "0,1"))


def test_von_mangoldt_conventions():
    N = P(F2, "1,0,1")  # (x+1)^2
    assert arith_fn("vonMangoldt", N) == 1
    assert arith_fn("vonMangoldt_printed", N) == 2


def test_dk_truncated_examples():
    N = P(F2, "0,1,1")  # x(x+1)
    assert dk_truncated(N, 2, 1) == 2
    assert dk_truncated(N, 2, 2) == arith_fn("d", N)
    assert dk_truncated(P(F2, "1,1,0,1"), 2, 1) == 0  # deg 3 > 2*1


@pytest.mark.parametrize("name", SUMMATORY_NAMES)
@pytest.mark.parametrize("q", (2, 3, 4))
def test_summatory_paths_agree(name, q):
    F = field_from_q(q)
    for x in range(1 if name == "vonMangoldt_degree" else 0, 6 if q < 4 else 4):
        assert summatory(F, name, x).agree


def test_summatory_examples():
    assert summatory(F2, "d_over_norm", 2).brute == 6
    for q in (2, 3, 5):
        assert summatory(field_from_q(q), "two_omega_over_norm", 1).brute == 3
    assert summatory(F2, "d", 0).brute == 1


def test_two_omega_coeffs():
    A = two_omega_degree_coeffs(F2, 6)
    assert A[0] == 1 and A[1] == 2 and A[2] == Fraction(5, 2)
    assert two_omega_degree_brute(F3, 5) == two_omega_degree_coeffs(F3, 5)


def test_p_k_examples():
    assert p_k_poly(1) == (1,)
    assert p_k_poly(2) == (1, 0, -1)
    assert binomial_identity(2, 1) == (1, 1)
    assert all(binomial_identity_holds(k) for k in range(1, 9))


@pytest.mark.parametrize("q", (2, 3))
@pytest.mark.parametrize("k", (1, 2, 3))
def test_dk_squared_series_dual_path(q, k):
    s = dk_squared_series(field_from_q(q), k, 6)
    assert s.agree
    assert s.brute[0] == 1
    if k == 1:
        assert list(s.brute) == [q**n for n in range(7)]


def test_dk_squared_examples():
    assert dk_squared_series(F2, 2, 3).brute[1] == 8
    with pytest.raises(BoundTooLarge):
        dk_squared_series(F2, 2, 9)


def test_growth_examples():
    rows = dk_sq_summatory_growth(F2, 2, 4)
    assert rows[0][:2] == (1, Fraction(5))
    for y, s, _ in dk_sq_summatory_growth(F3, 1, 6):
        assert s == y + 1


@pytest.mark.parametrize("q,nmax", [(2, 8), (3, 6)])
def test_prime_polynomial_theorem(q, nmax):
    T = monic_table(field_from_q(q), nmax)
    for n in range(1, nmax + 1):
        assert int(T.lam[n].sum()) == q**n


def test_mobius_sum_over_divisors():
    for n in range(7):
        for N in iter_monic(F2, n):
            s = sum(arith_fn("mu", D) for D in divisors(N))
            assert s == (1 if n == 0 else 0)


@given(st.sampled_from([F2, F3]), st.data())
@settings(max_examples=40, deadline=None)
def test_dk_multiplicative(F, data):
    a = Poly.from_code(F, data.draw(st.integers(F.q, F.q**4 - 1)) | 0)
    b = Poly.from_code(F, data.draw(st.integers(F.q, F.q**3 - 1)))
    a = a * Poly.const(F, F.inv(a.lead)) if not a.is_monic() else a
    b = b * Poly.const(F, F.inv(b.lead)) if not b.is_monic() else b
    if not gcd(a, b).is_one():
        return
    for k in (1, 2, 3, 4):
        assert arith_fn("d_k", a * b, k) == arith_fn("d_k", a, k) * arith_fn("d_k", b, k)
    assert arith_fn("d_k", a * b, 2) == arith_fn("d", a * b)


@pytest.mark.parametrize("q,X", [(2, 7), (3, 4)])
def test_sieve_table_matches_factorization(q, X):
    F = field_from_q(q)
    T = monic_table(F, X)
    names = [n for n in ARITH_NAMES if n not in ("vonMangoldt_printed", "kernel", "vonMangoldt")]
    for n in range(X + 1):
        for N in iter_monic(F, n):
            for name in names:
                k = 3 if name == "d_k" else None
                assert table_value(T, name, N, k) == arith_fn(name, N, k), (name, N)
            assert int(T.lam[n][N.code - q**n]) == arith_fn("vonMangoldt", N)
            assert int(T.kernel_deg[n][N.code - q**n]) == arith_fn("kernel", N).degree
            assert factor(N).expand(F) == N
