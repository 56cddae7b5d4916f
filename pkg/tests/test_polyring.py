import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ffmoments import Poly, factor, field_from_q, is_irreducible, parse_poly
from ffmoments.errors import DivisionByZero, NotMonic, ParseError, ZeroPolynomial
from ffmoments.polyring import (
    ZERO_DEGREE,
    enumerate_irreducibles,
    enumerate_monic,
    gcd,
    iter_monic,
    mul_fixed_matrix,
    code_digits,
    digits_code,
    powmod,
    prime_count,
    prime_count_formula,
    reduce_codes,
)

F2, F3, F4 = field_from_q(2), field_from_q(3), field_from_q(4)


def P(F, text):
    return parse_poly(F, text)


def test_arith_examples():
    assert gcd(P(F2, "1,0,1"), P(F2, "1,1")) == P(F2, "1,1")
    assert divmod(P(F2, "1,1,0,1"), Poly.x(F2)) == (P(F2, "1,0,1"), P(F2, "1"))
    assert P(F3, "1,1") * P(F3, "2,1") == P(F3, "2,0,1")


def test_codec_examples():
    assert Poly.from_code(F2, 0).is_zero()
    assert P(F2, "1,1,0,1").code == 11
    assert P(F3, "1,0,1").code == 10
    assert Poly.from_code(F3, 10) == P(F3, "1,0,1")


def test_zero_degree_is_a_marker():
    z = Poly.from_code(F2, 0)
    assert z.degree is ZERO_DEGREE
    assert z.degree != -1
    with pytest.raises(TypeError):
        z.degree + 1


def test_enumerate_monic_examples():
    assert [N.code for N in enumerate_monic(F2, 0)] == [1]
    assert [str(N) for N in enumerate_monic(F2, 2)] == ["x^2", "x^2 + 1", "x^2 + x", "x^2 + x + 1"]
    assert [str(N) for N in enumerate_monic(F3, 1)] == ["x", "x + 1", "x + 2"]


def test_irreducible_examples():
    assert is_irreducible(P(F2, "1,1,0,1"))
    assert is_irreducible(P(F3, "1,0,1"))
    assert not is_irreducible(P(F2, "1,0,1"))
    with pytest.raises(NotMonic):
        is_irreducible(P(F3, "1,0,2"))


def test_prime_count_examples():
    assert [prime_count(F2, n) for n in (1, 2, 3, 4)] == [2, 1, 2, 3]
    assert prime_count(F3, 1) == 3


@pytest.mark.parametrize("q,nmax", [(2, 10), (3, 7), (4, 5), (5, 4)])
def test_prime_count_formula_vs_enumeration(q, nmax):
    F = field_from_q(q)
    for n in range(1, nmax + 1):
        assert prime_count(F, n) == prime_count_formula(q, n)


def test_factor_examples():
    f = factor(P(F2, "1,0,1"))
    assert f.factors == ((P(F2, "1,1"), 2),)
    assert factor(P(F2, "1,1,0,1")).factors == ((P(F2, "1,1,0,1"), 1),)
    assert factor(Poly.const(F3, 1)).factors == ()
    with pytest.raises(ZeroPolynomial):
        factor(Poly.from_code(F2, 0))


@pytest.mark.parametrize("q,nmax", [(2, 8), (3, 5)])
def test_factor_roundtrip_exhaustive(q, nmax):
    F = field_from_q(q)
    for n in range(nmax + 1):
        for N in iter_monic(F, n):
            fac = factor(N)
            assert fac.expand(F) == N
            primes = [Q for Q, _ in fac.factors]
            assert len(set(primes)) == len(primes)
            assert all(is_irreducible(Q) for Q in primes)


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        divmod(P(F2, "1,1"), Poly.from_code(F2, 0))


def test_parse_errors():
    with pytest.raises(ParseError):
        parse_poly(F2, "1,2")
    with pytest.raises(ParseError):
        parse_poly(F2, "x+1")


def polys(F, maxdeg=6):
    return st.lists(st.integers(0, F.q - 1), min_size=1, max_size=maxdeg + 1).map(lambda c: Poly(F, tuple(c)))


@given(st.sampled_from([F2, F3, F4]), st.data())
@settings(max_examples=80, deadline=None)
def test_ring_properties(F, data):
    a = data.draw(polys(F))
    b = data.draw(polys(F))
    c = data.draw(polys(F))
    assert a * (b + c) == a * b + a * c
    assert (a - b) + b == a
    if not b.is_zero():
        qt, r = divmod(a, b)
        assert qt * b + r == a
        assert r.is_zero() or r.degree < b.degree
    if not a.is_zero() and not b.is_zero():
        assert (a * b).norm == a.norm * b.norm
        g = gcd(a, b)
        assert g.divides(a) and g.divides(b)


@given(st.sampled_from([F2, F3, F4]), st.data())
@settings(max_examples=60, deadline=None)
def test_codec_roundtrip(F, data):
    a = data.draw(polys(F))
    assert Poly.from_code(F, a.code) == a


@given(st.sampled_from([F2, F3, F4]), st.data())
@settings(max_examples=40, deadline=None)
def test_linear_maps_match_scalar_arithmetic(F, data):
    Q = enumerate_irreducibles(F, data.draw(st.integers(2, 4)))[0]
    codes = np.array([data.draw(st.integers(0, F.q**6 - 1)) for _ in range(8)], dtype=np.int64)
    red = reduce_codes(codes, Q)
    assert [int(r) for r in red] == [(Poly.from_code(F, int(c)) % Q).code for c in codes]
    G = data.draw(polys(F, 3))
    width = 4
    dig = code_digits(codes % F.q**width, F.p, F.n * width)
    prod = digits_code((dig @ mul_fixed_matrix(G, width)) % F.p, F.p)
    assert [int(v) for v in prod] == [(Poly.from_code(F, int(c % F.q**width)) * G).code for c in codes]


def test_powmod_fermat():
    Q = P(F3, "1,0,1")
    for c in range(1, 9):
        assert powmod(Poly.from_code(F3, c), 8, Q).is_one()
