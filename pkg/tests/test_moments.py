import math
from fractions import Fraction

import numpy as np
import pytest

from ffmoments import field_from_q, parse_poly
from ffmoments.chars import unit_group
from ffmoments.errors import UnsupportedK
from ffmoments.lfun import LFamily, l_coeffs_naive, central_value
from ffmoments.moments import (
    barnes_g,
    conjecture_constants,
    diagonal_closed_brute,
    diagonal_closed_poly,
    diagonal_param,
    first_irreducible,
    first_moment,
    fourth_moment_decompose,
    g_ratio,
    lower_bound_quantities,
    moment,
    nonvanishing_stats,
    offdiagonal_truncated,
    quadruple_sums,
    second_moment_exact,
)

F2, F3 = field_from_q(2), field_from_q(3)
Q3 = parse_poly(F2, "1,1,0,1")


def table(q, deg):
    return unit_group(first_irreducible(field_from_q(q), deg))


def test_second_moment_small_example():
    r = moment(unit_group(Q3), 2)
    t = unit_group(Q3)
    direct = sum(abs(central_value(l_coeffs_naive(c))) ** 2 for c in t.characters()) / 7
    assert abs(r.value - direct) < 1e-12
    assert abs(r.value - (10 - 6 * math.sqrt(2)) / 7) < 1e-12
    assert r.predicted == 2
    assert moment(unit_group(Q3), 4).predicted == pytest.approx(1 / 24 * 16)


@pytest.mark.parametrize("q,deg", [(2, 3), (2, 6), (3, 4), (5, 3)])
def test_second_moment_exact_identity(q, deg):
    r = moment(table(q, deg), 2)
    assert abs(r.value - second_moment_exact(q, deg - 1)) < 1e-8


def test_first_moment_example():
    r = first_moment(unit_group(Q3))
    t = unit_group(Q3)
    direct = sum(central_value(l_coeffs_naive(c)) for c in t.characters()) / 7
    assert abs(r.value - direct.real) < 1e-12
    assert abs(r.value - (1 - (3 + math.sqrt(2)) / 7)) < 1e-12
    assert abs(r.extra["imag"]) < 1e-9


def test_first_moment_residual_rate():
    Ds = range(2, 9)
    res = [abs(first_moment(table(2, D + 1)).residual) for D in Ds]
    slope = np.polyfit(list(Ds), np.log2(res), 1)[0]
    assert abs(slope + 0.5) <= 0.2


def test_naive_and_bulk_moments_agree():
    t = table(3, 3)
    naive = np.array([abs(central_value(l_coeffs_naive(c))) for c in t.characters()])
    for two_k in (2, 4, 6):
        assert abs(moment(t, two_k).value - np.sum(naive**two_k) / t.M) < 1e-7


def test_diagonal_examples():
    assert diagonal_closed_poly(2, 1) == 1
    assert diagonal_closed_poly(2, 2) == 6
    assert diagonal_closed_brute(F2, 2) == 6
    assert diagonal_param(F2, 1) == 1
    assert diagonal_param(F2, 2) == 3


@pytest.mark.parametrize("q,D", [(2, 1), (2, 2), (2, 3), (2, 4), (3, 2), (3, 3)])
def test_parametrization_matches_enumeration(q, D):
    diag, _ = quadruple_sums(field_from_q(q), D)
    assert diag == diagonal_param(field_from_q(q), D)


@pytest.mark.parametrize("q,D", [(2, 1), (2, 3), (2, 5), (3, 4)])
def test_closed_polynomial_matches_degree_sum(q, D):
    assert diagonal_closed_poly(q, D) == diagonal_closed_brute(field_from_q(q), D)


@pytest.mark.parametrize("q,deg", [(2, 3), (2, 5), (3, 3)])
def test_fourth_moment_reassembly(q, deg):
    dec = fourth_moment_decompose(table(q, deg))
    assert abs(dec.reassembled - dec.direct) < 1e-7
    assert dec.diagonal_enum == dec.diagonal_param
    # I equals diagonal plus congruent off-diagonal weight, less the trivial character
    assert dec.offdiag_enum is not None


def test_offdiagonal_vanishes_in_short_range():
    t = table(2, 6)
    assert offdiagonal_truncated(F2, t, 2, 2) == 0
    assert offdiagonal_truncated(F2, t, 3, 2) == 0
    assert offdiagonal_truncated(F2, t, 4, 4) > 0


def test_nonvanishing_example():
    s = nonvanishing_stats(unit_group(Q3))
    assert s.count == 6 and s.ok


@pytest.mark.parametrize("q,deg", [(2, 4), (2, 7), (3, 4)])
def test_nonvanishing_bound(q, deg):
    assert nonvanishing_stats(table(q, deg)).ok


def test_lower_bound_degenerate_truncation():
    t = unit_group(Q3)
    lb = lower_bound_quantities(t, 2)  # D=2, x=0
    assert lb.x == 0
    assert lb.S2 == pytest.approx(t.M - 1)
    fm = sum(central_value(l_coeffs_naive(c)) for c in t.characters())
    assert abs(lb.S1 - fm) < 1e-12


@pytest.mark.parametrize("q,deg,k", [(2, 5, 1), (2, 7, 1), (2, 7, 2), (3, 4, 1), (3, 5, 2)])
def test_holder_and_s2_exact(q, deg, k):
    lb = lower_bound_quantities(table(q, deg), k)
    assert lb.holder_ok
    assert abs(lb.S2 - lb.S2_exact) <= 1e-8 * max(1.0, lb.S2)


def test_barnes_and_g():
    assert [barnes_g(n) for n in range(1, 8)] == [1, 1, 1, 2, 12, 288, 34560]
    assert g_ratio(1) == 1
    assert g_ratio(2) == Fraction(1, 12)
    assert conjecture_constants(2).g == Fraction(1, 12)
    with pytest.raises(UnsupportedK):
        conjecture_constants(4)


def test_a2_series_form_is_exact():
    cc = conjecture_constants(2, 2)
    assert abs(cc.a_squared_series - 0.5) < 1e-12
    assert abs(conjecture_constants(1, 3).a_squared - 1) < 1e-12


def test_fourth_moment_family_is_deterministic():
    t = table(2, 8)
    a = moment(LFamily.build(t), 4).value
    b = moment(LFamily.build(t), 4).value
    assert a == b
