import cmath

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ffmoments import Poly, field_from_q, parse_poly
from ffmoments.chars import (
    char_eval,
    dlog_roundtrip,
    dlog_roundtrip_scalar,
    even_mask,
    is_even,
    is_even_direct,
    orthogonality_check,
    unit_group,
)
from ffmoments.errors import DegreeTooLarge, NotIrreducible, NotMonic
from ffmoments.moments import first_irreducible

F2, F3 = field_from_q(2), field_from_q(3)


def P(F, text):
    return parse_poly(F, text)


def test_generator_examples():
    assert unit_group(P(F2, "1,1,0,1")).g == P(F2, "0,1")
    assert unit_group(P(F3, "1,0,1")).g == P(F3, "1,1")
    assert unit_group(P(F2, "1,1,1")).g == P(F2, "0,1")
    assert unit_group(P(F2, "1,1,0,1")).M == 7


def test_dlog_and_order_four_character():
    t = unit_group(P(F3, "1,0,1"))
    x = P(F3, "0,1")
    assert t.log(x) == 6
    assert abs(char_eval(t.character(2), x) - (-1)) < 1e-12


def test_trivial_values():
    t = unit_group(P(F3, "1,0,1"))
    one = Poly.const(F3, 1)
    for chi in t.characters(include_trivial=True):
        assert abs(chi(one) - 1) < 1e-12
        assert chi(t.Q) == 0
    assert abs(t.character(0)(P(F3, "2,1")) - 1) < 1e-12


def test_even_examples():
    t = unit_group(P(F2, "1,1,0,1"))
    assert all(is_even(c) for c in t.characters(include_trivial=True))
    t3 = unit_group(P(F3, "1,0,1"))
    evens = [c.j for c in t3.characters(include_trivial=True) if is_even(c)]
    assert evens == [0, 2, 4, 6]


@pytest.mark.parametrize("q,deg", [(2, 5), (3, 3), (4, 3), (5, 2), (9, 2)])
def test_even_count_both_routes(q, deg):
    t = unit_group(first_irreducible(field_from_q(q), deg))
    mask = even_mask(t)
    assert mask.sum() == t.M // (q - 1)
    assert np.array_equal(np.flatnonzero(mask), t.even_indices())
    for c in t.characters(include_trivial=True)[:40]:
        assert is_even_direct(c) == bool(mask[c.j])


def test_orthogonality_example():
    t = unit_group(P(F2, "1,1,0,1"))
    s = sum(char_eval(c, P(F2, "0,1")) * char_eval(c, P(F2, "1,1")).conjugate() for c in t.characters(True))
    assert abs(s) < 1e-12


@pytest.mark.parametrize("q,deg", [(2, 3), (2, 9), (3, 4), (2, 12)])
def test_orthogonality_relations(q, deg):
    r = orthogonality_check(unit_group(first_irreducible(field_from_q(q), deg)))
    assert r.ok
    assert r.exhaustive == (r.M <= 512)


@pytest.mark.parametrize("q,deg", [(2, 8), (3, 5), (5, 3)])
def test_dlog_roundtrip_two_ways(q, deg):
    t = unit_group(first_irreducible(field_from_q(q), deg))
    assert dlog_roundtrip(t)
    assert dlog_roundtrip_scalar(t, np.flatnonzero(t.dlog >= 0)[:64])


@given(st.sampled_from([(2, 6), (3, 4)]), st.data())
@settings(max_examples=50, deadline=None)
def test_complete_multiplicativity(qd, data):
    F = field_from_q(qd[0])
    t = unit_group(first_irreducible(F, qd[1]))
    chi = t.character(data.draw(st.integers(0, t.M - 1)))
    A = Poly.from_code(F, data.draw(st.integers(1, F.q**7)))
    B = Poly.from_code(F, data.draw(st.integers(1, F.q**7)))
    assert abs(chi(A * B) - chi(A) * chi(B)) < 1e-12
    assert abs(chi(A + t.Q * B) - chi(A)) < 1e-12
    assert abs((chi * chi.conj())(A) - abs(chi(A)) ** 2) < 1e-12


def test_errors():
    with pytest.raises(NotIrreducible):
        unit_group(P(F2, "1,0,1"))
    with pytest.raises(NotMonic):
        unit_group(P(F3, "1,0,2"))
    with pytest.raises(DegreeTooLarge):
        unit_group(first_irreducible(F2, 21))
    with pytest.raises(DegreeTooLarge):
        unit_group(first_irreducible(F2, 6), bound=32)


def test_character_values_are_roots_of_unity():
    t = unit_group(P(F3, "1,0,1"))
    chi = t.character(3)
    assert chi.order == 8
    v = chi(P(F3, "0,1"))
    assert abs(v - cmath.exp(2j * cmath.pi * 3 * 6 / 8)) < 1e-12
