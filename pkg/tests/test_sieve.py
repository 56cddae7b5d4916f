import math
from fractions import Fraction

import pytest

from ffmoments import Poly, field_from_q, parse_poly
from ffmoments.errors import ConstraintViolation, NonPrimeModulus, NotMonic, ParamOutOfRange, ResidueNotCoprime
from ffmoments.multfn import arith_fn, summatory_closed
from ffmoments.polyring import enumerate_irreducibles, iter_monic
from ffmoments.sieve import (
    H_K,
    SieveParams,
    divisor_class_sums,
    divisor_partition_ok,
    divisor_sum_progression,
    divisor_uniformity_sweep,
    phi_count,
    phi_sifted,
    phi_zero_count,
    psi,
    psi_brute,
    psi_lemma_check,
    psi_rough_complement,
    selberg_remainder,
    selberg_S_brute,
    selberg_S_product,
    selberg_terms,
    sieve_instance,
    smooth_divisor_tail,
    smooth_euler_factor,
)

F2, F3 = field_from_q(2), field_from_q(3)
K3 = parse_poly(F2, "1,1,0,1")


def P(F, text):
    return parse_poly(F, text)


def test_psi_examples():
    assert psi(F2, 3, 1) == 10
    assert psi(F2, 3, 1) == psi_brute(F2, 3, 1)
    for q in (2, 3):
        F = field_from_q(q)
        assert psi(F, 4, 0) == 1
        assert psi(F, 4, 4) == (q**5 - 1) // (q - 1)
        assert psi(F, 4, 7) == (q**5 - 1) // (q - 1)


@pytest.mark.parametrize("q,xmax", [(2, 8), (3, 6)])
def test_psi_partition(q, xmax):
    F = field_from_q(q)
    for x in range(xmax + 1):
        for z in range(x + 2):
            assert psi(F, x, z) + psi_rough_complement(F, x, z) == (q ** (x + 1) - 1) // (q - 1)


def test_psi_matches_factor_route():
    for x in range(6):
        for z in range(4):
            assert psi(F3, x, z) == psi_brute(F3, x, z)


def test_psi_lemma_is_report_only():
    c = psi_lemma_check(F2, 8)
    assert not c.asserted
    with pytest.raises(ParamOutOfRange):
        psi_lemma_check(F2, 1)


@pytest.mark.parametrize("q", (2, 3))
def test_phi_zero_sifting_counts(q):
    F = field_from_q(q)
    K = enumerate_irreducibles(F, 2)[0]
    for a in range(1, q**2):
        A = Poly.from_code(F, a)
        for x in range(2, 6):
            assert phi_count(F, x, 0, K, A) == phi_zero_count(q, x, K, A)


def test_phi_small_example_reported_only():
    value, check = phi_sifted(F2, SieveParams(6, 1, K3, Poly.const(F2, 1)))
    brute = sum(
        1
        for n in range(6)
        for N in iter_monic(F2, n)
        if (N % K3).is_one() and arith_fn("p_minus", N) > 1
    )
    assert value == brute
    assert not check.asserted


def test_phi_monotone_in_z():
    for a in range(1, 8):
        A = Poly.from_code(F2, a)
        vals = [phi_count(F2, 8, z, K3, A) for z in range(8)]
        assert all(u >= v for u, v in zip(vals, vals[1:]))


def test_residue_partition():
    K = P(F3, "1,0,1")
    for x in range(1, 6):
        total = sum(phi_count(F3, x, 0, K, Poly.from_code(F3, a)) for a in range(9))
        assert total == sum(3**n for n in range(x))


def test_sieve_instance_grid():
    for K in enumerate_irreducibles(F2, 2) + enumerate_irreducibles(F2, 3):
        for a in range(1, 2**K.degree):
            for x in (6, 8):
                for z in (2, 3):
                    inst = sieve_instance(F2, SieveParams(x, z, K, Poly.from_code(F2, a)))
                    assert inst.lemma.holds and inst.selberg_crude.holds
                    assert inst.selberg_pairs.holds and inst.selberg_3omega.holds


def test_selberg_remainder_orders():
    rem = selberg_remainder(F2, SieveParams(8, 2, K3, Poly.const(F2, 1)))
    assert rem.R_crude == 64
    assert rem.B == sum(1 for n in range(8) for N in iter_monic(F2, n) if (N % K3).is_one())


def test_selberg_S_examples():
    assert selberg_terms(F2, 1).S == 3
    assert selberg_S_brute(F2, 1, 2) == 4
    assert [selberg_terms(F2, z).S for z in range(1, 6)] == [
        Fraction(3), Fraction(13, 3), Fraction(37, 7), Fraction(671, 105), Fraction(7991, 1085)
    ]


@pytest.mark.parametrize("q", (2, 3))
def test_selberg_corollary_and_dual_route(q):
    F = field_from_q(q)
    for z in range(1, 6 if q == 2 else 5):
        t = selberg_terms(F, z)
        assert t.agree and t.corollary_ok
        for y in range(1, z + 2):
            assert selberg_S_brute(F, z, y) == selberg_S_product(q, z, y)


def test_H_K():
    for x in range(1, 7):
        assert H_K(F2, x, K3).holds
        assert H_K(F2, x).value >= x
        assert H_K(F3, x if x < 6 else 5).holds


def test_progression_errors():
    with pytest.raises(NonPrimeModulus):
        SieveParams(6, 2, P(F2, "1,0,1"), Poly.const(F2, 1))
    with pytest.raises(ResidueNotCoprime):
        SieveParams(6, 2, K3, Poly.from_code(F2, 0))
    with pytest.raises(NotMonic):
        SieveParams(6, 2, P(F3, "1,0,2"), Poly.const(F3, 1))
    with pytest.raises(ConstraintViolation):
        divisor_sum_progression(F2, 6, K3, Poly.const(F2, 1))


def test_divisor_progression_examples():
    x = 8
    K = P(F2, "0,1")
    r = divisor_sum_progression(F2, x, K, Poly.const(F2, 1))
    brute = sum(arith_fn("d", N) for n in range(x + 1) for N in iter_monic(F2, n) if N.coeffs[0] == 1)
    assert r.lhs == brute
    sums = divisor_class_sums(F2, x, K3)
    assert sum(sums.values()) == summatory_closed("d", 2, x)
    total, closed = divisor_partition_ok(F3, 5, P(F3, "1,0,1"))
    assert total == closed


def test_divisor_uniformity_tripwire():
    rows = divisor_uniformity_sweep(F2, 10, enumerate_irreducibles(F2, 2) + enumerate_irreducibles(F2, 3))
    assert max(r.fitted for r in rows) <= 4.0


def test_smooth_tail():
    q = 2
    assert smooth_euler_factor(q, 1) == 16
    rows = [smooth_divisor_tail(F2, 10, r) for r in (1, 2, 3)]
    assert rows[0].bound == 100
    assert all(a.total > b.total for a, b in zip(rows, rows[1:]))
    longer = smooth_divisor_tail(F2, 10, 2, X_max=14)
    assert longer.total == rows[1].total
    with pytest.raises(ParamOutOfRange):
        smooth_divisor_tail(F2, 10, 4)
    with pytest.raises(ParamOutOfRange):
        smooth_divisor_tail(F2, 6, 1, X_max=5)


def test_smooth_tail_example_primes():
    # z=6, r=2: degree <= 3 primes, 2 + 1 + 2 of them
    t = smooth_divisor_tail(F2, 6, 2)
    assert t.y == 3
    assert math.isfinite(t.ratio) and t.total > 0
