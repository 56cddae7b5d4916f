import math

import numpy as np
import pytest

from ffmoments import field_from_q, parse_poly
from ffmoments.chars import unit_group
from ffmoments.errors import NotDeflatable
from ffmoments.lfun import (
    LFamily,
    LPolynomial,
    a_coeffs,
    central_square_shortsum,
    central_value,
    complete,
    l_coeff,
    l_coeffs_bulk,
    l_coeffs_naive,
    l_coeffs_scalar,
    rh_check,
)
from ffmoments.moments import first_irreducible

F2, F3 = field_from_q(2), field_from_q(3)
SMALL = [(2, 2), (2, 3), (2, 5), (3, 2), (3, 3), (4, 2), (5, 2), (4, 3)]


def table(q, deg):
    return unit_group(first_irreducible(field_from_q(q), deg))


def test_trivial_character_row():
    t = unit_group(parse_poly(F3, "1,0,1"))
    L = l_coeffs_naive(t.character(0))
    assert np.allclose(L.coeffs, [1, 3])
    assert np.allclose(l_coeffs_bulk(t)[0], [1, 3])
    assert abs(central_value(L) - (1 + 3**0.5)) < 1e-12


def test_cube_root_example():
    t = unit_group(parse_poly(F2, "1,1,1"))
    L = l_coeffs_naive(t.character(1))
    assert np.allclose(L.coeffs, [1, -1])
    CL = complete(L)
    assert CL.lam == 1 and CL.degree == 0
    assert np.allclose(CL.lambda_poly, [1])
    assert abs(CL.eps - 1) < 1e-12
    assert abs(central_value(L) - (1 - 2**-0.5)) < 1e-12


@pytest.mark.parametrize("q,deg", SMALL)
def test_naive_bulk_scalar_agree(q, deg):
    t = table(q, deg)
    bulk = l_coeffs_bulk(t)
    assert bulk.shape == (t.M, deg)
    assert np.allclose(bulk[:, 0], 1)
    for chi in t.characters(include_trivial=True):
        naive = l_coeffs_naive(chi).coeffs
        assert np.max(np.abs(naive - bulk[chi.j])) < 1e-6
        if t.M <= 64:
            assert np.max(np.abs(l_coeffs_scalar(chi).coeffs - naive)) < 1e-9


@pytest.mark.parametrize("q,deg", SMALL)
def test_vanishing_beyond_deg_q(q, deg):
    t = table(q, deg)
    for chi in t.characters()[:12]:
        assert abs(l_coeff(chi, deg)) < 1e-6
        assert abs(l_coeff(chi, deg + 1)) < 1e-6


@pytest.mark.parametrize("q,deg", SMALL)
def test_completion_functional_equation_rh(q, deg):
    t = table(q, deg)
    for chi in t.characters():
        L = l_coeffs_naive(chi)
        CL = complete(L)
        assert CL.degree == t.D - CL.lam
        assert abs(abs(CL.eps) - 1) < 1e-9
        assert CL.fe_residual < 1e-8
        if CL.lam:
            assert CL.trivial_zero < 1e-8
            back = np.convolve([1, -1], CL.lambda_poly)
            assert np.max(np.abs(back - L.coeffs)) < 1e-9
        rh = rh_check(L, CL)
        assert rh.max_dev < 1e-6
        rc = rh_check(l_coeffs_naive(chi.conj()))
        if rh.roots.size:
            gap = np.abs(rc.roots[:, None] - np.conj(rh.roots)[None, :])
            assert gap.min(axis=1).max() < 1e-9 and gap.min(axis=0).max() < 1e-9
        assert abs(central_value(l_coeffs_naive(chi.conj())) - np.conj(central_value(L))) < 1e-12


def test_family_matches_scalar_completion():
    t = table(3, 3)
    fam = LFamily.build(t)
    for grp in fam.completed():
        for j, eps, fe in zip(grp["rows"], grp["eps"], grp["fe"]):
            CL = complete(l_coeffs_naive(t.character(int(j))))
            assert abs(CL.eps - eps) < 1e-9
            assert fe < 1e-8


def test_not_deflatable():
    t = unit_group(parse_poly(F2, "1,1,1"))
    bad = LPolynomial(t.character(1), np.array([1.0, 0.5]))
    with pytest.raises(NotDeflatable):
        complete(bad, conj_coeffs=np.array([1.0, 0.5]))


def test_a_coeffs_convolution():
    c = np.array([1, 2j, -1])
    A = a_coeffs(c)
    assert np.allclose(A, np.convolve(c, np.conj(c)))


@pytest.mark.parametrize("q,deg", [(2, 2), (2, 3), (3, 2), (2, 4)])
def test_corrected_shortsum_exact(q, deg):
    t = table(q, deg)
    for chi in t.characters():
        cd = central_square_shortsum(l_coeffs_naive(chi))
        assert abs(cd.shortsum_corrected - cd.square_direct) < 1e-8


def test_odd_case_shortsum():
    # odd characters use the unchanged correction term, so both variants hold
    t = unit_group(parse_poly(F3, "1,0,1"))
    for j in (1, 3, 5, 7):
        cd = central_square_shortsum(l_coeffs_naive(t.character(j)))
        assert abs(cd.square_shortsum - cd.square_direct) < 1e-8


def test_real_character_real_values():
    t = unit_group(parse_poly(F3, "1,0,1"))
    cd = central_square_shortsum(l_coeffs_naive(t.character(4)))
    assert abs(cd.value.imag) < 1e-12


def test_printed_even_correction_fails_somewhere():
    # the printed even-case correction does not reproduce |L|^2 at x^3+x+1
    t = unit_group(parse_poly(F2, "1,1,0,1"))
    errs = [
        abs(cd.square_shortsum - cd.square_direct)
        for cd in (central_square_shortsum(l_coeffs_naive(c)) for c in t.characters())
    ]
    assert max(errs) > 1e-3
    assert all(math.isfinite(e) for e in errs)
