"""L-functions of characters modulo irreducible Q, as polynomials in u = q^-s.

L*(u, chi) = sum_{n <= D} L_n(chi) u^n with L_n = sum over monic N of degree n
of chi(N) and D = deg Q - 1.  Coefficients come from direct summation or, for
all characters at once, from degree histograms of discrete logs pushed through
a length-M DFT.  ``LFamily`` holds that matrix and derives completed
L-functions, root numbers, central values and the short-sum identity for every
character in vectorized form.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .chars import Character, UnitGroupTable, char_eval, even_mask, is_even
from .errors import NotDeflatable
from .polyring import iter_monic, monic_codes, reduce_codes

DEFLATE_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class LPolynomial:
    chi: Character
    coeffs: np.ndarray  # L_0 .. L_D

    @property
    def D(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, u: complex) -> complex:
        return horner(self.coeffs, u)


@dataclass(frozen=True, eq=False)
class CompletedL:
    lambda_poly: np.ndarray
    lam: int
    eps: complex
    fe_residual: float
    trivial_zero: float  # |L*(1)| before deflation (0.0 when not deflated)

    @property
    def degree(self) -> int:
        return len(self.lambda_poly) - 1


@dataclass(frozen=True)
class CentralData:
    value: complex
    square_direct: float
    square_shortsum: float
    pi_correction: complex
    shortsum_corrected: float = float("nan")
    pi_corrected: complex = complex("nan")


def horner(coeffs, u):
    acc = 0j
    for c in reversed(coeffs):
        acc = acc * u + c
    return acc


# -- coefficients ------------------------------------------------------------


def l_coeff(chi: Character, n: int) -> complex:
    """L_n(chi) by direct summation over the monic polynomials of degree n."""
    t = chi.table
    codes = np.arange(monic_codes(t.q, n).start, monic_codes(t.q, n).stop, dtype=np.int64)
    if n >= t.deg:
        codes = reduce_codes(codes, t.Q)
    return complex(chi.values(codes).sum())


def l_coeffs_naive(chi: Character) -> LPolynomial:
    return LPolynomial(chi, np.array([l_coeff(chi, n) for n in range(chi.table.deg)]))


def l_coeffs_scalar(chi: Character) -> LPolynomial:
    """Reference path through Poly objects and char_eval; small moduli only."""
    F = chi.table.field
    return LPolynomial(
        chi, np.array([sum(char_eval(chi, N) for N in iter_monic(F, n)) for n in range(chi.table.deg)])
    )


def degree_histograms(table: UnitGroupTable) -> np.ndarray:
    """h[n, a] = number of monic N of degree n with dlog(N) = a, n <= D."""
    q, M = table.q, table.M
    h = np.zeros((table.deg, M), dtype=np.int64)
    for n in range(table.deg):
        # degree < deg Q: the code is already the residue code
        h[n] = np.bincount(table.dlog[q**n : 2 * q**n], minlength=M)
    return h


def l_coeffs_bulk(table: UnitGroupTable) -> np.ndarray:
    """Matrix [j, n] of L_n(chi_j): sum_a h_n[a] zeta^(j a) = M * ifft(h_n)[j]."""
    h = degree_histograms(table)
    return (table.M * np.fft.ifft(h.astype(np.float64), axis=1)).T.copy()


# -- completion, root number, functional equation ------------------------------


def _deflate(coeffs: np.ndarray) -> tuple[np.ndarray, complex]:
    """Divide by (1 - u): Lambda_n = sum_{k <= n} L_k; the dropped tail is L*(1)."""
    partial = np.cumsum(coeffs, axis=-1)
    return partial[..., :-1], partial[..., -1]


def complete(L: LPolynomial, conj_coeffs: np.ndarray | None = None) -> CompletedL:
    chi = L.chi
    if chi.is_trivial:
        raise ValueError("the trivial character has no completed L-function here")
    lam = 1 if is_even(chi) else 0
    coeffs = np.asarray(L.coeffs, dtype=complex)
    zero = 0.0
    if lam:
        lam_poly, tail = _deflate(coeffs)
        zero = abs(tail)
        if zero >= DEFLATE_TOL:
            raise NotDeflatable(f"|L*(1)| = {zero:.3e} for even chi_{chi.j}")
    else:
        lam_poly = coeffs
    if conj_coeffs is None:
        conj_coeffs = l_coeffs_naive(chi.conj()).coeffs
    b = _deflate(np.asarray(conj_coeffs, dtype=complex))[0] if lam else np.asarray(conj_coeffs, dtype=complex)
    q = chi.table.q
    m = len(lam_poly) - 1
    # Lambda(u, chi) = eps (q^(1/2) u)^m Lambda(1/(qu), conj chi): a_(m-n) = eps q^(m/2-n) b_n
    eps = lam_poly[m] / (q ** (m / 2) * b[0])
    n = np.arange(m + 1)
    resid = np.abs(lam_poly[::-1] - eps * q ** (m / 2 - n) * b)
    return CompletedL(lam_poly, lam, complex(eps), float(resid.max()), zero)


def fe_residual(CL: CompletedL, q: int) -> float:
    return CL.fe_residual


# -- central values and the short-sum identity -------------------------------------


def central_point(q: int) -> float:
    return q**-0.5


def central_value(L: LPolynomial) -> complex:
    return horner(L.coeffs, central_point(L.chi.table.q))


def a_coeffs(coeffs: np.ndarray) -> np.ndarray:
    """A_n = sum_{i+j=n} L_i conj(L_j) for n = 0..2D (last axis)."""
    c = np.asarray(coeffs, dtype=complex)
    D = c.shape[-1] - 1
    out = np.zeros(c.shape[:-1] + (2 * D + 1,), dtype=complex)
    cc = np.conj(c)
    for i in range(D + 1):
        out[..., i : i + D + 1] += c[..., i : i + 1] * cc
    return out


def _A(A: np.ndarray, n: int):
    """A_n with the zero extension below 0."""
    if n < 0:
        return np.zeros(A.shape[:-1], dtype=complex)
    return A[..., n]


def pi_printed(A: np.ndarray, q: int, D: int, even):
    """The correction term exactly as displayed for the two parity cases."""
    c = q**-0.5
    even_val = 2 * c**D * (_A(A, D - 3) - _A(A, D - 2) + _A(A, D - 1)) - (c ** (D - 1) - c ** (D + 1)) * _A(A, D - 2)
    odd_val = c**D * _A(A, D)
    return np.where(even, even_val, odd_val)


def pi_corrected(A: np.ndarray, q: int, D: int, even):
    """Even case rederived through B_n = sum_{k <= n} (n - k + 1) A_k; odd case unchanged."""
    c = q**-0.5

    def B(n):
        if n < 0:
            return np.zeros(A.shape[:-1], dtype=complex)
        w = np.arange(n + 1, 0, -1)
        return (A[..., : n + 1] * w).sum(axis=-1)

    even_val = 2 * c**D * B(D - 2) - (c ** (D - 1) + 2 * c**D - c ** (D + 1)) * B(D - 1)
    odd_val = c**D * _A(A, D)
    return np.where(even, even_val, odd_val)


def short_sum(A: np.ndarray, q: int, D: int):
    """2 sum_{deg NM < D} chi(N) conj(chi(M)) / |NM|^(1/2) = 2 sum_{n<D} q^(-n/2) A_n."""
    c = q**-0.5
    return 2 * (A[..., :D] * c ** np.arange(D)).sum(axis=-1)


def central_square_shortsum(L: LPolynomial) -> CentralData:
    chi = L.chi
    q, D = chi.table.q, chi.table.D
    even = is_even(chi)
    A = a_coeffs(L.coeffs)
    value = central_value(L)
    s = short_sum(A, q, D)
    pp = complex(pi_printed(A, q, D, even))
    pc = complex(pi_corrected(A, q, D, even))
    return CentralData(value, abs(value) ** 2, float((s + pp).real), pp, float((s + pc).real), pc)


# -- RH sanity check ---------------------------------------------------------------


@dataclass(frozen=True)
class RHReport:
    degree: int
    max_dev: float
    roots: np.ndarray = field(repr=False)


def lambda_roots(lambda_polys: np.ndarray, q: int) -> np.ndarray:
    """Roots of each row (u-plane), via batched companion eigenvalues in v = sqrt(q) u."""
    P = np.atleast_2d(np.asarray(lambda_polys, dtype=complex))
    m = P.shape[1] - 1
    if m == 0:
        return np.zeros((P.shape[0], 0), dtype=complex)
    scaled = P * q ** (-np.arange(m + 1) / 2)
    monic = scaled[:, :m] / scaled[:, m : m + 1]
    comp = np.zeros((P.shape[0], m, m), dtype=complex)
    comp[:, 1:, :-1] = np.eye(m - 1)
    comp[:, :, -1] = -monic
    return np.linalg.eigvals(comp) / np.sqrt(q)


def rh_check(L: LPolynomial, CL: CompletedL | None = None) -> RHReport:
    CL = complete(L) if CL is None else CL
    q = L.chi.table.q
    roots = lambda_roots(CL.lambda_poly, q)[0]
    dev = float(np.max(np.abs(np.abs(roots) - q**-0.5))) if roots.size else 0.0
    return RHReport(CL.degree, dev, roots)


# -- all characters of one modulus ---------------------------------------------------


@dataclass(eq=False)
class LFamily:
    """Every chi_j mod Q at once; row j of ``coeffs`` is L*(u, chi_j)."""

    table: UnitGroupTable
    coeffs: np.ndarray
    even: np.ndarray

    @classmethod
    def build(cls, table: UnitGroupTable) -> LFamily:
        return cls(table, l_coeffs_bulk(table), even_mask(table))

    @property
    def q(self) -> int:
        return self.table.q

    @property
    def D(self) -> int:
        return self.table.D

    @property
    def M(self) -> int:
        return self.table.M

    def nontrivial(self) -> np.ndarray:
        return np.arange(1, self.M)

    def central_values(self) -> np.ndarray:
        return self.coeffs @ (central_point(self.q) ** np.arange(self.D + 1))

    def a_coeffs(self) -> np.ndarray:
        return a_coeffs(self.coeffs)

    def groups(self):
        """(rows, lambda-polys, conjugate lambda-polys, lam, trivial-zero sizes) per parity."""
        j = self.nontrivial()
        out = []
        for lam in (1, 0):
            sel = j[self.even[j] == bool(lam)]
            if sel.size == 0:
                continue
            c = self.coeffs[sel]
            cb = self.coeffs[(-sel) % self.M]
            if lam:
                lp, tail = _deflate(c)
                lb, _ = _deflate(cb)
                zero = np.abs(tail)
            else:
                lp, lb, zero = c, cb, np.zeros(sel.size)
            out.append((sel, lp, lb, lam, zero))
        return out

    def completed(self):
        """Per parity group: rows, Lambda coefficients, eps, FE residuals, trivial-zero sizes."""
        res = []
        for sel, lp, lb, lam, zero in self.groups():
            m = lp.shape[1] - 1
            eps = lp[:, m] / (self.q ** (m / 2) * lb[:, 0])
            n = np.arange(m + 1)
            resid = np.abs(lp[:, ::-1] - eps[:, None] * self.q ** (m / 2 - n) * lb).max(axis=1)
            res.append(dict(rows=sel, lam=lam, poly=lp, eps=eps, fe=resid, zero=zero, degree=m))
        return res
