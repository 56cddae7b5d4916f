"""Moments of L(1/2, chi) over the nontrivial characters modulo irreducible Q.

Every mean is normalized by phi(Q) = |Q| - 1 and computed by direct summation
over characters (the oracle).  Exact companions come from orthogonality:
for deg N, deg M < deg Q the congruence N = M mod Q forces N = M, so second
moments and the S_2 quantity of the lower-bound argument reduce to counts.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from .chars import UnitGroupTable, unit_group
from .errors import DegreeTooLarge, UnsupportedK
from .ffq import FieldSpec
from .lfun import LFamily, a_coeffs, pi_corrected, pi_printed
from .multfn import dk_truncated_from_exponents, monic_table, p_k_poly, poly_mul_int, poly_pow_int
from .polyring import (
    Poly,
    digits_code,
    enumerate_irreducibles,
    factor,
    monic_block_digits,
    mul_fixed_matrix,
    prime_count_formula,
)

CONJ_BOUND = 12


@dataclass
class MomentReport:
    q: int
    modulus: int
    D: int
    order: int
    value: float
    predicted: float
    residual: float
    residual_normalized: float
    exact: float = float("nan")
    extra: dict = field(default_factory=dict)

    def row(self) -> dict:
        out = asdict(self)
        out.update(out.pop("extra"))
        return out


def first_irreducible(F: FieldSpec, deg: int) -> Poly:
    return enumerate_irreducibles(F, deg)[0] if deg <= 8 else _scan_irreducible(F, deg)


def _scan_irreducible(F: FieldSpec, deg: int) -> Poly:
    from .polyring import is_irreducible, iter_monic

    for N in iter_monic(F, deg):
        if is_irreducible(N):
            return N
    raise AssertionError("no irreducible found")


def _family(table_or_fam) -> LFamily:
    if isinstance(table_or_fam, LFamily):
        return table_or_fam
    return LFamily.build(table_or_fam)


def central_abs(fam: LFamily) -> np.ndarray:
    """|L(1/2, chi_j)| for j = 1..M-1."""
    return np.abs(fam.central_values()[1:])


def half_powers_sum(q: int, upto: int) -> float:
    return sum(q ** (n / 2) for n in range(upto + 1))


def second_moment_exact(q: int, D: int) -> float:
    """(1/phi) sum_{chi != chi_0} |L(1/2, chi)|^2 = (D + 1) - (sum_{n<=D} q^(n/2))^2 / phi."""
    phi = q ** (D + 1) - 1
    return (D + 1) - half_powers_sum(q, D) ** 2 / phi


def first_moment_exact(q: int, D: int) -> float:
    phi = q ** (D + 1) - 1
    return 1 - half_powers_sum(q, D) / phi


# -- conjecture constants ------------------------------------------------------


def barnes_g(n: int) -> int:
    """G(n) for integer n >= 1 from G(1) = 1, G(m + 1) = (m - 1)! G(m)."""
    if n < 1:
        raise ValueError("Barnes G tabulated for n >= 1")
    g = 1
    for m in range(1, n):
        g *= math.factorial(m - 1)
    return g


def g_ratio(k: int) -> Fraction:
    return Fraction(barnes_g(k + 1) ** 2, barnes_g(2 * k + 1))


@dataclass(frozen=True)
class ConjectureConstants:
    k: int
    q: int
    bound: int
    g: Fraction
    a_squared: float  # prod over primes of degree <= bound of p_k(1/|P|)
    a_plain: float  # same with the unsquared local factor (1 - x)^(k^2 - k)
    a_squared_series: float  # product multiplied out in T, truncated at T^bound, at T = 1/q
    a_plain_series: float


def _local_plain(k: int, nmax: int) -> list[Fraction]:
    """(1 - x)^(k^2) sum_m d_k(P^m) x^m = (1 - x)^(k^2 - k), as a polynomial."""
    e = k * k - k
    return [Fraction((-1) ** i * math.comb(e, i)) for i in range(e + 1)]


def _series_product(q: int, local: list, bound: int) -> float:
    acc = [1] + [0] * bound
    for d in range(1, bound + 1):
        stretched = [0] * (d * (len(local) - 1) + 1)
        for i, c in enumerate(local):
            stretched[d * i] = c
        acc = poly_mul_int(acc, poly_pow_int(stretched, prime_count_formula(q, d), bound), bound)
    return float(sum(Fraction(c) / q**n for n, c in enumerate(acc)))


def _prime_product(q: int, local: list, bound: int) -> float:
    out = 1.0
    for d in range(1, bound + 1):
        x = q**-d
        out *= float(sum(c * x**i for i, c in enumerate(local))) ** prime_count_formula(q, d)
    return out


def conjecture_constants(k: int, q: int = 2, bound: int = CONJ_BOUND) -> ConjectureConstants:
    if k not in (1, 2, 3):
        raise UnsupportedK(f"constants supported for k in 1..3, got {k}")
    sq = list(p_k_poly(k))
    plain = [int(c) for c in _local_plain(k, bound)]
    return ConjectureConstants(
        k,
        q,
        bound,
        g_ratio(k),
        _prime_product(q, sq, bound),
        _prime_product(q, plain, bound),
        _series_product(q, sq, bound),
        _series_product(q, plain, bound),
    )


def local_factor_at_Q(k: int, normQ: int) -> float:
    """(sum_m d_k(Q^m)^2 / |Q|^m)^(-1) = (1 - x)^(k^2) / p_k(x) at x = 1/|Q|."""
    x = 1 / normQ
    pk = sum(c * x**i for i, c in enumerate(p_k_poly(k)))
    return (1 - x) ** (k * k) / pk


def conjecture_main_term(k: int, q: int, degQ: int, normalize_by: int | None = None) -> float:
    cc = conjecture_constants(k, q)
    base = degQ if normalize_by is None else normalize_by
    return cc.a_squared * float(cc.g) * local_factor_at_Q(k, q**degQ) * base ** (k * k)


# -- moments -----------------------------------------------------------------------


def fourth_main_term(q: int, D: int) -> float:
    return (q - 1) / (12 * q) * D**4


def moment(table, two_k: int) -> MomentReport:
    if two_k not in (2, 4, 6, 8):
        raise ValueError("order must be one of 2, 4, 6, 8")
    fam = _family(table)
    q, D, M = fam.q, fam.D, fam.M
    k = two_k // 2
    absL = central_abs(fam)
    value = float(np.sum(absL**two_k)) / M
    extra = {}
    exact = float("nan")
    if two_k == 2:
        predicted = float(D)
        norm = 1.0
        exact = second_moment_exact(q, D)
    elif two_k == 4:
        predicted = fourth_main_term(q, D)
        norm = float(D**3)
        extra["predicted_degQ"] = (q - 1) / (12 * q) * (D + 1) ** 4
    else:
        predicted = conjecture_main_term(k, q, D + 1, normalize_by=D)
        extra["predicted_degQ"] = conjecture_main_term(k, q, D + 1)
        norm = float(D ** (k * k - 1))
    residual = value - predicted
    return MomentReport(q, fam.table.Q.code, D, two_k, value, predicted, residual, residual / norm, exact, extra)


def first_moment(table) -> MomentReport:
    fam = _family(table)
    q, D, M = fam.q, fam.D, fam.M
    vals = fam.central_values()[1:]
    mean = complex(np.sum(vals)) / M
    residual = mean.real - 1
    return MomentReport(
        q, fam.table.Q.code, D, 1, mean.real, 1.0, residual, residual * q ** (D / 2),
        first_moment_exact(q, D), {"imag": mean.imag},
    )


# -- fourth moment decomposition -----------------------------------------------------


@dataclass
class DiagonalDecomposition:
    q: int
    D: int
    direct: float  # (1/phi) sum |L|^4
    I: float
    II: float
    III: float
    reassembled: float
    II_printed: float
    III_printed: float
    diagonal_param: Fraction  # sum_N 2^w/|N| ceil((D - deg N)/2)^2
    diagonal_closed: Fraction  # closed polynomial in D
    diagonal_closed_brute: Fraction  # sum_N 2^w/|N| (D - deg N)^2
    diagonal_enum: Fraction | None = None  # quadruple enumeration, AC = BD
    offdiag_enum: float | None = None  # quadruple enumeration, AC = BD mod Q, AC != BD
    congruent_char: float | None = None  # (1/M) sum over all chi of S(chi)^2


def diagonal_closed_poly(q: int, D: int) -> Fraction:
    return Fraction((q - 1) * D**4 + 4 * (q + 1) * D**3 + 5 * (q - 1) * D**2 + 2 * (q + 1) * D, 12 * q)


def _two_omega_degree(F: FieldSpec, D: int) -> list[Fraction]:
    T = monic_table(F, max(D, 1))
    return [Fraction(int((2 ** T.omega[n]).sum()), F.q**n) for n in range(D)]


def diagonal_param(F: FieldSpec, D: int) -> Fraction:
    a = _two_omega_degree(F, D)
    return sum((a[n] * ((D - n + 1) // 2) ** 2 for n in range(D)), Fraction(0))


def diagonal_closed_brute(F: FieldSpec, D: int) -> Fraction:
    a = _two_omega_degree(F, D)
    return sum((a[n] * (D - n) ** 2 for n in range(D)), Fraction(0))


def _monic_upto(F: FieldSpec, D: int):
    """Codes and degrees of all monic polynomials of degree < D."""
    codes = np.concatenate([np.arange(F.q**n, 2 * F.q**n) for n in range(D)])
    degs = np.concatenate([np.full(F.q**n, n) for n in range(D)])
    return codes, degs


def product_table(F: FieldSpec, D: int) -> dict:
    """Codes of A*C for all monic A, C of degree < D."""
    codes, degs = _monic_upto(F, D)
    width = max(D, 1)
    dig = np.concatenate([monic_block_digits(F, n, width) for n in range(D)])
    out = {}
    for a in codes.tolist():
        A = Poly.from_code(F, a)
        out[a] = digits_code((dig @ mul_fixed_matrix(A, width)) % F.p, F.p)
    return out, codes, degs


def quadruple_sums(F: FieldSpec, D: int, table: UnitGroupTable | None = None):
    """Brute-force sums over (A, B, C, D') with deg AB < D and deg CD' < D.

    Returns (diagonal AC = BD' as an exact rational, off-diagonal congruent
    but unequal as float, or None without a table).
    """
    prods, codes, degs = product_table(F, D)
    index = {c: i for i, c in enumerate(codes.tolist())}
    pairs = [(a, b) for a, da in zip(codes.tolist(), degs.tolist()) for b, db in zip(codes.tolist(), degs.tolist()) if da + db < D]
    pa = np.array([p[0] for p in pairs])
    pb = np.array([p[1] for p in pairs])
    ia = np.array([index[a] for a in pa])
    ib = np.array([index[b] for b in pb])
    pdeg = degs[ia] + degs[ib]
    # AC and BD' for every pair of pairs
    P = np.stack([prods[a] for a in codes.tolist()])  # P[i, j] = code of codes[i] * codes[j]
    AC = P[ia[:, None], ia[None, :]]
    BD = P[ib[:, None], ib[None, :]]
    tot = pdeg[:, None] + pdeg[None, :]
    eq = AC == BD
    diag = Fraction(0)
    for t in np.unique(tot[eq]):
        cnt = int(np.count_nonzero(eq & (tot == t)))
        diag += Fraction(cnt, F.q ** (int(t) // 2))
    off = None
    if table is not None:
        la = table.dlog[pa]
        lb = table.dlog[pb]
        r = (la - lb) % table.M
        cong = ((r[:, None] + r[None, :]) % table.M == 0) & ~eq
        off = float(np.sum(F.q ** (-tot[cong] / 2)))
    return diag, off


def fourth_moment_decompose(table, enumerate_quadruples: bool | None = None) -> DiagonalDecomposition:
    fam = _family(table)
    tab = fam.table
    F, q, D, M = tab.field, fam.q, fam.D, fam.M
    A = a_coeffs(fam.coeffs)
    S = (A[:, :D] * q ** (-np.arange(D) / 2)).sum(axis=1).real  # half the short sum
    pc = pi_corrected(A, q, D, fam.even).real
    pp = pi_printed(A, q, D, fam.even).real
    nt = slice(1, None)
    absL = np.abs(fam.central_values())
    direct = float(np.sum(absL[nt] ** 4)) / M
    I = 4 * float(np.sum(S[nt] ** 2)) / M
    II = 4 * float(np.sum((pc * S)[nt])) / M
    III = float(np.sum(pc[nt] ** 2)) / M
    dec = DiagonalDecomposition(
        q, D, direct, I, II, III, I + II + III,
        4 * float(np.sum((pp * S)[nt])) / M, float(np.sum(pp[nt] ** 2)) / M,
        diagonal_param(F, D), diagonal_closed_poly(q, D), diagonal_closed_brute(F, D),
    )
    dec.congruent_char = float(np.sum(S**2)) / M
    if enumerate_quadruples is None:
        enumerate_quadruples = sum((n + 1) * q**n for n in range(D)) <= 2500
    if enumerate_quadruples:
        dec.diagonal_enum, dec.offdiag_enum = quadruple_sums(F, D, tab)
    return dec


def offdiagonal_truncated(F: FieldSpec, table: UnitGroupTable, Z1: int, Z2: int) -> float:
    """Off-diagonal congruent weight with deg AB <= Z1 and deg CD <= Z2."""
    D = max(Z1, Z2) + 1
    prods, codes, degs = product_table(F, D)
    index = {c: i for i, c in enumerate(codes.tolist())}
    P = np.stack([prods[a] for a in codes.tolist()])

    def pairs(Z):
        pr = [(a, b) for a, da in zip(codes.tolist(), degs.tolist()) for b, db in zip(codes.tolist(), degs.tolist()) if da + db <= Z]
        ia = np.array([index[a] for a, _ in pr])
        ib = np.array([index[b] for _, b in pr])
        return ia, ib

    ia, ib = pairs(Z1)
    ic, id_ = pairs(Z2)
    AC = P[ia[:, None], ic[None, :]]
    BD = P[ib[:, None], id_[None, :]]
    r1 = (table.dlog[codes[ia]] - table.dlog[codes[ib]]) % table.M
    r2 = (table.dlog[codes[ic]] - table.dlog[codes[id_]]) % table.M
    cong = ((r1[:, None] + r2[None, :]) % table.M == 0) & (AC != BD)
    tot = (degs[ia] + degs[ib])[:, None] + (degs[ic] + degs[id_])[None, :]
    return float(np.sum(F.q ** (-tot[cong] / 2)))


# -- non-vanishing -------------------------------------------------------------------


@dataclass(frozen=True)
class NonvanishingStats:
    q: int
    D: int
    count: int
    total: int
    ratio: float
    cs_bound: float

    @property
    def ok(self) -> bool:
        return self.count >= self.cs_bound - 1e-6


def nonvanishing_stats(table, threshold: float = 1e-8) -> NonvanishingStats:
    fam = _family(table)
    absL = central_abs(fam)
    count = int(np.count_nonzero(absL > threshold))
    bound = float(np.sum(absL) ** 2 / np.sum(absL**2))
    return NonvanishingStats(fam.q, fam.D, count, fam.M - 1, count / (fam.M - 1), bound)


# -- lower bound quantities ----------------------------------------------------------


@dataclass
class LowerBoundData:
    q: int
    D: int
    k: int
    x: int
    S1: complex
    S2: float
    S2_exact: float
    holder_bound: float
    true_moment: float
    holder_lhs: float  # |S1|^(2k)
    holder_rhs: float  # S2^(2k-1) * sum |L|^(2k)
    ratio: float  # true_moment / (|Q| D^(k^2))

    @property
    def holder_ok(self) -> bool:
        return self.holder_lhs <= self.holder_rhs * (1 + 1e-9) + 1e-6 and self.holder_bound <= self.true_moment + 1e-6


def partial_sums(fam: LFamily, x: int) -> np.ndarray:
    """A(chi) = sum_{deg N <= x} chi(N) / |N|^(1/2) for every chi_j."""
    return fam.coeffs[:, : x + 1] @ (fam.q ** (-np.arange(x + 1) / 2))


def s2_exact(F: FieldSpec, M: int, k: int, x: int) -> float:
    """phi * sum_{deg N <= kx} d_k(N, x)^2 / |N| - A(chi_0)^(2k)."""
    q = F.q
    tot = Fraction(0)
    for n in range(k * x + 1):
        s = 0
        for code in range(q**n, 2 * q**n):
            fac = factor(Poly.from_code(F, code)).factors
            v = dk_truncated_from_exponents(tuple(P.degree for P, _ in fac), tuple(e for _, e in fac), k, x)
            s += v * v
        tot += Fraction(s, q**n)
    return M * float(tot) - half_powers_sum(q, x) ** (2 * k)


def lower_bound_quantities(table, k: int) -> LowerBoundData:
    if k < 1:
        raise ValueError("k must be >= 1")
    fam = _family(table)
    q, D, M = fam.q, fam.D, fam.M
    x = D // (2 * k)
    Avals = partial_sums(fam, x)[1:]
    Lv = fam.central_values()[1:]
    S1 = complex(np.sum(Lv * Avals ** (k - 1) * np.conj(Avals) ** k))
    S2 = float(np.sum(np.abs(Avals) ** (2 * k)))
    true = float(np.sum(np.abs(Lv) ** (2 * k)))
    lhs = abs(S1) ** (2 * k)
    rhs = S2 ** (2 * k - 1) * true
    hb = lhs / S2 ** (2 * k - 1) if S2 > 0 else float("inf")
    return LowerBoundData(
        q, D, k, x, S1, S2, s2_exact(fam.table.field, M, k, x), hb, true, lhs, rhs, true / (q ** (D + 1) * D ** (k * k))
    )


# -- sweeps ---------------------------------------------------------------------------


def sweep_moduli(qs, degs, max_table: int | None = None):
    from .ffq import field_from_q

    for q in qs:
        F = field_from_q(q)
        for d in degs:
            if max_table is not None and q**d - 1 > max_table:
                raise DegreeTooLarge(f"q={q}, deg {d} exceeds the table bound")
            yield q, d, first_irreducible(F, d)


def moment_sweep(qs=(2, 3), degs=range(3, 10), orders=(1, 2, 4)) -> list[MomentReport]:
    rows = []
    for q, d, Q in sweep_moduli(qs, degs):
        fam = LFamily.build(unit_group(Q))
        for o in orders:
            rows.append(first_moment(fam) if o == 1 else moment(fam, o))
    return rows
