"""Smooth and sifted counts, Selberg sieve quantities and divisor sums in progressions.

Conventions: Psi counts deg N <= x, Phi counts deg N < x.  p_plus(1) = 0 and
p_minus(1) = +inf, so N = 1 is smooth for every z and survives every sieve.
Everything is exact (integers and Fractions) except the bound right-hand sides,
which are floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import (
    ConstraintViolation,
    IdentityViolation,
    NonPrimeModulus,
    NotMonic,
    ParamOutOfRange,
    ResidueNotCoprime,
)
from .ffq import FieldSpec
from .multfn import monic_table, summatory_closed
from .polyring import Poly, factor, gcd, is_irreducible, prime_count_formula, reduce_codes

DIVPROG_CEILING = 4.0
DEFAULT_ALPHA = Fraction(1, 2)


@dataclass(frozen=True)
class SieveParams:
    """x: degree bound, z: sifting degree, K: prime modulus, A: residue class."""

    x: int
    z: int
    K: Poly
    A: Poly

    def __post_init__(self):
        check_progression(self.K, self.A)


@dataclass(frozen=True)
class BoundCheck:
    label: str
    lhs: object
    rhs: float
    asserted: bool = False
    params: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return float(self.lhs) <= self.rhs

    @property
    def constant_fitted(self) -> float:
        """Smallest c with lhs <= c * rhs at this point."""
        return float(self.lhs) / self.rhs if self.rhs else math.inf

    def row(self) -> dict:
        return dict(
            self.params, label=self.label, lhs=self.lhs, rhs=self.rhs,
            holds=self.holds, constant_fitted=self.constant_fitted, asserted=self.asserted,
        )


def check_progression(K: Poly, A: Poly) -> None:
    if not K.is_monic():
        raise NotMonic(f"modulus {K} is not monic")
    if K.degree < 1 or not is_irreducible(K):
        raise NonPrimeModulus(f"{K} is not a prime polynomial")
    if not A.is_zero() and A.degree >= K.degree:
        raise ResidueNotCoprime(f"deg A = {A.degree} must be below deg K = {K.degree}")
    if A.is_zero() or not gcd(A, K).is_one():
        raise ResidueNotCoprime(f"({A}, {K}) != 1")


# -- enumeration helpers ------------------------------------------------------------


def _codes(q: int, lo: int, hi: int) -> np.ndarray:
    """Codes of all monic N with lo <= deg N <= hi, codec order."""
    parts = [np.arange(q**n, 2 * q**n, dtype=np.int64) for n in range(lo, hi + 1)]
    return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)


def _column(F: FieldSpec, name: str, lo: int, hi: int) -> np.ndarray:
    T = monic_table(F, max(hi, 0))
    parts = [T.values(name, n) for n in range(lo, hi + 1)]
    return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)


def _in_class(codes: np.ndarray, K: Poly, A: Poly) -> np.ndarray:
    return reduce_codes(codes, K) == A.code


def phi_of(K: Poly) -> int:
    """Euler phi of a monic polynomial from its factorization."""
    out = 1
    for P, e in factor(K).factors:
        out *= (P.norm - 1) * P.norm ** (e - 1)
    return out


def _fraction_sum(num: np.ndarray, den: np.ndarray) -> Fraction:
    """sum num_i / den_i exactly, grouped by denominator."""
    total = Fraction(0)
    if num.size == 0:
        return total
    for dv in np.unique(den):
        total += Fraction(int(num[den == dv].sum()), int(dv))
    return total


# -- Psi ------------------------------------------------------------------------------


def psi(F: FieldSpec, x: int, z: int) -> int:
    """Number of monic N with deg N <= x and p_plus(N) <= z."""
    if x < 0 or z < 0:
        raise ParamOutOfRange("x, z must be >= 0")
    return int(np.count_nonzero(_column(F, "p_plus", 0, x) <= z))


def psi_brute(F: FieldSpec, x: int, z: int) -> int:
    """Same count through scalar factorization (small x only)."""
    from .polyring import iter_monic

    count = 0
    for n in range(x + 1):
        for N in iter_monic(F, n):
            if max((P.degree for P, _ in factor(N).factors), default=0) <= z:
                count += 1
    return count


def psi_rough_complement(F: FieldSpec, x: int, z: int) -> int:
    return int(np.count_nonzero(_column(F, "p_plus", 0, x) > z))


def psi_lemma_y(q: int, x: int) -> float:
    lx = math.log(x, q)
    return lx + math.log(lx, q)


def psi_lemma_check(F: FieldSpec, x: int) -> BoundCheck:
    """Psi(x, log_q x + log_q log_q x) against q^(3x / sqrt(log_q x)); reported only."""
    q = F.q
    if x <= 1 or math.log(x, q) <= 0:
        raise ParamOutOfRange("log_q log_q x needs log_q x > 0")
    y = psi_lemma_y(q, x)
    if not y > 0:
        raise ParamOutOfRange(f"smoothness degree {y:.3f} is not positive at x={x}")
    lhs = psi(F, x, math.floor(y))
    rhs = float(q) ** (3 * x / math.sqrt(math.log(x, q)))
    return BoundCheck("psi_lemma", lhs, rhs, False, dict(q=q, x=x, y=y))


def psi_rho_ratio(F: FieldSpec, x: int, z: int) -> tuple[float, float]:
    """(Psi/q^x, x/z) for plotting against the Dickman function; never asserted."""
    return psi(F, x, z) / F.q**x, (x / z if z else math.inf)


# -- Phi ----------------------------------------------------------------------------


def phi_members(F: FieldSpec, x: int, K: Poly, A: Poly) -> np.ndarray:
    """Codes of monic N with deg N < x and N = A mod K."""
    codes = _codes(F.q, 0, x - 1)
    return codes[_in_class(codes, K, A)] if codes.size else codes


def phi_count(F: FieldSpec, x: int, z: int, K: Poly, A: Poly) -> int:
    """Phi(x, z; K, A) without the primality precondition (for partition checks)."""
    if x <= 0:
        return 0
    codes = _codes(F.q, 0, x - 1)
    pm = _column(F, "p_minus", 0, x - 1)
    keep = _in_class(codes, K, A) & ((pm == 0) | (pm > z))
    return int(np.count_nonzero(keep))


def phi_sifted(F: FieldSpec, params: SieveParams) -> tuple[int, BoundCheck]:
    """Exact Phi and the bound q^x/(phi(K) z) + q^(2z), asserted for z >= 2."""
    x, z, K, A = params.x, params.z, params.K, params.A
    value = phi_count(F, x, z, K, A)
    q = F.q
    rhs = q**x / (phi_of(K) * z) + q ** (2 * z) if z > 0 else math.inf
    check = BoundCheck(
        "phi_selberg_lemma", value, rhs, z >= 2,
        dict(q=q, x=x, z=z, K=K.code, A=A.code),
    )
    if check.asserted and not check.holds:
        raise IdentityViolation("Phi sieve bound", f"Phi={value} > {rhs} at {check.params}")
    return value, check


def phi_zero_count(q: int, x: int, K: Poly, A: Poly) -> int:
    """Unsifted progression count: (q^(x-k) - 1)/(q - 1) + [A monic] for x >= k = deg K."""
    k = K.degree
    if x < k:
        raise ParamOutOfRange("needs x >= deg K")
    return (q ** (x - k) - 1) // (q - 1) + int(A.is_monic())


# -- Selberg sieve quantities ---------------------------------------------------------


@dataclass(frozen=True)
class SelbergTerms:
    q: int
    z: int
    y: int
    S: Fraction
    S_product: Fraction
    R_crude: int

    @property
    def agree(self) -> bool:
        return self.S == self.S_product

    @property
    def corollary_ok(self) -> bool:
        """S(P_z, y) >= z (the corollary is the case y = z)."""
        return self.S >= self.z


def _squarefree_smooth(F: FieldSpec, z: int, y: int):
    """(codes, phi, omega) of squarefree D with p_plus(D) <= z and deg D <= y."""
    codes = _codes(F.q, 0, y)
    mu = _column(F, "mu", 0, y)
    pp = _column(F, "p_plus", 0, y)
    keep = (mu != 0) & (pp <= z)
    return codes[keep], _column(F, "phi", 0, y)[keep], _column(F, "omega", 0, y)[keep]


def selberg_S_brute(F: FieldSpec, z: int, y: int) -> Fraction:
    _, ph, _ = _squarefree_smooth(F, z, y)
    return _fraction_sum(np.ones_like(ph), ph)


def selberg_S_product(q: int, z: int, y: int) -> Fraction:
    """Coefficient sum up to T^y of prod_{d <= z} (1 + T^d/(q^d - 1))^pi(d)."""
    coeffs = [Fraction(0)] * (y + 1)
    coeffs[0] = Fraction(1)
    for d in range(1, z + 1):
        w = Fraction(1, q**d - 1)
        for _ in range(prime_count_formula(q, d)):
            for n in range(y, d - 1, -1):
                coeffs[n] += coeffs[n - d] * w
    return sum(coeffs, Fraction(0))


def selberg_terms(F: FieldSpec, z: int, y: int | None = None) -> SelbergTerms:
    y = z if y is None else y
    if z < 1 or y < 1:
        raise ParamOutOfRange("z, y must be >= 1")
    S = selberg_S_brute(F, z, y)
    Sp = selberg_S_product(F.q, z, y)
    if S != Sp:
        raise IdentityViolation("Selberg S generating product", f"{S} != {Sp}")
    return SelbergTerms(F.q, z, y, S, Sp, (F.q ** (z + 1)) ** 2)


@dataclass(frozen=True)
class SelbergRemainder:
    """Remainder terms for the progression sequence a_N = [N = A mod K], deg N < x."""

    B: int  # exact total count
    R_pairs: Fraction  # sum over D1, D2 | P_z of degree <= z of |r([D1, D2])|
    R_3omega: Fraction  # sum over D | P_z of degree <= 2z of 3^omega(D) |r(D)|
    R_crude: int


def _class_multiples(members: np.ndarray, D: Poly) -> int:
    if D.is_one():
        return int(members.size)
    return int(np.count_nonzero(reduce_codes(members, D) == 0)) if members.size else 0


def selberg_remainder(F: FieldSpec, params: SieveParams) -> SelbergRemainder:
    x, z, K, A = params.x, params.z, params.K, params.A
    members = phi_members(F, x, K, A)
    B = int(members.size)
    cache: dict[int, Fraction] = {}

    def r_abs(code: int) -> Fraction:
        if code not in cache:
            D = Poly.from_code(F, code)
            cache[code] = abs(Fraction(_class_multiples(members, D)) - Fraction(B, D.norm))
        return cache[code]

    big, _, om = _squarefree_smooth(F, z, 2 * z)
    R3 = sum((3 ** int(w) * r_abs(int(c)) for c, w in zip(big, om)), Fraction(0))
    small, _, _ = _squarefree_smooth(F, z, z)
    polys = [Poly.from_code(F, int(c)) for c in small]
    Rp = Fraction(0)
    for D1 in polys:
        for D2 in polys:
            L = (D1 * D2) // gcd(D1, D2)
            Rp += r_abs(L.code)
    return SelbergRemainder(B, Rp, R3, (F.q ** (z + 1)) ** 2)


@dataclass(frozen=True)
class SieveInstance:
    phi: int
    lemma: BoundCheck
    selberg_crude: BoundCheck  # B = q^x/phi(K), R = (q^(z+1))^2
    selberg_pairs: BoundCheck  # exact B, R_pairs
    selberg_3omega: BoundCheck  # exact B, R_3omega


def sieve_instance(F: FieldSpec, params: SieveParams) -> SieveInstance:
    """Every form of the sieve inequality at one grid point; lemma and crude form asserted for z >= 2."""
    value, lemma = phi_sifted(F, params)
    q, z = F.q, params.z
    p = dict(lemma.params)
    S = selberg_terms(F, z).S if z >= 1 else Fraction(1)
    rem = selberg_remainder(F, params) if z >= 1 else None
    B_bound = Fraction(q**params.x, phi_of(params.K))
    crude = BoundCheck("selberg_crude", value, float(B_bound / S) + rem.R_crude, z >= 2, p) if rem else lemma
    if crude.asserted and not crude.holds:
        raise IdentityViolation("Selberg inequality with crude R", f"{crude.row()}")
    pairs = BoundCheck("selberg_pairs", value, float(Fraction(rem.B) / S + rem.R_pairs), False, p) if rem else lemma
    three = BoundCheck("selberg_3omega", value, float(Fraction(rem.B) / S + rem.R_3omega), False, p) if rem else lemma
    return SieveInstance(value, lemma, crude, pairs, three)


# -- H_K -----------------------------------------------------------------------------


@dataclass(frozen=True)
class HKCheck:
    x: int
    K: int
    value: Fraction
    lower: Fraction

    @property
    def holds(self) -> bool:
        return self.value >= self.lower


def H_K(F: FieldSpec, x: int, K: Poly | None = None) -> HKCheck:
    """sum_{deg D < x, (D, K) = 1} mu^2(D)/phi(D) against prod_{P | K}(1 - 1/|P|) x."""
    if x < 1:
        raise ParamOutOfRange("x must be >= 1")
    codes = _codes(F.q, 0, x - 1)
    keep = _column(F, "mu", 0, x - 1) != 0
    lower = Fraction(x)
    if K is not None and not K.is_one():
        for P, _ in factor(K).factors:
            keep &= reduce_codes(codes, P) != 0
            lower *= 1 - Fraction(1, P.norm)
    ph = _column(F, "phi", 0, x - 1)[keep]
    return HKCheck(x, 1 if K is None else K.code, _fraction_sum(np.ones_like(ph), ph), lower)


# -- divisor sums in progressions --------------------------------------------------------


@dataclass(frozen=True)
class DivisorProgression:
    q: int
    x: int
    K: int
    A: int
    lhs: int
    scale: Fraction  # q^x x / phi(K)

    @property
    def fitted(self) -> float:
        return float(Fraction(self.lhs) / self.scale)


def _check_alpha(x: int, K: Poly, alpha: Fraction) -> None:
    if not K.degree < (1 - alpha) * x:
        raise ConstraintViolation(f"deg K = {K.degree} must be < (1 - alpha) x = {float((1 - alpha) * x)}")


def divisor_sum_progression(F: FieldSpec, x: int, K: Poly, A: Poly, alpha: Fraction = DEFAULT_ALPHA) -> DivisorProgression:
    """Exact sum of d(N) over deg N <= x, N = A mod K, and its ratio to q^x x / phi(K)."""
    check_progression(K, A)
    _check_alpha(x, K, Fraction(alpha))
    codes = _codes(F.q, 0, x)
    d = _column(F, "d", 0, x)
    lhs = int(d[_in_class(codes, K, A)].sum())
    return DivisorProgression(F.q, x, K.code, A.code, lhs, Fraction(F.q**x * x, phi_of(K)))


def divisor_class_sums(F: FieldSpec, x: int, K: Poly) -> dict[int, int]:
    """sum of d(N) over deg N <= x in every residue class mod K (zero class included)."""
    codes = _codes(F.q, 0, x)
    d = _column(F, "d", 0, x)
    res = reduce_codes(codes, K)
    out = np.zeros(F.q**K.degree, dtype=np.int64)
    np.add.at(out, res, d)
    return {r: int(v) for r, v in enumerate(out)}


def divisor_partition_ok(F: FieldSpec, x: int, K: Poly) -> tuple[int, Fraction]:
    """(sum over classes, closed form of sum_{deg N <= x} d(N))."""
    total = sum(divisor_class_sums(F, x, K).values())
    return total, summatory_closed("d", F.q, x)


def divisor_uniformity_sweep(F: FieldSpec, x: int, Ks, alpha: Fraction = DEFAULT_ALPHA) -> list[DivisorProgression]:
    """All coprime residues A for each prime K; class sums reused from one reduction."""
    out = []
    for K in Ks:
        _check_alpha(x, K, Fraction(alpha))
        sums = divisor_class_sums(F, x, K)
        scale = Fraction(F.q**x * x, phi_of(K))
        for a in range(1, F.q**K.degree):
            out.append(DivisorProgression(F.q, x, K.code, a, sums[a], scale))
    return out


# -- smooth divisor tail ----------------------------------------------------------------


@dataclass(frozen=True)
class SmoothTail:
    q: int
    z: int
    r: int
    y: int  # floor(z / r)
    X_max: int
    truncated: Fraction  # sum over ceil(z/2) <= deg N <= X_max
    tail: Fraction  # exact remainder beyond X_max
    bound: float  # z^2 q^(-(r/10) log_q r)

    @property
    def total(self) -> Fraction:
        return self.truncated + self.tail

    @property
    def ratio(self) -> float:
        return float(self.total) / self.bound


def smooth_euler_factor(q: int, y: int) -> Fraction:
    """sum over all y-smooth monic N of d(N)/|N| = prod_{deg P <= y} (1 - 1/|P|)^-2."""
    out = Fraction(1)
    for d in range(1, y + 1):
        out *= Fraction(q**d, q**d - 1) ** (2 * prime_count_formula(q, d))
    return out


def _smooth_d_over_norm(F: FieldSpec, y: int, lo: int, hi: int) -> Fraction:
    total = Fraction(0)
    for n in range(lo, hi + 1):
        T = monic_table(F, n)
        mask = T.p_plus[n] <= y
        total += Fraction(int(T.d[n][mask].sum()), F.q**n)
    return total


def smooth_divisor_tail(F: FieldSpec, z: int, r: int, X_max: int | None = None) -> SmoothTail:
    q = F.q
    if z < 2 or r < 1 or r > z / math.log(z, q):
        raise ParamOutOfRange(f"needs z >= 2 and 1 <= r <= z/log_q z (z={z}, r={r})")
    X_max = z if X_max is None else X_max
    if X_max < z:
        raise ParamOutOfRange("X_max must be >= z")
    y = z // r
    lo = -(-z // 2)
    trunc = _smooth_d_over_norm(F, y, lo, X_max)
    tail = smooth_euler_factor(q, y) - _smooth_d_over_norm(F, y, 0, X_max)
    bound = z**2 * float(q) ** (-(r / 10) * math.log(r, q))
    return SmoothTail(q, z, r, y, X_max, trunc, tail, bound)


def smooth_tail_grid(F: FieldSpec, zs, X_max: int | None = None) -> list[SmoothTail]:
    out = []
    for z in zs:
        rmax = math.floor(z / math.log(z, F.q))
        for r in range(1, rmax + 1):
            out.append(smooth_divisor_tail(F, z, r, X_max))
    return out
