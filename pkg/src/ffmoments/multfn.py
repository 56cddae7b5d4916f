"""Arithmetic functions on monic polynomials and their exact summatory identities.

Two independent routes are used throughout.  Per-polynomial values come either
from ``factor`` (trial division) or from ``MonicTable``, an Eratosthenes-style
sieve over codec ranges that fills omega, Omega, d, d_k, mu, phi, p_plus,
p_minus and the von Mangoldt function for every monic polynomial of degree
<= X at once.  Closed forms are evaluated separately in exact rationals.
"""

from __future__ import annotations

import functools
import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import BoundTooLarge, MissingK, ZeroPolynomial
from .ffq import FieldSpec
from .polyring import (
    Poly,
    digits_code,
    enumerate_irreducibles,
    factor,
    monic_block_digits,
    mul_fixed_matrix,
    prime_count,
)

PMINUS_ONE = math.inf  # p_minus(1): the empty set of prime degrees has min +inf
DK_KMAX = 5
SERIES_NMAX = 8
ARITH_NAMES = (
    "d",
    "d_k",
    "omega",
    "Omega",
    "mu",
    "phi",
    "vonMangoldt",
    "vonMangoldt_printed",
    "p_plus",
    "p_minus",
    "kernel",
)


def _dk_local(e: int, k: int) -> int:
    return math.comb(e + k - 1, k - 1)


def arith_fn(name: str, N: Poly, k: int | None = None):
    """Evaluate an arithmetic function from the factorization of monic N.

    ``vonMangoldt`` is deg P on N = P^e (the convention that makes the
    prime polynomial theorem exact); ``vonMangoldt_printed`` uses deg N.
    """
    if N.is_zero():
        raise ZeroPolynomial("arithmetic functions need N != 0")
    fac = factor(N).factors
    q = N.field.q
    if name == "d":
        return math.prod(e + 1 for _, e in fac)
    if name == "d_k":
        if k is None:
            raise MissingK("d_k needs k")
        return math.prod(_dk_local(e, k) for _, e in fac)
    if name == "omega":
        return len(fac)
    if name == "Omega":
        return sum(e for _, e in fac)
    if name == "mu":
        if any(e > 1 for _, e in fac):
            return 0
        return (-1) ** len(fac)
    if name == "phi":
        out = N.norm
        for P, _ in fac:
            out = out // P.norm * (P.norm - 1)
        return out
    if name in ("vonMangoldt", "vonMangoldt_printed"):
        if len(fac) != 1:
            return 0
        return fac[0][0].degree if name == "vonMangoldt" else N.degree
    if name == "p_plus":
        return max((P.degree for P, _ in fac), default=0)
    if name == "p_minus":
        return min((P.degree for P, _ in fac), default=PMINUS_ONE)
    if name == "kernel":
        out = Poly.const(N.field, 1)
        for P, _ in fac:
            out = out * P
        return out
    raise ValueError(f"unknown arithmetic function {name!r} (q={q})")


def divisors(N: Poly) -> list[Poly]:
    fac = factor(N).factors
    out = [Poly.const(N.field, 1)]
    for P, e in fac:
        out = [D * P**i for D in out for i in range(e + 1)]
    return sorted(out, key=lambda D: D.code)


def dk_truncated(N: Poly, k: int, x: int) -> int:
    """Ordered k-tuples of monic factors of N, each of degree <= x."""
    if N.is_zero():
        raise ZeroPolynomial("d_k(N, x) needs N != 0")
    fac = factor(N).factors
    return dk_truncated_from_exponents(tuple(P.degree for P, _ in fac), tuple(e for _, e in fac), k, x)


@functools.cache
def dk_truncated_from_exponents(degs: tuple[int, ...], exps: tuple[int, ...], k: int, x: int) -> int:
    total = sum(d * e for d, e in zip(degs, exps))
    if k == 1:
        return 1 if total <= x else 0
    if total > k * x:
        return 0
    count = 0
    for sub in np.ndindex(*[e + 1 for e in exps]):
        deg = sum(d * s for d, s in zip(degs, sub))
        if deg <= x:
            rest = tuple(e - s for e, s in zip(exps, sub))
            count += dk_truncated_from_exponents(degs, rest, k - 1, x)
    return count


# -- bulk sieve ----------------------------------------------------------------


@dataclass
class MonicTable:
    """Arithmetic data for every monic N with deg N <= X, indexed [n][code - q^n]."""

    F: FieldSpec
    X: int
    kmax: int = DK_KMAX
    omega: list = field(default_factory=list)
    Omega: list = field(default_factory=list)
    d: list = field(default_factory=list)
    dk: dict = field(default_factory=dict)
    mu: list = field(default_factory=list)
    phi: list = field(default_factory=list)
    p_plus: list = field(default_factory=list)
    p_minus: list = field(default_factory=list)  # 0 encodes +inf (N = 1 only)
    lam: list = field(default_factory=list)
    kernel_deg: list = field(default_factory=list)

    def values(self, name: str, n: int, k: int | None = None) -> np.ndarray:
        if name == "d_k":
            return self.dk[k][n]
        return getattr(self, name)[n]

    def primes(self, n: int) -> np.ndarray:
        """Codes of monic irreducibles of degree n."""
        return np.flatnonzero(self.Omega[n] == 1) + self.F.q**n


_table_lock = threading.RLock()
_table_cache: dict = {}


def monic_table(F: FieldSpec, X: int) -> MonicTable:
    key = (F, X)
    hit = _table_cache.get(key)
    if hit is None:
        with _table_lock:
            hit = _table_cache.get(key)
            if hit is None:
                for (F2, X2), tab in _table_cache.items():
                    if F2 == F and X2 >= X:
                        hit = tab
                        break
                else:
                    hit = _build_table(F, X)
                    _table_cache[key] = hit
    return hit


def _build_table(F: FieldSpec, X: int) -> MonicTable:
    q = F.q
    T = MonicTable(F, X)
    sizes = [q**n for n in range(X + 1)]
    T.omega = [np.zeros(s, dtype=np.int64) for s in sizes]
    T.Omega = [np.zeros(s, dtype=np.int64) for s in sizes]
    T.d = [np.ones(s, dtype=np.int64) for s in sizes]
    T.dk = {k: [np.ones(s, dtype=np.int64) for s in sizes] for k in range(1, T.kmax + 1)}
    T.mu = [np.ones(s, dtype=np.int64) for s in sizes]
    T.phi = [np.full(s, q**n, dtype=np.int64) for n, s in enumerate(sizes)]
    T.p_plus = [np.zeros(s, dtype=np.int64) for s in sizes]
    T.p_minus = [np.zeros(s, dtype=np.int64) for s in sizes]
    T.kernel_deg = [np.zeros(s, dtype=np.int64) for s in sizes]
    remaining = [np.full(s, n, dtype=np.int64) for n, s in enumerate(sizes)]
    single = [np.zeros(s, dtype=np.int64) for s in sizes]  # degree of P when N = P^e
    scratch = [np.zeros(s, dtype=np.int64) for s in sizes]

    if X >= 2:
        small = monic_table(F, X // 2)
        small_primes = [
            (k, int(c)) for k in range(1, X // 2 + 1) for c in small.primes(k)
        ]
    else:
        small_primes = []

    blocks = {}

    def block(m, width):
        key = (m, width)
        if key not in blocks:
            blocks[key] = monic_block_digits(F, m, width)
        return blocks[key]

    def apply(idx_n, n, k, v):
        T.omega[n][idx_n] += 1
        T.Omega[n][idx_n] += v
        T.d[n][idx_n] *= v + 1
        for kk in range(1, T.kmax + 1):
            T.dk[kk][n][idx_n] *= np.array([math.comb(int(e) + kk - 1, kk - 1) for e in range(v.max() + 1)])[v]
        T.mu[n][idx_n] *= np.where(v >= 2, 0, -1)
        T.phi[n][idx_n] = T.phi[n][idx_n] // q**k * (q**k - 1)
        T.p_plus[n][idx_n] = np.maximum(T.p_plus[n][idx_n], k)
        pm = T.p_minus[n][idx_n]
        T.p_minus[n][idx_n] = np.where(pm == 0, k, np.minimum(pm, k))
        T.kernel_deg[n][idx_n] += k
        remaining[n][idx_n] -= v * k
        single[n][idx_n] = k

    for k, pcode in small_primes:
        P = Poly.from_code(F, pcode)
        touched = {}
        Pe = P
        e = 1
        while e * k <= X:
            for n in range(e * k, X + 1):
                m = n - e * k
                dig = block(m, m + 1)
                prod = digits_code((dig @ mul_fixed_matrix(Pe, m + 1)) % F.p, F.p) - q**n
                scratch[n][prod] += 1
                if e == 1:
                    touched[n] = prod
            Pe = Pe * P
            e += 1
        for n, idx in touched.items():
            v = scratch[n][idx]
            apply(idx, n, k, v)
            scratch[n][idx] = 0

    # whatever is left after removing primes of degree <= X/2 is one prime
    for n in range(1, X + 1):
        idx = np.flatnonzero(remaining[n] > 0)
        if idx.size:
            r = remaining[n][idx]
            T.omega[n][idx] += 1
            T.Omega[n][idx] += 1
            T.d[n][idx] *= 2
            for kk in range(1, T.kmax + 1):
                T.dk[kk][n][idx] *= kk
            T.mu[n][idx] *= -1
            T.phi[n][idx] = T.phi[n][idx] // q**r * (q**r - 1)
            T.p_plus[n][idx] = np.maximum(T.p_plus[n][idx], r)
            pm = T.p_minus[n][idx]
            T.p_minus[n][idx] = np.where(pm == 0, r, np.minimum(pm, r))
            T.kernel_deg[n][idx] += r
            single[n][idx] = r
            remaining[n][idx] = 0

    T.lam = [np.where(T.omega[n] == 1, single[n], 0) for n in range(X + 1)]
    return T


def table_value(T: MonicTable, name: str, N: Poly, k: int | None = None):
    n = N.degree
    v = T.values(name, n, k)[N.code - T.F.q**n]
    if name == "p_minus" and n == 0:
        return PMINUS_ONE
    return int(v)


# -- summatory identities --------------------------------------------------------


@dataclass(frozen=True)
class Summatory:
    name: str
    x: int
    brute: Fraction
    closed: Fraction

    @property
    def agree(self) -> bool:
        return self.brute == self.closed


SUMMATORY_NAMES = ("d", "d_over_norm", "two_omega_over_norm", "vonMangoldt_degree", "mu_degree")


def summatory_closed(name: str, q: int, x: int) -> Fraction:
    if name == "d":
        return Fraction((x + 1) * q ** (x + 1) - Fraction(q ** (x + 1) - 1, q - 1), q - 1)
    if name == "d_over_norm":
        return Fraction((x + 1) * (x + 2), 2)
    if name == "two_omega_over_norm":
        return Fraction((q - 1) * x * x + (3 * q + 1) * x + 2 * q, 2 * q)
    if name == "vonMangoldt_degree":
        return Fraction(q**x)
    if name == "mu_degree":
        # sum of mu over degree exactly x: 1, -q, 0, 0, ...
        return Fraction({0: 1, 1: -q}.get(x, 0))
    raise ValueError(f"unknown summatory {name!r}")


def summatory_brute(F: FieldSpec, name: str, x: int) -> Fraction:
    q = F.q
    T = monic_table(F, x)
    if name == "d":
        return Fraction(sum(int(T.d[n].sum()) for n in range(x + 1)))
    if name == "d_over_norm":
        return sum((Fraction(int(T.d[n].sum()), q**n) for n in range(x + 1)), Fraction(0))
    if name == "two_omega_over_norm":
        return sum((Fraction(int((2 ** T.omega[n]).sum()), q**n) for n in range(x + 1)), Fraction(0))
    if name == "vonMangoldt_degree":
        return Fraction(int(T.lam[x].sum()))
    if name == "mu_degree":
        return Fraction(int(T.mu[x].sum()))
    raise ValueError(f"unknown summatory {name!r}")


def summatory(F: FieldSpec, name: str, x: int) -> Summatory:
    if x < 0:
        raise ValueError("x must be >= 0")
    if name == "vonMangoldt_degree" and x < 1:
        raise ValueError("the prime polynomial theorem is stated for n >= 1")
    return Summatory(name, x, summatory_brute(F, name, x), summatory_closed(name, F.q, x))


def two_omega_degree_coeffs(F: FieldSpec, kmax: int) -> list[Fraction]:
    """A_k = q^-k sum_{deg N = k} 2^omega(N): closed form, checked against the sieve."""
    q = F.q
    closed = [Fraction(1)] + [Fraction(k + 1) - Fraction(k - 1, q) for k in range(1, kmax + 1)]
    T = monic_table(F, kmax)
    brute = [Fraction(int((2 ** T.omega[k]).sum()), q**k) for k in range(kmax + 1)]
    if brute != closed:
        bad = [k for k in range(kmax + 1) if brute[k] != closed[k]]
        raise AssertionError(f"two-omega degree coefficients disagree at k={bad}")
    return closed


def two_omega_degree_brute(F: FieldSpec, kmax: int) -> list[Fraction]:
    T = monic_table(F, kmax)
    return [Fraction(int((2 ** T.omega[k]).sum()), F.q**k) for k in range(kmax + 1)]


# -- p_k and the d_k^2 series ------------------------------------------------------


def poly_mul_int(a: list[int], b: list[int], nmax: int | None = None) -> list[int]:
    out_len = len(a) + len(b) - 1
    if nmax is not None:
        out_len = min(out_len, nmax + 1)
    out = [0] * out_len
    for i, x in enumerate(a):
        if x and i < out_len:
            for j, y in enumerate(b):
                if i + j >= out_len:
                    break
                out[i + j] += x * y
    return out


def poly_pow_int(a: list[int], e: int, nmax: int) -> list[int]:
    result = [1]
    base = a[: nmax + 1]
    while e:
        if e & 1:
            result = poly_mul_int(result, base, nmax)
        base = poly_mul_int(base, base, nmax)
        e >>= 1
    return result + [0] * (nmax + 1 - len(result))


@functools.cache
def p_k_poly(k: int) -> tuple[int, ...]:
    """Coefficients of p_k(x) = (1-x)^((k-1)^2) sum_n C(k-1,n)^2 x^n."""
    if k < 1:
        raise ValueError("k must be >= 1")
    left = [(-1) ** i * math.comb((k - 1) ** 2, i) for i in range((k - 1) ** 2 + 1)]
    right = [math.comb(k - 1, n) ** 2 for n in range(k)]
    return tuple(poly_mul_int(left, right))


def binomial_identity(k: int, m: int) -> tuple[int, int]:
    """(sum_{d<=m} (-1)^d C(2k-1,d) C(k+m-d-1, m-d)^2, C(k-1,m)^2)."""
    lhs = sum((-1) ** d * math.comb(2 * k - 1, d) * math.comb(k + m - d - 1, m - d) ** 2 for d in range(m + 1))
    return lhs, math.comb(k - 1, m) ** 2


def binomial_identity_holds(k: int) -> bool:
    return all(a == b for a, b in (binomial_identity(k, m) for m in range(k)))


@dataclass(frozen=True)
class SeriesComparison:
    k: int
    nmax: int
    brute: tuple[int, ...]
    product: tuple[int, ...]

    @property
    def agree(self) -> bool:
        return self.brute == self.product


def dk_squared_brute(F: FieldSpec, k: int, nmax: int) -> list[int]:
    T = monic_table(F, nmax)
    if k <= T.kmax:
        return [int((T.dk[k][n] ** 2).sum()) for n in range(nmax + 1)]
    raise BoundTooLarge(f"k={k} above table bound {T.kmax}")


def dk_squared_product(F: FieldSpec, k: int, nmax: int) -> list[int]:
    """Coefficients of (1-qT)^(-k^2) prod_{deg P <= nmax} p_k(T^deg P), truncated."""
    q = F.q
    zeta = [math.comb(n + k * k - 1, n) * q**n for n in range(nmax + 1)]
    pk = list(p_k_poly(k))
    acc = zeta
    for dgr in range(1, nmax + 1):
        stretched = [0] * (dgr * (len(pk) - 1) + 1)
        for i, c in enumerate(pk):
            stretched[dgr * i] = c
        acc = poly_mul_int(acc, poly_pow_int(stretched, prime_count(F, dgr), nmax), nmax)
    return acc + [0] * (nmax + 1 - len(acc))


def dk_squared_series(F: FieldSpec, k: int, nmax: int, bound: int = SERIES_NMAX) -> SeriesComparison:
    if nmax > bound:
        raise BoundTooLarge(f"nmax={nmax} exceeds bound {bound}")
    if k < 1:
        raise ValueError("k must be >= 1")
    return SeriesComparison(k, nmax, tuple(dk_squared_brute(F, k, nmax)), tuple(dk_squared_product(F, k, nmax)))


def dk_sq_summatory_growth(F: FieldSpec, k: int, ymax: int, bound: int = 12) -> list[tuple[int, Fraction, float]]:
    """Rows (y, sum_{deg N <= y} d_k(N)^2/|N|, ratio to y^(k^2)) for y = 1..ymax."""
    if k not in (1, 2):
        raise ValueError("growth table supports k in {1, 2}")
    if ymax > bound:
        raise BoundTooLarge(f"ymax={ymax} exceeds bound {bound}")
    coeffs = dk_squared_brute(F, k, ymax)
    rows = []
    acc = Fraction(0)
    for y in range(ymax + 1):
        acc += Fraction(coeffs[y], F.q**y)
        if y >= 1:
            rows.append((y, acc, float(acc) / y ** (k * k)))
    return rows


def irreducible_counts(F: FieldSpec, nmax: int) -> list[int]:
    return [0] + [len(enumerate_irreducibles(F, d)) for d in range(1, nmax + 1)]

