"""The polynomial ring F_q[x].

``Poly`` is an immutable little-endian tuple of field codes.  Polynomials
embed into the integers by evaluating the coefficient codes at q, so the monic
polynomials of degree n occupy exactly the codes ``q**n .. 2*q**n - 1``.  The
bulk code paths (unit-group tables, the arithmetic-function sieve) work on
arrays of codes through their base-p digit vectors, where multiplication by a
fixed polynomial and reduction modulo a fixed polynomial are F_p-linear maps.
"""

from __future__ import annotations

import functools
import math
import threading
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import DivisionByZero, FieldMismatch, NotMonic, ParseError, ZeroPolynomial
from .ffq import FieldSpec, factor_int


@functools.total_ordering
class _ZeroDegree:
    """Degree of the zero polynomial: below every integer, refuses arithmetic."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "-inf"

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return other is not self

    def __hash__(self):
        return hash("ZERO_DEGREE")

    def __reduce__(self):
        return (_ZeroDegree, ())


ZERO_DEGREE = _ZeroDegree()


# -- list-level kernels (coefficient lists, little-endian, stripped) ---------


def _strip(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _add(F: FieldSpec, a, b) -> list[int]:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    if F.n == 1:
        p = F.p
        for i, v in enumerate(b):
            out[i] = (out[i] + v) % p
    else:
        for i, v in enumerate(b):
            out[i] = F.add(out[i], v)
    return _strip(out)


def _neg(F: FieldSpec, a) -> list[int]:
    return [F.neg(v) for v in a]


def _scale(F: FieldSpec, a, c: int) -> list[int]:
    if c == 0:
        return []
    return [F.mul(v, c) for v in a]


def _mul(F: FieldSpec, a, b) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    if F.n == 1:
        p = F.p
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return _strip([v % p for v in out])
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
    return _strip(out)


def _divmod(F: FieldSpec, a, b) -> tuple[list[int], list[int]]:
    if not b:
        raise DivisionByZero("polynomial division by zero")
    r = list(a)
    db = len(b) - 1
    if len(r) - 1 < db:
        return [], r
    quot = [0] * (len(r) - db)
    inv_lead = F.inv(b[-1])
    if F.n == 1:
        p = F.p
        for i in range(len(r) - 1, db - 1, -1):
            c = r[i] * inv_lead % p
            if c:
                quot[i - db] = c
                base = i - db
                for j, y in enumerate(b):
                    r[base + j] = (r[base + j] - c * y) % p
    else:
        for i in range(len(r) - 1, db - 1, -1):
            c = F.mul(r[i], inv_lead)
            if c:
                quot[i - db] = c
                base = i - db
                for j, y in enumerate(b):
                    r[base + j] = F.sub(r[base + j], F.mul(c, y))
    return _strip(quot), _strip(r[:db])


@dataclass(frozen=True)
class Poly:
    field: FieldSpec
    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = list(self.coeffs)
        q = self.field.q
        for v in c:
            if not 0 <= v < q:
                raise ValueError(f"coefficient code {v} out of range for q={q}")
        object.__setattr__(self, "coeffs", tuple(_strip(c)))

    @classmethod
    def _raw(cls, F: FieldSpec, coeffs) -> Poly:
        obj = object.__new__(cls)
        object.__setattr__(obj, "field", F)
        object.__setattr__(obj, "coeffs", tuple(coeffs))
        return obj

    @classmethod
    def from_code(cls, F: FieldSpec, code: int) -> Poly:
        q = F.q
        c = []
        while code:
            code, r = divmod(code, q)
            c.append(r)
        return cls._raw(F, c)

    @classmethod
    def x(cls, F: FieldSpec) -> Poly:
        return cls._raw(F, (0, 1))

    @classmethod
    def const(cls, F: FieldSpec, c: int) -> Poly:
        return cls(F, (c,))

    @property
    def code(self) -> int:
        q = self.field.q
        out = 0
        for v in reversed(self.coeffs):
            out = out * q + v
        return out

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else ZERO_DEGREE

    @property
    def norm(self) -> int:
        return self.field.q ** (len(self.coeffs) - 1) if self.coeffs else 0

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return self.lead == 1

    def is_one(self) -> bool:
        return self.coeffs == (1,)

    def monic(self) -> Poly:
        if not self.coeffs:
            raise ZeroPolynomial("zero polynomial has no monic associate")
        if self.lead == 1:
            return self
        return Poly._raw(self.field, _scale(self.field, self.coeffs, self.field.inv(self.lead)))

    def _check(self, other) -> Poly:
        if isinstance(other, int):
            return Poly.const(self.field, other % self.field.q if self.field.n == 1 else other)
        if not isinstance(other, Poly):
            return NotImplemented
        if other.field != self.field:
            raise FieldMismatch(f"{self.field!r} vs {other.field!r}")
        return other

    def __add__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        return Poly._raw(self.field, _add(self.field, self.coeffs, o.coeffs))

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.field, _neg(self.field, self.coeffs))

    def __sub__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        return Poly._raw(self.field, _add(self.field, self.coeffs, _neg(self.field, o.coeffs)))

    def __mul__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        return Poly._raw(self.field, _mul(self.field, self.coeffs, o.coeffs))

    __rmul__ = __mul__

    def __divmod__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        qt, r = _divmod(self.field, self.coeffs, o.coeffs)
        return Poly._raw(self.field, qt), Poly._raw(self.field, r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly._raw(self.field, (1,))
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __call__(self, a: int) -> int:
        F = self.field
        acc = 0
        for v in reversed(self.coeffs):
            acc = F.add(F.mul(acc, a), v)
        return acc

    def divides(self, other: Poly) -> bool:
        return (other % self).is_zero()

    def to_text(self) -> str:
        return ",".join(str(v) for v in self.coeffs) if self.coeffs else "0"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            else:
                terms.append(f"{c}*{mono}")
        return " + ".join(terms)

    def __repr__(self):
        return f"Poly({self}; q={self.field.q})"


def parse_poly(F: FieldSpec, text: str) -> Poly:
    """Parse "c0,c1,...,cd" (constant term first)."""
    parts = [t.strip() for t in text.strip().split(",")]
    try:
        codes = [int(t) for t in parts]
    except ValueError:
        raise ParseError(f"bad polynomial text {text!r}") from None
    for c in codes:
        if not 0 <= c < F.q:
            raise ParseError(f"coefficient {c} not a valid code for q={F.q}")
    return Poly(F, tuple(codes))


def format_poly(N: Poly) -> str:
    return N.to_text()


def gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd; gcd(0, 0) = 0."""
    while not b.is_zero():
        a, b = b, a % b
    return a if a.is_zero() else a.monic()


def powmod(a: Poly, e: int, m: Poly) -> Poly:
    F = a.field
    result = Poly._raw(F, (1,)) % m
    base = a % m
    while e:
        if e & 1:
            result = (result * base) % m
        base = (base * base) % m
        e >>= 1
    return result


# -- enumeration -------------------------------------------------------------


def monic_codes(q: int, n: int) -> range:
    return range(q**n, 2 * q**n)


def iter_monic(F: FieldSpec, n: int) -> Iterator[Poly]:
    for code in monic_codes(F.q, n):
        yield Poly.from_code(F, code)


def enumerate_monic(F: FieldSpec, n: int) -> list[Poly]:
    if n < 0:
        raise ValueError("degree must be >= 0")
    return list(iter_monic(F, n))


def is_irreducible(N: Poly) -> bool:
    """Rabin's test: x^(q^n) = x mod N and gcd(x^(q^(n/l)) - x, N) = 1 for primes l | n."""
    if not N.is_monic():
        raise NotMonic(f"{N} is not monic")
    n = N.degree
    if n < 1:
        raise ValueError("irreducibility needs degree >= 1")
    if n == 1:
        return True
    F = N.field
    q = F.q
    x = Poly.x(F)
    frob = [x % N]  # frob[i] = x^(q^i) mod N
    for _ in range(n):
        frob.append(powmod(frob[-1], q, N))
    if frob[n] != x % N:
        return False
    for l in factor_int(n):
        if not gcd(frob[n // l] - x, N).is_one():
            return False
    return True


_irr_lock = threading.Lock()
_irr_cache: dict[tuple[FieldSpec, int], tuple[Poly, ...]] = {}


def enumerate_irreducibles(F: FieldSpec, n: int) -> tuple[Poly, ...]:
    """Monic irreducibles of degree n in codec order (cached per field)."""
    key = (F, n)
    hit = _irr_cache.get(key)
    if hit is not None:
        return hit
    with _irr_lock:
        hit = _irr_cache.get(key)
        if hit is None:
            hit = tuple(N for N in iter_monic(F, n) if is_irreducible(N))
            _irr_cache[key] = hit
    return hit


def iter_irreducibles(F: FieldSpec, max_degree: int) -> Iterator[Poly]:
    for d in range(1, max_degree + 1):
        yield from enumerate_irreducibles(F, d)


def mobius_int(n: int) -> int:
    fac = factor_int(n) if n > 1 else {}
    if any(e > 1 for e in fac.values()):
        return 0
    return -1 if len(fac) % 2 else 1


@functools.cache
def prime_count_formula(q: int, n: int) -> int:
    """pi(n) = (1/n) sum_{d | n} mu(d) q^(n/d)."""
    total = sum(mobius_int(d) * q ** (n // d) for d in range(1, n + 1) if n % d == 0)
    assert total % n == 0
    return total // n


def prime_count(F: FieldSpec, n: int) -> int:
    """pi(n) by enumeration."""
    return len(enumerate_irreducibles(F, n))


@dataclass(frozen=True)
class Factorization:
    unit: int
    factors: tuple[tuple[Poly, int], ...]

    @property
    def omega(self) -> int:
        return len(self.factors)

    @property
    def Omega(self) -> int:
        return sum(e for _, e in self.factors)

    def expand(self, F: FieldSpec) -> Poly:
        out = Poly.const(F, self.unit)
        for P, e in self.factors:
            out = out * P**e
        return out


def factor(N: Poly) -> Factorization:
    """Trial division by cached irreducibles of degree <= deg N / 2."""
    if N.is_zero():
        raise ZeroPolynomial("cannot factor the zero polynomial")
    F = N.field
    unit = N.lead
    rest = N.monic()
    found: list[tuple[Poly, int]] = []
    d = 1
    while 2 * d <= rest.degree:
        for P in enumerate_irreducibles(F, d):
            if 2 * d > rest.degree:
                break
            e = 0
            while True:
                qt, r = divmod(rest, P)
                if not r.is_zero():
                    break
                rest, e = qt, e + 1
            if e:
                found.append((P, e))
        d += 1
    if rest.degree >= 1:
        found.append((rest, 1))
    found.sort(key=lambda pe: (pe[0].degree, pe[0].code))
    return Factorization(unit, tuple(found))


# -- F_p-linear digit maps for bulk work -------------------------------------
#
# A polynomial of degree < L over F_{p^n} is a row vector of n*L base-p digits
# (exactly the base-p digits of its code).  Multiplication by a fixed polynomial
# and reduction modulo a fixed polynomial are F_p-linear, so they act on arrays
# of polynomials as one integer matmul followed by "% p".


def code_digits(codes, p: int, ndig: int) -> np.ndarray:
    codes = np.asarray(codes, dtype=np.int64)
    powers = p ** np.arange(ndig, dtype=np.int64)
    return (codes[..., None] // powers) % p


def digits_code(digits: np.ndarray, p: int) -> np.ndarray:
    powers = p ** np.arange(digits.shape[-1], dtype=np.int64)
    return digits @ powers


def _scalar_block(F: FieldSpec, c: int) -> np.ndarray:
    """n x n F_p matrix of multiplication by c on one coefficient (row-vector convention)."""
    n, p = F.n, F.p
    rows = [code_digits(F.mul(p**t, c), p, n) for t in range(n)]
    return np.array(rows, dtype=np.int64).reshape(n, n)


def mul_fixed_matrix(G: Poly, in_len: int) -> np.ndarray:
    """Matrix of N -> G*N for deg N < in_len; output has in_len + deg G coefficients."""
    F = G.field
    n, p = F.n, F.p
    dg = len(G.coeffs) - 1
    out_len = in_len + dg
    T = np.zeros((n * in_len, n * out_len), dtype=np.int64)
    for t in range(n):
        scaled = _scale(F, G.coeffs, p**t)
        dig = code_digits(np.array(scaled + [0] * (dg + 1 - len(scaled))), p, n).reshape(-1)
        for i in range(in_len):
            T[n * i + t, n * i : n * i + dig.size] = dig
    return T


def times_x_matrix(Q: Poly) -> np.ndarray:
    """Matrix of r -> x*r mod Q on residues (Q monic)."""
    F = Q.field
    n, p = F.n, F.p
    d = Q.degree
    A = np.zeros((n * d, n * d), dtype=np.int64)
    for i in range(d - 1):
        for t in range(n):
            A[n * i + t, n * (i + 1) + t] = 1
    tail = Q.coeffs[:d]
    for t in range(n):
        c = F.neg(p**t)
        red = [F.mul(c, v) for v in tail]
        A[n * (d - 1) + t] = code_digits(np.array(red), p, n).reshape(-1)
    return A


def reduce_matrix(Q: Poly, in_len: int) -> np.ndarray:
    """Matrix of N -> N mod Q for deg N < in_len."""
    F = Q.field
    n, p = F.n, F.p
    d = Q.degree
    X = times_x_matrix(Q)
    R = np.zeros((n * in_len, n * d), dtype=np.int64)
    for i in range(min(in_len, d)):
        for t in range(n):
            R[n * i + t, n * i + t] = 1
    for i in range(d, in_len):
        R[n * i : n * i + n] = (R[n * (i - 1) : n * i] @ X) % p
    return R


def mulmod_matrix(G: Poly, Q: Poly) -> np.ndarray:
    """Matrix of r -> G*r mod Q on residues, as a polynomial in times_x_matrix."""
    F = Q.field
    p = F.p
    X = times_x_matrix(Q)
    size = X.shape[0]
    g = (G % Q).coeffs
    acc = np.zeros((size, size), dtype=np.int64)
    Xi = np.eye(size, dtype=np.int64)
    for i, c in enumerate(g):
        if c:
            if F.n == 1:
                acc += c * Xi
            else:
                acc += Xi @ np.kron(np.eye(Q.degree, dtype=np.int64), _scalar_block(F, c))
        if i + 1 < len(g):
            Xi = (Xi @ X) % p
    return acc % p


def matpow_mod(A: np.ndarray, e: int, p: int) -> np.ndarray:
    result = np.eye(A.shape[0], dtype=np.int64)
    base = A % p
    while e:
        if e & 1:
            result = (result @ base) % p
        base = (base @ base) % p
        e >>= 1
    return result


def monic_block_digits(F: FieldSpec, n: int, width: int | None = None) -> np.ndarray:
    """Digit rows of all monic polynomials of degree n, codec order."""
    width = n + 1 if width is None else width
    return code_digits(np.arange(F.q**n, 2 * F.q**n, dtype=np.int64), F.p, F.n * width)


def reduce_codes(codes, Q: Poly) -> np.ndarray:
    """Residue codes of an array of polynomial codes modulo Q."""
    F = Q.field
    codes = np.asarray(codes, dtype=np.int64)
    if codes.size == 0:
        return codes.copy()
    top = int(codes.max())
    in_len = max(1, math.ceil(math.log(top + 1, F.q)) + 1)
    R = reduce_matrix(Q, in_len)
    dig = code_digits(codes, F.p, F.n * in_len)
    return digits_code((dig @ R) % F.p, F.p)
