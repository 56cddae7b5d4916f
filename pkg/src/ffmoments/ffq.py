"""Finite fields F_q, q = p or p^n.

Elements are canonical integers in [0, q).  For n > 1 the integer is the
little-endian base-p digit vector of a residue modulo a fixed irreducible
polynomial over F_p, so ``3`` in F_4 is ``x + 1``.

Extension fields carry log/antilog tables with respect to a multiplicative
generator, which keeps multiplication and inversion O(1).  Every scalar op has
a numpy counterpart (``vadd``, ``vmul``, ...) used by the bulk enumeration code.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

import numpy as np

from .errors import DivisionByZero, FieldMismatch, NonPrimeP

MAX_EXTENSION_SIZE = 2**16
_ADD_TABLE_LIMIT = 256


def is_prime(n: int) -> bool:
    """Trial division primality test."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def factor_int(n: int) -> dict[int, int]:
    """Factor a positive integer by trial division."""
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_power(q: int) -> tuple[int, int]:
    """Split q = p^n; raises NonPrimeP when q is not a prime power."""
    fac = factor_int(q) if q > 1 else {}
    if len(fac) != 1:
        raise NonPrimeP(f"{q} is not a prime power")
    ((p, n),) = fac.items()
    return p, n


@dataclass(eq=False, repr=False)
class FieldSpec:
    p: int
    n: int = 1
    modulus: tuple[int, ...] | None = None
    generator: int | None = None
    q: int = field(init=False)
    _exp: np.ndarray | None = field(default=None, init=False)
    _log: np.ndarray | None = field(default=None, init=False)
    _add: np.ndarray | None = field(default=None, init=False)
    _neg: np.ndarray | None = field(default=None, init=False)

    def __post_init__(self):
        self.q = self.p**self.n

    # identity is (p, n): the modulus search is deterministic
    def __eq__(self, other):
        return isinstance(other, FieldSpec) and (self.p, self.n) == (other.p, other.n)

    def __hash__(self):
        return hash((self.p, self.n))

    def __repr__(self):
        return f"GF({self.q})" if self.n == 1 else f"GF({self.p}^{self.n})"

    def __reduce__(self):
        return (field_new, (self.p, self.n))

    @property
    def is_prime_field(self) -> bool:
        return self.n == 1

    # -- scalar arithmetic on integer codes ---------------------------------

    def add(self, a: int, b: int) -> int:
        if self.n == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        return int(self._digit_op(a, b, 1))

    def sub(self, a: int, b: int) -> int:
        if self.n == 1:
            return (a - b) % self.p
        return self.add(a, self.neg(b))

    def neg(self, a: int) -> int:
        if self.n == 1:
            return -a % self.p
        return int(self._neg[a])

    def mul(self, a: int, b: int) -> int:
        if self.n == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        return int(self._exp[(self._log[a] + self._log[b]) % (self.q - 1)])

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero in " + repr(self))
        if self.n == 1:
            return pow(a, -1, self.p)
        return int(self._exp[(-self._log[a]) % (self.q - 1)])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        result, base = 1, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def elements(self) -> list[int]:
        return list(range(self.q))

    def element(self, code: int) -> FieldElement:
        return FieldElement(self, code)

    # -- vectorized arithmetic on arrays of codes ---------------------------

    def vadd(self, a, b):
        if self.n == 1:
            return (a + b) % self.p
        if self.p == 2:
            return np.bitwise_xor(a, b)
        if self._add is not None:
            return self._add[a, b]
        return self._digit_op(a, b, 1)

    def vneg(self, a):
        if self.n == 1:
            return (-a) % self.p
        return self._neg[a]

    def vsub(self, a, b):
        if self.n == 1:
            return (a - b) % self.p
        return self.vadd(a, self.vneg(b))

    def vmul(self, a, b):
        if self.n == 1:
            return (a * b) % self.p
        a = np.asarray(a)
        b = np.asarray(b)
        prod = self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, prod)

    def _digit_op(self, a, b, sign):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        scale = 1
        for _ in range(self.n):
            out += ((a // scale % self.p + sign * (b // scale % self.p)) % self.p) * scale
            scale *= self.p
        return out


@dataclass(frozen=True)
class FieldElement:
    """A field element with operator sugar; hot loops use raw integer codes."""

    field: FieldSpec
    value: int

    def __post_init__(self):
        if not 0 <= self.value < self.field.q:
            raise ValueError(f"code {self.value} out of range for {self.field!r}")

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field!r} vs {other.field!r}")
            return other.value
        if isinstance(other, int):
            if self.field.n == 1:
                return other % self.field.p
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        return FieldElement(self.field, self.field.add(self.value, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return FieldElement(self.field, self.field.sub(self.value, o))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __mul__(self, other):
        o = self._other(other)
        return FieldElement(self.field, self.field.mul(self.value, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        return FieldElement(self.field, self.field.div(self.value, o))

    def inverse(self) -> FieldElement:
        return FieldElement(self.field, self.field.inv(self.value))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.value, e))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value}@{self.field!r}"


@functools.cache
def field_new(p: int, n: int = 1) -> FieldSpec:
    """Build F_{p^n}.

    For n > 1 the modulus is the first monic irreducible of degree n over F_p
    in codec order, and the generator the first element of order q - 1.
    """
    if not is_prime(p):
        raise NonPrimeP(f"p = {p} is not prime")
    if n < 1:
        raise ValueError("extension degree must be >= 1")
    if n == 1:
        return FieldSpec(p, 1)
    if p**n > MAX_EXTENSION_SIZE:
        raise ValueError(f"extension fields limited to q <= {MAX_EXTENSION_SIZE}")

    from . import polyring

    base = field_new(p, 1)
    modulus = None
    for code in range(p**n, 2 * p**n):
        cand = polyring.Poly.from_code(base, code)
        if polyring.is_irreducible(cand):
            modulus = cand.coeffs
            break
    if modulus is None:  # irreducibles exist in every degree
        raise AssertionError(f"no irreducible of degree {n} over F_{p}")

    F = FieldSpec(p, n, modulus=modulus)
    q = F.q
    order = q - 1
    primes = list(factor_int(order)) if order > 1 else []
    mod_poly = polyring.Poly(base, modulus)
    for g in range(2, q):
        gp = polyring.Poly.from_code(base, g)
        if all(polyring.powmod(gp, order // l, mod_poly).code != 1 for l in primes):
            break
    else:
        raise AssertionError("no multiplicative generator found")

    exp = np.zeros(order, dtype=np.int64)
    log = np.zeros(q, dtype=np.int64)
    cur = polyring.Poly.from_code(base, 1)
    for a in range(order):
        exp[a] = cur.code
        log[cur.code] = a
        cur = (cur * gp) % mod_poly
    F.generator = g
    F._exp, F._log = exp, log

    neg = np.zeros(q, dtype=np.int64)
    for c in range(q):
        neg[c] = F._digit_op(0, c, -1) if p != 2 else c
    F._neg = neg
    if p != 2 and q <= _ADD_TABLE_LIMIT:
        a = np.arange(q)
        F._add = F._digit_op(a[:, None], a[None, :], 1)
    return F


def field_from_q(q: int) -> FieldSpec:
    p, n = prime_power(q)
    return field_new(p, n)


def enumerate_elements(F: FieldSpec) -> list[FieldElement]:
    return [FieldElement(F, c) for c in range(F.q)]
