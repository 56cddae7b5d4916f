"""Dirichlet characters modulo an irreducible Q in F_q[x].

(F_q[x]/Q)* is cyclic of order M = q^deg Q - 1.  One discrete-log table over
residue codes and one table of M-th roots of unity realize every character:
chi_j(g^a) = exp(2 pi i j a / M).
"""

from __future__ import annotations

import functools
import math
import os
from dataclasses import dataclass

import numpy as np

from .errors import DegreeTooLarge, NotIrreducible, NotMonic
from .ffq import factor_int
from .polyring import Poly, code_digits, digits_code, is_irreducible, matpow_mod, mulmod_matrix

DEFAULT_MAX_TABLE = 2**20
EXHAUSTIVE_ORTHO = 512


def max_table() -> int:
    return int(os.environ.get("FFM_MAX_TABLE", DEFAULT_MAX_TABLE))


@dataclass(frozen=True, eq=False)
class UnitGroupTable:
    Q: Poly
    M: int
    g: Poly
    dlog: np.ndarray  # residue code -> exponent, -1 at 0
    powers: np.ndarray  # exponent -> residue code
    roots: np.ndarray  # exp(2 pi i a / M)

    @property
    def field(self):
        return self.Q.field

    @property
    def q(self) -> int:
        return self.Q.field.q

    @property
    def deg(self) -> int:
        return self.Q.degree

    @property
    def D(self) -> int:
        """The L-polynomial degree bound deg Q - 1."""
        return self.Q.degree - 1

    @property
    def phi(self) -> int:
        return self.M

    def character(self, j: int) -> Character:
        return Character(self, j % self.M)

    def characters(self, include_trivial: bool = False):
        start = 0 if include_trivial else 1
        return [Character(self, j) for j in range(start, self.M)]

    def log(self, N: Poly) -> int:
        """Discrete log of N mod Q; -1 when Q divides N."""
        r = N % self.Q
        return -1 if r.is_zero() else int(self.dlog[r.code])

    def even_indices(self) -> np.ndarray:
        return np.arange(0, self.M, self.q - 1)


def _generator_certificate(A: np.ndarray, M: int, primes, p: int) -> bool:
    eye = np.eye(A.shape[0], dtype=np.int64)
    if not np.array_equal(matpow_mod(A, M, p), eye):
        return False
    return all(not np.array_equal(matpow_mod(A, M // l, p), eye) for l in primes)


def find_generator(Q: Poly) -> Poly:
    """First residue in codec order passing g^M = 1, g^(M/l) != 1 for primes l | M."""
    F = Q.field
    M = F.q**Q.degree - 1
    primes = list(factor_int(M))
    for code in range(1, M + 1):
        G = Poly.from_code(F, code)
        if _generator_certificate(mulmod_matrix(G, Q), M, primes, F.p):
            return G
    raise AssertionError(f"no generator found modulo {Q}; Q cannot be irreducible")


def _power_codes(G: Poly, Q: Poly, M: int) -> np.ndarray:
    """Codes of G^0 .. G^(M-1) mod Q: baby steps, then block giant steps (digit matmuls)."""
    F = Q.field
    p = F.p
    A = mulmod_matrix(G, Q)
    width = A.shape[0]
    B = max(1, math.isqrt(M - 1) + 1)
    baby = np.zeros((B, width), dtype=np.int64)
    baby[0] = code_digits(1, p, width)
    for i in range(1, B):
        baby[i] = (baby[i - 1] @ A) % p
    giant = matpow_mod(A, B, p)
    nblocks = -(-M // B)
    out = np.empty((nblocks * B, width), dtype=np.int64)
    cur = baby
    for b in range(nblocks):
        out[b * B : (b + 1) * B] = cur
        if b + 1 < nblocks:
            cur = (cur @ giant) % p
    return digits_code(out[:M], p)


@functools.lru_cache(maxsize=64)
def unit_group(Q: Poly, bound: int | None = None) -> UnitGroupTable:
    if not Q.is_monic():
        raise NotMonic(f"{Q} is not monic")
    if Q.degree < 2:
        raise ValueError("modulus must have degree >= 2")
    bound = max_table() if bound is None else bound
    q = Q.field.q
    M = q**Q.degree - 1
    if M > bound:
        raise DegreeTooLarge(f"group order {M} exceeds table bound {bound} (set FFM_MAX_TABLE)")
    if not is_irreducible(Q):
        raise NotIrreducible(f"{Q} is not irreducible")
    g = find_generator(Q)
    powers = _power_codes(g, Q, M)
    dlog = np.full(M + 1, -1, dtype=np.int64)
    dlog[powers] = np.arange(M, dtype=np.int64)
    if dlog[0] != -1 or np.count_nonzero(dlog >= 0) != M:
        raise AssertionError(f"power table of {g} mod {Q} is not a bijection onto the units")
    roots = np.exp(2j * np.pi * np.arange(M) / M)
    for arr in (dlog, powers, roots):
        arr.setflags(write=False)
    return UnitGroupTable(Q, M, g, dlog, powers, roots)


@dataclass(frozen=True)
class Character:
    table: UnitGroupTable
    j: int

    def __call__(self, N: Poly) -> complex:
        return char_eval(self, N)

    def __mul__(self, other: Character) -> Character:
        return Character(self.table, (self.j + other.j) % self.table.M)

    def conj(self) -> Character:
        return Character(self.table, (-self.j) % self.table.M)

    @property
    def is_trivial(self) -> bool:
        return self.j == 0

    @property
    def order(self) -> int:
        return self.table.M // math.gcd(self.j, self.table.M)

    @property
    def lam(self) -> int:
        return 1 if is_even(self) else 0

    def values(self, residue_codes: np.ndarray) -> np.ndarray:
        """Vectorized evaluation on reduced residue codes (0 maps to 0)."""
        a = self.table.dlog[residue_codes]
        vals = self.table.roots[(self.j * a) % self.table.M]
        return np.where(a < 0, 0, vals)


def char_eval(chi: Character, N: Poly) -> complex:
    t = chi.table
    a = t.log(N)
    if a < 0:
        return 0j
    return complex(t.roots[(chi.j * a) % t.M])


def is_even_direct(chi: Character) -> bool:
    F = chi.table.field
    return all(abs(char_eval(chi, Poly.const(F, c)) - 1) < 1e-12 for c in range(1, F.q))


def is_even(chi: Character) -> bool:
    """chi trivial on the constants; direct evaluation and j = 0 mod (q-1) must agree."""
    direct = is_even_direct(chi)
    arith = chi.j % (chi.table.q - 1) == 0
    if direct != arith:
        raise AssertionError(f"evenness routes disagree for j={chi.j}")
    return arith


def even_mask(table: UnitGroupTable) -> np.ndarray:
    """Evenness of every chi_j by evaluation on the constants (vectorized)."""
    const_logs = table.dlog[np.arange(1, table.q)]
    j = np.arange(table.M)
    vals = table.roots[(np.outer(j, const_logs)) % table.M]
    return np.all(np.abs(vals - 1) < 1e-12, axis=1)


@dataclass(frozen=True)
class OrthogonalityReport:
    M: int
    exhaustive: bool
    pairs_checked: int
    max_err_chars: float
    max_err_residues: float
    tol: float

    @property
    def ok(self) -> bool:
        return self.max_err_chars <= self.tol and self.max_err_residues <= self.tol


def orthogonality_check(
    table: UnitGroupTable, tol: float = 1e-9, samples: int = 48, seed: int = 0
) -> OrthogonalityReport:
    """Both orthogonality relations, exhaustive up to M = 512 and sampled above."""
    M = table.M
    units = np.flatnonzero(table.dlog >= 0)  # residue codes of all units
    logs = table.dlog[units]
    exhaustive = M <= EXHAUSTIVE_ORTHO
    if exhaustive:
        js = np.arange(M)
        res_idx = np.arange(M)
    else:
        rng = np.random.default_rng(seed)
        js = np.unique(np.concatenate([[0, 1, M - 1], rng.choice(M, samples, replace=False)]))
        res_idx = np.unique(np.concatenate([[0, 1], rng.choice(M, samples, replace=False)]))

    # sum over all residues A of chi(A) conj(psi(A))
    V = table.roots[np.outer(js, logs) % M]
    G1 = V @ V.conj().T
    err1 = float(np.max(np.abs(G1 - M * np.eye(len(js)))))

    # sum over all characters of chi(A) conj(chi(B))
    W = table.roots[np.outer(np.arange(M), logs[res_idx]) % M]
    G2 = W.T @ W.conj()
    err2 = float(np.max(np.abs(G2 - M * np.eye(len(res_idx)))))
    return OrthogonalityReport(M, exhaustive, len(js) ** 2 + len(res_idx) ** 2, err1, err2, tol)


def dlog_roundtrip(table: UnitGroupTable) -> bool:
    """g^dlog(N) = N for every unit, through the stored power table."""
    units = np.flatnonzero(table.dlog >= 0)
    return bool(np.array_equal(table.powers[table.dlog[units]], units))


def dlog_roundtrip_scalar(table: UnitGroupTable, codes) -> bool:
    """Same check, recomputing g^a by scalar polynomial powering."""
    from .polyring import powmod

    for c in codes:
        N = Poly.from_code(table.field, int(c))
        if powmod(table.g, int(table.dlog[c]), table.Q) != N:
            return False
    return True
