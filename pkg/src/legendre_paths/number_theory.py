"""Prime enumeration and quadratic-character primitives.

Everything here works on plain Python ints or numpy integer arrays.
Bulk work (sieving, full symbol tables) is vectorised; single evaluations
(the Jacobi recursion) stay in pure Python.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import config
from .errors import CapacityError, DomainError

_SEGMENT = 1 << 20


def _base_sieve(limit: int) -> np.ndarray:
    """Primes <= limit by a plain (unsegmented) sieve."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p::p] = False
    return np.flatnonzero(is_prime).astype(np.int64)


def sieve_primes(lo: int, hi: int) -> np.ndarray:
    """Return the primes in ``[lo, hi]`` in increasing order.

    Segmented sieve of Eratosthenes: memory is O(sqrt(hi) + segment).
    """
    lo, hi = int(lo), int(hi)
    if lo < 2:
        raise DomainError(f"lo must be >= 2, got {lo}")
    if hi < lo:
        raise DomainError(f"empty range [{lo}, {hi}]")
    if hi > config.SIEVE_MAX:
        raise CapacityError(f"hi={hi} exceeds sieve guard 2^40")

    base = _base_sieve(math.isqrt(hi))
    out = []
    start = lo
    while start <= hi:
        stop = min(start + _SEGMENT, hi + 1)  # exclusive
        mask = np.ones(stop - start, dtype=bool)
        for p in base:
            p = int(p)
            if p * p >= stop:
                break
            first = max(p * p, -(-start // p) * p)
            mask[first - start::p] = False
        seg = np.flatnonzero(mask) + start
        out.append(seg.astype(np.int64))
        start = stop
    return np.concatenate(out) if out else np.empty(0, dtype=np.int64)


def smallest_prime_factor_table(N: int) -> np.ndarray:
    """Table ``spf`` with ``spf[n]`` the least prime factor of n, 2 <= n <= N.

    Entries 0 and 1 are 0. The returned array is read-only and cached.
    """
    N = int(N)
    if N < 2:
        raise DomainError(f"N must be >= 2, got {N}")
    if N > config.SPF_MAX:
        raise CapacityError(f"N={N} exceeds smallest-prime-factor guard 2^31")
    return _spf_cached(N)


@lru_cache(maxsize=8)
def _spf_cached(N: int) -> np.ndarray:
    spf = np.zeros(N + 1, dtype=np.int32 if N < 2**31 else np.int64)
    for p in range(2, math.isqrt(N) + 1):
        if spf[p] == 0:
            block = spf[p * p::p]
            block[block == 0] = p
    rest = np.flatnonzero(spf == 0)
    spf[rest] = rest
    spf[:2] = 0
    spf.setflags(write=False)
    return spf


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of ``n >= 1`` as ``{prime: exponent}``.

    Uses the cached smallest-prime-factor table when n is small, trial
    division otherwise (n <= 10^12).
    """
    n = int(n)
    if n < 1:
        raise DomainError(f"cannot factor {n}")
    if n > config.FACTOR_MAX:
        raise CapacityError(f"n={n} exceeds factorization guard 10^12")
    out: dict[int, int] = {}
    if n <= 1 << 20:
        spf = _spf_cached(1 << 20)
        while n > 1:
            q = int(spf[n])
            out[q] = out.get(q, 0) + 1
            n //= q
        return out
    for q in _base_sieve(10**6):
        q = int(q)
        if q * q > n:
            break
        while n % q == 0:
            out[q] = out.get(q, 0) + 1
            n //= q
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_odd_prime(p: int) -> bool:
    """Deterministic primality check for odd p (trial division by sieved primes)."""
    p = int(p)
    if p < 3 or p % 2 == 0:
        return False
    r = math.isqrt(p)
    if r < 3:
        return True
    base = _base_sieve(r)
    return not np.any(p % base == 0)


def _require_odd_prime(p: int) -> int:
    p = int(p)
    if not is_odd_prime(p):
        raise DomainError(f"{p} is not an odd prime")
    return p


def legendre_symbol(n: int, p: int) -> int:
    """Legendre symbol (n/p) via the Jacobi recursion and quadratic reciprocity.

    ``p`` must be an odd prime. For an odd composite modulus the recursion
    still terminates but returns the Jacobi symbol, which has no residue
    meaning.
    """
    n, p = int(n), int(p)
    assert p >= 3 and p % 2 == 1, "modulus must be odd"
    if n < 0:
        # (-1/p) = +1 iff p = 1 mod 4
        sign = 1 if p % 4 == 1 else -1
        return sign * legendre_symbol(-n, p)
    a, m = n % p, p
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if m % 8 in (3, 5):
                result = -result
        a, m = m, a
        if a % 4 == 3 and m % 4 == 3:
            result = -result
        a %= m
    return result if m == 1 else 0


@dataclass(frozen=True)
class PrimeRecord:
    """An odd prime with its class mod 4 and the unit ``epsilon``.

    ``epsilon`` is 1 for p = 1 mod 4 and i for p = 3 mod 4; it is the
    Gauss sum divided by sqrt(p).
    """

    p: int
    residue_class: int
    epsilon: complex

    def __post_init__(self):
        if self.p % 2 == 0 or self.p < 3:
            raise DomainError(f"{self.p} is not an odd prime")
        if self.residue_class != self.p % 4:
            raise DomainError("residue_class must equal p mod 4")
        expected = 1 + 0j if self.residue_class == 1 else 1j
        if complex(self.epsilon) != expected:
            raise DomainError("epsilon inconsistent with residue class")

    @classmethod
    def of(cls, p: int) -> "PrimeRecord":
        p = _require_odd_prime(p)
        return cls(p, p % 4, 1 + 0j if p % 4 == 1 else 1j)

    @property
    def chi_minus_one(self) -> int:
        return 1 if self.residue_class == 1 else -1


def _modpow(base: np.ndarray, exp: int, mod: int) -> np.ndarray:
    # mod < 2^26 keeps every product below 2^52
    result = np.ones_like(base)
    base = base % mod
    while exp:
        if exp & 1:
            result = (result * base) % mod
        base = (base * base) % mod
        exp >>= 1
    return result


class _MultiplicativeOrder:
    """Indices 2..L grouped by Omega(n), for extending prime values.

    Within a level the indices are increasing, so the entries below a
    bound form a prefix.
    """

    def __init__(self, limit: int):
        spf = _spf_cached(limit).astype(np.int32)
        n = np.arange(limit + 1, dtype=np.int32)
        cof = np.zeros(limit + 1, dtype=np.int32)
        cof[2:] = n[2:] // spf[2:]
        omega = np.zeros(limit + 1, dtype=np.int16)
        cur = n.copy()
        live = np.flatnonzero(cur > 1)
        while live.size:
            omega[live] += 1
            cur[live] //= spf[cur[live]]
            live = live[cur[live] > 1]
        self.limit = limit
        self.levels = []
        for k in range(2, int(omega.max()) + 1):
            sel = np.flatnonzero(omega == k)
            self.levels.append((sel, spf[sel], cof[sel]))

    def extend(self, values: np.ndarray, bound: int) -> None:
        """Fill ``values[..., n]`` for composite n < bound from prime entries.

        Works along the last axis, so a batch of sign assignments can be
        extended in one pass.
        """
        for sel, s, c in self.levels:
            k = int(np.searchsorted(sel, bound))
            if k == 0:
                break
            values[..., sel[:k]] = values[..., s[:k]] * values[..., c[:k]]


@lru_cache(maxsize=4)
def _order_for(limit: int) -> _MultiplicativeOrder:
    return _MultiplicativeOrder(limit)


def multiplicative_order(bound: int) -> _MultiplicativeOrder:
    """Cached Omega-level structure covering all n < bound."""
    limit = 1 << max(10, (int(bound) - 1).bit_length())
    return _order_for(limit)


@lru_cache(maxsize=4)
def _primes_below_cached(limit: int) -> np.ndarray:
    arr = _base_sieve(limit)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class SymbolTable:
    """Values of the Legendre symbol modulo p on 1..p-1.

    ``values[j - 1]`` holds chi_p(j); indexing the table itself with any
    integer reduces it mod p first, so ``table[j]`` is chi_p(j) and
    ``table[0] == 0``.
    """

    p: int
    values: np.ndarray

    def __getitem__(self, j):
        j = np.asarray(j) % self.p
        out = np.where(j == 0, 0, self.values[np.maximum(j, 1) - 1])
        return int(out) if out.ndim == 0 else out.astype(np.int8)

    def __len__(self):
        return self.p - 1

    def extended(self) -> np.ndarray:
        """Length-p array indexed by residue, with entry 0 equal to 0."""
        out = np.empty(self.p, dtype=np.int8)
        out[0] = 0
        out[1:] = self.values
        return out


def symbol_table(p: int) -> SymbolTable:
    """Full table of chi_p(j), j = 1..p-1.

    Euler's criterion is evaluated on the primes below p only; every other
    entry follows from complete multiplicativity.
    """
    p = int(p)
    if p > config.SYMBOL_TABLE_MAX:
        raise CapacityError(f"p={p} exceeds symbol-table guard 2^26")
    p = _require_odd_prime(p)
    return SymbolTable(p, _table_values(p))


def _table_values(p: int) -> np.ndarray:
    order = multiplicative_order(p)
    primes = _primes_below_cached(order.limit)
    q = primes[: int(np.searchsorted(primes, p))]
    vals = np.zeros(p, dtype=np.int8)
    vals[1] = 1
    euler = _modpow(q, (p - 1) // 2, p)
    vals[q] = np.where(euler == 1, 1, -1)
    order.extend(vals, p)
    out = vals[1:]
    out.setflags(write=False)
    return out


def gauss_sum_closed_form(p: int) -> complex:
    """sqrt(p) if p = 1 mod 4, i*sqrt(p) if p = 3 mod 4."""
    p = int(p)
    return complex(math.sqrt(p), 0.0) if p % 4 == 1 else complex(0.0, math.sqrt(p))


def gauss_sum(p: int) -> complex:
    """Quadratic Gauss sum by direct summation with exact (fsum) accumulation."""
    p = int(p)
    if p > config.GAUSS_SUM_MAX:
        raise CapacityError(f"p={p} exceeds direct Gauss-sum guard 10^6")
    table = symbol_table(p)
    a = np.arange(1, p, dtype=np.float64)
    angle = 2.0 * np.pi * a / p
    chi = table.values.astype(np.float64)
    re = math.fsum(chi * np.cos(angle))
    im = math.fsum(chi * np.sin(angle))
    return complex(re, im)


def divisor_function(n: int, a: int) -> int:
    """d_n(a): number of ordered factorizations of a into n positive factors."""
    out = 1
    for e in factorize(a).values():
        out *= math.comb(e + n - 1, n - 1)
    return out


__all__ = [
    "PrimeRecord",
    "SymbolTable",
    "divisor_function",
    "factorize",
    "gauss_sum",
    "gauss_sum_closed_form",
    "is_odd_prime",
    "legendre_symbol",
    "sieve_primes",
    "smallest_prime_factor_table",
    "symbol_table",
]

