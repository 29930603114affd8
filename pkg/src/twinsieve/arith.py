"""Exact integer primitives: primality, prime tables, primorials, squarefree terms.

Everything here is exact: primality below 2**64 is deterministic, primorials
are arbitrary-precision, and the nearest-integer function works on rationals
so the half-integer ambiguity is detectable instead of silently rounded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import CapacityError, DomainError

# Witness tiers for strong-pseudoprime testing, deterministic for n < 2**64
# (each tuple: exclusive bound, witnesses sufficient below it).
_MR_TIERS = (
    (341_531, (9345883071009581737,)),
    (716_169_301, (336781006125, 9639812373923155)),
    (350_269_456_337, (4230279247111683200, 14694767155120705706, 16641139526367750375)),
    (1 << 64, (2, 325, 9375, 28178, 450775, 9780504, 1795265022)),
)

_TRIAL = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59)

PRIMALITY_LIMIT = 1 << 64


def is_prime(n: int) -> bool:
    """Deterministic primality test for 0 <= n < 2**64."""
    if n >= PRIMALITY_LIMIT:
        raise CapacityError(f"deterministic primality is limited to n < 2**64, got {n}")
    if n < 2:
        return False
    for p in _TRIAL:
        if n == p:
            return True
        if n % p == 0:
            return False
    if n < 61 * 61:
        return True
    d = n - 1
    s = (d & -d).bit_length() - 1
    d >>= s
    witnesses: tuple[int, ...] = _MR_TIERS[-1][1]
    for bound, tier in _MR_TIERS:
        if n < bound:
            witnesses = tier
            break
    for a in witnesses:
        a %= n
        if a == 0:
            continue
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class PrimeTable:
    """Immutable table of all primes <= limit with 1-based index access (p_1 = 2)."""

    __slots__ = ("limit", "_odd_flags", "_primes")

    def __init__(self, limit: int):
        if limit < 2:
            raise DomainError(f"prime table needs limit >= 2, got {limit}")
        self.limit = limit
        n_odd = max(0, (limit - 1) // 2)  # flags for odd values 3, 5, ..., index i -> 2i+3
        flags = np.ones(n_odd, dtype=bool)
        for i in range((math.isqrt(limit) - 1) // 2):
            if flags[i]:
                p = 2 * i + 3
                flags[(p * p - 3) // 2 :: p] = False
        self._odd_flags = flags
        odd_primes = 2 * np.flatnonzero(flags).astype(np.int64) + 3
        self._primes = np.concatenate((np.array([2], dtype=np.int64), odd_primes))

    @property
    def primes(self) -> np.ndarray:
        return self._primes

    def __len__(self) -> int:
        return int(self._primes.size)

    def __contains__(self, n: int) -> bool:
        if not 2 <= n <= self.limit:
            return False
        if n % 2 == 0:
            return n == 2
        return bool(self._odd_flags[(n - 3) // 2])

    def nth(self, j: int) -> int:
        """The j-th prime, 1-based: nth(1) = 2, nth(3) = 5."""
        if not 1 <= j <= len(self):
            raise DomainError(f"prime index {j} out of range 1..{len(self)}")
        return int(self._primes[j - 1])

    def index(self, p: int) -> int:
        """1-based index of the prime p in the table."""
        i = int(np.searchsorted(self._primes, p))
        if i >= len(self) or self._primes[i] != p:
            raise DomainError(f"{p} is not a prime in the table")
        return i + 1

    def between(self, lo: int, hi: int) -> list[int]:
        """Primes p with lo < p <= min(hi, limit), ascending."""
        i = int(np.searchsorted(self._primes, lo, side="right"))
        j = int(np.searchsorted(self._primes, hi, side="right"))
        return self._primes[i:j].tolist()


_shared: PrimeTable | None = None


def shared_table(limit: int) -> PrimeTable:
    """Module-wide prime table, regrown geometrically on demand."""
    global _shared
    if _shared is None or _shared.limit < limit:
        _shared = PrimeTable(max(limit, 1 << 16, 0 if _shared is None else 2 * _shared.limit))
    return _shared


# Plain list mirror of small primes; python-level iteration with early break is
# faster than iterating a numpy array in trial-division loops.
_trial_cache: list[int] = []


def _trial_primes(up_to: int) -> list[int]:
    global _trial_cache
    if not _trial_cache or _trial_cache[-1] < up_to:
        _trial_cache = shared_table(max(up_to, 1 << 10)).primes.tolist()
    return _trial_cache


def primes_between(lo: int, hi: int) -> list[int]:
    """All primes p with lo < p <= hi, ascending; empty if the range holds none."""
    if hi < 2 or hi <= lo:
        return []
    return shared_table(hi).between(lo, hi)


def next_prime(n: int) -> int:
    """Smallest prime strictly greater than n."""
    k = max(n + 1, 2)
    while not is_prime(k):
        k += 1
    return k


def nearest_int(x: int | Fraction) -> int:
    """Integer nearest to the exact rational x.

    Half-integers are rejected rather than rounded: the callers' domain
    guarantees they cannot occur, so hitting one signals a bug.
    """
    if isinstance(x, float):
        raise TypeError("nearest_int requires exact input (int or Fraction), not float")
    x = Fraction(x)
    if x.denominator == 2:
        raise DomainError(f"{x} is a half-integer; the nearest integer is ambiguous")
    return math.floor(x + Fraction(1, 2))


def nsix(p: int) -> int:
    """Nearest integer to p/6 for a prime p >= 5: (p-1)/6 if p = 1 (mod 6), else (p+1)/6."""
    if p < 5 or not is_prime(p):
        raise DomainError(f"nsix needs a prime >= 5, got {p}")
    return (p + 1) // 6 if p % 6 == 5 else (p - 1) // 6


def primorial_from_5(p: int) -> int:
    """Product of all primes q with 5 <= q <= p, exact."""
    if p < 5 or not is_prime(p):
        raise DomainError(f"primorial_from_5 needs a prime >= 5, got {p}")
    return math.prod(primes_between(4, p))


def smallest_prime_factor(n: int) -> int:
    """Least prime dividing n >= 2 (returns n itself when n is prime)."""
    if n < 2:
        raise DomainError(f"smallest_prime_factor needs n >= 2, got {n}")
    root = math.isqrt(n)
    for p in _trial_primes(root):
        if p > root:
            break
        if n % p == 0:
            return p
    return n


@dataclass(frozen=True)
class SquarefreeTerm:
    """Squarefree product n of generating primes, with mu = (-1)^nu and nu factors."""

    n: int
    mu: int
    nu: int


def squarefree_terms(generating_primes: list[int], cap: int) -> list[SquarefreeTerm]:
    """Every squarefree product n <= cap of the generating primes (n = 1 excluded).

    Returned ascending by n. The generating primes must be distinct.
    """
    ps = sorted(generating_primes)
    if len(set(ps)) != len(ps):
        raise DomainError("generating primes must be distinct")
    for q in ps:
        if q < 2 or not is_prime(q):
            raise DomainError(f"{q} is not prime")
    out: list[SquarefreeTerm] = []

    def extend(start: int, n: int, nu: int) -> None:
        for i in range(start, len(ps)):
            v = n * ps[i]
            if v > cap:
                break
            out.append(SquarefreeTerm(v, -1 if (nu + 1) % 2 else 1, nu + 1))
            extend(i + 1, v, nu + 1)

    extend(0, 1, 0)
    out.sort(key=lambda t: t.n)
    return out
