"""Twin-rank / non-rank classification and the prime-driven non-rank generators.

A positive integer m is a twin rank when 6m-1 and 6m+1 are both prime, and a
non-rank otherwise.  Every non-rank can be written n*p +- N(p/6) for a prime
p >= 5 and n >= 0; classification recovers the least such parent prime from
the factorization of the composite side(s).
"""

from __future__ import annotations

from dataclasses import dataclass

from .arith import PRIMALITY_LIMIT, is_prime, nsix, smallest_prime_factor
from .errors import CapacityError, DomainError

TWIN_RANK = "twin_rank"
NON_RANK = "non_rank"
SIDE_MINUS = "minus"  # 6m - 1
SIDE_PLUS = "plus"    # 6m + 1

SIGN_PLUS = "+"
SIGN_MINUS = "-"


@dataclass(frozen=True)
class NonRankTerm:
    """One generated non-rank value = n*p + sign*N(p/6), n >= 1."""

    p: int
    n: int
    sign: str
    value: int


@dataclass(frozen=True)
class Classification:
    """Verdict for m, with parent prime and witness data when m is a non-rank.

    For a non-rank, m = witness_kappa * parent + (witness_sign) * N(parent/6),
    and composite_sides marks which of 6m-1, 6m+1 is composite.
    """

    m: int
    verdict: str
    parent: int | None = None
    composite_sides: tuple[str, ...] = ()
    witness_sign: str | None = None
    witness_kappa: int | None = None

    @property
    def is_twin_rank(self) -> bool:
        return self.verdict == TWIN_RANK


def nonranks_of(p: int, limit: int) -> list[NonRankTerm]:
    """All non-rank values n*p +- N(p/6) <= limit with n >= 1, ascending.

    The n = 0 offsets are twin ranks when the companion of p is prime, so they
    are not generated here (rank_from_prime covers them).
    """
    off = nsix(p)  # validates p
    out: list[NonRankTerm] = []
    n = 1
    while n * p - off <= limit:
        out.append(NonRankTerm(p, n, SIGN_MINUS, n * p - off))
        if n * p + off <= limit:
            out.append(NonRankTerm(p, n, SIGN_PLUS, n * p + off))
        n += 1
    return out


def classify(m: int) -> Classification:
    """Classify m as twin rank or non-rank with its parent prime.

    Refuses m whose sides leave the deterministic primality range rather than
    falling back to probabilistic answers.
    """
    if m < 1:
        raise DomainError(f"classification needs a positive integer, got {m}")
    if 6 * m + 1 >= PRIMALITY_LIMIT:
        raise CapacityError(f"6*{m}+1 exceeds the deterministic primality range")
    minus, plus = 6 * m - 1, 6 * m + 1
    minus_prime = is_prime(minus)
    plus_prime = is_prime(plus)
    if minus_prime and plus_prime:
        return Classification(m, TWIN_RANK)

    sides: list[tuple[int, str]] = []
    if not minus_prime:
        sides.append((smallest_prime_factor(minus), SIDE_MINUS))
    if not plus_prime:
        sides.append((smallest_prime_factor(plus), SIDE_PLUS))
    parent = min(spf for spf, _ in sides)
    composite_sides = tuple(side for _, side in sides)  # already (minus, plus) order

    off = nsix(parent)
    if m % parent == off % parent:
        sign, kappa = SIGN_PLUS, (m - off) // parent
    else:
        sign, kappa = SIGN_MINUS, (m + off) // parent
    return Classification(m, NON_RANK, parent, composite_sides, sign, kappa)


def twin_index(m: int) -> int:
    """6m, the midpoint of the prime pair, defined only for twin ranks."""
    c = classify(m)
    if not c.is_twin_rank:
        raise DomainError(f"{m} is not a twin rank (parent prime {c.parent})")
    return 6 * m


def rank_from_prime(p: int) -> int | None:
    """The twin rank N(p/6) contributed by prime p when its companion is prime.

    Returns (p-1)/6 when p = 1 (mod 6) and p-2 is prime, (p+1)/6 when
    p = -1 (mod 6) and p+2 is prime, None otherwise.
    """
    if p < 5 or not is_prime(p):
        raise DomainError(f"rank_from_prime needs a prime >= 5, got {p}")
    if p % 6 == 1 and is_prime(p - 2):
        return (p - 1) // 6
    if p % 6 == 5 and is_prime(p + 2):
        return (p + 1) // 6
    return None
