"""Exact period-count identities and the Legendre-type twin-rank estimate.

All identity work is big-integer / exact-rational; floating point appears only
in the truncated twin-prime-constant product and the asymptote evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .arith import SquarefreeTerm, is_prime, next_prime, primes_between, squarefree_terms
from .errors import DomainError
from .oracle import DEFAULT_CEILING, pi2_exact, prime_values_segmented

EULER_GAMMA = 0.5772156649015329


def _levels(p_j: int) -> list[int]:
    if p_j < 5 or not is_prime(p_j):
        raise DomainError(f"level must be a prime >= 5, got {p_j}")
    return primes_between(4, p_j)


@dataclass(frozen=True)
class CountsRow:
    """Per-period counts at level p_j: all fields exact.

    L is the period, G the non-ranks per period owned by p_j, S the supergroup
    size, R the remnant-class count, q = G/L, Q = S/L, x_frac = R/L.
    """

    p_j: int
    L: int
    G: int
    q: Fraction
    S: int
    Q: Fraction
    R: int
    x_frac: Fraction


def counts_row(p_j: int) -> CountsRow:
    """Exact L, G, q, S, Q, R, x for one sieve level."""
    levels = _levels(p_j)
    L = math.prod(levels)
    R = math.prod(q - 2 for q in levels)
    G = 2 * math.prod(q - 2 for q in levels[:-1])
    S = L - R
    return CountsRow(
        p_j=p_j,
        L=L,
        G=G,
        q=Fraction(G, L),
        S=S,
        Q=Fraction(S, L),
        R=R,
        x_frac=Fraction(R, L),
    )


def supergroup_size(p_j: int) -> int:
    """Non-ranks per period contributed by all primes 5..p_j: L*(1 - prod (p-2)/p)."""
    levels = _levels(p_j)
    return math.prod(levels) - math.prod(q - 2 for q in levels)


def m_bound(p_next: int) -> int:
    """(p_next**2 - 1) / 6, the threshold below which remnants are twin ranks."""
    if p_next in (2, 3):
        raise DomainError(f"m_bound is undefined for p = {p_next}")
    if p_next < 5 or not is_prime(p_next):
        raise DomainError(f"m_bound needs a prime >= 5, got {p_next}")
    return (p_next * p_next - 1) // 6


def _ie_terms(p_j: int, x: int) -> list[SquarefreeTerm]:
    """Squarefree products n <= x of the primes in (p_j, x]."""
    return squarefree_terms(primes_between(p_j, x), x)


def _ie_floor_sum(terms: list[SquarefreeTerm], x: int, workers: int = 1) -> int:
    """Sum of mu(n) * 2^nu(n) * floor(x/n); integer-exact, so any partition merges equally."""
    if workers <= 1:
        return sum(t.mu * (1 << t.nu) * (x // t.n) for t in terms)
    from concurrent.futures import ProcessPoolExecutor

    chunks = [(x, [(t.n, t.mu, t.nu) for t in terms[i::workers]]) for i in range(workers)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return sum(pool.map(_ie_floor_chunk, chunks))


def _ie_floor_chunk(args: tuple[int, list[tuple[int, int, int]]]) -> int:
    x, triples = args
    return sum(mu * (1 << nu) * (x // n) for n, mu, nu in triples)


@dataclass(frozen=True)
class LegendreReport:
    """Inclusion-exclusion estimate at one level, with oracle truth when in range.

    estimate = R0 + ie_sum exactly; residuals are estimate minus each oracle
    count, or None when 6x+1 (resp. 6L+1) exceeds the sieve ceiling.
    """

    p_j: int
    p_next: int
    M: int
    x: int
    R0: int
    ie_sum: int
    estimate: int
    oracle_pi2: int | None
    oracle_window: int | None
    residual_pi2: int | None
    residual_window: int | None


def legendre_pi2(
    p_j: int, *, ceiling: int = DEFAULT_CEILING, workers: int = 1
) -> LegendreReport:
    """Evaluate the sieve estimate R0 + sum mu(n) 2^nu(n) floor(x/n) at x = L - M.

    The two oracle counts answer the two readings of what is estimated: twin
    ranks up to x (pi2 of 6x+1) and twin ranks in the whole period [1, L].
    """
    levels = _levels(p_j)
    if p_j < 7:
        raise DomainError(f"legendre_pi2 needs a level >= 7, got {p_j}")
    p_nxt = next_prime(p_j)
    M = m_bound(p_nxt)
    L = math.prod(levels)
    x = L - M
    if x <= 0:
        raise DomainError(f"level {p_j} leaves no room: L = {L}, M = {M}")
    R0 = math.prod(q - 2 for q in levels)
    ie_sum = _ie_floor_sum(_ie_terms(p_j, x), x, workers)
    estimate = R0 + ie_sum

    oracle_pi2 = pi2_exact(6 * x + 1, ceiling=ceiling) if 6 * x + 1 <= ceiling else None
    oracle_window = pi2_exact(6 * L + 1, ceiling=ceiling) if 6 * L + 1 <= ceiling else None
    return LegendreReport(
        p_j=p_j,
        p_next=p_nxt,
        M=M,
        x=x,
        R0=R0,
        ie_sum=ie_sum,
        estimate=estimate,
        oracle_pi2=oracle_pi2,
        oracle_window=oracle_window,
        residual_pi2=None if oracle_pi2 is None else estimate - oracle_pi2,
        residual_window=None if oracle_window is None else estimate - oracle_window,
    )


@dataclass(frozen=True)
class MainTermReport:
    """Main/error split of the estimate, in two exact forms plus the asymptote.

    R_M_sum replaces floor(x/n) by x/n; R_M_product is the closed product form.
    The two are generally unequal at finite x, so their gap is reported, never
    asserted away.  R_E = estimate - R_M_sum.
    """

    p_j: int
    x: int
    R_M_sum: Fraction
    R_M_product: Fraction
    R_E: Fraction
    asymptote: float


def main_term(p_j: int, *, workers: int = 1) -> MainTermReport:
    """Exact-rational main term at level p_j, both forms, with the asymptote."""
    levels = _levels(p_j)
    if p_j < 7:
        raise DomainError(f"main_term needs a level >= 7, got {p_j}")
    p_nxt = next_prime(p_j)
    M = m_bound(p_nxt)
    L = math.prod(levels)
    x = L - M
    R0 = math.prod(q - 2 for q in levels)
    terms = _ie_terms(p_j, x)
    rm_sum = Fraction(R0) + sum(
        (Fraction(t.mu * (1 << t.nu) * x, t.n) for t in terms), Fraction(0)
    )
    estimate = R0 + _ie_floor_sum(terms, x, workers)

    # Products kept as unreduced integer pairs; one Fraction normalization at the end.
    num_all = den_all = 1
    for q in primes_between(4, x):
        num_all *= q - 2
        den_all *= q
    num_tail = den_tail = 1
    for q in primes_between(p_j, x):
        num_tail *= q - 2
        den_tail *= q
    rm_product = L * Fraction(num_all, den_all) + M * (1 - Fraction(num_tail, den_tail))

    return MainTermReport(
        p_j=p_j,
        x=x,
        R_M_sum=rm_sum,
        R_M_product=rm_product,
        R_E=estimate - rm_sum,
        asymptote=asymptotic_density(x),
    )


def twin_prime_constant(tolerance: float = 1e-6) -> float:
    """Truncated product for c2 = prod_{p>2} (1 - 1/(p-1)^2), within tolerance.

    The cutoff P satisfies sum_{p>P} 2/p^2 < tolerance: each dropped log factor
    is below 2/p^2 in magnitude, and since every prime > 3 is +-1 (mod 6) the
    prime sum is below sum over n = 6k+-1 > P of 2/n^2 < 2/(3(P-6)).
    """
    if not tolerance >= 1e-12:
        raise DomainError(f"tolerance must be >= 1e-12, got {tolerance}")
    cutoff = int(2.0 / (3.0 * tolerance)) + 7
    return _c2_partial(cutoff)


@lru_cache(maxsize=8)
def _c2_partial(cutoff: int) -> float:
    log_sum = 0.0
    for block in prime_values_segmented(cutoff, lo=2):
        ps = block.astype(np.float64)
        log_sum += float(np.log1p(-1.0 / ((ps - 1.0) ** 2)).sum())
    return math.exp(log_sum)


def hardy_littlewood_constant(tolerance: float = 1e-6) -> float:
    """2*c2, the pair-counting constant the asymptote is usually quoted against."""
    return 2.0 * twin_prime_constant(tolerance)


def asymptote_coefficient(tolerance: float = 1e-9) -> float:
    """Leading coefficient of the main term in the form coef * 6x / ln^2(6x+1).

    Equals 2*c2*e^(-2*gamma) (about 0.416214): the product over primes >= 5 of
    (1 - 2/p) behaves like 3 * 4*c2*e^(-2*gamma)/ln^2 x, and L/(6x) -> 1/6,
    leaving a factor 2 next to c2*e^(-2*gamma).
    """
    return 2.0 * twin_prime_constant(tolerance) * math.exp(-2.0 * EULER_GAMMA)


def asymptotic_density(x: int, *, tolerance: float = 1e-9) -> float:
    """Asymptotic main-term value coef * 6x / ln^2(6x+1) at integer x >= 2."""
    if x < 2:
        raise DomainError(f"asymptotic_density needs x >= 2, got {x}")
    return asymptote_coefficient(tolerance) * (6.0 * x) / math.log(6 * x + 1) ** 2
