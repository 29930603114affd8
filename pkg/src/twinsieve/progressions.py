"""Admissible residue systems modulo primorials and multi-prime non-rank families.

Two related views of each sieve level p live here.  residue_set is the
class-level view: residues c mod L(p) whose classes avoid +-N(q/6) mod q for
every prime 5 <= q <= p; its cardinality is prod (q-2) and it is the
complement structure the counting identities are about.  remnants_below is the
value-level view: it strikes only actual non-rank values q*n +- N(q/6) with
n >= 1, so the finitely many n = 0 offsets (1, 2, 3, 5, ... when they are twin
ranks) survive, exactly as they do in a true interval sieve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .arith import is_prime, next_prime, nsix, primes_between
from .classify import classify
from .counting import m_bound
from .errors import CapacityError, DomainError

MATERIALIZE_GUARD = 10**8


def _validate_level(p: int) -> list[int]:
    if p < 5 or not is_prime(p):
        raise DomainError(f"sieve level must be a prime >= 5, got {p}")
    return primes_between(4, p)


@dataclass(frozen=True, eq=False)
class ResidueSet:
    """Residues c in [0, L(p)) with c mod q not in {+-N(q/6)} for all 5 <= q <= p.

    constants is an ascending int64 array of size prod (q-2); the progressions
    6*(L(p)*n + c) +- 1 carry every twin pair beyond (3,5) and (5,7).
    """

    p: int
    modulus: int
    constants: np.ndarray

    def __len__(self) -> int:
        return int(self.constants.size)

    def __contains__(self, c: int) -> bool:
        i = int(np.searchsorted(self.constants, c))
        return i < len(self) and int(self.constants[i]) == c


def residue_set_size(p: int) -> int:
    """prod (q-2) over primes 5 <= q <= p, without materializing anything."""
    return math.prod(q - 2 for q in _validate_level(p))


def residue_set(p: int) -> ResidueSet:
    """Materialize the admissible residue classes at level p by direct filtering."""
    levels = _validate_level(p)
    size = math.prod(q - 2 for q in levels)
    if size > MATERIALIZE_GUARD:
        raise CapacityError(
            f"C_{p} holds {size} residues (> {MATERIALIZE_GUARD}); use remnants_below for interval queries"
        )
    modulus = math.prod(levels)
    keep = np.ones(modulus, dtype=bool)
    for q in levels:
        off = nsix(q)
        keep[off::q] = False
        keep[q - off :: q] = False
    return ResidueSet(p=p, modulus=modulus, constants=np.flatnonzero(keep).astype(np.int64))


def inductive_step(current: ResidueSet, p_next: int) -> ResidueSet:
    """Lift the level-p classes through l = 0..p_next-1 and drop the two hit classes.

    Equals residue_set(p_next) elementwise; kept as an independent construction
    so the two can cross-check each other.
    """
    if p_next < 5 or not is_prime(p_next):
        raise DomainError(f"p_next must be a prime >= 5, got {p_next}")
    if next_prime(current.p) != p_next:
        raise DomainError(f"{p_next} does not follow level {current.p}")
    if len(current) * (p_next - 2) > MATERIALIZE_GUARD:
        raise CapacityError(f"lift to level {p_next} exceeds {MATERIALIZE_GUARD} residues")
    lifts = (
        np.arange(p_next, dtype=np.int64)[:, None] * current.modulus + current.constants[None, :]
    ).ravel()
    off = nsix(p_next)
    r = lifts % p_next
    keep = (r != off) & (r != p_next - off)
    return ResidueSet(
        p=p_next, modulus=current.modulus * p_next, constants=np.sort(lifts[keep])
    )


def boundary_twin_ranks(p: int) -> list[int]:
    """Twin ranks equal to N(q/6) for primes 7 <= q <= p.

    These are the n = 0 offsets: each sits inside a struck residue class of its
    own q but is not an actual non-rank, so the value-level sieve keeps it.
    The rank 1 (pair 5, 7) is excluded: level 5 strikes its full classes, so 1
    never enters any constants list.
    """
    _validate_level(p)
    keepers = set()
    for q in primes_between(6, p):
        v = nsix(q)
        if v % 5 not in (1, 4) and classify(v).is_twin_rank:
            keepers.add(v)
    return sorted(keepers)


@dataclass(frozen=True)
class RemnantReport:
    """Integers in [1, bound) that no prime 5 <= q <= p strikes as a non-rank value.

    front_bound is (p_next**2 - 1)/6; remnants below it are necessarily twin
    ranks (the front), remnants at or above it are twin ranks or intruders
    (non-ranks whose parent exceeds p), the latter tagged with their parents.
    """

    p: int
    bound: int
    front_bound: int
    remnants: tuple[int, ...]
    front_twin_ranks: tuple[int, ...]
    intruders: tuple[tuple[int, int], ...]


def remnants_below(p_sieve: int, bound: int) -> RemnantReport:
    """Value-level remnants in [1, bound), split at the front threshold."""
    levels = _validate_level(p_sieve)
    if bound < 1:
        raise DomainError(f"bound must be >= 1, got {bound}")
    keep = np.ones(bound, dtype=bool)
    keep[0] = False
    for q in levels:
        off = nsix(q)
        if off + q < bound:
            keep[off + q :: q] = False  # +N(q/6) class, n >= 1
        if q - off < bound:
            keep[q - off :: q] = False  # -N(q/6) class, n >= 1
    remnants = np.flatnonzero(keep)
    front_bound = m_bound(next_prime(p_sieve))
    front = remnants[remnants < front_bound]
    intruders = []
    for v in remnants[remnants >= front_bound].tolist():
        c = classify(v)
        if not c.is_twin_rank:
            intruders.append((v, c.parent))
    return RemnantReport(
        p=p_sieve,
        bound=bound,
        front_bound=front_bound,
        remnants=tuple(remnants.tolist()),
        front_twin_ranks=tuple(front.tolist()),
        intruders=tuple(intruders),
    )


SIGN_VALUE = {"+": 1, "-": -1}


@dataclass(frozen=True)
class FamilyMember:
    """One sign vector with its residue: residue = signs_i * N(p_i/6) (mod p_i)."""

    signs: tuple[str, ...]
    residue: int


@dataclass(frozen=True, eq=False)
class ProgressionFamily:
    """The 2^m simultaneous non-rank progressions of m distinct primes."""

    primes: tuple[int, ...]
    modulus: int
    members: tuple[FamilyMember, ...]


def _crt_residue(primes: Sequence[int], offsets: Sequence[int], signs: Sequence[int]) -> int:
    x, mod = 0, 1
    for q, off, s in zip(primes, offsets, signs):
        r = (s * off) % q
        t = ((r - x) * pow(mod, -1, q)) % q
        x += mod * t
        mod *= q
    return x


def _family_chunk(args: tuple[tuple[int, ...], tuple[int, ...], list[int], int]) -> list[tuple[int, int]]:
    primes, offsets, masks, m = args
    out = []
    for mask in masks:
        signs = [1 if mask & (1 << (m - 1 - i)) == 0 else -1 for i in range(m)]
        out.append((mask, _crt_residue(primes, offsets, signs)))
    return out


def crt_family(primes: Sequence[int], *, workers: int = 1) -> ProgressionFamily:
    """Simultaneous congruences residue = +-N(p/6) (mod p) for every sign vector.

    Each of the 2^m sign vectors has a unique residue mod prod(primes); every
    positive member of such a class, past the n = 0 offsets, is a non-rank of
    every prime in the list.  Members come back sorted by residue.
    """
    ps = sorted(primes)
    m = len(ps)
    if not 1 <= m <= 20:
        raise DomainError(f"need between 1 and 20 primes, got {m}")
    if len(set(ps)) != m:
        raise DomainError(f"primes must be distinct, got {list(primes)}")
    for q in ps:
        if q < 5 or not is_prime(q):
            raise DomainError(f"{q} is not a prime >= 5")
    offsets = tuple(nsix(q) for q in ps)
    pt = tuple(ps)
    all_masks = list(range(1 << m))
    if workers <= 1:
        pairs = _family_chunk((pt, offsets, all_masks, m))
    else:
        from concurrent.futures import ProcessPoolExecutor

        chunks = [(pt, offsets, all_masks[i::workers], m) for i in range(workers)]
        pairs = []
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_family_chunk, chunks):
                pairs.extend(part)
    members = []
    for mask, residue in pairs:
        signs = tuple("-" if mask & (1 << (m - 1 - i)) else "+" for i in range(m))
        members.append(FamilyMember(signs=signs, residue=residue))
    members.sort(key=lambda fm: fm.residue)
    return ProgressionFamily(primes=pt, modulus=math.prod(ps), members=tuple(members))


@dataclass(frozen=True)
class NestedForm:
    """Progression written as outer*(q1*(q2*(...*(qk*n + r_k)...) + r_2) + r_1) + offset.

    offset is the signed N(outer/6).  evaluate(n) equals residue + modulus*n;
    the innermost coefficient may equal its own radix when the residue sits at
    the top of the period.
    """

    outer: int
    offset: int
    inner: tuple[tuple[int, int], ...]

    def evaluate(self, n: int) -> int:
        acc = n
        for q, r in reversed(self.inner):
            acc = q * acc + r
        return self.outer * acc + self.offset

    def __str__(self) -> str:
        expr = "n"
        for q, r in reversed(self.inner):
            expr = f"{q}*({expr}) + {r}" if expr != "n" else f"{q}*n + {r}"
        sign = "+" if self.offset >= 0 else "-"
        return f"{self.outer}*({expr}) {sign} {abs(self.offset)}"


def nested_form(
    primes: Sequence[int], signs: Sequence[str], residue: int, outer_index: int = 0
) -> NestedForm:
    """Re-express a family member with the chosen prime outermost.

    The remaining primes keep their order; the coefficients are the mixed-radix
    digits of (residue - offset) / outer, so evaluate(0) reproduces residue.
    """
    ps = list(primes)
    sg = list(signs)
    if len(ps) != len(sg) or len(ps) < 2:
        raise DomainError("nested form needs at least two primes with matching signs")
    if not 0 <= outer_index < len(ps):
        raise DomainError(f"outer_index {outer_index} out of range")
    for q, s in zip(ps, sg):
        if s not in SIGN_VALUE:
            raise DomainError(f"bad sign {s!r}")
        if residue % q != (SIGN_VALUE[s] * nsix(q)) % q:
            raise DomainError(f"residue {residue} is not {s}N({q}/6) (mod {q})")
    outer = ps[outer_index]
    offset = SIGN_VALUE[sg[outer_index]] * nsix(outer)
    body = (residue - offset) // outer
    rest = [q for i, q in enumerate(ps) if i != outer_index]
    inner: list[tuple[int, int]] = []
    for q in rest[:-1]:
        inner.append((q, body % q))
        body //= q
    inner.append((rest[-1], body))
    return NestedForm(outer=outer, offset=offset, inner=tuple(inner))


def gap_pattern(p: int) -> tuple[int, int]:
    """The two gaps that alternate between consecutive sorted non-ranks of p."""
    off = nsix(p)
    return 2 * off, p - 2 * off
