"""Zero-divisor structure of a finite module: the unique incomparable-prime
cover and its degree, the very-few property, Property (A), and primality.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import bitset
from .errors import InvariantViolation
from .finite_algebra import (
    FiniteModule,
    FiniteRing,
    Ideal,
    annihilator_ideal_of_element,
    annihilator_in_module,
    associated_primes,
    ideal_generated,
    is_prime_ideal,
    zero_divisor_set,
)


@dataclass(frozen=True)
class PrimeDecomposition:
    """The pairwise-incomparable prime cover of the zero-divisor set."""
    primes: tuple[Ideal, ...]          # canonically sorted
    witnesses: tuple[int | None, ...]  # nonzero m with Ann(m) = prime, aligned
    degree: int
    covers: bool
    incomparable: bool


@dataclass(frozen=True)
class NoPrimeCover:
    """Outcome when the prime candidates do not cover the zero-divisor set.

    Unreachable for finite nonzero modules; the path exists for honest
    contracts around table-defined degenerate experiments.
    """
    uncovered: int
    candidates: tuple[Ideal, ...]


@dataclass(frozen=True)
class VeryFewReport:
    holds: bool
    primes: tuple[Ideal, ...]
    witnesses: tuple[int, ...]
    uncovered: int | None


@dataclass(frozen=True)
class PropertyAReport:
    holds: bool
    checked_ideals: int
    witnesses: tuple[tuple[Ideal, int], ...]  # (maximal ideal inside Z, nonzero annihilating m)
    failure: Ideal | None


@dataclass(frozen=True)
class PrimalReport:
    is_primal: bool
    zero_divisor_ideal: Ideal | None
    violation: tuple[str, int, int] | None  # ("add"|"action", a, b)


def maximal_ideals_within(ring: FiniteRing, zmask: int) -> list[Ideal]:
    """Greedy saturation: grow each principal ideal inside the set until no
    element of the set can be added without escaping, then keep maximal results.
    """
    key = ("maxin", zmask)
    hit = ring._cache.get(key)
    if hit is not None:
        return hit
    found: dict[int, Ideal] = {}
    zbits = list(bitset.iter_bits(zmask))
    for z in zbits:
        ideal = ideal_generated(ring, (z,))
        if not bitset.is_subset(ideal.members, zmask):
            continue
        changed = True
        while changed:
            changed = False
            for w in zbits:
                if ideal.contains(w):
                    continue
                bigger = ideal_generated(ring, ideal.members_tuple() + (w,))
                if bitset.is_subset(bigger.members, zmask):
                    ideal = bigger
                    changed = True
        found[ideal.members] = ideal
    maximal = [i for i in found.values()
               if not any(o != i.members and bitset.is_subset(i.members, o) for o in found)]
    out = sorted(maximal, key=lambda i: i.members_tuple())
    ring._cache[key] = out
    return out


def decompose_zero_divisors(module: FiniteModule) -> PrimeDecomposition | NoPrimeCover:
    """Unique incomparable-prime cover of Z_R(M), or NoPrimeCover with a witness.

    Candidates come from associated primes plus greedy ideal growth inside Z;
    keeping the maximal prime candidates makes the cover incomparable, and the
    final union check keeps the contract honest without leaning on finiteness.
    """
    zmask = zero_divisor_set(module)
    ring = module.ring
    candidates: dict[int, Ideal] = {}
    for prime, _ in associated_primes(module):
        candidates[prime.members] = prime
    for ideal in maximal_ideals_within(ring, zmask):
        if is_prime_ideal(ideal)[0]:
            candidates[ideal.members] = ideal
    maximal = [i for i in candidates.values()
               if not any(o != i.members and bitset.is_subset(i.members, o)
                          for o in candidates)]
    union = 0
    for i in maximal:
        union |= i.members
    if union != zmask:
        uncovered = bitset.lowest_bit(zmask & ~union)
        return NoPrimeCover(uncovered, tuple(sorted(maximal, key=lambda i: i.members_tuple())))
    primes = tuple(sorted(maximal, key=lambda i: i.members_tuple()))
    witnesses = []
    for p in primes:
        w = None
        for m in module.elements():
            if m == module.zero:
                continue
            if annihilator_ideal_of_element(module, m).members == p.members:
                w = m
                break
        witnesses.append(w)
    incomparable = all(
        not bitset.is_subset(primes[i].members, primes[j].members)
        for i in range(len(primes)) for j in range(len(primes)) if i != j)
    return PrimeDecomposition(primes, tuple(witnesses), len(primes), True, incomparable)


def has_very_few_zero_divisors(module: FiniteModule) -> VeryFewReport:
    """True iff the associated primes already cover the zero-divisor set."""
    zmask = zero_divisor_set(module)
    ass = associated_primes(module)
    union = 0
    for p, _ in ass:
        union |= p.members
    holds = union == zmask
    return VeryFewReport(
        holds=holds,
        primes=tuple(p for p, _ in ass),
        witnesses=tuple(w for _, w in ass),
        uncovered=None if holds else bitset.lowest_bit(zmask & ~union),
    )


def check_property_a(module: FiniteModule) -> PropertyAReport:
    """Every finitely generated ideal inside Z_R(M) has a nonzero annihilator.

    It suffices to check the maximal ideals inside Z: annihilators are antitone
    in the ideal, so a nonzero annihilator for a maximal ideal covers everything
    below it. Finite modules always satisfy this, which makes the operation a
    useful consistency oracle.
    """
    zmask = zero_divisor_set(module)
    maximal = maximal_ideals_within(module.ring, zmask)
    witnesses = []
    failure = None
    zero_mask = 1 << module.zero
    for ideal in maximal:
        ann = annihilator_in_module(ideal, module)
        m = bitset.lowest_bit(ann.members & ~zero_mask)
        if m is None:
            failure = ideal
            break
        witnesses.append((ideal, m))
    return PropertyAReport(
        holds=failure is None,
        checked_ideals=len(maximal),
        witnesses=tuple(witnesses),
        failure=failure,
    )


def is_primal(module: FiniteModule) -> PrimalReport:
    """True iff the zero-divisor set is itself an ideal.

    When it is, it must be prime and the decomposition degree must be one;
    both are cross-checked and a mismatch raises an invariant violation.
    """
    zmask = zero_divisor_set(module)
    ring = module.ring
    zbits = list(bitset.iter_bits(zmask))
    for a in zbits:
        row = ring._add_rows[a]
        for b in zbits:
            if not bitset.has_bit(zmask, row[b]):
                return PrimalReport(False, None, ("add", a, b))
    for r in ring.elements():
        row = ring._mul_rows[r]
        for z in zbits:
            if not bitset.has_bit(zmask, row[z]):
                return PrimalReport(False, None, ("action", r, z))
    ideal = Ideal(ring, zmask)
    ok, _ = is_prime_ideal(ideal)
    if not ok:
        raise InvariantViolation("zero-divisor set is an ideal but not prime")
    decomp = decompose_zero_divisors(module)
    if not isinstance(decomp, PrimeDecomposition) or decomp.degree != 1:
        raise InvariantViolation("primal module without a degree-one decomposition")
    return PrimalReport(True, ideal, None)
