"""Finite commutative rings, ideals, modules and submodules as explicit tables.

Element identity is the table index, subsets are bit masks, and every predicate
is a finite scan, so all outputs are deterministic and replayable. Constructors
validate the full axiom tables on the way in.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import bitset
from ._tables import (
    as_index_table,
    audit_abelian_group,
    audit_associative,
    audit_commutative,
    audit_distributive,
    audit_identity,
)
from .errors import (
    AxiomError,
    InvariantViolation,
    PreconditionError,
    SizeCapError,
    StructureMismatchError,
    ZeroModuleError,
)

DEFAULT_ZMOD_CAP = 256
DEFAULT_RING_CAP = 4096
DEFAULT_MODULE_CAP = 4096


class FiniteRing:
    """A finite commutative ring with identity, given by add/mul index tables."""

    def __init__(self, add_table, mul_table, zero: int, one: int, label: str = "R",
                 meta: dict | None = None):
        n = len(add_table)
        add = as_index_table(add_table, n, n, f"ring '{label}' add table")
        mul = as_index_table(mul_table, n, n, f"ring '{label}' mul table")
        self.add_table = add
        self.mul_table = mul
        self.zero = int(zero)
        self.one = int(one)
        self.label = label
        self.meta = dict(meta or {})
        validate_ring(self)
        self.neg_table = np.argmax(add == self.zero, axis=1)
        # plain nested lists beat numpy scalar indexing in the hot scan loops
        self._add_rows = add.tolist()
        self._mul_rows = mul.tolist()
        self._neg_list = self.neg_table.tolist()
        self._cache: dict = {}

    @property
    def size(self) -> int:
        return self.add_table.shape[0]

    @property
    def is_zero_ring(self) -> bool:
        return self.size == 1

    @property
    def full_mask(self) -> int:
        return (1 << self.size) - 1

    def elements(self) -> range:
        return range(self.size)

    def add(self, a: int, b: int) -> int:
        return self._add_rows[a][b]

    def mul(self, a: int, b: int) -> int:
        return self._mul_rows[a][b]

    def neg(self, a: int) -> int:
        return self._neg_list[a]

    def as_module(self) -> "FiniteModule":
        """The ring acting on itself by multiplication (memoized per ring)."""
        mod = self._cache.get("as_module")
        if mod is None:
            mod = FiniteModule(self, self.add_table, self.mul_table, self.zero,
                               label=self.label)
            self._cache["as_module"] = mod
        return mod

    def __repr__(self) -> str:
        return f"FiniteRing({self.label!r}, size={self.size})"


class FiniteModule:
    """A finite unital module over a FiniteRing, given by add and action tables."""

    def __init__(self, ring: FiniteRing, add_table, action_table, zero: int,
                 label: str = "M"):
        m = len(add_table)
        add = as_index_table(add_table, m, m, f"module '{label}' add table")
        act = as_index_table(action_table, ring.size, m, f"module '{label}' action table")
        self.ring = ring
        self.add_table = add
        self.action_table = act
        self.zero = int(zero)
        self.label = label
        validate_module(self)
        self.neg_table = np.argmax(add == self.zero, axis=1)
        self._add_rows = add.tolist()
        self._act_rows = act.tolist()
        self._neg_list = self.neg_table.tolist()
        self._cache: dict = {}

    @property
    def size(self) -> int:
        return self.add_table.shape[0]

    @property
    def is_zero_module(self) -> bool:
        return self.size == 1

    @property
    def full_mask(self) -> int:
        return (1 << self.size) - 1

    def elements(self) -> range:
        return range(self.size)

    def add(self, x: int, y: int) -> int:
        return self._add_rows[x][y]

    def act(self, r: int, x: int) -> int:
        return self._act_rows[r][x]

    def neg(self, x: int) -> int:
        return self._neg_list[x]

    def __repr__(self) -> str:
        return f"FiniteModule({self.label!r}, size={self.size}, over={self.ring.label!r})"


def validate_ring(ring: FiniteRing) -> None:
    """Full axiom table scan; raises AxiomError naming the first failing triple."""
    what = f"ring '{ring.label}'"
    add, mul = ring.add_table, ring.mul_table
    n = add.shape[0]
    if n < 1:
        raise AxiomError(f"{what}: empty element set")
    audit_abelian_group(add, ring.zero, what)
    audit_commutative(mul, f"{what} multiplication")
    audit_associative(mul, f"{what} multiplication")
    audit_identity(mul, ring.one, f"{what} multiplication")
    audit_distributive(mul, add, what)
    if n == 1 and ring.zero != ring.one:
        raise AxiomError(f"{what}: size 1 requires zero = one")


def validate_module(module: FiniteModule) -> None:
    """Full axiom scan of the module tables against its base ring."""
    what = f"module '{module.label}'"
    add, act = module.add_table, module.action_table
    radd, rmul = module.ring.add_table, module.ring.mul_table
    n = module.ring.size
    m = add.shape[0]
    audit_abelian_group(add, module.zero, what)
    unit_row = act[module.ring.one]
    if not np.array_equal(unit_row, np.arange(m)):
        x = int(np.flatnonzero(unit_row != np.arange(m))[0])
        raise AxiomError(f"{what}: 1*{x} = {int(unit_row[x])}, unit action fails")
    for r in range(n):
        lhs = act[r][add]                      # r(x+y)
        rhs = add[np.ix_(act[r], act[r])]      # rx + ry
        diff = lhs != rhs
        if diff.any():
            x, y = np.argwhere(diff)[0]
            raise AxiomError(f"{what}: r(x+y) fails at (r,x,y)=({r},{int(x)},{int(y)})")
        lhs = act[radd[r]]                     # (r+s)x, shape (n, m)
        rhs = add[act[r][None, :], act]        # rx + sx
        diff = lhs != rhs
        if diff.any():
            s, x = np.argwhere(diff)[0]
            raise AxiomError(f"{what}: (r+s)x fails at (r,s,x)=({r},{int(s)},{int(x)})")
        lhs = act[rmul[r]]                     # (rs)x
        rhs = act[r][act]                      # r(sx)
        diff = lhs != rhs
        if diff.any():
            s, x = np.argwhere(diff)[0]
            raise AxiomError(f"{what}: (rs)x fails at (r,s,x)=({r},{int(s)},{int(x)})")


def same_ring(a: FiniteRing, b: FiniteRing) -> bool:
    if a is b:
        return True
    return (a.size == b.size and a.zero == b.zero and a.one == b.one
            and np.array_equal(a.add_table, b.add_table)
            and np.array_equal(a.mul_table, b.mul_table))


def same_module(a: FiniteModule, b: FiniteModule) -> bool:
    if a is b:
        return True
    return (same_ring(a.ring, b.ring) and a.size == b.size and a.zero == b.zero
            and np.array_equal(a.add_table, b.add_table)
            and np.array_equal(a.action_table, b.action_table))


@dataclass(frozen=True)
class Ideal:
    ring: FiniteRing
    members: int  # bit mask

    def contains(self, a: int) -> bool:
        return bitset.has_bit(self.members, a)

    def members_tuple(self) -> tuple[int, ...]:
        return bitset.members(self.members)

    @property
    def is_proper(self) -> bool:
        return self.members != self.ring.full_mask

    def __repr__(self) -> str:
        return f"Ideal({self.ring.label!r}, {list(self.members_tuple())})"


@dataclass(frozen=True)
class Submodule:
    module: FiniteModule
    members: int  # bit mask

    def contains(self, x: int) -> bool:
        return bitset.has_bit(self.members, x)

    def members_tuple(self) -> tuple[int, ...]:
        return bitset.members(self.members)

    @property
    def is_proper(self) -> bool:
        return self.members != self.module.full_mask

    @property
    def is_zero(self) -> bool:
        return self.members == (1 << self.module.zero)

    def __repr__(self) -> str:
        return f"Submodule({self.module.label!r}, {list(self.members_tuple())})"


@dataclass(frozen=True)
class SubmoduleClassification:
    """Outcome of the prime/primary scan; false flags carry replayable witnesses."""
    is_proper: bool
    is_prime: bool
    is_primary: bool
    prime_violation: tuple[int, int] | None         # (r, x)
    primary_violation: tuple[int, int, int] | None  # (r, x, exhausted exponent bound)


# ---------------------------------------------------------------------------
# ring constructors


def build_zmod(n: int, cap: int = DEFAULT_ZMOD_CAP) -> FiniteRing:
    """The ring of integers modulo n as explicit tables."""
    if n < 1:
        raise PreconditionError(f"zmod size must be positive, got {n}")
    if n > cap:
        raise SizeCapError(f"zmod size {n} exceeds cap {cap}")
    idx = np.arange(n)
    add = (idx[:, None] + idx[None, :]) % n
    mul = (idx[:, None] * idx[None, :]) % n
    return FiniteRing(add, mul, 0, 1 % n, label=f"Z/{n}", meta={"modulus": n})


def _is_prime_int(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def _truncated_monomials(nvars: int, cap: int) -> list[tuple[int, ...]]:
    monos = []

    def rec(prefix, remaining, budget):
        if remaining == 0:
            monos.append(tuple(prefix))
            return
        for e in range(budget + 1):
            rec(prefix + [e], remaining - 1, budget - e)

    rec([], nvars, cap - 1)
    monos.sort(key=lambda e: (sum(e), tuple(-x for x in e)))
    return monos


def build_truncated_poly_ring(p: int, nvars: int, cap: int,
                              size_cap: int = DEFAULT_RING_CAP) -> FiniteRing:
    """(Z/p)[x_1..x_nvars] with every monomial of total degree >= cap set to zero.

    Elements are coefficient vectors over the monomial basis of degree < cap,
    encoded base p in graded order, so index 0 is zero and index 1 is one.
    """
    if not _is_prime_int(p):
        raise PreconditionError(f"coefficient modulus {p} is not prime")
    if nvars < 1 or cap < 1:
        raise PreconditionError("nvars and cap must be positive")
    monos = _truncated_monomials(nvars, cap)
    B = len(monos)
    if p ** B > size_cap:
        raise SizeCapError(f"p^{B} = {p ** B} elements exceeds cap {size_cap}")
    n = p ** B
    pos = {m: i for i, m in enumerate(monos)}
    powers = p ** np.arange(B, dtype=np.int64)
    coeffs = (np.arange(n)[:, None] // powers[None, :]) % p  # (n, B)

    add = (((coeffs[:, None, :] + coeffs[None, :, :]) % p) * powers).sum(axis=2)

    # prod_pos[i][j]: basis index of mono_i * mono_j, or -1 once truncated
    prod_pos = [[pos.get(tuple(a + b for a, b in zip(mi, mj)), -1) for mj in monos]
                for mi in monos]
    mul = np.zeros((n, n), dtype=np.int64)
    for x in range(n):
        a = coeffs[x]
        out = np.zeros((n, B), dtype=np.int64)
        for i in range(B):
            if a[i] == 0:
                continue
            row = prod_pos[i]
            for j in range(B):
                k = row[j]
                if k >= 0:
                    out[:, k] += int(a[i]) * coeffs[:, j]
        mul[x] = ((out % p) * powers).sum(axis=1)

    names = [chr(ord("a") + i) if nvars <= 8 else f"x{i}" for i in range(nvars)]
    label = f"F{p}[{','.join(names)}]/m^{cap}"
    gens = []
    for i in range(nvars):
        e = tuple(1 if j == i else 0 for j in range(nvars))
        if e in pos:
            gens.append(int(p ** pos[e]))
    meta = {"p": p, "monomials": tuple(monos), "generators": tuple(gens),
            "variable_names": tuple(names)}
    return FiniteRing(add, mul, 0, 1, label=label, meta=meta)


def _require_ideal(ideal: Ideal) -> None:
    ring = ideal.ring
    mem = ideal.members
    if not bitset.has_bit(mem, ring.zero):
        raise PreconditionError(f"not an ideal of {ring.label}: missing zero")
    idx = list(bitset.iter_bits(mem))
    sums = ring.add_table[np.ix_(idx, idx)]
    prods = ring.mul_table[:, idx]
    for v in np.unique(sums):
        if not bitset.has_bit(mem, int(v)):
            raise PreconditionError(f"not an ideal of {ring.label}: not closed under add")
    for v in np.unique(prods):
        if not bitset.has_bit(mem, int(v)):
            raise PreconditionError(f"not an ideal of {ring.label}: not closed under multiplication")


def quotient_ring(ring: FiniteRing, ideal: Ideal) -> FiniteRing:
    """Ring of additive cosets of the ideal; tables induced and re-validated."""
    if ideal.ring is not ring and not same_ring(ideal.ring, ring):
        raise PreconditionError("ideal belongs to a different ring")
    _require_ideal(ideal)
    idx = list(bitset.iter_bits(ideal.members))
    n = ring.size
    rep = ring.add_table[:, idx].min(axis=1)  # coset representative = least member
    reps = np.unique(rep)
    qindex = {int(r): i for i, r in enumerate(reps)}
    to_q = np.array([qindex[int(rep[x])] for x in range(n)])
    qadd = to_q[ring.add_table[np.ix_(reps, reps)]]
    qmul = to_q[ring.mul_table[np.ix_(reps, reps)]]
    mem = ideal.members_tuple()
    shown = ",".join(map(str, mem[:4])) + (",..." if len(mem) > 4 else "")
    return FiniteRing(qadd, qmul, int(to_q[ring.zero]), int(to_q[ring.one]),
                      label=f"{ring.label}/({shown})")


# ---------------------------------------------------------------------------
# ideals


def ideal_generated(ring: FiniteRing, gens: Iterable[int]) -> Ideal:
    """Smallest subset containing gens closed under add and ring multiplication.

    Closure iterates add/mul saturation to a fixpoint; results are memoized per
    ring on the normalized generator tuple.
    """
    gset = sorted({int(g) for g in gens} - {ring.zero})
    for g in gset:
        if not 0 <= g < ring.size:
            raise PreconditionError(f"generator {g} outside {ring.label}")
    key = ("igen", tuple(gset))
    hit = ring._cache.get(key)
    if hit is not None:
        return hit
    in_set = np.zeros(ring.size, dtype=bool)
    in_set[ring.zero] = True
    in_set[gset] = True
    while True:
        idx = np.flatnonzero(in_set)
        reach = np.zeros(ring.size, dtype=bool)
        reach[ring.add_table[np.ix_(idx, idx)].ravel()] = True
        reach[ring.mul_table[:, idx].ravel()] = True
        if not (reach & ~in_set).any():
            break
        in_set |= reach
    ideal = Ideal(ring, bitset.mask_from_bools(in_set))
    ring._cache[key] = ideal
    return ideal


def ideal_product(a: Ideal, b: Ideal) -> Ideal:
    """Ideal generated by all pairwise products of members."""
    if a.ring is not b.ring and not same_ring(a.ring, b.ring):
        raise StructureMismatchError("ideal product across different rings")
    ring = a.ring
    key = ("iprod", a.members, b.members)
    hit = ring._cache.get(key)
    if hit is not None:
        return hit
    ia = list(bitset.iter_bits(a.members))
    ib = list(bitset.iter_bits(b.members))
    prods = np.unique(ring.mul_table[np.ix_(ia, ib)])
    out = ideal_generated(ring, (int(v) for v in prods))
    ring._cache[key] = out
    ring._cache[("iprod", b.members, a.members)] = out
    return out


def ideal_power(a: Ideal, k: int) -> Ideal:
    """k-fold ideal product; the zeroth power is the unit ideal."""
    if k < 0:
        raise PreconditionError("ideal power needs k >= 0")
    ring = a.ring
    key = ("ipow", a.members, k)
    hit = ring._cache.get(key)
    if hit is not None:
        return hit
    if k == 0:
        out = Ideal(ring, ring.full_mask)
    elif k == 1:
        out = a
    else:
        out = ideal_product(ideal_power(a, k - 1), a)
    ring._cache[key] = out
    return out


def is_prime_ideal(ideal: Ideal) -> tuple[bool, tuple[int, int] | None]:
    """True iff the ideal is proper and ab in I forces a in I or b in I.

    A failure returns the lexicographically least violating pair (a, b).
    """
    ring = ideal.ring
    if not ideal.is_proper:
        return False, None
    key = ("isprime", ideal.members)
    hit = ring._cache.get(key)
    if hit is not None:
        return hit
    in_i = np.zeros(ring.size, dtype=bool)
    in_i[list(bitset.iter_bits(ideal.members))] = True
    outs = np.flatnonzero(~in_i)
    bad = in_i[ring.mul_table[np.ix_(outs, outs)]]
    if bad.any():
        i, j = np.argwhere(bad)[0]
        result = (False, (int(outs[i]), int(outs[j])))
    else:
        result = (True, None)
    ring._cache[key] = result
    return result


def prime_avoidance_locate(ideal: Ideal, primes: list[Ideal]) -> tuple[int | None, int | None]:
    """Least index of a prime containing the ideal, or (None, witness) if uncovered.

    When the ideal sits inside the union of the primes, containment in a single
    one is guaranteed; failing to find it would be an implementation bug.
    """
    ring = ideal.ring
    union = 0
    for p in primes:
        if p.ring is not ring and not same_ring(p.ring, ring):
            raise StructureMismatchError("prime list over a different ring")
        ok, _ = is_prime_ideal(p)
        if not ok:
            raise PreconditionError("prime_avoidance_locate requires prime ideals")
        union |= p.members
    if bitset.is_subset(ideal.members, union):
        for i, p in enumerate(primes):
            if bitset.is_subset(ideal.members, p.members):
                return i, None
        raise InvariantViolation("ideal covered by primes but contained in none")
    return None, bitset.lowest_bit(ideal.members & ~union)


# ---------------------------------------------------------------------------
# module constructors


def ring_as_module(ring: FiniteRing) -> FiniteModule:
    return ring.as_module()


def module_from_tables(ring: FiniteRing, add_table, action_table, zero: int,
                       label: str = "M", cap: int = DEFAULT_MODULE_CAP) -> FiniteModule:
    if len(add_table) > cap:
        raise SizeCapError(f"module size {len(add_table)} exceeds cap {cap}")
    return FiniteModule(ring, add_table, action_table, zero, label=label)


def direct_sum(left: FiniteModule, right: FiniteModule) -> FiniteModule:
    """Componentwise sum; element (x, y) is encoded as x * |right| + y."""
    if left.ring is not right.ring and not same_ring(left.ring, right.ring):
        raise PreconditionError("direct sum requires a shared base ring")
    m1, m2 = left.size, right.size
    add = (left.add_table[:, None, :, None] * m2
           + right.add_table[None, :, None, :]).reshape(m1 * m2, m1 * m2)
    act = (left.action_table[:, :, None] * m2
           + right.action_table[:, None, :]).reshape(left.ring.size, m1 * m2)
    zero = left.zero * m2 + right.zero
    return FiniteModule(left.ring, add, act, zero,
                        label=f"{left.label}(+){right.label}")


def _require_submodule(sub: Submodule) -> None:
    module = sub.module
    mem = sub.members
    if not bitset.has_bit(mem, module.zero):
        raise PreconditionError(f"not a submodule of {module.label}: missing zero")
    idx = list(bitset.iter_bits(mem))
    for v in np.unique(module.add_table[np.ix_(idx, idx)]):
        if not bitset.has_bit(mem, int(v)):
            raise PreconditionError(f"not a submodule of {module.label}: not add-closed")
    for v in np.unique(module.action_table[:, idx]):
        if not bitset.has_bit(mem, int(v)):
            raise PreconditionError(f"not a submodule of {module.label}: not action-closed")


def quotient_module(module: FiniteModule, sub: Submodule) -> FiniteModule:
    """Module of additive cosets of a submodule, with the induced action."""
    if sub.module is not module and not same_module(sub.module, module):
        raise PreconditionError("submodule belongs to a different module")
    _require_submodule(sub)
    idx = list(bitset.iter_bits(sub.members))
    rep = module.add_table[:, idx].min(axis=1)
    reps = np.unique(rep)
    qindex = {int(r): i for i, r in enumerate(reps)}
    to_q = np.array([qindex[int(rep[x])] for x in range(module.size)])
    qadd = to_q[module.add_table[np.ix_(reps, reps)]]
    qact = to_q[module.action_table[:, reps]]
    return FiniteModule(module.ring, qadd, qact, int(to_q[module.zero]),
                        label=f"{module.label}/N{len(idx)}")


def submodule_generated(module: FiniteModule, gens: Iterable[int]) -> Submodule:
    """Closure of the generators under addition and the ring action."""
    gset = sorted({int(g) for g in gens} - {module.zero})
    for g in gset:
        if not 0 <= g < module.size:
            raise PreconditionError(f"generator {g} outside {module.label}")
    key = ("sgen", tuple(gset))
    hit = module._cache.get(key)
    if hit is not None:
        return hit
    in_set = np.zeros(module.size, dtype=bool)
    in_set[module.zero] = True
    in_set[gset] = True
    while True:
        idx = np.flatnonzero(in_set)
        reach = np.zeros(module.size, dtype=bool)
        reach[module.add_table[np.ix_(idx, idx)].ravel()] = True
        reach[module.action_table[:, idx].ravel()] = True
        if not (reach & ~in_set).any():
            break
        in_set |= reach
    sub = Submodule(module, bitset.mask_from_bools(in_set))
    module._cache[key] = sub
    return sub


def submodule_from_members(module: FiniteModule, members: Iterable[int]) -> Submodule:
    """Wrap an explicit member set after checking closure."""
    sub = Submodule(module, bitset.mask_of(members))
    _require_submodule(sub)
    return sub


def ideal_action_submodule(ideal: Ideal, sub: Submodule) -> Submodule:
    """Submodule generated by all products a*x with a in the ideal, x in the submodule."""
    module = sub.module
    if ideal.ring is not module.ring and not same_ring(ideal.ring, module.ring):
        raise StructureMismatchError("ideal over a different base ring")
    key = ("iact", ideal.members, sub.members)
    hit = module._cache.get(key)
    if hit is not None:
        return hit
    ia = list(bitset.iter_bits(ideal.members))
    ix = list(bitset.iter_bits(sub.members))
    if not ia or not ix:
        out = submodule_generated(module, ())
    else:
        prods = np.unique(module.action_table[np.ix_(ia, ix)])
        out = submodule_generated(module, (int(v) for v in prods))
    module._cache[key] = out
    return out


# ---------------------------------------------------------------------------
# annihilators and zero-divisors


def _subset_mask(subset, ring: FiniteRing) -> int:
    if isinstance(subset, Ideal):
        return subset.members
    if isinstance(subset, int):
        return subset
    return bitset.mask_of(subset)


def annihilator_in_module(subset, module: FiniteModule) -> Submodule:
    """Elements of the module killed by every ring element of the given subset.

    Accepts an Ideal, a bit mask or an iterable of element indices; the result
    is always a submodule.
    """
    mask = _subset_mask(subset, module.ring)
    key = ("annm", mask)
    hit = module._cache.get(key)
    if hit is not None:
        return hit
    idx = list(bitset.iter_bits(mask))
    if not idx:
        out = Submodule(module, module.full_mask)
    else:
        killed = (module.action_table[idx, :] == module.zero).all(axis=0)
        out = Submodule(module, bitset.mask_from_bools(killed))
    module._cache[key] = out
    return out


def annihilator_ideal_of_element(module: FiniteModule, x: int) -> Ideal:
    """Ring elements killing the given module element; always an ideal."""
    if not 0 <= x < module.size:
        raise PreconditionError(f"element {x} outside {module.label}")
    col = module.action_table[:, x] == module.zero
    return Ideal(module.ring, bitset.mask_from_bools(col))


def zero_divisor_set(module: FiniteModule) -> int:
    """Bit mask of ring elements killing some nonzero module element."""
    if module.is_zero_module:
        raise ZeroModuleError("zero-divisor set is undefined on the zero module")
    key = ("zdset",)
    hit = module._cache.get(key)
    if hit is not None:
        return hit
    nz = [x for x in module.elements() if x != module.zero]
    hits = (module.action_table[:, nz] == module.zero).any(axis=1)
    mask = bitset.mask_from_bools(hits)
    module._cache[key] = mask
    return mask


def associated_primes(module: FiniteModule) -> list[tuple[Ideal, int]]:
    """Prime annihilators of nonzero elements, deduplicated and canonically sorted.

    Each prime is tagged with the least nonzero element whose annihilator it is.
    """
    if module.is_zero_module:
        raise ZeroModuleError("associated primes are undefined on the zero module")
    key = ("ass",)
    hit = module._cache.get(key)
    if hit is not None:
        return hit
    seen: dict[int, int] = {}
    for x in module.elements():
        if x == module.zero:
            continue
        ann = annihilator_ideal_of_element(module, x)
        if ann.members in seen:
            continue
        ok, _ = is_prime_ideal(ann)
        if ok:
            seen[ann.members] = x
    out = sorted(((Ideal(module.ring, m), w) for m, w in seen.items()),
                 key=lambda pw: pw[0].members_tuple())
    module._cache[key] = out
    return out


def classify_submodule(module: FiniteModule, sub: Submodule) -> SubmoduleClassification:
    """Prime/primary classification by exhaustive scan over all (r, x) pairs.

    The primary test searches exponents n = 1..|R|; powers of a ring element
    cycle within |R| steps, so the bound is exhaustive, not heuristic.
    """
    if sub.module is not module and not same_module(sub.module, module):
        raise PreconditionError("submodule belongs to a different module")
    ring = module.ring
    in_p = [sub.contains(x) for x in module.elements()]
    proper = sub.members != module.full_mask

    # per-r facts: does r M sit inside P, and does some power r^n M
    all_in = []
    power_in = []
    for r in ring.elements():
        row_in = all(in_p[v] for v in module._act_rows[r])
        all_in.append(row_in)
        found = row_in
        if not found:
            rp = r
            for _ in range(ring.size - 1):
                rp = ring.mul(rp, r)
                if all(in_p[v] for v in module._act_rows[rp]):
                    found = True
                    break
        power_in.append(found)

    # the per-r facts settle both conditions at the first qualifying x, so a
    # single lex scan yields the lexicographically least witness of each kind
    prime_viol = None
    primary_viol = None
    for r in ring.elements():
        if all_in[r] and power_in[r]:
            continue
        row = module._act_rows[r]
        for x in module.elements():
            if in_p[row[x]] and not in_p[x]:
                if prime_viol is None and not all_in[r]:
                    prime_viol = (r, x)
                if primary_viol is None and not power_in[r]:
                    primary_viol = (r, x, ring.size)
                break
        if prime_viol is not None and primary_viol is not None:
            break
    return SubmoduleClassification(
        is_proper=proper,
        is_prime=proper and prime_viol is None,
        is_primary=proper and primary_viol is None,
        prime_violation=prime_viol,
        primary_violation=primary_viol,
    )


# ---------------------------------------------------------------------------
# ideal enumeration (used by the verifiers)


def enumerate_ideals(ring: FiniteRing) -> list[Ideal]:
    """All ideals, found by closing principal extensions to a fixpoint."""
    key = ("ideals",)
    hit = ring._cache.get(key)
    if hit is not None:
        return hit
    zero_ideal = ideal_generated(ring, ())
    known = {zero_ideal.members: zero_ideal}
    frontier = [zero_ideal]
    while frontier:
        nxt = []
        for ideal in frontier:
            base = ideal.members_tuple()
            for a in ring.elements():
                if ideal.contains(a):
                    continue
                bigger = ideal_generated(ring, base + (a,))
                if bigger.members not in known:
                    known[bigger.members] = bigger
                    nxt.append(bigger)
        frontier = nxt
    out = sorted(known.values(), key=lambda i: i.members_tuple())
    ring._cache[key] = out
    return out


def prime_ideals(ring: FiniteRing) -> list[Ideal]:
    key = ("primes",)
    hit = ring._cache.get(key)
    if hit is not None:
        return hit
    out = [i for i in enumerate_ideals(ring) if is_prime_ideal(i)[0]]
    ring._cache[key] = out
    return out
