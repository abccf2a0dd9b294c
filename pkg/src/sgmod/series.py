"""Elements of R[S] and M[S] as normalized finite-support series, and the
content machinery built on them: convolution products, content ideals and
submodules, minimal Dedekind-Mertens exponents, McCoy witnesses, the
content-annihilator zero-divisor test, extended-ideal membership, and the two
explicit constructions that defeat the McCoy property on bad monoids.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from . import bitset
from .errors import (
    HypothesisError,
    InvariantViolation,
    PreconditionError,
    StructureMismatchError,
    ZeroModuleError,
)
from .finite_algebra import (
    FiniteModule,
    FiniteRing,
    Ideal,
    Submodule,
    annihilator_in_module,
    ideal_action_submodule,
    ideal_generated,
    ideal_power,
    same_module,
    same_ring,
    submodule_generated,
)
from .monoids import Monoid, is_cancellative, is_torsion_free, monoid_scale, same_monoid

Space = Union[FiniteRing, FiniteModule]


@dataclass(frozen=True)
class Series:
    """Finite formal sum of terms coeff * X^exponent with nonzero coefficients.

    Terms are stored sorted by exponent (index order for finite monoids,
    lexicographic for lattice exponent vectors), so equal series compare and
    print identically.
    """

    space: Space
    monoid: Monoid
    terms: tuple[tuple, ...]

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def support(self) -> tuple:
        return tuple(e for e, _ in self.terms)

    @property
    def coefficients(self) -> tuple[int, ...]:
        return tuple(c for _, c in self.terms)

    def coefficient(self, exponent) -> int:
        for e, c in self.terms:
            if e == exponent:
                return c
        return self.space.zero

    def __repr__(self) -> str:
        if self.is_zero:
            body = "0"
        else:
            body = " + ".join(f"{c}*X^{e}" for e, c in self.terms)
        return f"<{body} over {self.space.label}[{self.monoid.label}]>"


def _space_is_ring(space: Space) -> bool:
    return isinstance(space, FiniteRing)


def make_series(space: Space, monoid: Monoid, terms) -> Series:
    """Normalize a term list: combine equal exponents, drop zero coefficients."""
    acc: dict = {}
    zero = space.zero
    for exponent, coeff in terms:
        if isinstance(exponent, list):
            exponent = tuple(exponent)
        if not monoid.contains(exponent):
            raise StructureMismatchError(
                f"exponent {exponent!r} outside monoid {monoid.label}")
        c = int(coeff)
        if not 0 <= c < space.size:
            raise PreconditionError(f"coefficient {c} outside {space.label}")
        if exponent in acc:
            acc[exponent] = space.add(acc[exponent], c)
        else:
            acc[exponent] = c
    cleaned = tuple(sorted((e, c) for e, c in acc.items() if c != zero))
    return Series(space, monoid, cleaned)


def zero_series(space: Space, monoid: Monoid) -> Series:
    return Series(space, monoid, ())


def constant_series(space: Space, monoid: Monoid, coeff: int) -> Series:
    return make_series(space, monoid, [(monoid.identity_key(), coeff)])


def monomial_series(space: Space, monoid: Monoid, coeff: int, exponent) -> Series:
    return make_series(space, monoid, [(exponent, coeff)])


def _check_same_context(f: Series, g: Series) -> None:
    if f.monoid is not g.monoid and not same_monoid(f.monoid, g.monoid):
        raise StructureMismatchError("series live over different monoids")


def series_add(f: Series, g: Series) -> Series:
    _check_same_context(f, g)
    if f.space is not g.space:
        sf, sg = f.space, g.space
        ok = (same_ring(sf, sg) if _space_is_ring(sf) and _space_is_ring(sg)
              else (not _space_is_ring(sf) and not _space_is_ring(sg) and same_module(sf, sg)))
        if not ok:
            raise StructureMismatchError("series live over different coefficient spaces")
    return make_series(f.space, f.monoid, f.terms + g.terms)


def series_neg(f: Series) -> Series:
    return Series(f.space, f.monoid, tuple((e, f.space.neg(c)) for e, c in f.terms))


def series_multiply(f: Series, h: Series) -> Series:
    """Convolution product; the left factor must have ring coefficients.

    Exponents are added in the monoid, coefficients multiplied (or acted on for
    module coefficients), colliding exponents combined, and zeros dropped.
    """
    if not _space_is_ring(f.space):
        raise StructureMismatchError("left factor must have ring coefficients")
    _check_same_context(f, h)
    ring = f.space
    if _space_is_ring(h.space):
        if not same_ring(ring, h.space):
            raise StructureMismatchError("series over different rings")
        combine = ring.mul
    else:
        if not same_ring(ring, h.space.ring):
            raise StructureMismatchError("module series over a different base ring")
        combine = h.space.act
    space = h.space
    zero = space.zero
    madd = space.add
    acc: dict = {}
    for s, a in f.terms:
        for t, b in h.terms:
            e = f.monoid.add(s, t)
            c = combine(a, b)
            prev = acc.get(e)
            acc[e] = c if prev is None else madd(prev, c)
    cleaned = tuple(sorted((e, c) for e, c in acc.items() if c != zero))
    return Series(space, f.monoid, cleaned)


def content(h: Series) -> Ideal | Submodule:
    """Ideal (submodule) generated by the coefficients; empty series gives zero."""
    coeffs = h.coefficients
    if _space_is_ring(h.space):
        return ideal_generated(h.space, coeffs)
    return submodule_generated(h.space, coeffs)


def as_module_series(f: Series) -> Series:
    """View a ring series inside the ring-as-module; element indices are shared."""
    if not _space_is_ring(f.space):
        return f
    return Series(f.space.as_module(), f.monoid, f.terms)


def _require_good_monoid(monoid: Monoid, op: str) -> None:
    ok, wit = is_cancellative(monoid)
    if not ok:
        raise HypothesisError(f"{op} requires a cancellative monoid; witness {wit}")
    ok, wit = is_torsion_free(monoid)
    if not ok:
        raise HypothesisError(f"{op} requires a torsion-free monoid; witness {wit}")


@dataclass(frozen=True)
class DMStep:
    k: int
    lhs: Submodule  # c(f)^k c(g)
    rhs: Submodule  # c(f)^(k-1) c(fg)
    equal: bool


@dataclass(frozen=True)
class DMResult:
    """Search transcript for the minimal k with c(f)^k c(g) = c(f)^(k-1) c(fg)."""
    k_min: int | None  # None means the cap was exceeded (inconclusive)
    chain: tuple[DMStep, ...]
    cap_used: int


def _dm_search(cf: Ideal, cg: Submodule, cfg: Submodule, cap: int) -> DMResult:
    chain = []
    for k in range(1, cap + 1):
        lhs = ideal_action_submodule(ideal_power(cf, k), cg)
        rhs = ideal_action_submodule(ideal_power(cf, k - 1), cfg)
        equal = lhs.members == rhs.members
        chain.append(DMStep(k, lhs, rhs, equal))
        if equal:
            return DMResult(k, tuple(chain), cap)
    return DMResult(None, tuple(chain), cap)


def dedekind_mertens_exponent(f: Series, g: Series, cap: int | None = None) -> DMResult:
    """Minimal k >= 1 with c(f)^k c(g) = c(f)^(k-1) c(fg), searched up to a cap.

    The default cap is |support(g)| + 1, the classical single-variable bound;
    exceeding the cap reports "cap exceeded" rather than fabricating a k.
    """
    if not _space_is_ring(f.space):
        raise StructureMismatchError("f must have ring coefficients")
    _check_same_context(f, g)
    _require_good_monoid(f.monoid, "Dedekind-Mertens search")
    g = as_module_series(g)
    if not same_ring(f.space, g.space.ring):
        raise StructureMismatchError("f and g live over different base rings")
    if cap is None:
        cap = len(g.terms) + 1
    if cap < 0:
        raise PreconditionError("cap must be nonnegative")
    cf = content(f)
    cg = content(g)
    cfg = content(series_multiply(f, g))
    return _dm_search(cf, cg, cfg, cap)


def mccoy_witness(f: Series, g: Series) -> int:
    """A single nonzero module element killed by every coefficient of f.

    Requires fg = 0 with g nonzero over a cancellative torsion-free monoid.
    Follows the constructive recipe: take the least t with c(f)^t c(g) = 0 and
    return the least nonzero element of c(f)^(t-1) c(g). The chain of levels is
    descending, so a repeat before reaching zero would mean no t exists; that
    is impossible under the hypotheses and raises an invariant violation.
    """
    if not _space_is_ring(f.space):
        raise StructureMismatchError("f must have ring coefficients")
    _check_same_context(f, g)
    _require_good_monoid(f.monoid, "McCoy witness")
    g = as_module_series(g)
    if not same_ring(f.space, g.space.ring):
        raise StructureMismatchError("f and g live over different base rings")
    if g.is_zero:
        raise PreconditionError("g must be nonzero")
    if not series_multiply(f, g).is_zero:
        raise PreconditionError("McCoy witness requires f*g = 0")
    module = g.space
    cf = content(f)
    level = content(g)  # c(f)^0 c(g)
    zero_mask = 1 << module.zero
    while True:
        nxt = ideal_action_submodule(cf, level)
        if nxt.members == zero_mask:
            break
        if nxt.members == level.members:
            raise InvariantViolation("content chain stabilized above zero")
        level = nxt
    m = bitset.lowest_bit(level.members & ~zero_mask)
    if m is None:
        raise InvariantViolation("no nonzero element at the last nonzero level")
    if not series_multiply(f, constant_series(module, f.monoid, m)).is_zero:
        raise InvariantViolation("McCoy witness failed replay")
    return m


@dataclass(frozen=True)
class ZeroDivisorVerdict:
    is_zero_divisor: bool
    witness: int | None          # nonzero m with f*m = 0, replay-verified
    annihilator: Submodule       # Ann_M(c(f)), the evidence either way


def is_zero_divisor_series(f: Series, module: FiniteModule) -> ZeroDivisorVerdict:
    """Decide membership of f in the zero-divisors of M[S] via content annihilators.

    A nonzero annihilator of c(f) yields a verified constant witness; a zero
    annihilator certifies regularity. This makes the test decidable although
    M[S] itself is infinite.
    """
    if not _space_is_ring(f.space):
        raise StructureMismatchError("f must have ring coefficients")
    if not same_ring(f.space, module.ring):
        raise StructureMismatchError("module over a different base ring")
    if module.is_zero_module:
        raise ZeroModuleError("zero-divisor test needs a nonzero module")
    _require_good_monoid(f.monoid, "zero-divisor test")
    ann = annihilator_in_module(content(f), module)
    zero_mask = 1 << module.zero
    if ann.members == zero_mask:
        return ZeroDivisorVerdict(False, None, ann)
    m = bitset.lowest_bit(ann.members & ~zero_mask)
    if not series_multiply(f, constant_series(module, f.monoid, m)).is_zero:
        raise InvariantViolation("zero-divisor witness failed replay")
    return ZeroDivisorVerdict(True, m, ann)


@dataclass(frozen=True)
class ExtendedIdeal:
    """An ideal of R viewed inside R[S]; membership is coefficient-wise."""
    base: Ideal
    monoid: Monoid


def extended_ideal_membership(f: Series, extended: ExtendedIdeal) -> bool:
    if not _space_is_ring(f.space):
        raise StructureMismatchError("membership applies to ring series")
    if not same_ring(f.space, extended.base.ring):
        raise StructureMismatchError("extended ideal over a different ring")
    if f.monoid is not extended.monoid and not same_monoid(f.monoid, extended.monoid):
        raise StructureMismatchError("extended ideal over a different monoid")
    return all(extended.base.contains(c) for c in f.coefficients)


def build_noncancellative_counterexample(monoid: Monoid, witness, module: FiniteModule,
                                         q: int) -> tuple[Series, Series]:
    """The pair f = X^s, g = q X^t - q X^u defeating the McCoy property.

    Needs a cancellation failure s+t = s+u with t != u and a nonzero q. The
    returned identities (fg = 0, and f*m != 0 for every nonzero m) are replayed
    before returning; a replay failure is an implementation bug.
    """
    s, t, u = witness
    for e in (s, t, u):
        if not monoid.contains(e):
            raise PreconditionError(f"witness element {e!r} outside {monoid.label}")
    if t == u:
        raise PreconditionError("witness needs t != u")
    if monoid.add(s, t) != monoid.add(s, u):
        raise PreconditionError("witness fails s+t = s+u")
    if not 0 <= q < module.size or q == module.zero:
        raise PreconditionError("q must be a nonzero module element")
    ring = module.ring
    f = monomial_series(ring, monoid, ring.one, s)
    g = make_series(module, monoid, [(t, q), (u, module.neg(q))])
    if g.is_zero or len(g.terms) != 2:
        raise InvariantViolation("counterexample series g degenerated")
    if not series_multiply(f, g).is_zero:
        raise InvariantViolation("f*g did not vanish on replay")
    for m in module.elements():
        if m == module.zero:
            continue
        if series_multiply(f, constant_series(module, monoid, m)).is_zero:
            raise InvariantViolation(f"f unexpectedly kills module element {m}")
    return f, g


def build_torsion_counterexample(monoid: Monoid, s, t, module: FiniteModule,
                                 q: int) -> tuple[int, Series, Series]:
    """The factorization 0 = (sum_i X^((k-i-1)s + it)) (q X^s - q X^t).

    Requires a cancellative monoid with torsion: s != t but ks = kt for the
    minimal k found within the order^2 pigeonhole bound. Cancellativity plus
    minimality of k make the k exponents of the left factor distinct; that and
    the vanishing product are replayed before returning.
    """
    ok, wit = is_cancellative(monoid)
    if not ok:
        raise HypothesisError(f"torsion construction assumes cancellativity; witness {wit}")
    for e in (s, t):
        if not monoid.contains(e):
            raise PreconditionError(f"element {e!r} outside {monoid.label}")
    if s == t:
        raise PreconditionError("torsion construction needs s != t")
    if not 0 <= q < module.size or q == module.zero:
        raise PreconditionError("q must be a nonzero module element")
    if not monoid.is_finite:
        raise PreconditionError("no torsion: distinct lattice vectors never merge")
    bound = monoid.order ** 2
    k = None
    xs, xt = s, t
    for n in range(1, bound + 1):
        if n > 1:
            xs = monoid.add(xs, s)
            xt = monoid.add(xt, t)
        if xs == xt:
            k = n
            break
    if k is None:
        raise PreconditionError(f"no torsion for this pair within the bound {bound}")
    ring = module.ring
    terms = []
    for i in range(k):
        e = monoid.add(monoid_scale(monoid, k - i - 1, s), monoid_scale(monoid, i, t))
        terms.append((e, ring.one))
    h = make_series(ring, monoid, terms)
    if len(h.terms) != k:
        raise InvariantViolation("left factor exponents collided")
    g = make_series(module, monoid, [(s, q), (t, module.neg(q))])
    if g.is_zero:
        raise InvariantViolation("right factor degenerated")
    if not series_multiply(h, g).is_zero:
        raise InvariantViolation("h*g did not vanish on replay")
    return k, h, g
