"""Commutative monoids in two forms: finite Cayley tables and affine lattice monoids.

Affine elements are arbitrary integer vectors in the ambient group Z^d; any
submonoid of Z^d is cancellative and torsion-free, which is the only fact the
algebra layer needs, so membership certification is deliberately omitted.
"""

from __future__ import annotations

from typing import Union

import numpy as np

from ._tables import as_index_table, audit_associative, audit_commutative, audit_identity
from .errors import PreconditionError, StructureMismatchError

MonoidElement = Union[int, tuple]


class Monoid:
    """Additive commutative monoid; exponent arithmetic for series."""

    def __init__(self, *, kind: str, label: str, cayley=None, identity: int | None = None,
                 dim: int | None = None):
        self.kind = kind
        self.label = label
        if kind == "finite":
            order = len(cayley)
            table = as_index_table(cayley, order, order, f"monoid '{label}' table")
            audit_commutative(table, f"monoid '{label}'")
            audit_associative(table, f"monoid '{label}'")
            audit_identity(table, identity, f"monoid '{label}'")
            self.cayley = table
            self.identity = int(identity)
            self.dim = None
            self._rows = table.tolist()
        elif kind == "affine":
            if dim is None or dim < 1:
                raise PreconditionError("affine monoid needs a positive dimension")
            self.cayley = None
            self.identity = None
            self.dim = int(dim)
        else:
            raise PreconditionError(f"unknown monoid kind {kind!r}")
        self._cancellative: tuple | None = None
        self._torsion_free: tuple | None = None

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    @property
    def order(self) -> int:
        if not self.is_finite:
            raise PreconditionError("affine monoids are infinite")
        return self.cayley.shape[0]

    def identity_key(self) -> MonoidElement:
        return self.identity if self.is_finite else (0,) * self.dim

    def contains(self, e) -> bool:
        if self.is_finite:
            return isinstance(e, int) and not isinstance(e, bool) and 0 <= e < self.order
        return (isinstance(e, tuple) and len(e) == self.dim
                and all(isinstance(x, int) for x in e))

    def add(self, s: MonoidElement, t: MonoidElement) -> MonoidElement:
        if self.is_finite:
            return self._rows[s][t]
        return tuple(a + b for a, b in zip(s, t))

    def elements(self) -> range:
        if not self.is_finite:
            raise PreconditionError("cannot enumerate an affine monoid")
        return range(self.order)

    def __repr__(self) -> str:
        return f"Monoid({self.label!r}, {self.kind})"


def free_monoid(dim: int, label: str | None = None) -> Monoid:
    """The lattice monoid of integer vectors of the given dimension."""
    if dim < 1:
        raise PreconditionError("free monoid needs dim >= 1")
    return Monoid(kind="affine", dim=dim, label=label or f"N^{dim}")


def cyclic_group_monoid(k: int, label: str | None = None) -> Monoid:
    if k < 1:
        raise PreconditionError("cyclic group needs k >= 1")
    idx = np.arange(k)
    table = (idx[:, None] + idx[None, :]) % k
    return Monoid(kind="finite", cayley=table, identity=0, label=label or f"Z/{k} (additive)")


def saturating_monoid(c: int, label: str | None = None) -> Monoid:
    """{0..c} under capped addition s + t = min(s + t, c)."""
    if c < 1:
        raise PreconditionError("saturating monoid needs c >= 1")
    idx = np.arange(c + 1)
    table = np.minimum(idx[:, None] + idx[None, :], c)
    return Monoid(kind="finite", cayley=table, identity=0, label=label or f"sat({c})")


def monoid_from_table(cayley, identity: int, label: str = "S") -> Monoid:
    return Monoid(kind="finite", cayley=cayley, identity=identity, label=label)


def monoid_add(monoid: Monoid, s: MonoidElement, t: MonoidElement) -> MonoidElement:
    if not monoid.contains(s) or not monoid.contains(t):
        raise StructureMismatchError(f"element outside monoid {monoid.label}")
    return monoid.add(s, t)


def monoid_scale(monoid: Monoid, n: int, e: MonoidElement) -> MonoidElement:
    """n-fold sum of an element; n = 0 gives the identity."""
    if n < 0:
        raise PreconditionError("scale factor must be nonnegative")
    acc = monoid.identity_key()
    for _ in range(n):
        acc = monoid.add(acc, e)
    return acc


def is_cancellative(monoid: Monoid) -> tuple[bool, tuple | None]:
    """Cancellation law check; a failure returns (s, t, u) with s+t = s+u, t != u.

    The witness minimizes the confused pair (t, u) first and then the
    translating element s, so golden outputs are stable.
    """
    if monoid._cancellative is not None:
        return monoid._cancellative
    if not monoid.is_finite:
        result = (True, None)  # submonoid of a torsion-free group
    else:
        rows_injective = np.array_equal(
            np.sort(monoid.cayley, axis=1),
            np.tile(np.arange(monoid.order), (monoid.order, 1)))
        if rows_injective:
            result = (True, None)
        else:
            result = None
            k = monoid.order
            rows = monoid._rows
            for t in range(k):
                for u in range(t + 1, k):
                    for s in range(k):
                        if rows[s][t] == rows[s][u]:
                            result = (False, (s, t, u))
                            break
                    if result:
                        break
                if result:
                    break
    monoid._cancellative = result
    return result


def _orbit_size(monoid: Monoid, e: int) -> int:
    seen = set()
    x = e
    while x not in seen:
        seen.add(x)
        x = monoid.add(x, e)
    return len(seen)


def is_torsion_free(monoid: Monoid) -> tuple[bool, tuple | None]:
    """Search for s != t with n*s = n*t; bound n <= order^2 is exhaustive.

    The pair sequence (n*s, n*t) lives in a set of size order^2, so any
    coincidence repeats within order^2 steps (pigeonhole). The witness picks
    the first pair in (min, max) order, presents the element with the larger
    cyclic orbit first, and reports the minimal exponent for that pair.
    """
    if monoid._torsion_free is not None:
        return monoid._torsion_free
    if not monoid.is_finite:
        result = (True, None)
    else:
        result = (True, None)
        k = monoid.order
        bound = k * k
        for a in range(k):
            for b in range(a + 1, k):
                xa, xb = a, b
                found = None
                for n in range(1, bound + 1):
                    if n > 1:
                        xa = monoid.add(xa, a)
                        xb = monoid.add(xb, b)
                    if xa == xb:
                        found = n
                        break
                if found is not None:
                    s, t = a, b
                    if _orbit_size(monoid, b) > _orbit_size(monoid, a):
                        s, t = b, a
                    result = (False, (s, t, found))
                    break
            if result[0] is False:
                break
    monoid._torsion_free = result
    return result


def same_monoid(a: Monoid, b: Monoid) -> bool:
    if a is b:
        return True
    if a.kind != b.kind:
        return False
    if a.kind == "affine":
        return a.dim == b.dim
    return a.identity == b.identity and np.array_equal(a.cayley, b.cayley)
