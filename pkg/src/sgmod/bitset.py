"""Element subsets as integer bit masks (bit i set = element index i is a member)."""

from __future__ import annotations

from typing import Iterable, Iterator

import numpy as np


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << int(i)
    return m


def mask_from_bools(flags: np.ndarray) -> int:
    return mask_of(np.flatnonzero(flags))


def has_bit(mask: int, i: int) -> bool:
    return (mask >> i) & 1 == 1


def members(mask: int) -> tuple[int, ...]:
    return tuple(iter_bits(mask))


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def is_subset(a: int, b: int) -> bool:
    return a & ~b == 0


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def lowest_bit(mask: int) -> int | None:
    if mask == 0:
        return None
    return (mask & -mask).bit_length() - 1
