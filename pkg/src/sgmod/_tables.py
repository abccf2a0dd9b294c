"""Numpy audits for operation tables; every failure names a replayable witness."""

from __future__ import annotations

import numpy as np

from .errors import AxiomError


def as_index_table(table, rows: int, cols: int, what: str) -> np.ndarray:
    try:
        t = np.asarray(table, dtype=np.int64)
    except (TypeError, ValueError) as exc:
        raise AxiomError(f"{what}: malformed table ({exc})")
    if t.shape != (rows, cols):
        raise AxiomError(f"{what}: expected shape {(rows, cols)}, got {t.shape}")
    if t.size and (t.min() < 0 or t.max() >= cols):
        bad = np.argwhere((t < 0) | (t >= cols))[0]
        raise AxiomError(f"{what}: entry at {tuple(int(x) for x in bad)} out of range 0..{cols - 1}")
    return t


def audit_commutative(table: np.ndarray, what: str) -> None:
    diff = table != table.T
    if diff.any():
        i, j = np.argwhere(diff)[0]
        raise AxiomError(f"{what} not commutative at ({int(i)}, {int(j)})")


def audit_identity(table: np.ndarray, ident: int, what: str) -> None:
    n = table.shape[0]
    if not (0 <= ident < n):
        raise AxiomError(f"{what}: identity index {ident} out of range")
    row = table[ident]
    if not np.array_equal(row, np.arange(n)):
        j = int(np.flatnonzero(row != np.arange(n))[0])
        raise AxiomError(f"{what}: {ident} * {j} = {int(row[j])}, identity fails")


def audit_associative(table: np.ndarray, what: str) -> None:
    # per-row check keeps memory at n^2 per step
    n = table.shape[0]
    for i in range(n):
        lhs = table[table[i]]        # lhs[j, k] = (i*j)*k
        rhs = table[i][table]        # rhs[j, k] = i*(j*k)
        diff = lhs != rhs
        if diff.any():
            j, k = np.argwhere(diff)[0]
            raise AxiomError(f"{what} not associative at ({i}, {int(j)}, {int(k)})")


def audit_group_rows(table: np.ndarray, what: str) -> None:
    # each translation row a permutation <=> injective <=> inverses exist
    n = table.shape[0]
    sorted_rows = np.sort(table, axis=1)
    diff = sorted_rows != np.arange(n)[None, :]
    if diff.any():
        i = int(np.argwhere(diff.any(axis=1))[0][0])
        raise AxiomError(f"{what}: row {i} is not a permutation (no inverses)")


def audit_distributive(mul: np.ndarray, add: np.ndarray, what: str) -> None:
    n = mul.shape[0]
    for i in range(n):
        lhs = mul[i][add]                      # lhs[j, k] = i*(j+k)
        rhs = add[np.ix_(mul[i], mul[i])]      # rhs[j, k] = i*j + i*k
        diff = lhs != rhs
        if diff.any():
            j, k = np.argwhere(diff)[0]
            raise AxiomError(f"{what}: distributivity fails at ({i}, {int(j)}, {int(k)})")


def audit_abelian_group(add: np.ndarray, zero: int, what: str) -> None:
    audit_commutative(add, f"{what} addition")
    audit_identity(add, zero, f"{what} addition")
    audit_associative(add, f"{what} addition")
    audit_group_rows(add, f"{what} addition")
