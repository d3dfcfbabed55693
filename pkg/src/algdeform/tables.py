"""Sparse coefficient tables for multilinear maps on a finite basis.

A *vector* is ``{basis index: Scalar}`` with zero entries omitted. A *table*
for an n-linear map sends n-tuples of basis indices to vectors, again with
zero rows omitted. All identity checks in the package reduce to building such
tables and testing them for emptiness, so these kernels are deliberately flat
and dict-based: their cost scales with the number of nonzero entries, never
with dim**n.
"""

from __future__ import annotations

from typing import Mapping

from .scalar import ONE, Scalar

Vec = dict[int, Scalar]
Table = dict[tuple[int, ...], Vec]

__all__ = [
    "Vec",
    "Table",
    "vec_add_into",
    "vec_scaled",
    "vec_sub",
    "vec_eq",
    "table_tidy",
    "table_add_into",
    "table_sub",
    "table_scaled",
    "table_eq",
    "table_insert",
    "first_witness",
]


def vec_add_into(acc: Vec, coef: Scalar, vec: Mapping[int, Scalar]) -> None:
    """In place: acc += coef * vec (zeros are left for a later tidy)."""
    if coef is ONE:
        for k, v in vec.items():
            cur = acc.get(k)
            acc[k] = v if cur is None else cur + v
    else:
        for k, v in vec.items():
            cur = acc.get(k)
            w = coef * v
            acc[k] = w if cur is None else cur + w


def vec_scaled(coef: Scalar, vec: Mapping[int, Scalar]) -> Vec:
    return {k: coef * v for k, v in vec.items()}


def vec_sub(a: Mapping[int, Scalar], b: Mapping[int, Scalar]) -> Vec:
    out = dict(a)
    for k, v in b.items():
        cur = out.get(k)
        nv = -v if cur is None else cur - v
        if nv:
            out[k] = nv
        elif k in out:
            del out[k]
    return out


def vec_eq(a: Mapping[int, Scalar], b: Mapping[int, Scalar]) -> bool:
    return not vec_sub(a, b)


def table_tidy(table: Table) -> Table:
    """Drop zero coefficients and empty rows, in place; returns the table."""
    dead_rows = []
    for t, vec in table.items():
        dead = [k for k, v in vec.items() if not v]
        for k in dead:
            del vec[k]
        if not vec:
            dead_rows.append(t)
    for t in dead_rows:
        del table[t]
    return table


def table_add_into(acc: Table, coef: Scalar, table: Table) -> None:
    for t, vec in table.items():
        row = acc.get(t)
        if row is None:
            row = {}
            acc[t] = row
        vec_add_into(row, coef, vec)


def table_sub(a: Table, b: Table) -> Table:
    out: Table = {t: dict(vec) for t, vec in a.items()}
    for t, vec in b.items():
        row = out.get(t)
        if row is None:
            row = {}
            out[t] = row
        for k, v in vec.items():
            cur = row.get(k)
            nv = -v if cur is None else cur - v
            if nv:
                row[k] = nv
            elif k in row:
                del row[k]
    return table_tidy(out)


def table_scaled(coef: Scalar, table: Table) -> Table:
    out: Table = {}
    if not coef:
        return out
    for t, vec in table.items():
        out[t] = {k: coef * v for k, v in vec.items()}
    return out


def table_eq(a: Table, b: Table) -> bool:
    return not table_sub(a, b)


def table_insert(p: Table, p_arity: int, q: Table, q_arity: int, pos: int) -> Table:
    """The partial composition P(..., Q(...), ...) with Q in slot ``pos``.

    Result arity is ``p_arity + q_arity - 1``. Built by matching nonzero
    outputs of Q against slot ``pos`` of nonzero rows of P, so the cost is
    proportional to the match count.
    """
    if not (0 <= pos < p_arity):
        raise ValueError(f"slot {pos} out of range for arity {p_arity}")
    by_slot: dict[int, list[tuple[tuple[int, ...], Vec]]] = {}
    for tp, vp in p.items():
        by_slot.setdefault(tp[pos], []).append((tp, vp))
    out: Table = {}
    for tq, vq in q.items():
        for m, qcoef in vq.items():
            hits = by_slot.get(m)
            if not hits:
                continue
            for tp, vp in hits:
                key = tp[:pos] + tq + tp[pos + 1:]
                row = out.get(key)
                if row is None:
                    row = {}
                    out[key] = row
                vec_add_into(row, qcoef, vp)
    return table_tidy(out)


def first_witness(table: Table) -> tuple[tuple[int, ...], Vec] | None:
    """Lexicographically smallest nonzero row, or None if the table is zero."""
    table_tidy(table)
    if not table:
        return None
    key = min(table)
    return key, table[key]
