"""Exact sparse linear algebra over the rationals.

Elimination is fraction-free: each row is scaled to a primitive integer vector
and rows are combined as ``p*row_i - a*row_p`` followed by content removal.
The pivot is always the first nonzero entry of the lowest-numbered remaining
row in the leftmost live column, which makes the output reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Sequence


@dataclass(frozen=True)
class ExactMatrix:
    """Sparse ``rows x cols`` matrix with exact rational entries."""

    rows: int
    cols: int
    entries: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (i, j), v in self.entries.items():
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise IndexError(f"entry ({i}, {j}) outside a {self.rows}x{self.cols} matrix")
            if v != 0:
                clean[(i, j)] = Fraction(v)
        object.__setattr__(self, "entries", clean)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "ExactMatrix":
        if cols is None:
            cols = len(rows[0]) if rows else 0
        entries = {(i, j): v for i, row in enumerate(rows) for j, v in enumerate(row) if v != 0}
        return cls(len(rows), cols, entries)

    def row_dicts(self) -> list[dict]:
        out = [dict() for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def to_rows(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def apply(self, v: Sequence) -> list[Fraction]:
        out = [Fraction(0)] * self.rows
        for (i, j), a in self.entries.items():
            out[i] += a * v[j]
        return out


def _primitive(row: dict) -> dict:
    if not row:
        return row
    den = reduce(lcm, (Fraction(v).denominator for v in row.values()), 1)
    ints = {j: int(Fraction(v) * den) for j, v in row.items()}
    g = reduce(gcd, (abs(v) for v in ints.values()), 0)
    first = ints[min(ints)]
    if first < 0:
        g = -g
    return {j: v // g for j, v in ints.items()}


def _eliminate(rows: list[dict], full: bool) -> tuple[list[dict], list[int]]:
    """Integer echelon form; ``full`` also clears entries above each pivot."""
    live = [_primitive(r) for r in rows if r]
    live = [r for r in live if r]
    done: list[dict] = []
    pivots: list[int] = []
    while live:
        col = min(min(r) for r in live)
        idx = next(i for i, r in enumerate(live) if col in r)
        prow = live.pop(idx)
        p = prow[col]
        nxt = []
        for r in live:
            a = r.get(col)
            if a is None:
                nxt.append(r)
                continue
            new = _combine(r, p, prow, a)
            if new:
                nxt.append(new)
        if full:
            for t, r in enumerate(done):
                a = r.get(col)
                if a is not None:
                    done[t] = _combine(r, p, prow, a)
        live = nxt
        done.append(prow)
        pivots.append(col)
    return done, pivots


def _combine(r: dict, p: int, prow: dict, a: int) -> dict:
    # p*r - a*prow, made primitive
    out = {j: p * v for j, v in r.items()}
    for j, v in prow.items():
        w = out.get(j, 0) - a * v
        if w:
            out[j] = w
        else:
            out.pop(j, None)
    return _primitive(out)


def rank(M: ExactMatrix) -> int:
    return len(_eliminate(M.row_dicts(), full=False)[1])


def exact_kernel(M: ExactMatrix) -> list[list[Fraction]]:
    """Basis of ``{v : M v = 0}``, one vector per free column (ascending).

    Each vector has a 1 in its free column and 0 in the other free columns.
    """
    done, pivots = _eliminate(M.row_dicts(), full=True)
    pivot_set = set(pivots)
    free = [j for j in range(M.cols) if j not in pivot_set]
    basis = []
    for f in free:
        v = [Fraction(0)] * M.cols
        v[f] = Fraction(1)
        for row, pc in zip(done, pivots):
            a = row.get(f)
            if a:
                v[pc] = Fraction(-a, row[pc])
        basis.append(v)
    return basis


def rref(rows: Iterable[Sequence], cols: int | None = None) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form of a dense row list, zero rows dropped.

    Returns the rows (pivot entries equal to 1) in pivot order and the pivots.
    """
    rows = [list(r) for r in rows]
    if cols is None:
        cols = len(rows[0]) if rows else 0
    dicts = [{j: v for j, v in enumerate(r) if v != 0} for r in rows]
    done, pivots = _eliminate(dicts, full=True)
    order = sorted(range(len(pivots)), key=lambda t: pivots[t])
    out = []
    for t in order:
        row, pc = done[t], pivots[t]
        p = row[pc]
        dense = [Fraction(0)] * cols
        for j, v in row.items():
            dense[j] = Fraction(v, p)
        out.append(dense)
    return out, [pivots[t] for t in order]
