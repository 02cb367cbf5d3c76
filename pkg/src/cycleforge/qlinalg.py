"""Exact rational linear algebra: fraction-free row reduction and nullspaces.

Rows are kept as sparse ``{column: int}`` dicts.  A rational matrix is first
cleared of denominators row by row (scaling a row never changes its row
space), then reduced with integer-only updates ``r <- a*r - b*p`` followed by
division by the row content.  The reduced row echelon form is unique, so the
kernel basis read off from it is deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Row = dict[int, int]
ZERO = Fraction(0)


@dataclass
class QMatrix:
    """Dense exact-rational matrix with labelled rows and columns."""

    row_labels: list[str]
    col_labels: list[str]
    entries: list[list[Fraction]]

    @classmethod
    def zeros(cls, row_labels: Sequence[str], col_labels: Sequence[str]) -> QMatrix:
        return cls(list(row_labels), list(col_labels), [[ZERO] * len(col_labels) for _ in row_labels])

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.row_labels), len(self.col_labels)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QMatrix):
            return NotImplemented
        return (
            self.row_labels == other.row_labels
            and self.col_labels == other.col_labels
            and self.entries == other.entries
        )

    def nonzero(self) -> Iterable[tuple[int, int, Fraction]]:
        for i, row in enumerate(self.entries):
            for j, x in enumerate(row):
                if x:
                    yield i, j, x

    def apply(self, vec: Sequence[Fraction]) -> list[Fraction]:
        if len(vec) != len(self.col_labels):
            raise ValueError("vector length does not match column count")
        return [sum((x * vec[j] for j, x in enumerate(row) if x), ZERO) for row in self.entries]

    def permuted(self, row_order: Sequence[int], col_order: Sequence[int]) -> QMatrix:
        return QMatrix(
            [self.row_labels[i] for i in row_order],
            [self.col_labels[j] for j in col_order],
            [[self.entries[i][j] for j in col_order] for i in row_order],
        )

    def to_csv_rows(self) -> list[list[str]]:
        out = [[""] + self.col_labels]
        for label, row in zip(self.row_labels, self.entries):
            out.append([label] + [fraction_str(x) for x in row])
        return out


def fraction_str(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_fraction(text: str) -> Fraction:
    return Fraction(text)


def _integer_row(row: Sequence[Fraction] | dict[int, Fraction]) -> Row:
    items = row.items() if isinstance(row, dict) else enumerate(row)
    nz = {j: Fraction(x) for j, x in items if x}
    if not nz:
        return {}
    den = math.lcm(*(x.denominator for x in nz.values()))
    return _primitive({j: int(x * den) for j, x in nz.items()})


def _primitive(row: Row) -> Row:
    if not row:
        return row
    g = math.gcd(*row.values())
    if g > 1:
        row = {j: v // g for j, v in row.items()}
    return row


def _eliminate(target: Row, pivot: Row, col: int) -> Row:
    b = target.get(col)
    if not b:
        return target
    a = pivot[col]
    out = {j: a * v for j, v in target.items()}
    for j, v in pivot.items():
        w = out.get(j, 0) - b * v
        if w:
            out[j] = w
        else:
            out.pop(j, None)
    return _primitive(out)


def echelon(rows: Iterable[Row]) -> list[tuple[int, Row]]:
    """Forward elimination; returns ``(pivot column, row)`` pairs.

    Pivot columns are taken smallest-first so the result does not depend on
    how rows are interleaved beyond what the row space determines.
    """
    pending = [r for r in rows if r]
    basis: dict[int, Row] = {}
    for row in pending:
        while row:
            col = min(row)
            piv = basis.get(col)
            if piv is None:
                if row[col] < 0:
                    row = {j: -v for j, v in row.items()}
                basis[col] = row
                break
            row = _eliminate(row, piv, col)
    return sorted(basis.items())


def rref(rows: Iterable[Row]) -> list[tuple[int, Row]]:
    """Reduced row echelon form (pivot entries positive, content removed)."""
    ech = echelon(rows)
    reduced: list[tuple[int, Row]] = []
    for idx in range(len(ech) - 1, -1, -1):
        col, row = ech[idx]
        for later_col, later in reduced:
            row = _eliminate(row, later, later_col)
        if row[col] < 0:
            row = {j: -v for j, v in row.items()}
        reduced.append((col, row))
    reduced.reverse()
    return reduced


def matrix_rows(m: QMatrix) -> list[Row]:
    return [_integer_row(r) for r in m.entries]


def rank(m: QMatrix) -> int:
    return len(echelon(matrix_rows(m)))


def kernel_dimension(m: QMatrix) -> int:
    return m.shape[1] - rank(m)


def kernel_basis(m: QMatrix) -> list[list[Fraction]]:
    """Basis of ``{v : M v = 0}``: one vector per free column, that entry set to 1."""
    ncols = m.shape[1]
    red = rref(matrix_rows(m))
    pivots = {col for col, _ in red}
    basis = []
    for free in range(ncols):
        if free in pivots:
            continue
        vec = [ZERO] * ncols
        vec[free] = Fraction(1)
        for col, row in red:
            x = row.get(free)
            if x:
                vec[col] = Fraction(-x, row[col])
        basis.append(vec)
    return basis


def vectors_rank(vectors: Sequence[dict] | Sequence[Sequence[Fraction]]) -> int:
    """Rank of a family of vectors given densely or as ``{key: value}`` maps."""
    if not vectors:
        return 0
    if isinstance(vectors[0], dict):
        keys = sorted({k for v in vectors for k in v}, key=repr)
        index = {k: i for i, k in enumerate(keys)}
        rows = [_integer_row({index[k]: x for k, x in v.items()}) for v in vectors]
    else:
        rows = [_integer_row(v) for v in vectors]
    return len(echelon(rows))
