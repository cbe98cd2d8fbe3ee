"""Sparse exact matrices over Q."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from .poly import to_fraction


def _norm(c):
    # Fractions with unit denominator are stored as ints; arithmetic stays exact
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


class ExactMatrix:
    """Row-sparse matrix of exact rationals.

    A matrix acts on column vectors: ``M @ v`` with ``len(v) == cols``.  Rows
    are dicts {col: value} without stored zeros.  Treat instances as
    immutable.
    """

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows: int, cols: int, data: Iterable[Mapping] | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("negative shape")
        self.rows = rows
        self.cols = cols
        out = []
        if data is not None:
            for r in data:
                clean = {}
                for j, c in r.items():
                    if not 0 <= j < cols:
                        raise IndexError(f"column {j} out of range for {cols} columns")
                    c = _norm(to_fraction(c) if not isinstance(c, int) else c)
                    if c:
                        clean[j] = c
                out.append(clean)
        if len(out) < rows:
            out.extend({} for _ in range(rows - len(out)))
        if len(out) != rows:
            raise ValueError(f"got {len(out)} rows, expected {rows}")
        self._data = out

    @classmethod
    def from_dense(cls, dense) -> "ExactMatrix":
        dense = [list(r) for r in dense]
        ncols = len(dense[0]) if dense else 0
        return cls(len(dense), ncols, [{j: c for j, c in enumerate(r) if c} for r in dense])

    @classmethod
    def from_entries(cls, rows: int, cols: int, entries: Mapping) -> "ExactMatrix":
        data = [{} for _ in range(rows)]
        for (i, j), c in entries.items():
            if not 0 <= i < rows:
                raise IndexError(f"row {i} out of range")
            data[i][j] = c
        return cls(rows, cols, data)

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls(n, n, [{i: 1} for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "ExactMatrix":
        return cls(rows, cols)

    @property
    def shape(self) -> tuple:
        return (self.rows, self.cols)

    def row(self, i: int) -> dict:
        return self._data[i]

    def row_dicts(self) -> list:
        return self._data

    def entries(self) -> Iterator:
        for i, r in enumerate(self._data):
            for j in sorted(r):
                yield (i, j), r[j]

    def nnz(self) -> int:
        return sum(len(r) for r in self._data)

    def __getitem__(self, ij):
        i, j = ij
        return self._data[i].get(j, 0)

    def transpose(self) -> "ExactMatrix":
        data = [{} for _ in range(self.cols)]
        for i, r in enumerate(self._data):
            for j, c in r.items():
                data[j][i] = c
        return ExactMatrix(self.cols, self.rows, data)

    @property
    def T(self) -> "ExactMatrix":
        return self.transpose()

    def to_dense(self) -> list:
        out = [[0] * self.cols for _ in range(self.rows)]
        for i, r in enumerate(self._data):
            for j, c in r.items():
                out[i][j] = c
        return out

    def apply(self, vec: Mapping) -> dict:
        """``M @ v`` for a sparse vector {index: value}."""
        out = {}
        for i, r in enumerate(self._data):
            s = 0
            if len(r) < len(vec):
                for j, c in r.items():
                    x = vec.get(j)
                    if x:
                        s += c * x
            else:
                for j, x in vec.items():
                    c = r.get(j)
                    if c:
                        s += c * x
            if s:
                out[i] = _norm(s)
        return out

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        data = []
        orows = other._data
        for r in self._data:
            acc: dict = {}
            for k, a in r.items():
                for j, b in orows[k].items():
                    acc[j] = acc.get(j, 0) + a * b
            data.append({j: c for j, c in acc.items() if c})
        return ExactMatrix(self.rows, other.cols, data)

    def is_zero(self) -> bool:
        return not any(self._data)

    def vstack(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.cols:
            raise ValueError("column counts differ")
        return ExactMatrix(self.rows + other.rows, self.cols, self._data + other._data)

    def scale(self, c) -> "ExactMatrix":
        c = to_fraction(c)
        return ExactMatrix(self.rows, self.cols, [{j: c * a for j, a in r.items()} for r in self._data])

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __repr__(self) -> str:
        return f"ExactMatrix({self.rows}x{self.cols}, nnz={self.nnz()})"
