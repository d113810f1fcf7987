"""Exact linear algebra over the rationals for monomial-indexed vectors.

Vectors are dicts mapping hashable column labels (usually monomials) to
Fraction entries.  ``RowSpace`` keeps an echelon basis with deterministic
pivot selection so that complements and ranks are reproducible run to run.
"""

from __future__ import annotations

from fractions import Fraction


class RowSpace:
    """Incrementally reduced row space with one pivot column per row.

    ``column_key`` fixes which column a new row pivots on: the smallest
    column under the key among its nonzero entries.
    """

    def __init__(self, column_key=None):
        self.column_key = column_key or (lambda c: c)
        self.rows: dict = {}  # pivot column -> reduced row (dict)

    def _reduce(self, vec: dict) -> dict:
        vec = {c: Fraction(v) for c, v in vec.items() if v}
        for pivot, row in self.rows.items():
            coeff = vec.get(pivot)
            if coeff:
                for c, v in row.items():
                    new = vec.get(c, Fraction(0)) - coeff * v
                    if new:
                        vec[c] = new
                    else:
                        vec.pop(c, None)
        return vec

    def residue(self, vec: dict) -> dict:
        """The part of ``vec`` outside the current span (fully reduced)."""
        return self._reduce(vec)

    def contains(self, vec: dict) -> bool:
        return not self._reduce(vec)

    def add(self, vec: dict) -> bool:
        """Insert a vector; returns True when it enlarged the space."""
        vec = self._reduce(vec)
        if not vec:
            return False
        pivot = min(vec, key=self.column_key)
        inv = Fraction(1) / vec[pivot]
        row = {c: v * inv for c, v in vec.items()}
        for p, other in self.rows.items():
            coeff = other.get(pivot)
            if coeff:
                for c, v in row.items():
                    new = other.get(c, Fraction(0)) - coeff * v
                    if new:
                        other[c] = new
                    else:
                        other.pop(c, None)
        self.rows[pivot] = row
        return True

    @property
    def rank(self) -> int:
        return len(self.rows)


def span_rank(vectors, column_key=None) -> int:
    space = RowSpace(column_key)
    for v in vectors:
        space.add(v)
    return space.rank


def matrix_rank(rows: list[list[Fraction]]) -> int:
    return span_rank({j: v for j, v in enumerate(row)} for row in rows)


def is_invertible(matrix: list[list[Fraction]]) -> bool:
    n = len(matrix)
    return n > 0 and all(len(r) == n for r in matrix) and matrix_rank(matrix) == n
