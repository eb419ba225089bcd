"""Exact sparse operators on finite labeled bases.

Entries are kept as exact values (int / Fraction / ExactScalar) wherever
the algebra is exact; the spectral layer converts to dense complex
arrays once floats are unavoidable.  Stored zeros are dropped eagerly so
structural equality is meaningful.
"""

from __future__ import annotations

from typing import Dict, Iterable, Optional, Sequence, Tuple

import numpy as np

from .scalars import (
    scalar_add,
    scalar_conj,
    scalar_inv,
    scalar_is_zero,
    scalar_mul,
    to_complex,
)

Entry = Tuple[int, int]


class NotMonomialError(ValueError):
    """Operator is not a (partial) monomial map, so it has no exact inverse."""


class SparseOperator:
    __slots__ = ("dim", "entries")

    def __init__(self, dim: int, entries: Optional[Dict[Entry, object]] = None):
        self.dim = dim
        self.entries: Dict[Entry, object] = {}
        if entries:
            for key, value in entries.items():
                if not scalar_is_zero(value):
                    self.entries[key] = value

    # -- constructors ------------------------------------------------

    @classmethod
    def identity(cls, dim: int) -> "SparseOperator":
        return cls(dim, {(i, i): 1 for i in range(dim)})

    @classmethod
    def zero(cls, dim: int) -> "SparseOperator":
        return cls(dim, {})

    @classmethod
    def diagonal(cls, values: Sequence[object]) -> "SparseOperator":
        return cls(len(values), {(i, i): v for i, v in enumerate(values)})

    @classmethod
    def from_dense(cls, array, tol: float = 0.0) -> "SparseOperator":
        array = np.asarray(array)
        n, m = array.shape
        if n != m:
            raise ValueError("square matrices only")
        entries = {}
        for i in range(n):
            for j in range(m):
                v = array[i, j]
                if abs(v) > tol:
                    entries[(i, j)] = complex(v)
        return cls(n, entries)

    # -- algebra -----------------------------------------------------

    def __add__(self, other: "SparseOperator") -> "SparseOperator":
        self._check(other)
        out = dict(self.entries)
        for key, value in other.entries.items():
            if key in out:
                s = scalar_add(out[key], value)
                if scalar_is_zero(s):
                    del out[key]
                else:
                    out[key] = s
            else:
                out[key] = value
        return SparseOperator(self.dim, out)

    def __sub__(self, other: "SparseOperator") -> "SparseOperator":
        return self + other.scaled(-1)

    def scaled(self, scalar) -> "SparseOperator":
        if scalar_is_zero(scalar):
            return SparseOperator.zero(self.dim)
        return SparseOperator(
            self.dim, {k: scalar_mul(scalar, v) for k, v in self.entries.items()}
        )

    def __matmul__(self, other: "SparseOperator") -> "SparseOperator":
        self._check(other)
        by_col: Dict[int, list] = {}
        for (r, c), v in self.entries.items():
            by_col.setdefault(c, []).append((r, v))
        out: Dict[Entry, object] = {}
        for (r2, c2), v2 in other.entries.items():
            hits = by_col.get(r2)
            if not hits:
                continue
            for r1, v1 in hits:
                key = (r1, c2)
                term = scalar_mul(v1, v2)
                if key in out:
                    s = scalar_add(out[key], term)
                    if scalar_is_zero(s):
                        del out[key]
                    else:
                        out[key] = s
                else:
                    out[key] = term
        return SparseOperator(self.dim, out)

    def adjoint(self) -> "SparseOperator":
        return SparseOperator(
            self.dim, {(c, r): scalar_conj(v) for (r, c), v in self.entries.items()}
        )

    def commutator(self, other: "SparseOperator") -> "SparseOperator":
        return self @ other - other @ self

    def anticommutator(self, other: "SparseOperator") -> "SparseOperator":
        return self @ other + other @ self

    # -- monomial structure -------------------------------------------

    def is_monomial(self) -> bool:
        rows, cols = set(), set()
        for r, c in self.entries:
            if r in rows or c in cols:
                return False
            rows.add(r)
            cols.add(c)
        return True

    def inverse(self) -> "SparseOperator":
        """Exact inverse of a partial monomial map (on its domain)."""
        if not self.is_monomial():
            raise NotMonomialError("inverse requires one entry per row and column")
        return SparseOperator(
            self.dim, {(c, r): scalar_inv(v) for (r, c), v in self.entries.items()}
        )

    def domain(self) -> frozenset:
        """Column indices on which the operator is defined (nonzero)."""
        return frozenset(c for (_, c) in self.entries)

    def column(self, j: int):
        return [(r, v) for (r, c), v in self.entries.items() if c == j]

    def scalar_on(self, indices: Iterable[int]):
        """If the operator acts as one common scalar on `indices`, return it.

        Requires every listed index to map diagonally to itself with the
        same value; returns None otherwise.
        """
        value = None
        for j in indices:
            col = self.column(j)
            if len(col) != 1 or col[0][0] != j:
                return None
            v = col[0][1]
            if value is None:
                value = v
            elif not _eq_exact(value, v):
                return None
        return value

    # -- queries -------------------------------------------------------

    def apply_basis(self, j: int):
        return self.column(j)

    def restrict(self, indices: Sequence[int]) -> "SparseOperator":
        pos = {idx: k for k, idx in enumerate(indices)}
        entries = {}
        for (r, c), v in self.entries.items():
            if r in pos and c in pos:
                entries[(pos[r], pos[c])] = v
        return SparseOperator(len(indices), entries)

    def to_dense(self, dtype=complex) -> np.ndarray:
        out = np.zeros((self.dim, self.dim), dtype=dtype)
        for (r, c), v in self.entries.items():
            out[r, c] = to_complex(v) if dtype is complex else float(v)
        return out

    def nnz(self) -> int:
        return len(self.entries)

    def is_zero(self) -> bool:
        return not self.entries

    def max_abs(self) -> float:
        if not self.entries:
            return 0.0
        return max(abs(to_complex(v)) for v in self.entries.values())

    def is_hermitian(self, tol: float = 0.0) -> bool:
        diff = self - self.adjoint()
        if tol == 0.0:
            return diff.is_zero()
        return diff.max_abs() <= tol

    def __eq__(self, other):
        if not isinstance(other, SparseOperator):
            return NotImplemented
        if self.dim != other.dim or len(self.entries) != len(other.entries):
            return False
        for key, value in self.entries.items():
            if key not in other.entries or not _eq_exact(value, other.entries[key]):
                return False
        return True

    def __hash__(self):
        return NotImplemented

    def __repr__(self):
        return f"SparseOperator(dim={self.dim}, nnz={len(self.entries)})"

    def _check(self, other: "SparseOperator"):
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch {self.dim} != {other.dim}")


def _eq_exact(x, y) -> bool:
    diff = scalar_add(x, scalar_mul(-1, y))
    return scalar_is_zero(diff) or (
        isinstance(diff, complex) and abs(diff) == 0.0
    )


def kron(a: SparseOperator, b: SparseOperator) -> SparseOperator:
    """Kronecker product; pair index = left_index * dim(b) + right_index.

    Plain (ungraded) product: the right factors used in this package are
    charge-preserving, even operators, so no Koszul signs arise.
    """
    db = b.dim
    entries = {}
    for (ra, ca), va in a.entries.items():
        for (rb, cb), vb in b.entries.items():
            entries[(ra * db + rb, ca * db + cb)] = scalar_mul(va, vb)
    return SparseOperator(a.dim * db, entries)


def dump_operator(op: SparseOperator, path: str) -> None:
    """Write a text triplet list `row col re im`, one entry per line."""
    with open(path, "w") as fh:
        for (r, c) in sorted(op.entries):
            z = to_complex(op.entries[(r, c)])
            fh.write(f"{r} {c} {z.real!r} {z.imag!r}\n")
