"""Exact integer-matrix engine for finitely generated abelian groups.

Smith normal form over Z with unimodular transform tracking, plus the
presentation calculus built on it: invariant factors, kernels and
cokernels of homomorphisms between presented groups.  Everything uses
Python's arbitrary-precision integers; pivot growth is harmless here.

Conventions: a group is presented by a generator count and a relation
matrix whose *columns* are relators in the generator basis.  Relators
are never auto-minimized except through Smith canonicalization, so
generator labels stay meaningful for downstream reporting.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import List, Optional, Sequence, Tuple


class IntMatrix:
    """Immutable integer matrix; rows x cols, exact arithmetic."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data: Sequence[Sequence[int]], cols: Optional[int] = None):
        rows = [tuple(int(x) for x in row) for row in data]
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise ValueError("ragged rows")
        else:
            width = cols or 0
        self.rows = len(rows)
        self.cols = width if rows else (cols or 0)
        self.data = tuple(rows)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls([[0] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: Optional[int] = None) -> "IntMatrix":
        if not columns:
            return cls.zeros(rows or 0, 0)
        height = len(columns[0])
        return cls([[col[i] for col in columns] for i in range(height)])

    def column(self, j: int) -> List[int]:
        return [self.data[i][j] for i in range(self.rows)]

    def columns(self) -> List[List[int]]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix([[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)], cols=self.rows)

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.rows != other.rows:
            raise ValueError("row mismatch in hstack")
        return IntMatrix(
            [list(self.data[i]) + list(other.data[i]) for i in range(self.rows)],
            cols=self.cols + other.cols,
        )

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch in product")
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                row.append(sum(self.data[i][k] * other.data[k][j] for k in range(self.cols)))
            out.append(row)
        return IntMatrix(out, cols=other.cols)

    def mul_vector(self, vec: Sequence[int]) -> List[int]:
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        return [sum(self.data[i][k] * vec[k] for k in range(self.cols)) for i in range(self.rows)]

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return IntMatrix(
            [[self.data[i][j] - other.data[i][j] for j in range(self.cols)] for i in range(self.rows)],
            cols=self.cols,
        )

    def __eq__(self, other):
        return isinstance(other, IntMatrix) and self.data == other.data and self.cols == other.cols

    def __hash__(self):
        return hash((self.cols, self.data))

    def __repr__(self):
        return f"IntMatrix({[list(r) for r in self.data]!r})"

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.data for x in row)

    def determinant(self) -> int:
        """Fraction-free Gaussian (Bareiss) determinant; square only."""
        if self.rows != self.cols:
            raise ValueError("determinant of non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        m = [list(row) for row in self.data]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if m[k][k] == 0:
                for i in range(k + 1, n):
                    if m[i][k] != 0:
                        m[k], m[i] = m[i], m[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            prev = m[k][k]
        return sign * m[n - 1][n - 1]


def smith_normal_form(m: IntMatrix) -> Tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return unimodular (u, v) and diagonal d with u @ m @ v == d.

    The diagonal carries the divisibility chain d1 | d2 | ... with
    nonnegative entries.  Total: defined for every integer matrix,
    including empty shapes.
    """
    rows, cols = m.rows, m.cols
    a = [list(row) for row in m.data]
    u = [[1 if i == j else 0 for j in range(rows)] for i in range(rows)]
    v = [[1 if i == j else 0 for j in range(cols)] for i in range(cols)]

    def row_op(i, j, q):  # row_i -= q * row_j
        a[i] = [x - q * y for x, y in zip(a[i], a[j])]
        u[i] = [x - q * y for x, y in zip(u[i], u[j])]

    def col_op(i, j, q):  # col_i -= q * col_j
        for r in range(rows):
            a[r][i] -= q * a[r][j]
        for r in range(cols):
            v[r][i] -= q * v[r][j]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in range(rows):
            a[r][i], a[r][j] = a[r][j], a[r][i]
        for r in range(cols):
            v[r][i], v[r][j] = v[r][j], v[r][i]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    t = 0
    limit = min(rows, cols)
    while t < limit:
        # locate a pivot of minimal absolute value in the trailing block
        pivot = None
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                x = a[i][j]
                if x != 0 and (best is None or abs(x) < best):
                    best = abs(x)
                    pivot = (i, j)
        if pivot is None:
            break
        pi, pj = pivot
        if pi != t:
            swap_rows(t, pi)
        if pj != t:
            swap_cols(t, pj)

        while True:
            # clear column t
            dirty = False
            for i in range(t + 1, rows):
                if a[i][t] != 0:
                    q = a[i][t] // a[t][t]
                    row_op(i, t, q)
                    if a[i][t] != 0:
                        swap_rows(t, i)
                        dirty = True
            # clear row t
            for j in range(t + 1, cols):
                if a[t][j] != 0:
                    q = a[t][j] // a[t][t]
                    col_op(j, t, q)
                    if a[t][j] != 0:
                        swap_cols(t, j)
                        dirty = True
            if not dirty:
                break

        if a[t][t] < 0:
            negate_row(t)

        # enforce divisibility: fold any non-multiple into the pivot block
        offender = None
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                if a[i][j] % a[t][t] != 0:
                    offender = (i, j)
                    break
            if offender:
                break
        if offender:
            col_op(t, offender[1], -1)  # add offending column into column t
            continue
        t += 1

    return (
        IntMatrix(u, cols=rows),
        IntMatrix(a, cols=cols),
        IntMatrix(v, cols=cols),
    )


def kernel_basis(m: IntMatrix) -> IntMatrix:
    """Columns form a lattice basis of {x : m @ x = 0}."""
    u, d, v = smith_normal_form(m)
    rank = sum(1 for i in range(min(d.rows, d.cols)) if d.data[i][i] != 0)
    cols = [v.column(j) for j in range(rank, m.cols)]
    return IntMatrix.from_columns(cols, rows=m.cols)


def solve(m: IntMatrix, b: Sequence[int]) -> Optional[List[int]]:
    """One integer solution x of m @ x = b, or None."""
    if len(b) != m.rows:
        raise ValueError("rhs length mismatch")
    u, d, v = smith_normal_form(m)
    c = u.mul_vector(list(b))
    y = [0] * m.cols
    for i in range(m.rows):
        di = d.data[i][i] if i < min(d.rows, d.cols) else 0
        if i < m.cols and di != 0:
            if c[i] % di != 0:
                return None
            y[i] = c[i] // di
        elif c[i] != 0:
            return None
    return v.mul_vector(y)


def rank(m: IntMatrix) -> int:
    _, d, _ = smith_normal_form(m)
    return sum(1 for i in range(min(d.rows, d.cols)) if d.data[i][i] != 0)


# ---------------------------------------------------------------------------
# presented groups


@dataclass(frozen=True)
class InvariantFactors:
    """Canonical form: free rank plus torsion chain d1 | d2 | ..., each >= 2."""

    free_rank: int
    torsion: Tuple[int, ...] = ()

    def __post_init__(self):
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a != 0:
                raise ValueError(f"torsion chain violates divisibility: {self.torsion}")
        if any(d < 2 for d in self.torsion):
            raise ValueError("torsion entries must be >= 2")

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def is_free(self) -> bool:
        return not self.torsion

    def direct_sum(self, other: "InvariantFactors") -> "InvariantFactors":
        # rebuild a presentation and recanonicalize (chains must re-merge)
        gens = self.free_rank + other.free_rank + len(self.torsion) + len(other.torsion)
        cols = []
        offset = self.free_rank + other.free_rank
        for k, d in enumerate(list(self.torsion) + list(other.torsion)):
            col = [0] * gens
            col[offset + k] = d
            cols.append(col)
        g = FgAbelianGroup(gens, IntMatrix.from_columns(cols, rows=gens))
        return invariant_factors(g)

    def __str__(self):
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z_{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class FgAbelianGroup:
    """Finitely generated abelian group, presented by relator columns."""

    n_generators: int
    relations: IntMatrix

    def __post_init__(self):
        if self.relations.rows != self.n_generators:
            raise ValueError(
                f"relations need {self.n_generators} rows, got {self.relations.rows}"
            )

    @classmethod
    def free(cls, n: int) -> "FgAbelianGroup":
        return cls(n, IntMatrix.zeros(n, 0))

    @classmethod
    def cyclic(cls, order: int) -> "FgAbelianGroup":
        if order == 0:
            return cls.free(1)
        return cls(1, IntMatrix([[order]]))

    @classmethod
    def from_orders(cls, *orders: int) -> "FgAbelianGroup":
        """Direct sum of cyclic groups; 0 denotes an infinite factor."""
        n = len(orders)
        cols = []
        for i, d in enumerate(orders):
            if d != 0:
                col = [0] * n
                col[i] = d
                cols.append(col)
        return cls(n, IntMatrix.from_columns(cols, rows=n))

    def contains_in_relation_lattice(self, vec: Sequence[int]) -> bool:
        return solve(self.relations, vec) is not None


def invariant_factors(g: FgAbelianGroup) -> InvariantFactors:
    _, d, _ = smith_normal_form(g.relations)
    diag = [d.data[i][i] for i in range(min(d.rows, d.cols))]
    nonzero = [x for x in diag if x != 0]
    torsion = tuple(x for x in nonzero if x > 1)
    return InvariantFactors(g.n_generators - len(nonzero), torsion)


def is_isomorphic(g1: FgAbelianGroup, g2: FgAbelianGroup) -> bool:
    return invariant_factors(g1) == invariant_factors(g2)


@dataclass(frozen=True)
class GroupHom:
    """Homomorphism given on generators; must send relators into relators."""

    source: FgAbelianGroup
    target: FgAbelianGroup
    matrix: IntMatrix

    def __post_init__(self):
        if self.matrix.rows != self.target.n_generators or self.matrix.cols != self.source.n_generators:
            raise ValueError("hom matrix shape must be target_gens x source_gens")
        for j in range(self.source.relations.cols):
            image = self.matrix.mul_vector(self.source.relations.column(j))
            if not self.target.contains_in_relation_lattice(image):
                raise ValueError(f"matrix does not respect source relator {j}")

    @classmethod
    def endomorphism(cls, g: FgAbelianGroup, matrix: IntMatrix) -> "GroupHom":
        return cls(g, g, matrix)


def identity_hom(g: FgAbelianGroup) -> GroupHom:
    return GroupHom(g, g, IntMatrix.identity(g.n_generators))


def hom_cokernel(h: GroupHom) -> FgAbelianGroup:
    rels = h.target.relations.hstack(h.matrix)
    return FgAbelianGroup(h.target.n_generators, rels)


def hom_kernel(h: GroupHom) -> FgAbelianGroup:
    """Kernel of h as a presented group.

    Lift to free covers: solve M x + R_target y = 0 for the preimage
    lattice of the target relations, project to x, then present that
    lattice modulo the source relations with one more kernel computation.
    """
    m = h.matrix
    stacked = m.hstack(h.target.relations)
    k1 = kernel_basis(stacked)
    gens = [k1.column(j)[: h.source.n_generators] for j in range(k1.cols)]
    g_mat = IntMatrix.from_columns(gens, rows=h.source.n_generators)
    if g_mat.cols == 0:
        return FgAbelianGroup(0, IntMatrix.zeros(0, 0))
    stacked2 = g_mat.hstack(h.source.relations)
    k2 = kernel_basis(stacked2)
    rels = [k2.column(j)[: g_mat.cols] for j in range(k2.cols)]
    return FgAbelianGroup(g_mat.cols, IntMatrix.from_columns(rels, rows=g_mat.cols))


def is_bijective(h: GroupHom) -> bool:
    return (
        invariant_factors(hom_cokernel(h)).is_trivial()
        and invariant_factors(hom_kernel(h)).is_trivial()
    )
