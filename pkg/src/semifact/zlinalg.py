"""Exact integer linear algebra.

Everything here works on Python ints, so nothing overflows or rounds.  The
central routine is :func:`snf`, which records the unimodular transforms so
that Diophantine systems, integer kernels and cokernels can be read off it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DimensionMismatch

INF = math.inf


@dataclass(frozen=True)
class IntMatrix:
    """Dense integer matrix stored row-major."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise DimensionMismatch("negative dimension")
        if len(self.entries) != self.rows * self.cols:
            raise DimensionMismatch(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} "
                f"entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> IntMatrix:
        rows = [list(r) for r in rows]
        if cols is None:
            if not rows:
                raise DimensionMismatch("column count needed for a matrix with no rows")
            cols = len(rows[0])
        for r in rows:
            if len(r) != cols:
                raise DimensionMismatch("ragged rows")
        return cls(len(rows), cols, tuple(int(x) for r in rows for x in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> IntMatrix:
        return cls.from_rows([list(c) for c in columns], cols=rows).T

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def diag(cls, values: Sequence[int]) -> IntMatrix:
        n = len(values)
        return cls(n, n, tuple(values[i] if i == j else 0 for i in range(n) for j in range(n)))

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple[int, ...]:
        return self.entries[j::self.cols] if self.cols else ()

    def tolist(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def T(self) -> IntMatrix:
        return IntMatrix(self.cols, self.rows,
                         tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)))

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self.cols != other.rows:
                raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
            ocols = [other.col(j) for j in range(other.cols)]
            return IntMatrix(self.rows, other.cols, tuple(
                sum(a * b for a, b in zip(self.row(i), c))
                for i in range(self.rows) for c in ocols))
        vec = tuple(other)
        if len(vec) != self.cols:
            raise DimensionMismatch(f"cannot multiply {self.shape} by vector of length {len(vec)}")
        return tuple(sum(a * b for a, b in zip(self.row(i), vec)) for i in range(self.rows))

    def select_rows(self, indices: Iterable[int]) -> IntMatrix:
        picked = [self.row(i) for i in indices]
        return IntMatrix.from_rows(picked, cols=self.cols)

    def select_cols(self, indices: Iterable[int]) -> IntMatrix:
        indices = list(indices)
        return IntMatrix.from_rows([[self[i, j] for j in indices] for i in range(self.rows)],
                                   cols=len(indices))

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise DimensionMismatch("determinant of a non-square matrix")
        return bareiss_det(self.tolist())

    def to_text(self) -> str:
        lines = [f"{self.rows} {self.cols}"]
        lines += [" ".join(str(x) for x in self.row(i)) for i in range(self.rows)]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> IntMatrix:
        """Parse ``rows cols`` followed by row-major integers; ``#`` starts a comment."""
        tokens = []
        for line in text.splitlines():
            tokens += line.split("#", 1)[0].split()
        if len(tokens) < 2:
            raise ValueError("matrix text needs a 'rows cols' header")
        try:
            values = [int(t) for t in tokens]
        except ValueError as exc:
            raise ValueError(f"non-integer token in matrix text: {exc}") from None
        rows, cols = values[0], values[1]
        return cls(rows, cols, tuple(values[2:]))


def bareiss_det(a: list[list[int]]) -> int:
    n = len(a)
    if n == 0:
        return 1
    m = [list(r) for r in a]
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * pivot - m[i][k] * m[k][j]) // prev
        prev = pivot
    return sign * m[n - 1][n - 1]


@dataclass(frozen=True)
class SnfDecomposition:
    """``a @ m @ b == d`` with ``a``, ``b`` unimodular and ``d`` diagonal."""

    a: IntMatrix
    d: IntMatrix
    b: IntMatrix
    diagonal: tuple[int, ...]

    @property
    def rank(self) -> int:
        return sum(1 for x in self.diagonal if x)

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        return tuple(x for x in self.diagonal if x)


def _smith_in_place(work: list[list[int]], left: list[list[int]] | None,
                    right_t: list[list[int]] | None) -> None:
    """Diagonalize ``work`` in place; mirror the operations on the transforms if given.

    Row/column gcd elimination, always pivoting on the entry of smallest
    absolute value in the remaining block.  ``right_t`` is the transposed
    right transform, so column operations become row operations on it.
    """
    nr = len(work)
    nc = len(work[0]) if nr else 0
    track = left is not None

    def swap_rows(i, j):
        work[i], work[j] = work[j], work[i]
        if track:
            left[i], left[j] = left[j], left[i]

    def swap_cols(i, j):
        for r in work:
            r[i], r[j] = r[j], r[i]
        if track:
            right_t[i], right_t[j] = right_t[j], right_t[i]

    def add_row(dst, src, q):
        # row[dst] += q * row[src]
        rs, rd = work[src], work[dst]
        for k in range(nc):
            if rs[k]:
                rd[k] += q * rs[k]
        if track:
            ls, ld = left[src], left[dst]
            for k in range(nr):
                if ls[k]:
                    ld[k] += q * ls[k]

    def add_col(dst, src, q):
        for r in work:
            if r[src]:
                r[dst] += q * r[src]
        if track:
            rs, rd = right_t[src], right_t[dst]
            for k in range(nc):
                if rs[k]:
                    rd[k] += q * rs[k]

    t = 0
    while t < min(nr, nc):
        best = None
        for i in range(t, nr):
            row = work[i]
            for j in range(t, nc):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, pi, pj = best
        if pi != t:
            swap_rows(pi, t)
        if pj != t:
            swap_cols(pj, t)

        while True:
            p = work[t][t]
            dirty = False
            for i in range(t + 1, nr):
                x = work[i][t]
                if x:
                    add_row(i, t, -(x // p))
                    if work[i][t]:
                        dirty = True
            for j in range(t + 1, nc):
                x = work[t][j]
                if x:
                    add_col(j, t, -(x // p))
                    if work[t][j]:
                        dirty = True
            if dirty:
                # a remainder smaller than the pivot survived: move it to (t, t)
                cand = [(abs(work[i][t]), i, t) for i in range(t + 1, nr) if work[i][t]]
                cand += [(abs(work[t][j]), t, j) for j in range(t + 1, nc) if work[t][j]]
                _, i, j = min(cand)
                if i != t:
                    swap_rows(i, t)
                if j != t:
                    swap_cols(j, t)
                continue
            if p in (1, -1):
                break
            bad = next(((i, j) for i in range(t + 1, nr) for j in range(t + 1, nc)
                        if work[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if work[t][t] < 0:
            work[t] = [-x for x in work[t]]
            if track:
                left[t] = [-x for x in left[t]]
        t += 1


def _identity_rows(n: int) -> list[list[int]]:
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        rows[i][i] = 1
    return rows


def _flat(rows: list[list[int]]) -> tuple[int, ...]:
    return tuple(x for r in rows for x in r)


def snf(m: IntMatrix) -> SnfDecomposition:
    """Smith normal form with recorded transforms.

    Diagonal entries come out non-negative with ``d[i] | d[i+1]``; trailing
    zeros are kept so the diagonal has ``min(rows, cols)`` entries.
    """
    nr, nc = m.rows, m.cols
    work = m.tolist()
    left = _identity_rows(nr)
    right_t = _identity_rows(nc)
    if nr and nc:
        _smith_in_place(work, left, right_t)
    diagonal = tuple(work[i][i] for i in range(min(nr, nc)))
    d = IntMatrix(nr, nc, _flat(work))
    a = IntMatrix(nr, nr, _flat(left))
    b = IntMatrix(nc, nc, _flat(right_t)).T
    return SnfDecomposition(a=a, d=d, b=b, diagonal=diagonal)


def smith_diagonal(m: IntMatrix) -> tuple[int, ...]:
    """The Smith diagonal of ``m`` alone, skipping the transforms."""
    work = m.tolist()
    if m.rows and m.cols:
        _smith_in_place(work, None, None)
    return tuple(work[i][i] for i in range(min(m.rows, m.cols)))


def rank(m: IntMatrix) -> int:
    return snf(m).rank


def solve_with(dec: SnfDecomposition, rhs: Sequence[int]) -> tuple[int, ...] | None:
    """Solve ``m @ x == rhs`` given a precomputed decomposition of ``m``.

    Returns ``None`` when no integer solution exists.
    """
    a, b = dec.a, dec.b
    if len(rhs) != a.cols:
        raise DimensionMismatch(f"right-hand side has length {len(rhs)}, expected {a.cols}")
    c = a @ rhs
    y = [0] * b.rows
    for i, ci in enumerate(c):
        di = dec.diagonal[i] if i < len(dec.diagonal) else 0
        if di == 0:
            if ci != 0:
                return None
        else:
            q, r = divmod(ci, di)
            if r:
                return None
            y[i] = q
    return b @ y


def solve_diophantine(m: IntMatrix, rhs: Sequence[int]) -> tuple[int, ...] | None:
    """Some integer ``x`` with ``m @ x == rhs``, or ``None`` if there is none."""
    if len(rhs) != m.rows:
        raise DimensionMismatch(f"right-hand side has length {len(rhs)}, expected {m.rows}")
    return solve_with(snf(m), list(rhs))


def kernel_basis(m: IntMatrix) -> list[tuple[int, ...]]:
    """A Z-basis of ``{x : m @ x == 0}``: the trailing columns of the right transform."""
    dec = snf(m)
    r = dec.rank
    return [dec.b.col(j) for j in range(r, m.cols)]


def hermite_rows(vectors: Iterable[Sequence[int]], dim: int) -> list[tuple[int, ...]]:
    """Row-style Hermite normal form of the lattice spanned by ``vectors``.

    Zero rows are dropped, pivots are positive and entries above each pivot
    are reduced into ``[0, pivot)``.  The result is a basis of the span.
    """
    rows = [list(v) for v in vectors if any(v)]
    for v in rows:
        if len(v) != dim:
            raise DimensionMismatch(f"vector of length {len(v)} in ambient dimension {dim}")
    basis: list[list[int]] = []
    col = 0
    while rows and col < dim:
        live = [r for r in rows if r[col]]
        rest = [r for r in rows if not r[col]]
        if not live:
            col += 1
            continue
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[col]))
            piv = live[0]
            nxt = [piv]
            for r in live[1:]:
                q = r[col] // piv[col]
                r = [x - q * y for x, y in zip(r, piv)]
                if r[col]:
                    nxt.append(r)
                elif any(r):
                    rest.append(r)
            live = nxt
        piv = live[0]
        if piv[col] < 0:
            piv = [-x for x in piv]
        basis.append(piv)
        rows = rest
        col += 1
    for i, piv in enumerate(basis):
        pc = next(j for j, x in enumerate(piv) if x)
        for k in range(i):
            q = basis[k][pc] // piv[pc]
            if q:
                basis[k] = [x - q * y for x, y in zip(basis[k], piv)]
    return [tuple(r) for r in basis]


@dataclass(frozen=True)
class LatticeBasis:
    """Basis vectors of a sublattice of Z^dim, stored as the rows of ``basis``."""

    dim: int
    basis: IntMatrix

    @classmethod
    def from_generators(cls, vectors: Iterable[Sequence[int]], dim: int) -> LatticeBasis:
        rows = hermite_rows(vectors, dim)
        return cls(dim, IntMatrix.from_rows(rows, cols=dim))

    @property
    def rank(self) -> int:
        return self.basis.rows

    @property
    def vectors(self) -> list[tuple[int, ...]]:
        return [self.basis.row(i) for i in range(self.basis.rows)]

    def coordinates(self, vec: Sequence[int]) -> tuple[int, ...] | None:
        """Integer coordinates of ``vec`` in this basis, or ``None`` if outside."""
        if len(vec) != self.dim:
            raise DimensionMismatch(f"vector of length {len(vec)} in ambient dimension {self.dim}")
        if self.rank == 0:
            return () if not any(vec) else None
        return solve_diophantine(self.basis.T, list(vec))

    def __contains__(self, vec: Sequence[int]) -> bool:
        return self.coordinates(vec) is not None


def image_lattice(m: IntMatrix) -> LatticeBasis:
    """Basis of the lattice spanned by the columns of ``m``."""
    return LatticeBasis.from_generators((m.col(j) for j in range(m.cols)), m.rows)


def congruence_lattice(constraints: Iterable[tuple[Sequence[int], int | float]],
                       dim: int) -> LatticeBasis:
    """Basis of ``{x in Z^dim : row.x = 0 mod m}`` for each ``(row, m)``.

    A modulus of ``INF`` means the exact equation ``row.x = 0``.  Finite
    constraints get a slack variable ``k`` with ``row.x - m*k = 0``; the
    integer kernel of that block system is projected onto ``x``.
    """
    finite, exact = [], []
    for row, mod in constraints:
        row = [int(x) for x in row]
        if len(row) != dim:
            raise DimensionMismatch(f"constraint of length {len(row)} in dimension {dim}")
        if mod == INF:
            exact.append(row)
        elif isinstance(mod, int) and mod >= 1:
            if mod != 1:
                finite.append((row, mod))
        else:
            raise ValueError(f"modulus must be a positive integer or INF, got {mod!r}")
    if not finite and not exact:
        return LatticeBasis(dim, IntMatrix.identity(dim))
    width = dim + len(finite)
    block = []
    for k, (row, mod) in enumerate(finite):
        slack = [0] * len(finite)
        slack[k] = -mod
        block.append(row + slack)
    for row in exact:
        block.append(row + [0] * len(finite))
    kernel = kernel_basis(IntMatrix.from_rows(block, cols=width))
    return LatticeBasis.from_generators((v[:dim] for v in kernel), dim)


def coker_invariants(m: IntMatrix) -> tuple[int, list[int]]:
    """``(free rank, torsion factors > 1)`` of ``Z^rows / column span of m``."""
    dec = snf(m)
    return m.rows - dec.rank, [x for x in dec.diagonal if x > 1]
