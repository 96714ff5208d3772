"""Dense GF(2) linear algebra on bit-packed rows.

A :class:`BitMatrix` stores each row as a Python ``int`` whose bit ``j`` is the
entry in column ``j``.  Columns are capped at 64 so that every row (and, after
reduction, every column) fits in one machine word; the search kernels rely on
that.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

MAX_COLS = 64
MAX_SPAN_DIM = 25


class CapacityError(ValueError):
    """Input exceeds a documented size guard."""


class PreconditionError(ValueError):
    """Operation called outside its precondition."""


def popcount(x: int) -> int:
    return bin(x).count("1")


def bits_of(x: int) -> list[int]:
    """Indices of the set bits of ``x`` in increasing order."""
    out = []
    while x:
        low = x & -x
        out.append(low.bit_length() - 1)
        x ^= low
    return out


@dataclass(frozen=True)
class BitMatrix:
    rows: int
    cols: int
    data: tuple[int, ...]

    def __post_init__(self):
        if self.cols > MAX_COLS:
            raise CapacityError(f"{self.cols} columns exceeds the {MAX_COLS}-column limit")
        if self.rows < 0 or self.cols < 0 or len(self.data) != self.rows:
            raise ValueError("row data does not match the declared shape")
        limit = 1 << self.cols
        for r in self.data:
            if r < 0 or r >= limit:
                raise ValueError("row has bits outside the column range")

    @classmethod
    def zeros(cls, rows: int, cols: int) -> BitMatrix:
        return cls(rows, cols, (0,) * rows)

    @classmethod
    def identity(cls, n: int) -> BitMatrix:
        return cls(n, n, tuple(1 << i for i in range(n)))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> BitMatrix:
        """Build from a nested list of 0/1 entries."""
        if cols is None:
            cols = len(rows[0]) if rows else 0
        data = []
        for row in rows:
            if len(row) != cols:
                raise ValueError("ragged rows")
            word = 0
            for j, v in enumerate(row):
                if v not in (0, 1):
                    raise ValueError(f"entry {v!r} is not 0 or 1")
                if v:
                    word |= 1 << j
            data.append(word)
        return cls(len(data), cols, tuple(data))

    @classmethod
    def from_strings(cls, lines: Sequence[str]) -> BitMatrix:
        return cls.from_rows([[int(ch) for ch in line] for line in lines],
                             cols=len(lines[0]) if lines else 0)

    @classmethod
    def from_columns(cls, columns: Sequence[int], rows: int) -> BitMatrix:
        """Build from column words (bit ``i`` of a column is its row-``i`` entry)."""
        data = [0] * rows
        for j, c in enumerate(columns):
            if c >> rows:
                raise ValueError("column has bits beyond the row count")
            for i in bits_of(c):
                data[i] |= 1 << j
        return cls(rows, len(columns), tuple(data))

    @classmethod
    def from_numpy(cls, arr) -> BitMatrix:
        a = np.asarray(arr)
        if a.ndim != 2:
            raise ValueError("expected a 2-d array")
        return cls.from_rows(a.astype(int).tolist(), cols=a.shape[1])

    def _check(self, i: int, j: int) -> None:
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"entry ({i}, {j}) outside a {self.rows}x{self.cols} matrix")

    def get(self, i: int, j: int) -> int:
        self._check(i, j)
        return (self.data[i] >> j) & 1

    def __getitem__(self, ij: tuple[int, int]) -> int:
        return self.get(*ij)

    def column(self, j: int) -> int:
        if not 0 <= j < self.cols:
            raise IndexError(f"column {j} outside [0, {self.cols})")
        c = 0
        for i, r in enumerate(self.data):
            if (r >> j) & 1:
                c |= 1 << i
        return c

    def columns(self) -> tuple[int, ...]:
        cols = [0] * self.cols
        for i, r in enumerate(self.data):
            for j in bits_of(r):
                cols[j] |= 1 << i
        return tuple(cols)

    def select_columns(self, sel: Sequence[int]) -> BitMatrix:
        sel = check_selection(self, sel)
        data = []
        for r in self.data:
            w = 0
            for k, j in enumerate(sel):
                if (r >> j) & 1:
                    w |= 1 << k
            data.append(w)
        return BitMatrix(self.rows, len(sel), tuple(data))

    def transpose(self) -> BitMatrix:
        return BitMatrix(self.cols, self.rows, self.columns())

    def hstack(self, other: BitMatrix) -> BitMatrix:
        if other.rows != self.rows:
            raise ValueError("row counts differ")
        return BitMatrix(self.rows, self.cols + other.cols,
                         tuple(a | (b << self.cols) for a, b in zip(self.data, other.data)))

    def to_numpy(self) -> np.ndarray:
        out = np.zeros((self.rows, self.cols), dtype=np.uint8)
        for i, r in enumerate(self.data):
            for j in bits_of(r):
                out[i, j] = 1
        return out

    def to_strings(self) -> list[str]:
        return ["".join("1" if (r >> j) & 1 else "0" for j in range(self.cols)) for r in self.data]

    def __str__(self) -> str:
        return "\n".join(self.to_strings())


def check_selection(m: BitMatrix, sel: Iterable[int]) -> tuple[int, ...]:
    sel = tuple(sel)
    for j in sel:
        if not 0 <= j < m.cols:
            raise IndexError(f"column {j} outside [0, {m.cols})")
    if len(set(sel)) != len(sel):
        raise ValueError("duplicate column in selection")
    return sel


class XorBasis:
    """Incremental echelon basis keyed by leading bit.

    Vectors are reduced against the stored basis without back-substitution,
    so the most recent insertion can always be undone with :meth:`pop`.
    """

    __slots__ = ("lead", "order")

    def __init__(self):
        self.lead: dict[int, int] = {}
        self.order: list[int] = []

    def __len__(self) -> int:
        return len(self.order)

    def reduce(self, v: int) -> int:
        lead = self.lead
        while v:
            top = v.bit_length() - 1
            b = lead.get(top)
            if b is None:
                return v
            v ^= b
        return 0

    def add(self, v: int) -> bool:
        """Insert ``v``; return True iff it was independent of the basis."""
        v = self.reduce(v)
        if not v:
            return False
        top = v.bit_length() - 1
        self.lead[top] = v
        self.order.append(top)
        return True

    def pop(self) -> None:
        del self.lead[self.order.pop()]

    def contains(self, v: int) -> bool:
        return self.reduce(v) == 0

    def copy(self) -> XorBasis:
        b = XorBasis()
        b.lead = dict(self.lead)
        b.order = list(self.order)
        return b


def rank_of_vectors(vectors: Iterable[int]) -> int:
    basis = XorBasis()
    for v in vectors:
        basis.add(v)
    return len(basis)


def rank_of_columns(m: BitMatrix, sel: Iterable[int] | None = None) -> int:
    """GF(2) rank of the selected columns (all columns when ``sel`` is None)."""
    cols = m.columns()
    if sel is None:
        return rank_of_vectors(cols)
    return rank_of_vectors(cols[j] for j in check_selection(m, sel))


def rref(m: BitMatrix) -> tuple[BitMatrix, tuple[int, ...]]:
    """Reduced row echelon form, pivots chosen greedily left to right.

    Returns the reduced matrix (same shape, zero rows last) and the pivot
    columns, which form the lexicographically first basis of the column space.
    """
    rows = list(m.data)
    pivots = []
    r = 0
    for j in range(m.cols):
        bit = 1 << j
        p = next((i for i in range(r, len(rows)) if rows[i] & bit), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i] & bit:
                rows[i] ^= rows[r]
        pivots.append(j)
        r += 1
        if r == len(rows):
            break
    return BitMatrix(m.rows, m.cols, tuple(rows)), tuple(pivots)


def row_space_basis(m: BitMatrix) -> BitMatrix:
    """RREF with the zero rows dropped; a canonical form of the row space."""
    red, piv = rref(m)
    return BitMatrix(len(piv), m.cols, red.data[:len(piv)])


def standard_form(m: BitMatrix) -> tuple[BitMatrix, tuple[int, ...], tuple[int, ...]]:
    """Permuted reduced form ``[I | D]`` over the lexicographically first basis.

    Returns ``(reduced, basis_columns, permutation)`` where output column ``j``
    of ``reduced`` is input column ``permutation[j]``.  Zero rows stay at the
    bottom, so ``reduced`` has the shape of ``m``.
    """
    red, piv = rref(m)
    rest = [j for j in range(m.cols) if j not in set(piv)]
    perm = tuple(piv) + tuple(rest)
    return red.select_columns(perm), piv, perm


def null_space(m: BitMatrix) -> BitMatrix:
    """Basis of the right null space, one basis vector per row."""
    red, piv = rref(m)
    pivset = set(piv)
    out = []
    for f in range(m.cols):
        if f in pivset:
            continue
        v = 1 << f
        for i, p in enumerate(piv):
            if (red.data[i] >> f) & 1:
                v |= 1 << p
        out.append(v)
    return BitMatrix(len(out), m.cols, tuple(out))


def pivot_contract(m: BitMatrix, col: int) -> BitMatrix:
    """Pivot on the first 1 of column ``col`` and drop that row and column."""
    if not 0 <= col < m.cols:
        raise IndexError(f"column {col} outside [0, {m.cols})")
    bit = 1 << col
    p = next((i for i, r in enumerate(m.data) if r & bit), None)
    if p is None:
        raise PreconditionError(f"column {col} is zero (a loop); delete it instead")
    prow = m.data[p]
    low = bit - 1
    out = []
    for i, r in enumerate(m.data):
        if i == p:
            continue
        if r & bit:
            r ^= prow
        out.append((r & low) | ((r >> (col + 1)) << col))
    return BitMatrix(m.rows - 1, m.cols - 1, tuple(out))


def span_vectors(generators: Sequence[int]) -> np.ndarray:
    """Every vector of the span of independent ``generators`` as uint64 words."""
    vecs = np.zeros(1, dtype=np.uint64)
    for g in generators:
        vecs = np.concatenate([vecs, vecs ^ np.uint64(g)])
    return vecs


def batch_rank(columns: Sequence[int], masks: np.ndarray, chunk: int = 1 << 16) -> np.ndarray:
    """Rank of the column subset named by each mask, vectorised over masks.

    Plain Gaussian elimination on a (masks x columns) table, independent of the
    incremental bases used by the search code.  ``columns`` must be words of
    at most 64 bits.
    """
    cols = np.asarray(columns, dtype=np.uint64)
    masks = np.asarray(masks, dtype=np.uint64)
    n = len(cols)
    out = np.zeros(len(masks), dtype=np.int64)
    if n == 0 or len(masks) == 0:
        return out
    nbits = int(max(int(c) for c in cols).bit_length()) if n else 0
    shifts = np.arange(n, dtype=np.uint64)
    for start in range(0, len(masks), chunk):
        mk = masks[start:start + chunk]
        sel = ((mk[:, None] >> shifts[None, :]) & np.uint64(1)).astype(bool)
        table = np.where(sel, cols[None, :], np.uint64(0))
        rank = np.zeros(len(mk), dtype=np.int64)
        idx = np.arange(len(mk))
        for b in range(nbits):
            has = ((table >> np.uint64(b)) & np.uint64(1)).astype(bool)
            exists = has.any(axis=1)
            piv = table[idx, has.argmax(axis=1)]
            table ^= np.where(has & exists[:, None], piv[:, None], np.uint64(0))
            rank += exists
        out[start:start + chunk] = rank
    return out


def _popcount64(a: np.ndarray) -> np.ndarray:
    return np.bitwise_count(a.astype(np.uint64)).astype(np.int64)


def minimal_supports(generators: BitMatrix, max_weight: int | None = None) -> list[frozenset[int]]:
    """Minimal supports among the nonzero vectors spanned by the rows of ``generators``.

    A vector with support ``S`` is minimal exactly when the generator columns
    outside ``S`` have rank one less than the span, which lets every vector be
    tested on its own.  Output is sorted lexicographically by column index.
    """
    basis = row_space_basis(generators)
    k = basis.rows
    if k > MAX_SPAN_DIM:
        raise CapacityError(f"span dimension {k} exceeds the guard of {MAX_SPAN_DIM}")
    if k == 0:
        return []
    vecs = span_vectors(basis.data)[1:]
    if max_weight is not None:
        vecs = vecs[_popcount64(vecs) <= max_weight]
    if len(vecs) == 0:
        return []
    full = np.uint64((1 << generators.cols) - 1)
    ranks = batch_rank(basis.columns(), (~vecs) & full)
    keep = vecs[ranks == k - 1]
    supports = [tuple(bits_of(int(v))) for v in keep]
    supports.sort()
    return [frozenset(s) for s in supports]
