"""Binary matroids over a labeled GF(2) representation.

Element sets are handled as ``frozenset`` of labels on the public surface and
as column bitmasks internally (ground sets never exceed 64 elements).
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .gf2core import (
    MAX_SPAN_DIM,
    BitMatrix,
    CapacityError,
    PreconditionError,
    XorBasis,
    bits_of,
    minimal_supports,
    null_space,
    pivot_contract,
    popcount,
    rank_of_vectors,
    row_space_basis,
    rref,
)

ElementSet = frozenset  # frozenset[str]

# Largest null-space dimension enumerated in full; beyond it circuits come from
# a bounded-size search.
CIRCUIT_SPAN_LIMIT = 20
ISO_LIMIT = 15


class UnknownElementError(KeyError):
    pass


@dataclass(frozen=True, eq=False)
class BinaryMatroid:
    matrix: BitMatrix
    labels: tuple[str, ...]
    cached_rank: int = field(init=False)

    def __post_init__(self):
        labels = tuple(str(x) for x in self.labels)
        object.__setattr__(self, "labels", labels)
        if len(labels) != self.matrix.cols:
            raise ValueError(f"{len(labels)} labels for {self.matrix.cols} columns")
        if len(set(labels)) != len(labels):
            raise ValueError("labels must be distinct")
        for lab in labels:
            if not lab or any(ch.isspace() for ch in lab) or "," in lab:
                raise ValueError(f"label {lab!r} must be a nonempty token without spaces or commas")
        object.__setattr__(self, "cached_rank", rank_of_vectors(self.cols))

    @classmethod
    def from_matrix(cls, matrix: BitMatrix, labels: Sequence[str] | None = None) -> BinaryMatroid:
        if labels is None:
            labels = [f"e{i}" for i in range(matrix.cols)]
        return cls(matrix, tuple(labels))

    @cached_property
    def cols(self) -> tuple[int, ...]:
        return self.matrix.columns()

    @cached_property
    def index(self) -> dict[str, int]:
        return {lab: i for i, lab in enumerate(self.labels)}

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def full_mask(self) -> int:
        return (1 << self.size) - 1

    @property
    def ground_set(self) -> frozenset[str]:
        return frozenset(self.labels)

    def __len__(self) -> int:
        return self.size

    def __eq__(self, other):
        if not isinstance(other, BinaryMatroid):
            return NotImplemented
        return self.labels == other.labels and self.matrix == other.matrix

    def __hash__(self):
        return hash((self.labels, self.matrix))

    def __repr__(self):
        return f"BinaryMatroid(|E|={self.size}, rank={self.cached_rank})"

    def mask(self, X: Iterable[str] | str) -> int:
        """Column bitmask of a set of labels."""
        if isinstance(X, str):
            X = (X,)
        m = 0
        idx = self.index
        for x in X:
            try:
                m |= 1 << idx[x]
            except KeyError:
                raise UnknownElementError(f"unknown element {x!r}") from None
        return m

    def labels_of(self, mask: int) -> frozenset[str]:
        return frozenset(self.labels[i] for i in bits_of(mask))

    def sorted_labels(self, X: Iterable[str]) -> list[str]:
        """Labels ordered by column index."""
        return [self.labels[i] for i in bits_of(self.mask(X))]

    def rank_mask(self, mask: int) -> int:
        cols = self.cols
        return rank_of_vectors(cols[i] for i in bits_of(mask))

    def span_basis(self, mask: int) -> XorBasis:
        b = XorBasis()
        for i in bits_of(mask):
            b.add(self.cols[i])
        return b


def same_matroid(m1: BinaryMatroid, m2: BinaryMatroid) -> bool:
    """Equal labels in equal order with equal row spaces (binary matroids are
    uniquely representable, so this is equality of rank functions)."""
    if m1.labels != m2.labels:
        return False
    return row_space_basis(m1.matrix) == row_space_basis(m2.matrix)


def canonical(M: BinaryMatroid) -> BinaryMatroid:
    """The representation by the RREF of its row space, zero rows removed."""
    return BinaryMatroid(row_space_basis(M.matrix), M.labels)


def relabel(M: BinaryMatroid, mapping: Mapping[str, str]) -> BinaryMatroid:
    return BinaryMatroid(M.matrix, tuple(mapping.get(x, x) for x in M.labels))


def permute(M: BinaryMatroid, order: Sequence[str]) -> BinaryMatroid:
    """Same matroid with columns reordered to ``order``."""
    idx = [M.index[x] for x in order]
    if sorted(idx) != list(range(M.size)):
        raise ValueError("order must list every element once")
    return BinaryMatroid(M.matrix.select_columns(idx), tuple(order))


# -- rank function ---------------------------------------------------------

def rank(M: BinaryMatroid, X: Iterable[str] = None) -> int:
    if X is None:
        return M.cached_rank
    return M.rank_mask(M.mask(X))


def corank_mask(M: BinaryMatroid, mask: int) -> int:
    return popcount(mask) + M.rank_mask(M.full_mask & ~mask) - M.cached_rank


def corank(M: BinaryMatroid, X: Iterable[str]) -> int:
    """Rank of ``X`` in the dual, via ``|X| + r(E - X) - r(M)``."""
    return corank_mask(M, M.mask(X))


def closure_mask(M: BinaryMatroid, mask: int) -> int:
    span = M.span_basis(mask)
    out = mask
    for i, c in enumerate(M.cols):
        if span.contains(c):
            out |= 1 << i
    return out


def coclosure_mask(M: BinaryMatroid, mask: int) -> int:
    # e is in cl*(X) iff e is a coloop of M restricted to E - X
    rest = M.full_mask & ~mask
    base = M.rank_mask(rest)
    out = mask
    for i in bits_of(rest):
        if M.rank_mask(rest & ~(1 << i)) < base:
            out |= 1 << i
    return out


def full_closure_mask(M: BinaryMatroid, mask: int) -> int:
    while True:
        nxt = coclosure_mask(M, closure_mask(M, mask))
        if nxt == mask:
            return mask
        mask = nxt


def closure(M: BinaryMatroid, X: Iterable[str]) -> frozenset[str]:
    return M.labels_of(closure_mask(M, M.mask(X)))


def coclosure(M: BinaryMatroid, X: Iterable[str]) -> frozenset[str]:
    return M.labels_of(coclosure_mask(M, M.mask(X)))


def full_closure(M: BinaryMatroid, X: Iterable[str]) -> frozenset[str]:
    """Least set containing ``X`` that is closed in both ``M`` and its dual."""
    return M.labels_of(full_closure_mask(M, M.mask(X)))


# -- minors ----------------------------------------------------------------

def delete(M: BinaryMatroid, D: Iterable[str]) -> BinaryMatroid:
    dmask = M.mask(D)
    keep = [i for i in range(M.size) if not (dmask >> i) & 1]
    return BinaryMatroid(M.matrix.select_columns(keep), tuple(M.labels[i] for i in keep))


def restrict(M: BinaryMatroid, R: Iterable[str]) -> BinaryMatroid:
    rmask = M.mask(R)
    return delete(M, M.labels_of(M.full_mask & ~rmask))


def contract(M: BinaryMatroid, C: Iterable[str]) -> BinaryMatroid:
    """Contract ``C``: pivot out each non-loop, delete what has become a loop."""
    C = M.sorted_labels(C)
    mat, labels = M.matrix, list(M.labels)
    for x in C:
        j = labels.index(x)
        if mat.column(j) == 0:
            keep = [i for i in range(len(labels)) if i != j]
            mat = mat.select_columns(keep)
        else:
            mat = pivot_contract(mat, j)
        labels.pop(j)
    return BinaryMatroid(mat, tuple(labels))


@dataclass(frozen=True)
class SimplificationTrace:
    kept: frozenset[str]
    removed_loops: frozenset[str]
    representative: Mapping[str, str]


def loops(M: BinaryMatroid) -> frozenset[str]:
    return frozenset(M.labels[i] for i, c in enumerate(M.cols) if c == 0)


def parallel_classes(M: BinaryMatroid) -> list[frozenset[str]]:
    """Classes of equal nonzero columns, ordered by least member."""
    groups: dict[int, list[int]] = {}
    for i, c in enumerate(M.cols):
        if c:
            groups.setdefault(c, []).append(i)
    classes = sorted(groups.values())
    return [frozenset(M.labels[i] for i in g) for g in classes]


def simplify(M: BinaryMatroid) -> tuple[BinaryMatroid, SimplificationTrace]:
    """Delete loops and all but the least-indexed member of each parallel class."""
    first: dict[int, int] = {}
    rep: dict[str, str] = {}
    lp = []
    for i, c in enumerate(M.cols):
        if c == 0:
            lp.append(M.labels[i])
        elif c in first:
            rep[M.labels[i]] = M.labels[first[c]]
        else:
            first[c] = i
    kept = [M.labels[i] for i in sorted(first.values())]
    trace = SimplificationTrace(frozenset(kept), frozenset(lp), rep)
    if not lp and not rep:
        return M, trace
    return restrict(M, kept), trace


def si_contract(M: BinaryMatroid, e: str) -> tuple[BinaryMatroid, SimplificationTrace]:
    """``si(M/e)`` together with its simplification trace."""
    M.mask(e)  # unknown label check
    if M.cols[M.index[e]] == 0:
        raise PreconditionError(f"{e!r} is a loop")
    return simplify(contract(M, [e]))


def dual(M: BinaryMatroid) -> BinaryMatroid:
    """Dual from the standard form over the lexicographically first basis.

    For ``[I | D]`` on basis ``B`` the dual is ``[D^T | I]``; the columns are
    written back in the original label order.
    """
    red, piv = rref(M.matrix)
    pos = {p: k for k, p in enumerate(piv)}
    nonbasis = [j for j in range(M.size) if j not in pos]
    cols = []
    for j in range(M.size):
        if j in pos:
            row = red.data[pos[j]]
            v = 0
            for t, f in enumerate(nonbasis):
                if (row >> f) & 1:
                    v |= 1 << t
            cols.append(v)
        else:
            cols.append(1 << nonbasis.index(j))
    return BinaryMatroid(BitMatrix.from_columns(cols, len(nonbasis)), M.labels)


# -- circuit families --------------------------------------------------------

def _sort_masks(masks: Iterable[int]) -> list[int]:
    return sorted(set(masks), key=lambda m: tuple(bits_of(m)))


def cocircuit_masks(M: BinaryMatroid) -> list[int]:
    if M.cached_rank > MAX_SPAN_DIM:
        raise CapacityError(f"rank {M.cached_rank} exceeds the cocircuit guard")
    return [sum(1 << i for i in s) for s in minimal_supports(M.matrix)]


def _bounded_circuits(M: BinaryMatroid, max_size: int) -> list[int]:
    # Grow independent sets in index order; each basis vector carries the set
    # of elements it is a combination of, so a dependent extension reveals its
    # unique circuit directly.
    out = []
    n, cols = M.size, M.cols

    def grow(lead: dict[int, tuple[int, int]], members: int, size: int, start: int):
        for e in range(start, n):
            v, combo = cols[e], 1 << e
            while v:
                top = v.bit_length() - 1
                if top not in lead:
                    break
                bv, bc = lead[top]
                v ^= bv
                combo ^= bc
            if not v:
                if combo == members | (1 << e):
                    out.append(combo)
            elif size + 1 < max_size:
                top = v.bit_length() - 1
                lead[top] = (v, combo)
                grow(lead, members | (1 << e), size + 1, e + 1)
                del lead[top]

    grow({}, 0, 0, 0)
    return out


def circuit_masks(M: BinaryMatroid, max_size: int | None = None) -> list[int]:
    nullity = M.size - M.cached_rank
    if nullity <= CIRCUIT_SPAN_LIMIT:
        supports = minimal_supports(null_space(M.matrix), max_weight=max_size)
        return _sort_masks(sum(1 << i for i in s) for s in supports)
    if max_size is None:
        raise CapacityError(f"nullity {nullity} too large for a full circuit enumeration; pass max_size")
    return _sort_masks(_bounded_circuits(M, max_size))


def circuits(M: BinaryMatroid, max_size: int | None = None) -> list[frozenset[str]]:
    return [M.labels_of(m) for m in circuit_masks(M, max_size)]


def cocircuits(M: BinaryMatroid) -> list[frozenset[str]]:
    return [M.labels_of(m) for m in cocircuit_masks(M)]


@dataclass(frozen=True)
class TriangleList:
    triangles: tuple[frozenset[str], ...]
    per_element: Mapping[str, tuple[frozenset[str], ...]]
    masks: tuple[int, ...] = ()

    def __len__(self):
        return len(self.triangles)

    def count(self, e: str) -> int:
        return len(self.per_element.get(e, ()))


def triangle_masks(M: BinaryMatroid) -> list[int]:
    by_value: dict[int, list[int]] = defaultdict(list)
    for i, c in enumerate(M.cols):
        if c:
            by_value[c].append(i)
    found = []
    cols = M.cols
    for i in range(M.size):
        ci = cols[i]
        if not ci:
            continue
        for j in range(i + 1, M.size):
            cj = cols[j]
            if not cj or cj == ci:
                continue
            for k in by_value.get(ci ^ cj, ()):
                if k > j:
                    found.append((1 << i) | (1 << j) | (1 << k))
    return _sort_masks(found)


def _triangle_list(M: BinaryMatroid, masks: list[int]) -> TriangleList:
    tris = tuple(M.labels_of(m) for m in masks)
    per: dict[str, list[frozenset[str]]] = {x: [] for x in M.labels}
    for t in tris:
        for x in t:
            per[x].append(t)
    return TriangleList(tris, {x: tuple(v) for x, v in per.items()}, tuple(masks))


def triangles(M: BinaryMatroid) -> TriangleList:
    return _triangle_list(M, triangle_masks(M))


def triads(M: BinaryMatroid) -> TriangleList:
    return _triangle_list(M, triangle_masks(dual(M)))


# -- isomorphism -------------------------------------------------------------

def _coordinates(M: BinaryMatroid, basis: Sequence[int]) -> list[int] | None:
    """Coordinates of every column in the given basis (bit k = basis[k]),
    or None if ``basis`` is dependent."""
    lead: dict[int, tuple[int, int]] = {}
    for k, b in enumerate(basis):
        v, tag = M.cols[b], 1 << k
        while v:
            top = v.bit_length() - 1
            if top not in lead:
                break
            bv, bt = lead[top]
            v ^= bv
            tag ^= bt
        if not v:
            return None
        lead[v.bit_length() - 1] = (v, tag)
    out = []
    for c in M.cols:
        v, tag = c, 0
        while v:
            top = v.bit_length() - 1
            if top not in lead:
                return None
            bv, bt = lead[top]
            v ^= bv
            tag ^= bt
        out.append(tag)
    return out


def _lex_basis(M: BinaryMatroid) -> list[int]:
    b = XorBasis()
    return [i for i, c in enumerate(M.cols) if b.add(c)]


def is_isomorphism(M1: BinaryMatroid, M2: BinaryMatroid, mapping: Mapping[str, str]) -> bool:
    """Does the label bijection ``mapping`` carry the rank function of M1 onto M2?

    A binary matroid is fixed by the coordinates of its elements relative to a
    basis, so it suffices to compare those for one basis and its image.
    """
    if M1.size != M2.size or M1.cached_rank != M2.cached_rank:
        return False
    if set(mapping) != set(M1.labels) or set(mapping.values()) != set(M2.labels):
        return False
    b1 = _lex_basis(M1)
    b2 = [M2.index[mapping[M1.labels[i]]] for i in b1]
    if M2.rank_mask(sum(1 << i for i in b2)) != len(b2):
        return False
    c1 = _coordinates(M1, b1)
    c2 = _coordinates(M2, b2)
    return all(c1[i] == c2[M2.index[mapping[x]]] for i, x in enumerate(M1.labels))


def _element_invariants(M: BinaryMatroid) -> list[tuple[int, int, int]]:
    tri = [0] * M.size
    for t in triangle_masks(M):
        for i in bits_of(t):
            tri[i] += 1
    counts: dict[int, int] = defaultdict(int)
    for c in M.cols:
        counts[c] += 1
    return [(int(c == 0), counts[c] if c else 0, tri[i]) for i, c in enumerate(M.cols)]


def find_isomorphism(M1: BinaryMatroid, M2: BinaryMatroid) -> dict[str, str] | None:
    """Backtracking search for an isomorphism; returns the label bijection.

    Only the images of a fixed basis of M1 are branched on.  After ``k`` basis
    images are fixed, the elements of M1 spanned by the first ``k`` basis
    elements must match, coordinate for coordinate, the elements of M2 spanned
    by the chosen images; candidates are also filtered by loop status,
    parallel-class size and triangle count.
    """
    for M in (M1, M2):
        if M.size > ISO_LIMIT:
            raise CapacityError(f"isomorphism search limited to {ISO_LIMIT} elements")
    if M1.size != M2.size or M1.cached_rank != M2.cached_rank:
        return None
    inv1, inv2 = _element_invariants(M1), _element_invariants(M2)
    if sorted(inv1) != sorted(inv2):
        return None
    b1 = _lex_basis(M1)
    r = len(b1)
    coords1 = _coordinates(M1, b1)

    def signature_1(k: int):
        low = (1 << k) - 1
        return sorted((coords1[i], inv1[i]) for i in range(M1.size) if coords1[i] & ~low == 0)

    sig1 = [signature_1(k) for k in range(r + 1)]

    def flat_signature_2(chosen: list[int]):
        # coordinates of M2 elements lying in the span of the chosen images
        lead: dict[int, tuple[int, int]] = {}
        for k, y in enumerate(chosen):
            v, tag = M2.cols[y], 1 << k
            while v and (v.bit_length() - 1) in lead:
                bv, bt = lead[v.bit_length() - 1]
                v ^= bv
                tag ^= bt
            lead[v.bit_length() - 1] = (v, tag)
        out = []
        for j, c in enumerate(M2.cols):
            v, tag = c, 0
            while v:
                top = v.bit_length() - 1
                if top not in lead:
                    break
                bv, bt = lead[top]
                v ^= bv
                tag ^= bt
            if not v:
                out.append((tag, inv2[j], j))
        return out

    def extend(chosen: list[int], span: XorBasis):
        k = len(chosen)
        if k == r:
            return list(chosen)
        want = inv1[b1[k]]
        for y in range(M2.size):
            if inv2[y] != want or y in chosen or span.contains(M2.cols[y]):
                continue
            chosen.append(y)
            span.add(M2.cols[y])
            sig2 = flat_signature_2(chosen)
            if sorted((t, iv) for t, iv, _ in sig2) == sig1[k + 1]:
                got = extend(chosen, span)
                if got is not None:
                    return got
            span.pop()
            chosen.pop()
        return None

    images = extend([], XorBasis())
    if images is None:
        return None
    coords2 = _coordinates(M2, images)
    pool: dict[tuple[int, tuple], list[int]] = defaultdict(list)
    for j in range(M2.size):
        pool[(coords2[j], inv2[j])].append(j)
    mapping = {}
    for i in range(M1.size):
        j = pool[(coords1[i], inv1[i])].pop(0)
        mapping[M1.labels[i]] = M2.labels[j]
    if not is_isomorphism(M1, M2, mapping):
        raise AssertionError("isomorphism witness failed revalidation")
    return mapping


def is_isomorphic(M1: BinaryMatroid, M2: BinaryMatroid) -> tuple[bool, dict[str, str] | None]:
    m = find_isomorphism(M1, M2)
    return m is not None, m
