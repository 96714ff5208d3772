"""Connectivity function, separation search and internal 4-connectivity."""

from __future__ import annotations

import itertools
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from . import _kernel
from .gf2core import CapacityError, batch_rank, bits_of, popcount, row_space_basis
from .matroid import (
    BinaryMatroid,
    closure_mask,
    coclosure_mask,
    corank_mask,
    dual,
    full_closure_mask,
    triangle_masks,
)

EXHAUSTIVE_LIMIT = 22
SPLIT_DEPTH = 8
QUOTA = 1 << 22


class SearchIndeterminate(RuntimeError):
    """The search budget ran out before a verdict was reached."""

    def __init__(self, msg: str, nodes: int = 0):
        super().__init__(msg)
        self.nodes = nodes


@dataclass(frozen=True)
class SearchBudget:
    strategy: str = "bnb"
    node_limit: int = 10**9
    time_limit: float = 3600.0
    threads: int = 1

    def __post_init__(self):
        if self.strategy not in ("bnb", "exhaustive"):
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.node_limit <= 0 or self.time_limit <= 0 or self.threads <= 0:
            raise ValueError("budget limits must be positive")


DEFAULT_BUDGET = SearchBudget()


@dataclass(frozen=True)
class SeparationWitness:
    side_x: frozenset[str]
    lam: int
    kind: str
    sizes: tuple[int, int]
    k: int | None = None
    nodes: int = field(default=0, compare=False)

    def revalidate(self, M: BinaryMatroid) -> bool:
        mask = M.mask(self.side_x)
        if lambda_mask(M, mask) != self.lam:
            return False
        if self.sizes != (popcount(mask), M.size - popcount(mask)):
            return False
        if self.kind in ("violator-4-3", "fan-4"):
            return self.lam <= 2 and min(self.sizes) >= 4
        if self.kind == "separation" and self.k is not None:
            return self.lam <= self.k - 1 and min(self.sizes) >= 1
        return True

    def to_dict(self, M: BinaryMatroid | None = None) -> dict:
        side = M.sorted_labels(self.side_x) if M is not None else sorted(self.side_x)
        return {"kind": self.kind, "k": self.k, "lambda": self.lam,
                "sizes": list(self.sizes), "side_x": side}


# -- connectivity function ---------------------------------------------------

def lambda_mask(M: BinaryMatroid, mask: int) -> int:
    return M.rank_mask(mask) + M.rank_mask(M.full_mask & ~mask) - M.cached_rank


def lambda_(M: BinaryMatroid, X: Iterable[str], verify: bool = False) -> int:
    """``r(X) + r(E - X) - r(M)``; with ``verify`` also checks ``r(X) + r*(X) - |X|``."""
    mask = M.mask(X)
    lam = lambda_mask(M, mask)
    if verify:
        other = M.rank_mask(mask) + corank_mask(M, mask) - popcount(mask)
        if other != lam:
            raise AssertionError(f"connectivity formulas disagree: {lam} != {other}")
    return lam


def is_k_separating(M: BinaryMatroid, X: Iterable[str], k: int) -> bool:
    if k < 1:
        raise ValueError("k must be positive")
    return lambda_(M, X) <= k - 1


def is_k_separation(M: BinaryMatroid, X: Iterable[str], k: int) -> bool:
    mask = M.mask(X)
    size = popcount(mask)
    return is_k_separating(M, X, k) and size >= k and M.size - size >= k


# -- search engines ------------------------------------------------------------

def search_order(M: BinaryMatroid) -> list[int]:
    """Elements by descending triangle count, ties by index."""
    tri = [0] * M.size
    for t in triangle_masks(M):
        for i in bits_of(t):
            tri[i] += 1
    return sorted(range(M.size), key=lambda i: (-tri[i], i))


def _exhaustive(M: BinaryMatroid, bound: int, min_x: int, min_y: int,
                budget: SearchBudget) -> int | None:
    """Scan every subset; among qualifying ones return the lexicographically
    least with the smallest connectivity."""
    n = M.size
    if n > EXHAUSTIVE_LIMIT:
        raise CapacityError(f"exhaustive search limited to {EXHAUSTIVE_LIMIT} elements")
    if (1 << n) > budget.node_limit:
        raise SearchIndeterminate("subset count exceeds the node budget", 0)
    masks = np.arange(1 << n, dtype=np.uint64)
    ranks = batch_rank(row_space_basis(M.matrix).columns(), masks)
    lam = ranks + ranks[::-1] - M.cached_rank
    sizes = np.bitwise_count(masks).astype(np.int64)
    ok = (lam <= bound) & (sizes >= min_x) & (n - sizes >= min_y)
    if not ok.any():
        return None
    best = lam[ok].min()
    cands = masks[ok & (lam == best)]
    return min((int(c) for c in cands), key=lambda m: tuple(bits_of(m)))


class _Subtree:
    """One search subtree: a fixed prefix plus the kernel's resumable state."""

    def __init__(self, n: int, nbits: int, cols: np.ndarray, prefix: tuple[int, ...]):
        self.side = np.full(n, -1, dtype=np.int64)
        self.piv = np.full(n, -1, dtype=np.int64)
        self.nextopt = np.zeros(n, dtype=np.int64)
        self.bx = np.zeros(64, dtype=np.uint64)
        self.by = np.zeros(64, dtype=np.uint64)
        self.st = np.zeros(6, dtype=np.int64)
        self.start = len(prefix)
        rx = ry = nx = ny = 0
        for d, s in enumerate(prefix):
            basis = self.bx if s == 0 else self.by
            r, top = _kernel._reduce(basis, cols[d], nbits)
            if r:
                basis[top] = r
                self.piv[d] = top
                rx, ry = (rx + 1, ry) if s == 0 else (rx, ry + 1)
            nx, ny = (nx + 1, ny) if s == 0 else (nx, ny + 1)
            self.side[d] = s
        self.st[:] = (len(prefix), rx, ry, nx, ny, 0)

    def feasible(self, n: int, rank_m: int, bound: int, min_x: int, min_y: int) -> bool:
        # replay the kernel's pruning test on every prefix of the fixed part
        side = self.side[:self.start]
        rx = ry = nx = ny = 0
        for d in range(self.start):
            if side[d] == 0:
                nx += 1
                rx += self.piv[d] >= 0
            else:
                ny += 1
                ry += self.piv[d] >= 0
            if rx + ry - rank_m > bound:
                return False
            a = nx <= n - min_y and ny <= n - min_x
            b = nx <= n - min_x and ny <= n - min_y
            if not (a or b):
                return False
        return True


def _bnb(M: BinaryMatroid, bound: int, min_x: int, min_y: int, budget: SearchBudget,
         spent: list[int]) -> int | None:
    n = M.size
    if n == 0:
        return None
    order = search_order(M)
    reduced = row_space_basis(M.matrix).columns()
    cols = np.array([reduced[i] for i in order], dtype=np.uint64)
    nbits = max(1, M.cached_rank)
    rank_m = M.cached_rank
    depth = 1 if budget.threads == 1 else min(n, SPLIT_DEPTH)
    prefixes = [(0,) + p for p in itertools.product((0, 1), repeat=depth - 1)]
    trees = []
    for p in prefixes:
        t = _Subtree(n, nbits, cols, p)
        if t.feasible(n, rank_m, bound, min_x, min_y):
            trees.append(t)
    deadline = time.monotonic() + budget.time_limit
    lock = threading.Lock()
    state = {"found": len(trees), "out": False}

    def run(idx: int) -> int:
        t = trees[idx]
        while True:
            with lock:
                if state["found"] < idx or state["out"]:
                    return _kernel.PAUSED
                if spent[0] >= budget.node_limit or time.monotonic() > deadline:
                    state["out"] = True
                    return _kernel.PAUSED
            before = int(t.st[_kernel.NODES])
            status = _kernel.bnb_run(cols, nbits, rank_m, bound, min_x, min_y, t.start,
                                     t.side, t.piv, t.nextopt, t.bx, t.by, t.st,
                                     min(QUOTA, budget.node_limit))
            with lock:
                spent[0] += int(t.st[_kernel.NODES]) - before
                if status == _kernel.FOUND:
                    state["found"] = min(state["found"], idx)
            if status != _kernel.PAUSED:
                return status

    if budget.threads == 1:
        results = []
        for i in range(len(trees)):
            results.append(run(i))
            if results[-1] == _kernel.FOUND or state["out"]:
                break
    else:
        with ThreadPoolExecutor(max_workers=budget.threads) as pool:
            results = list(pool.map(run, range(len(trees))))
    for i, status in enumerate(results):
        if status == _kernel.FOUND:
            side = trees[i].side
            xmask = sum(1 << order[d] for d in range(n) if side[d] == 0)
            sx = popcount(xmask)
            if not (sx >= min_x and n - sx >= min_y):
                xmask = M.full_mask & ~xmask
            return xmask
        if status == _kernel.PAUSED:
            raise SearchIndeterminate("search budget exhausted", spent[0])
    return None


def find_separation(M: BinaryMatroid, lambda_bound: int, min_x: int, min_y: int,
                    budget: SearchBudget = DEFAULT_BUDGET,
                    kind: str = "separation") -> SeparationWitness | None:
    """A set X with λ(X) <= lambda_bound, |X| >= min_x and |E - X| >= min_y.

    Returns None when no such set exists and raises
    :class:`SearchIndeterminate` if the budget runs out first.  The witness
    always has the least attainable λ, so both strategies agree on it.
    """
    if min_x < 1 or min_y < 1:
        raise ValueError("side sizes must be at least 1")
    if M.size < min_x + min_y:
        return None
    if budget.strategy == "exhaustive":
        mask = _exhaustive(M, lambda_bound, min_x, min_y, budget)
        nodes = 1 << M.size
    else:
        spent = [0]
        mask = None
        for b in range(lambda_bound + 1):
            mask = _bnb(M, b, min_x, min_y, budget, spent)
            if mask is not None:
                break
        nodes = spent[0]
    if mask is None:
        return None
    size = popcount(mask)
    return SeparationWitness(M.labels_of(mask), lambda_mask(M, mask), kind,
                             (size, M.size - size), k=lambda_bound + 1, nodes=nodes)


def is_n_connected(M: BinaryMatroid, n: int, budget: SearchBudget = DEFAULT_BUDGET) -> bool:
    if n not in (2, 3, 4):
        raise ValueError("n must be 2, 3 or 4")
    return _small_separation(M, n, budget) is None


def _small_separation(M: BinaryMatroid, n: int, budget: SearchBudget) -> SeparationWitness | None:
    for k in range(1, n):
        w = find_separation(M, k - 1, k, k, budget)
        if w is not None:
            return w
    return None


def find_43_violator(M: BinaryMatroid, budget: SearchBudget = DEFAULT_BUDGET) -> SeparationWitness | None:
    w = find_separation(M, 2, 4, 4, budget, kind="violator-4-3")
    if w is None:
        return None
    if _is_fan_mask(M, M.mask(w.side_x)) or _is_fan_mask(M, M.full_mask & ~M.mask(w.side_x)):
        return SeparationWitness(w.side_x, w.lam, "fan-4", w.sizes, 3, w.nodes)
    return w


def is_internally_4_connected(M: BinaryMatroid, budget: SearchBudget = DEFAULT_BUDGET
                              ) -> tuple[bool, SeparationWitness | None]:
    """3-connected with no 3-separation whose sides both have four or more elements.

    In a 3-connected binary matroid a 3-separating 3-set is a triangle or a
    triad, so (4,3)-violators are the only obstruction.
    """
    w = _small_separation(M, 3, budget)
    if w is not None:
        return False, w
    if M.size >= 8:
        fans = find_4fans(M)
        if fans:
            tri, triad = fans[0]
            mask = M.mask(tri | triad)
            return False, SeparationWitness(tri | triad, lambda_mask(M, mask), "fan-4",
                                            (4, M.size - 4), 3)
    w = find_43_violator(M, budget)
    return w is None, w


# -- sequential separations and fans -------------------------------------------

def is_sequential(M: BinaryMatroid, X: Iterable[str]) -> tuple[bool, list[str] | None]:
    """Is ``(X, E - X)`` sequential?  On success also return a peel ordering
    ``(v1, ..., vm)`` of the sequential side V such that adding v_m, ..., v_i
    to the other side keeps it as separating as the original partition."""
    xmask = M.mask(X)
    ymask = M.full_mask & ~xmask
    for base, seq in ((xmask, ymask), (ymask, xmask)):
        if full_closure_mask(M, base) != M.full_mask:
            continue
        grown, added = base, []
        while grown != M.full_mask:
            reach = closure_mask(M, grown) | coclosure_mask(M, grown)
            y = bits_of(reach & ~grown)[0]
            added.append(M.labels[y])
            grown |= 1 << y
        return True, added[::-1]
    return False, None


def _is_fan_mask(M: BinaryMatroid, mask: int) -> bool:
    if popcount(mask) != 4:
        return False
    return any((t & mask) == t for t in triangle_masks(M)) and \
        any((t & mask) == t for t in _triad_masks(M))


def _triad_masks(M: BinaryMatroid) -> list[int]:
    return triangle_masks(dual(M))


def find_4fans(M: BinaryMatroid) -> list[tuple[frozenset[str], frozenset[str]]]:
    """Every (triangle, triad) pair meeting in exactly two elements."""
    tris = triangle_masks(M)
    triads = _triad_masks(M)
    pairs = [(t, s) for t in tris for s in triads if popcount(t & s) == 2]
    pairs.sort(key=lambda p: (tuple(bits_of(p[0])), tuple(bits_of(p[1]))))
    return [(M.labels_of(t), M.labels_of(s)) for t, s in pairs]
