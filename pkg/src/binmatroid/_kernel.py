"""Compiled depth-first partition search with rank-sum pruning.

The search state lives in numpy arrays owned by the caller, so a run can stop
after a node quota and be resumed; that is how wall-clock limits are enforced
from Python.
"""

from __future__ import annotations

import numpy as np
from numba import njit

FOUND = 1
EXHAUSTED = 0
PAUSED = 2

# scalar slots of the ``st`` state vector
DEPTH, RX, RY, NX, NY, NODES = range(6)


@njit(cache=True, inline="always")
def _reduce(basis, v, nbits):
    # each XOR clears the current leading bit, so the scan only moves down
    top = nbits - 1
    one = np.uint64(1)
    while v != 0:
        while (v >> np.uint64(top)) & one == 0:
            top -= 1
        b = basis[top]
        if b == 0:
            return v, top
        v ^= b
    return v, -1


@njit(cache=True, nogil=True)
def bnb_run(cols, nbits, rank_m, bound, min_x, min_y, start, side, piv, nextopt,
            basis_x, basis_y, st, quota):
    """Advance the search by at most ``quota`` nodes.

    ``cols`` are the element vectors in search order; elements before
    ``start`` are fixed.  ``side[d]`` is 0 for X and 1 for Y, ``piv[d]`` the
    basis slot filled when element ``d`` was placed (-1 if none) and
    ``nextopt[d]`` the next side to try at depth ``d``.
    """
    n = cols.shape[0]
    d = st[DEPTH]
    rx = st[RX]
    ry = st[RY]
    nx = st[NX]
    ny = st[NY]
    nodes = st[NODES]
    spent = 0
    status = EXHAUSTED
    while True:
        if d == n:
            if (nx >= min_x and ny >= min_y) or (ny >= min_x and nx >= min_y):
                status = FOUND
                break
            d -= 1
            # undo element d, keep its nextopt
            if side[d] == 0:
                nx -= 1
                if piv[d] >= 0:
                    basis_x[piv[d]] = 0
                    rx -= 1
            else:
                ny -= 1
                if piv[d] >= 0:
                    basis_y[piv[d]] = 0
                    ry -= 1
            side[d] = -1
            continue
        opt = nextopt[d]
        if opt == 2:
            nextopt[d] = 0
            d -= 1
            if d < start:
                status = EXHAUSTED
                break
            if side[d] == 0:
                nx -= 1
                if piv[d] >= 0:
                    basis_x[piv[d]] = 0
                    rx -= 1
            else:
                ny -= 1
                if piv[d] >= 0:
                    basis_y[piv[d]] = 0
                    ry -= 1
            side[d] = -1
            continue
        if spent >= quota:
            status = PAUSED
            break
        nextopt[d] = opt + 1
        spent += 1
        nodes += 1
        v = cols[d]
        if opt == 0:
            r, top = _reduce(basis_x, v, nbits)
            nx += 1
            if r != 0:
                basis_x[top] = r
                rx += 1
                piv[d] = top
            else:
                piv[d] = -1
        else:
            r, top = _reduce(basis_y, v, nbits)
            ny += 1
            if r != 0:
                basis_y[top] = r
                ry += 1
                piv[d] = top
            else:
                piv[d] = -1
        side[d] = opt
        feasible = rx + ry - rank_m <= bound
        if feasible:
            # some orientation of the size constraints must stay reachable
            a = nx <= n - min_y and ny <= n - min_x
            b = nx <= n - min_x and ny <= n - min_y
            feasible = a or b
        if feasible:
            d += 1
            continue
        if opt == 0:
            nx -= 1
            if piv[d] >= 0:
                basis_x[piv[d]] = 0
                rx -= 1
        else:
            ny -= 1
            if piv[d] >= 0:
                basis_y[piv[d]] = 0
                ry -= 1
        side[d] = -1
    st[DEPTH] = d
    st[RX] = rx
    st[RY] = ry
    st[NX] = nx
    st[NY] = ny
    st[NODES] = nodes
    return status
