"""Shared test helpers."""

from __future__ import annotations

import random

from hypothesis import strategies as st

from binmatroid.gf2core import BitMatrix
from binmatroid.matroid import BinaryMatroid


def random_matroid(rng: random.Random, rows: int, cols: int) -> BinaryMatroid:
    data = [rng.getrandbits(cols) for _ in range(rows)]
    return BinaryMatroid.from_matrix(BitMatrix(rows, cols, tuple(data)))


@st.composite
def matroids(draw, max_rows: int = 5, max_cols: int = 9):
    rows = draw(st.integers(0, max_rows))
    cols = draw(st.integers(1, max_cols))
    data = draw(st.lists(st.integers(0, (1 << cols) - 1), min_size=rows, max_size=rows))
    return BinaryMatroid.from_matrix(BitMatrix(rows, cols, tuple(data)))
