"""Text format for binary matroids.

::

    # binary-matroid v1
    rows 3 cols 7
    1010101
    0110011
    0001111
    labels e0 e1 e2 e3 e4 e5 e6

The ``labels`` line is optional; missing labels default to ``e0 .. e{N-1}``.
Blank lines and further ``#`` lines after the header are ignored.
"""

from __future__ import annotations

from .gf2core import BitMatrix
from .matroid import BinaryMatroid

HEADER = "# binary-matroid v1"


class MatroidFormatError(ValueError):
    pass


def render_matroid(M: BinaryMatroid) -> str:
    m = M.matrix
    lines = [HEADER, f"rows {m.rows} cols {m.cols}"]
    lines += m.to_strings()
    lines.append(" ".join(["labels", *M.labels]))
    return "\n".join(lines) + "\n"


def parse_matroid(text: str) -> BinaryMatroid:
    raw = text.splitlines()
    if not raw or raw[0].strip() != HEADER:
        raise MatroidFormatError(f"missing header line {HEADER!r}")
    lines = [ln.strip() for ln in raw[1:]]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise MatroidFormatError("missing 'rows R cols N' line")
    dims = lines[0].split()
    if len(dims) != 4 or dims[0] != "rows" or dims[2] != "cols":
        raise MatroidFormatError(f"bad dimension line {lines[0]!r}")
    try:
        nrows, ncols = int(dims[1]), int(dims[3])
    except ValueError:
        raise MatroidFormatError(f"bad dimension line {lines[0]!r}") from None
    body = lines[1:]
    labels = None
    if body and body[-1].split()[0] == "labels":
        labels = body[-1].split()[1:]
        body = body[:-1]
        if len(labels) != ncols:
            raise MatroidFormatError(f"{len(labels)} labels for {ncols} columns")
    if ncols == 0:
        body = [ln for ln in body if ln]
    if len(body) != nrows:
        raise MatroidFormatError(f"expected {nrows} matrix rows, found {len(body)}")
    for ln in body:
        if len(ln) != ncols or set(ln) - {"0", "1"}:
            raise MatroidFormatError(f"bad matrix row {ln!r}")
    try:
        matrix = BitMatrix.from_strings(body) if nrows else BitMatrix.zeros(0, ncols)
        return BinaryMatroid.from_matrix(matrix, labels)
    except ValueError as exc:
        raise MatroidFormatError(str(exc)) from None


def read_matroid(path: str) -> BinaryMatroid:
    import sys
    if path == "-":
        return parse_matroid(sys.stdin.read())
    with open(path, encoding="utf-8") as fh:
        return parse_matroid(fh.read())
