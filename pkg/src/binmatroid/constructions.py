"""Named matroids, graphic matroids and generalized parallel connection."""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations
from typing import Mapping, Sequence

from .gf2core import BitMatrix, PreconditionError, XorBasis, bits_of
from .matroid import (
    BinaryMatroid,
    _coordinates,
    closure_mask,
    dual,
    is_isomorphism,
    relabel,
    restrict,
    same_matroid,
)


class UnsupportedCaseError(PreconditionError):
    pass


class GlueError(ValueError):
    pass


@dataclass(frozen=True)
class GraphSpec:
    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str, str], ...]

    def __post_init__(self):
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise ValueError("duplicate vertex")
        labels = [lab for _, _, lab in self.edges]
        if len(set(labels)) != len(labels):
            raise ValueError("duplicate edge label")
        for u, v, lab in self.edges:
            if u not in vs or v not in vs:
                raise ValueError(f"edge {lab} has an undeclared endpoint")
            if u == v:
                raise ValueError(f"edge {lab} is a self-loop; GF(2) incidence cannot encode it")

    @classmethod
    def from_edges(cls, edges: Sequence[tuple[str, str, str]],
                   vertices: Sequence[str] | None = None) -> GraphSpec:
        if vertices is None:
            seen: dict[str, None] = {}
            for u, v, _ in edges:
                seen.setdefault(u)
                seen.setdefault(v)
            vertices = list(seen)
        return cls(tuple(vertices), tuple(tuple(e) for e in edges))


def parse_edge_list(text: str) -> GraphSpec:
    """Parse ``u v label`` lines; ``#`` starts a comment."""
    edges = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ValueError(f"line {lineno}: expected 'u v label', got {line!r}")
        edges.append(tuple(parts))
    return GraphSpec.from_edges(edges)


def graphic(g: GraphSpec) -> BinaryMatroid:
    """Cycle matroid from the vertex-edge incidence matrix (one row per vertex)."""
    row = {v: i for i, v in enumerate(g.vertices)}
    cols = [(1 << row[u]) | (1 << row[v]) for u, v, _ in g.edges]
    return BinaryMatroid(BitMatrix.from_columns(cols, len(g.vertices)),
                         tuple(lab for _, _, lab in g.edges))


def complete_graph(n: int, prefix: str = "") -> GraphSpec:
    vs = [str(i) for i in range(1, n + 1)]
    return GraphSpec.from_edges([(u, v, f"{prefix}{u}{v}") for u, v in combinations(vs, 2)], vs)


def complete_bipartite_33() -> GraphSpec:
    a = ["a1", "a2", "a3"]
    b = ["b1", "b2", "b3"]
    return GraphSpec.from_edges([(x, y, x + y) for x in a for y in b], a + b)


def wheel_graph(n: int) -> GraphSpec:
    """Hub ``h`` with rim 1..n; spokes s1..sn then rim edges r1..rn (ri joins i, i+1)."""
    rim = [str(i) for i in range(1, n + 1)]
    spokes = [("h", rim[i], f"s{i + 1}") for i in range(n)]
    rims = [(rim[i], rim[(i + 1) % n], f"r{i + 1}") for i in range(n)]
    return GraphSpec.from_edges(spokes + rims, ["h"] + rim)


def projective_geometry(r: int) -> BinaryMatroid:
    """PG(r, 2): every nonzero vector of GF(2)^(r+1), in increasing order."""
    if not 1 <= r <= 4:
        raise ValueError("pg(r, 2) supported for 1 <= r <= 4")
    cols = list(range(1, 1 << (r + 1)))
    return BinaryMatroid.from_matrix(BitMatrix.from_columns(cols, r + 1))


def affine_geometry_32() -> BinaryMatroid:
    """AG(3, 2): the vectors of GF(2)^4 whose first coordinate is 1."""
    cols = [1 | (x << 1) for x in range(8)]
    return BinaryMatroid.from_matrix(BitMatrix.from_columns(cols, 4))


# -- the glued counterexample -----------------------------------------------

S6_VERTICES = ("a1", "a2", "a3", "b1", "b2", "b3", "u", "v", "w")
S6_GLUE_LABELS = ("a", "b", "c", "d", "e", "f")
# B as printed, rows a1, a2, a3, b1, b2, b3, u, v, w; columns a..f
S6_B_ROWS = (
    "101110",
    "101110",
    "101110",
    "110011",
    "011101",
    "011101",
    "110011",
    "100101",
    "001011",
)
# K_4 edge of each glue element; the four triangles abd, acf, bce, def of
# N restricted to {a..f} become the four 3-cycles of K_4 on vertices 1..4
S6_GLUE_EDGES = {"a": "12", "b": "13", "c": "14", "d": "23", "e": "34", "f": "24"}


def section6_graph() -> GraphSpec:
    """K_{3,3} plus u, v, w each joined to all six vertices; column order of A."""
    a = S6_VERTICES[:3]
    b = S6_VERTICES[3:6]
    edges = [(x, y, x + y) for x in a for y in b]
    for hub in ("u", "v", "w"):
        edges += [(hub, x, hub + x) for x in a + b]
    return GraphSpec.from_edges(edges, S6_VERTICES)


def section6_b() -> BitMatrix:
    return BitMatrix.from_strings(S6_B_ROWS)


def section6(stage: str) -> BinaryMatroid:
    if stage == "g":
        return graphic(section6_graph())
    if stage == "n":
        g = graphic(section6_graph())
        return BinaryMatroid(g.matrix.hstack(section6_b()), g.labels + S6_GLUE_LABELS)
    if stage == "m":
        k5 = graphic(complete_graph(5, prefix="g"))
        glue = {f"g{edge}": z for z, edge in S6_GLUE_EDGES.items()}
        return generalized_parallel_connection(k5, section6("n"), glue)
    raise ValueError(f"unknown section6 stage {stage!r}")


# -- catalog ------------------------------------------------------------------

CATALOG_NAMES = ("f7", "f7dual", "mk4", "mk5", "mk33", "mk33dual", "mk5dual",
                 "pg", "ag32", "wheel", "section6-g", "section6-n", "section6-m")


def catalog(name: str, **params) -> BinaryMatroid:
    """Named matroid with its canonical representation and labels.

    Parametric families take ``r`` (``pg``) or ``n`` (``wheel``); the compact
    spellings ``pg32`` and ``wheel4`` are accepted as well.
    """
    m = re.fullmatch(r"pg(\d)2", name)
    if m:
        return projective_geometry(int(m.group(1)))
    m = re.fullmatch(r"wheel(\d+)", name)
    if m:
        return catalog("wheel", n=int(m.group(1)))
    if name == "ag(3,2)":
        name = "ag32"
    if name == "pg":
        return projective_geometry(int(params.get("r", 3)))
    if name == "wheel":
        n = int(params.get("n", 4))
        if not 3 <= n <= 8:
            raise ValueError("wheel(n) supported for 3 <= n <= 8")
        return graphic(wheel_graph(n))
    builders = {
        "f7": lambda: projective_geometry(2),
        "f7dual": lambda: dual(projective_geometry(2)),
        "mk4": lambda: graphic(complete_graph(4)),
        "mk5": lambda: graphic(complete_graph(5)),
        "mk33": lambda: graphic(complete_bipartite_33()),
        "mk33dual": lambda: dual(graphic(complete_bipartite_33())),
        "mk5dual": lambda: dual(graphic(complete_graph(5))),
        "ag32": affine_geometry_32,
        "section6-g": lambda: section6("g"),
        "section6-n": lambda: section6("n"),
        "section6-m": lambda: section6("m"),
    }
    if name not in builders:
        raise KeyError(f"unknown catalog id {name!r}")
    return builders[name]()


# -- generalized parallel connection ---------------------------------------

def is_modular_flat(M: BinaryMatroid, F) -> bool:
    """Modularity test for a hyperplane: it must meet every line of ``M``."""
    fmask = M.mask(F)
    if closure_mask(M, fmask) != fmask:
        raise UnsupportedCaseError("set is not closed")
    if M.rank_mask(fmask) != M.cached_rank - 1:
        raise UnsupportedCaseError("modularity is only decided for hyperplanes")
    inside = {M.cols[i] for i in bits_of(fmask)}
    outside = sorted({M.cols[i] for i in bits_of(M.full_mask & ~fmask)})
    # two points off a closed F span a line whose third point (if any) is
    # their sum; a 2-point line there misses F entirely
    for x, y in combinations(outside, 2):
        if x ^ y not in inside:
            return False
    return True


def generalized_parallel_connection(M1: BinaryMatroid, M2: BinaryMatroid,
                                    glue: Mapping[str, str],
                                    assume_modular: bool = False) -> BinaryMatroid:
    """Glue ``M1`` onto ``M2`` across ``T1 -> T2`` given by ``glue``.

    ``T1`` must be a modular flat of ``M1`` (checked for hyperplanes, asserted
    by the caller via ``assume_modular`` otherwise) and ``T2`` a flat of
    ``M2``.  The result lives on ``E(M2)`` followed by ``E(M1) - T1`` and is
    represented over the rows of ``M2`` plus ``r(M1) - r(T)`` new rows.
    """
    t1 = sorted(glue, key=lambda x: M1.index[x])
    t2 = [glue[x] for x in t1]
    if len(set(t2)) != len(t2):
        raise GlueError("glue map is not injective")
    t1mask, t2mask = M1.mask(t1), M2.mask(t2)
    if not is_isomorphism(restrict(M1, t1), restrict(M2, t2), dict(glue)):
        raise GlueError("glue map is not an isomorphism of the restrictions")
    if closure_mask(M2, t2mask) != t2mask:
        raise PreconditionError("glue set is not closed in the second matroid")
    rt = M1.rank_mask(t1mask)
    if closure_mask(M1, t1mask) != t1mask:
        raise PreconditionError("glue set is not a flat of the first matroid")
    if rt == M1.cached_rank - 1:
        if not is_modular_flat(M1, t1):
            raise PreconditionError("glue set is not a modular flat of the first matroid")
    elif rt != M1.cached_rank and not assume_modular:
        raise PreconditionError("modularity of a non-hyperplane flat must be asserted by the caller")
    extra = [x for x in M1.labels if x not in glue]
    if set(extra) & set(M2.labels):
        raise GlueError("non-glue labels of the two matroids overlap")

    span = XorBasis()
    basis = [i for i in bits_of(t1mask) if span.add(M1.cols[i])]
    nt = len(basis)
    basis += [i for i in range(M1.size) if not (t1mask >> i) & 1 and span.add(M1.cols[i])]
    coords = _coordinates(M1, basis)
    images = [M2.cols[M2.index[glue[M1.labels[i]]]] for i in basis[:nt]]
    rows2 = M2.matrix.rows
    new_cols = list(M2.cols)
    for x in extra:
        c = coords[M1.index[x]]
        v = 0
        for k in range(nt):
            if (c >> k) & 1:
                v ^= images[k]
        v |= (c >> nt) << rows2
        new_cols.append(v)
    nrows = rows2 + len(basis) - nt
    out = BinaryMatroid(BitMatrix.from_columns(new_cols, nrows), M2.labels + tuple(extra))

    if not same_matroid(restrict(out, M2.labels), M2):
        raise AssertionError("restriction to E(M2) does not recover M2")
    back = {glue[x]: x for x in t1}
    side = relabel(restrict(out, t2 + extra), back)
    if not is_isomorphism(M1, side, {x: x for x in M1.labels}):
        raise AssertionError("restriction to E(M1) does not recover M1")
    if out.cached_rank != M1.cached_rank + M2.cached_rank - rt:
        raise AssertionError("rank formula violated")
    return out


def glue_labels(M: BinaryMatroid) -> list[str]:
    """The counterexample glue elements present in ``M``, in column order."""
    return [x for x in M.labels if x in S6_GLUE_LABELS]


__all__ = [
    "GraphSpec", "GlueError", "UnsupportedCaseError", "parse_edge_list", "graphic",
    "complete_graph", "complete_bipartite_33", "wheel_graph", "projective_geometry",
    "affine_geometry_32", "section6_graph", "section6_b", "section6", "catalog",
    "CATALOG_NAMES", "is_modular_flat", "generalized_parallel_connection",
    "S6_GLUE_LABELS", "S6_GLUE_EDGES", "glue_labels",
]
