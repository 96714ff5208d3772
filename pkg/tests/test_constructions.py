from __future__ import annotations

import pytest

from binmatroid.analysis import triangle_census
from binmatroid.constructions import (
    S6_GLUE_EDGES,
    GlueError,
    GraphSpec,
    UnsupportedCaseError,
    catalog,
    complete_graph,
    generalized_parallel_connection,
    graphic,
    is_modular_flat,
    parse_edge_list,
    section6_b,
)
from binmatroid.gf2core import PreconditionError, rank_of_columns
from binmatroid.matroid import (
    is_isomorphic,
    is_isomorphism,
    rank,
    relabel,
    restrict,
    same_matroid,
    triangles,
)

# vertex-edge incidence matrix A of the K_{3,3} + {u, v, w} graph, rows
# a1 a2 a3 b1 b2 b3 u v w, transcribed by hand from the source
A_ROWS = (
    "111000000100000100000100000",
    "000111000010000010000010000",
    "000000111001000001000001000",
    "100100100000100000100000100",
    "010010010000010000010000010",
    "001001001000001000001000001",
    "000000000111111000000000000",
    "000000000000000111111000000",
    "000000000000000000000111111",
)


def test_incidence_matrix_transcription():
    G = catalog("section6-g")
    assert G.matrix.to_strings() == list(A_ROWS)


def test_b_checksums():
    B = section6_b()
    weights = [bin(c).count("1") for c in B.columns()]
    assert weights == [6, 4, 6, 6, 6, 6]
    assert rank_of_columns(B) == 3
    N = catalog("section6-n")
    glue_triangles = {t for t in triangles(N).triangles if t <= set("abcdef")}
    assert glue_triangles == {frozenset(s) for s in ("abd", "acf", "bce", "def")}


def test_section6_stages():
    G, N, M = catalog("section6-g"), catalog("section6-n"), catalog("section6-m")
    assert (G.size, N.size, M.size) == (27, 33, 37)
    assert rank(G) == 8 and rank(N) == 8 and rank(M) == 9
    census = triangle_census(N)
    assert all(census.per_element[z] == 2 for z in "abcdef")
    assert all(census.per_element[x] == 3 for x in G.labels)
    assert triangle_census(M).uniform_k == 3


def test_glue_restriction_is_k4_with_named_bijection():
    N = catalog("section6-n")
    K4 = graphic(complete_graph(4))
    phi = {edge: z for z, edge in S6_GLUE_EDGES.items()}
    assert is_isomorphism(K4, restrict(N, list("abcdef")), phi)


def test_gpc_restrictions_and_rank():
    M = catalog("section6-m")
    N = catalog("section6-n")
    assert same_matroid(restrict(M, N.labels), N)
    k5 = graphic(complete_graph(5, prefix="g"))
    side = restrict(M, list("abcdef") + ["g15", "g25", "g35", "g45"])
    back = {z: f"g{edge}" for z, edge in S6_GLUE_EDGES.items()}
    assert is_isomorphism(k5, relabel(side, back), {x: x for x in k5.labels})


def test_gpc_of_two_fano_planes_along_a_line():
    F = catalog("f7")
    G = relabel(F, {x: "y" + x[1:] for x in F.labels})
    # a line of F7 is a hyperplane, and it meets every other line
    line = ["e0", "e1", "e2"]
    glue = {"e0": "y0", "e1": "y1", "e2": "y2"}
    P = generalized_parallel_connection(F, G, glue)
    assert P.size == 11 and rank(P) == 4
    assert is_isomorphic(restrict(P, [f"y{i}" for i in range(7)]), F)[0]
    assert is_modular_flat(F, line)


def test_gpc_rejects_bad_glue():
    F = catalog("f7")
    G = relabel(F, {x: "y" + x[1:] for x in F.labels})
    with pytest.raises(GlueError):
        generalized_parallel_connection(F, G, {"e0": "y0", "e1": "y1", "e2": "y3"})
    with pytest.raises(PreconditionError):
        generalized_parallel_connection(F, G, {"e0": "y0", "e1": "y1"})


def test_modular_flat_guards():
    K5 = graphic(complete_graph(5))
    assert is_modular_flat(K5, ["12", "13", "14", "23", "24", "34"])
    with pytest.raises(UnsupportedCaseError):
        is_modular_flat(K5, ["12", "13"])
    with pytest.raises(UnsupportedCaseError):
        is_modular_flat(K5, ["12", "34"])


def test_edge_list_parsing():
    g = parse_edge_list("# triangle\n1 2 x\n2 3 y  # comment\n\n1 3 z\n")
    M = graphic(g)
    assert M.labels == ("x", "y", "z") and rank(M) == 2
    with pytest.raises(ValueError):
        parse_edge_list("1 2\n")
    with pytest.raises(ValueError):
        GraphSpec.from_edges([("1", "1", "loop")])


def test_catalog_counts():
    assert len(triangles(catalog("mk5"))) == 10
    assert len(triangles(catalog("pg32"))) == 35
    assert len(triangles(catalog("ag32"))) == 0
    assert catalog("wheel4") == catalog("wheel", n=4)
    with pytest.raises(KeyError):
        catalog("nope")
    with pytest.raises(ValueError):
        catalog("wheel", n=2)


def dense_rank(rows: list[str]) -> int:
    # plain list-of-lists elimination, independent of the bitset code
    a = [[int(ch) for ch in r] for r in rows]
    r = 0
    for c in range(len(a[0])):
        p = next((i for i in range(r, len(a)) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        for i in range(len(a)):
            if i != r and a[i][c]:
                a[i] = [x ^ y for x, y in zip(a[i], a[r])]
        r += 1
    return r


def test_rank_of_n_by_independent_elimination():
    n_rows = [a + b for a, b in zip(A_ROWS, section6_b().to_strings())]
    assert dense_rank(n_rows) == 8
    assert dense_rank(catalog("section6-m").matrix.to_strings()) == 9
