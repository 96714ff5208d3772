"""Small i4c binary matroids with every element in three triangles.

F7 and M(K5) are the only ones on at most 13 elements.  For both, contracting
any element and simplifying leaves an internally 4-connected matroid, so the
set S of such elements is the whole ground set.
"""

from __future__ import annotations

from binmatroid import analysis, catalog, is_internally_4_connected, si_contract, triangles

for name in ("f7", "mk5"):
    M = catalog(name)
    census = analysis.triangle_census(M)
    print(f"{name}: |E|={M.size} rank={M.cached_rank} triangles={len(triangles(M))} "
          f"uniform={census.uniform_k} i4c={is_internally_4_connected(M)[0]}")
    e = M.labels[0]
    minor, trace = si_contract(M, e)
    print(f"  si(M/{e}) has {minor.size} elements; {len(trace.removed_loops)} loops removed")
    report = analysis.theorem_verifier(M)
    print(f"  S = {list(report.good)}  verdict={report.verdict}")
