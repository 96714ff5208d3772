"""The counterexample construction, stage by stage.

G is K_{3,3} plus three hubs u, v, w joined to all six of its vertices.
Appending six extra columns to the incidence matrix of G gives N, whose
restriction to {a..f} is M(K4).  Gluing M(K5) onto N across that M(K4) gives
M: internally 4-connected, every element in three triangles, yet si(M/z) is
not i4c for every glue element z.
"""

from __future__ import annotations

from binmatroid import analysis, catalog, find_43_violator, is_internally_4_connected, si_contract

G = catalog("section6-g")
N = catalog("section6-n")
M = catalog("section6-m")

for name, X in (("G", G), ("N", N), ("M", M)):
    c = analysis.triangle_census(X)
    print(f"{name}: |E|={X.size} rank={X.cached_rank} triangles={c.total_triangles} uniform={c.uniform_k}")

print("glue triangle counts in N:", {z: analysis.triangle_census(N).per_element[z] for z in "abcdef"})
print("M internally 4-connected:", is_internally_4_connected(M)[0])

for z in "abcdef":
    minor, _ = si_contract(M, z)
    w = find_43_violator(minor)
    small = min(w.side_x, minor.ground_set - w.side_x, key=len)
    print(f"si(M/{z}): {minor.size} elements, {w.kind} side {minor.sorted_labels(small)} lambda={w.lam}")

report = analysis.theorem_verifier(M)
print(f"good elements: {len(report.good)}; glue elements among them: "
      f"{sorted(set(report.good) & set('abcdef')) or 'none'}")
