"""Branch-and-bound separation search against the exhaustive oracle.

Random restrictions of PG(3,2) are searched both ways.  The two engines return
a witness of the same (least) connectivity whenever one exists.
"""

from __future__ import annotations

import random
import time

from binmatroid import SearchBudget, catalog, find_separation, restrict

rng = random.Random(0)
P = catalog("pg32")
exhaustive = SearchBudget(strategy="exhaustive")

t0 = time.perf_counter()
agree = 0
for trial in range(40):
    M = restrict(P, rng.sample(P.labels, rng.randint(8, 13)))
    a = find_separation(M, 2, 4, 4)
    b = find_separation(M, 2, 4, 4, exhaustive)
    agree += (a is None) == (b is None) and (a is None or a.lam == b.lam)
    if trial < 3 and a is not None:
        print(f"|E|={M.size}: bnb lambda={a.lam} side={M.sorted_labels(a.side_x)} ({a.nodes} nodes)")
print(f"{agree}/40 agree in {time.perf_counter() - t0:.2f}s")
