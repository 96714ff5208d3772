"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line."""

from __future__ import annotations

import itertools
import random
import subprocess
import sys
import time

import pytest

from binmatroid import analysis
from binmatroid.cli import main as cli_main
from binmatroid.connectivity import (
    SearchBudget,
    find_4fans,
    find_43_violator,
    find_separation,
    is_internally_4_connected,
    is_n_connected,
    lambda_mask,
)
from binmatroid.constructions import CATALOG_NAMES, S6_GLUE_EDGES, catalog, complete_graph, graphic
from binmatroid.gf2core import bits_of, popcount
from binmatroid.io import render_matroid
from binmatroid.matroid import (
    canonical,
    circuits,
    closure_mask,
    coclosure_mask,
    cocircuits,
    dual,
    is_isomorphic,
    is_isomorphism,
    restrict,
    same_matroid,
    si_contract,
    triangles,
)

from conftest import CRITERIA_LINES

GLUE = tuple("abcdef")
EXH = SearchBudget(strategy="exhaustive")

# S for section6-m, recorded from the first full verifier run (derived, not
# stated in the source): every element outside the glue set
SECTION6_M_GOOD = (
    "a1b1 a1b2 a1b3 a2b1 a2b2 a2b3 a3b1 a3b2 a3b3 "
    "ua1 ua2 ua3 ub1 ub2 ub3 va1 va2 va3 vb1 vb2 vb3 "
    "wa1 wa2 wa3 wb1 wb2 wb3 g15 g25 g35 g45"
).split()


def record(n: int, ok: bool, detail: str) -> None:
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}"
    CRITERIA_LINES[n] = line
    print(line)
    assert ok, line


@pytest.fixture(scope="module", autouse=True)
def warm_kernel():
    # load the compiled search kernel so per-fixture timings exclude JIT setup
    find_separation(catalog("f7"), 2, 2, 2)


def timed(fn):
    t = time.perf_counter()
    value = fn()
    return value, time.perf_counter() - t


def test_criterion_1_catalog_fixtures():
    failures, times = [], {}

    def f7():
        M = catalog("f7")
        c = analysis.triangle_census(M)
        return (len(triangles(M)) == 7 and c.uniform_k == 3
                and all(len(C) == 4 for C in cocircuits(M))
                and is_internally_4_connected(M)[0])

    def k5():
        M = catalog("mk5")
        return (len(triangles(M)) == 10 and analysis.triangle_census(M).uniform_k == 3
                and is_internally_4_connected(M)[0])

    def k33dual():
        M = catalog("mk33dual")
        return len(triangles(M)) == 6 and analysis.triangle_census(M).uniform_k == 2

    def pg32():
        c = analysis.triangle_census(catalog("pg32"))
        return c.uniform_k == 7 and c.total_triangles == 35

    def ag32():
        return len(triangles(catalog("ag32"))) == 0

    def w4():
        M = catalog("wheel4")
        ok, w = is_internally_4_connected(M)
        return is_n_connected(M, 3) and not ok and w is not None and w.revalidate(M) \
            and len(find_4fans(M)) >= 1

    for name, fn in (("F7", f7), ("M(K5)", k5), ("M*(K33)", k33dual), ("PG(3,2)", pg32),
                     ("AG(3,2)", ag32), ("M(W4)", w4)):
        ok, dt = timed(fn)
        times[name] = dt
        if not ok or dt >= 1.0:
            failures.append(f"{name} ok={ok} {dt:.2f}s")
    slowest = max(times, key=times.get)
    record(1, not failures,
           f"6 fixtures, slowest {slowest} {times[slowest]:.3f}s" + (f"; {failures}" if failures else ""))


def test_criterion_2_oracle_equivalence():
    rnd = random.Random(1)
    pgs = [catalog("pg", r=3), catalog("pg", r=4)]
    samples = []
    for i in range(220):
        P = pgs[i % 2]
        k = rnd.randint(8, 14)
        samples.append(restrict(P, rnd.sample(P.labels, k)))
    discrepancies, comparisons = [], 0
    t0 = time.perf_counter()
    for M in samples:
        for bound, side in itertools.product((0, 1, 2), (1, 2, 4)):
            a = find_separation(M, bound, side, side)
            b = find_separation(M, bound, side, side, EXH)
            comparisons += 1
            key_a = (a is not None, a.lam if a else None)
            key_b = (b is not None, b.lam if b else None)
            if key_a != key_b or (a and not a.revalidate(M)):
                discrepancies.append((M.labels, bound, side, key_a, key_b))
    dt = time.perf_counter() - t0
    record(2, not discrepancies and dt < 300,
           f"{len(samples)} restrictions, {comparisons} comparisons, "
           f"{len(discrepancies)} discrepancies, {dt:.1f}s")


def test_criterion_3_axiom_properties():
    rnd = random.Random(3)
    names = [n for n in CATALOG_NAMES if n not in ("pg", "wheel")]
    mats = [catalog(n) for n in names]
    mats += [catalog("pg", r=r) for r in (1, 2, 3, 4)] + [catalog("wheel", n=n) for n in range(3, 9)]
    violations = []
    for M in mats:
        D = dual(M)
        if not same_matroid(canonical(dual(D)), canonical(M)):
            violations.append(("dual involution", M))
        if set(cocircuits(M)) != set(circuits(D)):
            violations.append(("cocircuits", M))
    trials = 0
    while trials < 12000:
        M = mats[trials % len(mats)]
        D = dual(M)
        full = M.full_mask
        X = rnd.getrandbits(M.size) & full
        Y = rnd.getrandbits(M.size) & full
        r = M.rank_mask
        trials += 1
        if r(X | Y) + r(X & Y) > r(X) + r(Y):
            violations.append(("submodular", X, Y))
        if r(X) > r(X | Y) or r(X) > popcount(X):
            violations.append(("monotone", X, Y))
        cl = closure_mask(M, X)
        if closure_mask(M, cl) != cl or cl & X != X:
            violations.append(("closure", X))
        lam = lambda_mask(M, X)
        if lam != lambda_mask(M, full & ~X):
            violations.append(("lambda symmetry", X))
        if lam != lambda_mask(D, X):
            violations.append(("lambda duality", X))
        reach = (closure_mask(M, X) | coclosure_mask(M, X)) & ~X
        for y in bits_of(reach):
            if lambda_mask(M, X | 1 << y) > lam:
                violations.append(("moving", X, y))
    record(3, not violations,
           f"{len(mats)} matroids, {trials} subset trials, {len(violations)} violations")


def test_criterion_4_lemma_audits():
    problems = []
    for name in ("f7", "mk5", "section6-g", "section6-m"):
        M = catalog(name)
        rep = analysis.contraction_3conn_audit(M)
        if rep.verdict != "pass" or not analysis.revalidate(M, rep):
            problems.append(f"contraction {name} {rep.verdict}")
    for name in ("f7", "section6-m"):
        rep = analysis.odd_cocircuit_audit(catalog(name))
        if rep.verdict != "pass":
            problems.append(f"odd-cocircuit {name} {rep.verdict}")
    for name in CATALOG_NAMES:
        M = catalog(name)
        c = analysis.triangle_census(M)
        if c.uniform_k == 3 and c.total_triangles != M.size:
            problems.append(f"census total {name}")
        rep = analysis.small_classification_check(M)
        want = "pass" if name in ("f7", "mk5") else "not-applicable"
        if rep.verdict != want:
            problems.append(f"small classification {name} {rep.verdict}")
        elif want == "pass" and not analysis.revalidate(M, rep):
            problems.append(f"small classification witness {name}")
    record(4, not problems, f"{len(CATALOG_NAMES)} catalog entries audited; problems: {problems or 'none'}")


def test_criterion_5_section6_pipeline():
    problems = []
    G = catalog("section6-g")
    (ok_g, _), dt_g = timed(lambda: is_internally_4_connected(G))
    if G.size != 27 or analysis.triangle_census(G).uniform_k != 3 or not ok_g or dt_g >= 60:
        problems.append(f"G ok={ok_g} {dt_g:.1f}s")

    N = catalog("section6-n")
    census = analysis.triangle_census(N)
    iso = is_isomorphic(restrict(N, GLUE), graphic(complete_graph(4)))[0]
    phi = {z: edge for z, edge in S6_GLUE_EDGES.items()}
    named = is_isomorphism(restrict(N, GLUE), graphic(complete_graph(4)), phi)
    if N.size != 33 or any(census.per_element[z] != 2 for z in GLUE) or not (iso and named):
        problems.append("N")

    M = catalog("section6-m")
    analysis.clear_caches()
    budget = SearchBudget(time_limit=3600.0)
    (ok_m, _), dt_m = timed(lambda: is_internally_4_connected(M, budget))
    if (M.size != 37 or M.cached_rank != N.cached_rank + 1 != 9
            or analysis.triangle_census(M).uniform_k != 3 or not ok_m):
        problems.append(f"M ok={ok_m}")
    for z in GLUE:
        minor, _ = si_contract(M, z)
        w = find_43_violator(minor)
        if w is None or not w.revalidate(minor) or w.lam > 2 or min(w.sizes) < 4:
            problems.append(f"si(M/{z})")
    record(5, not problems,
           f"G i4c {dt_g:.2f}s, M i4c {dt_m:.2f}s, 6 violators revalidated; problems: {problems or 'none'}")


def test_criterion_6_theorem():
    problems = []
    for name in ("f7", "mk5"):
        M = catalog(name)
        rep = analysis.theorem_verifier(M)
        if set(rep.good) != set(M.labels) or rep.verdict != "pass":
            problems.append(name)
    M = catalog("section6-m")
    analysis.clear_caches()
    rep, dt = timed(lambda: analysis.theorem_verifier(M))
    S = set(rep.good)
    if len(S) < 4 or S & set(GLUE) or list(rep.good) != SECTION6_M_GOOD:
        problems.append(f"section6-m S={sorted(S)}")
    if rep.verdict != "pass" or not analysis.revalidate(M, rep):
        problems.append(f"section6-m verdict {rep.verdict}")
    record(6, not problems,
           f"S = E on F7 and M(K5); section6-m |S| = {len(S)}, disjoint from a..f, "
           f"{dt:.2f}s; problems: {problems or 'none'}")


def _cli(args: list[str], stdin: str | None = None) -> bytes:
    proc = subprocess.run([sys.executable, "-m", "binmatroid", *args], input=stdin,
                          capture_output=True, text=True)
    return proc.stdout.encode()


def test_criterion_7_determinism(tmp_path):
    paths = {}
    for name in ("section6-m", "wheel4", "mk5"):
        p = tmp_path / f"{name}.bm"
        p.write_text(render_matroid(catalog(name)))
        paths[name] = str(p)
    commands = [
        ["gen", "section6-m", "--canonical"],
        ["check", "i4c", paths["section6-m"], "--canonical"],
        ["check", "census3", paths["section6-m"], "--canonical"],
        ["theorem", paths["section6-m"], "--canonical"],
        ["separations", paths["wheel4"], "--lambda", "2", "--min-side", "4", "--canonical"],
        ["enumerate", "fans", paths["wheel4"], "--canonical"],
        ["transform", "dual", paths["mk5"], "--canonical"],
    ]
    unstable = [c[0] for c in commands if _cli(c) != _cli(c)]

    import io
    import json

    def verdicts(threads: int) -> list:
        out = []
        for args in (["check", "i4c", paths["section6-m"]],
                     ["theorem", paths["section6-m"]],
                     ["separations", paths["section6-m"], "--lambda", "2", "--min-side", "4"],
                     ["separations", paths["wheel4"], "--lambda", "2", "--min-side", "4"]):
            buf = io.StringIO()
            code = cli_main([*args, "--threads", str(threads)], out=buf)
            out.append((code, json.loads(buf.getvalue().split("--- json\n", 1)[1])["verdict"]))
        return out

    by_threads = {t: verdicts(t) for t in (1, 4, 8)}
    same = by_threads[1] == by_threads[4] == by_threads[8]
    record(7, not unstable and same,
           f"{len(commands)} canonical commands byte-identical across runs"
           f"{' except ' + str(unstable) if unstable else ''}; verdicts across threads 1/4/8 "
           f"{'identical' if same else 'differ'}")
