"""Instance-level checks of the triangle-rich i4c structure results.

Every audit separates "hypotheses do not hold" (``applicable=False``) from
"hypotheses hold and the conclusion failed".  Witnesses are plain dicts so
reports serialise directly; :func:`revalidate` re-derives each one from the
matroid.
"""

from __future__ import annotations

import hashlib
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from pathlib import Path
from typing import Mapping

from .connectivity import (
    DEFAULT_BUDGET,
    SearchBudget,
    SearchIndeterminate,
    SeparationWitness,
    is_internally_4_connected,
    lambda_mask,
)
from .constructions import S6_GLUE_LABELS, catalog
from .gf2core import bits_of, popcount, row_space_basis
from .matroid import (
    BinaryMatroid,
    cocircuit_masks,
    find_isomorphism,
    is_isomorphism,
    si_contract,
    triangle_masks,
    triads,
)

SMALL_LIMIT = 13
STANDING_MIN_SIZE = 14


@dataclass(frozen=True)
class CensusReport:
    per_element: Mapping[str, int]
    uniform_k: int | None
    total_triangles: int

    def to_dict(self) -> dict:
        return {"per_element": dict(self.per_element), "uniform_k": self.uniform_k,
                "total_triangles": self.total_triangles}


@dataclass
class AuditReport:
    audit_name: str
    applicable: bool
    passed: bool | None
    witnesses: list[dict] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def verdict(self) -> str:
        if not self.applicable:
            return "not-applicable"
        if self.passed is None:
            return "indeterminate"
        return "pass" if self.passed else "fail"

    def to_dict(self) -> dict:
        return {"audit": self.audit_name, "applicable": self.applicable,
                "passed": self.passed, "verdict": self.verdict,
                "witnesses": self.witnesses, "notes": self.notes}


@dataclass
class TheoremReport:
    hypotheses_ok: bool
    hypotheses: dict
    good: tuple[str, ...]
    bad: dict[str, dict]
    indeterminate: tuple[str, ...]
    min4_ok: bool
    cocircuit_clause: str
    cocircuit: tuple[str, ...] | None = None

    @property
    def verdict(self) -> str:
        if not self.hypotheses_ok:
            return "not-applicable"
        if self.indeterminate:
            return "indeterminate"
        if self.min4_ok and self.cocircuit_clause != "violated":
            return "pass"
        return "fail"

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "hypotheses_ok": self.hypotheses_ok,
                "hypotheses": self.hypotheses, "good_elements": list(self.good),
                "good_count": len(self.good), "bad_elements": self.bad,
                "indeterminate_elements": list(self.indeterminate),
                "min4_ok": self.min4_ok, "cocircuit_clause": self.cocircuit_clause,
                "cocircuit": list(self.cocircuit) if self.cocircuit else None}


# -- census and hypotheses ---------------------------------------------------

def triangle_census(M: BinaryMatroid) -> CensusReport:
    counts = [0] * M.size
    tris = triangle_masks(M)
    for t in tris:
        for i in bits_of(t):
            counts[i] += 1
    per = {x: counts[i] for i, x in enumerate(M.labels)}
    uniform = counts[0] if counts and len(set(counts)) == 1 else None
    if sum(counts) != 3 * len(tris):
        raise AssertionError("triangle incidences do not sum to three per triangle")
    if uniform == 3 and len(tris) != M.size:
        raise AssertionError("uniform-3 census must have exactly |E| triangles")
    return CensusReport(per, uniform, len(tris))


@lru_cache(maxsize=256)
def _i4c(M: BinaryMatroid, budget: SearchBudget) -> tuple[bool, SeparationWitness | None]:
    return is_internally_4_connected(M, budget)


def _hypotheses(M: BinaryMatroid, budget: SearchBudget) -> dict:
    census = triangle_census(M)
    i4c, w = _i4c(M, budget)
    return {"binary": True, "internally_4_connected": i4c, "census_uniform_k": census.uniform_k,
            "size": M.size, "i4c_witness": w.to_dict(M) if w else None}


@dataclass(frozen=True)
class _Contraction:
    element: str
    i4c: bool
    three_connected: bool
    triad_count: int
    witness: SeparationWitness | None
    minor: BinaryMatroid


@lru_cache(maxsize=4096)
def _contraction(M: BinaryMatroid, e: str, budget: SearchBudget) -> _Contraction:
    si, _ = si_contract(M, e)
    ok, w = _i4c(si, budget)
    three = ok or (w is not None and w.kind in ("violator-4-3", "fan-4"))
    return _Contraction(e, ok, three, len(triads(si)), w, si)


def _element_witness(c: _Contraction) -> dict:
    return {"type": "contraction", "element": c.element,
            "minor_size": c.minor.size,
            "separation": c.witness.to_dict(c.minor) if c.witness else None}


# -- audits ---------------------------------------------------------------------

def odd_cocircuit_audit(M: BinaryMatroid, budget: SearchBudget = DEFAULT_BUDGET) -> AuditReport:
    hyp = _hypotheses(M, budget)
    applicable = hyp["internally_4_connected"] and hyp["census_uniform_k"] == 3
    odd = [m for m in cocircuit_masks(M) if popcount(m) % 2]
    witnesses = [{"type": "cocircuit", "elements": M.sorted_labels(M.labels_of(m))} for m in odd]
    notes = [] if applicable else ["hypotheses not met; odd cocircuits listed for information"]
    return AuditReport("odd-cocircuit", applicable, (not odd) if applicable else None,
                       witnesses, notes)


def contraction_3conn_audit(M: BinaryMatroid, budget: SearchBudget = DEFAULT_BUDGET) -> AuditReport:
    hyp = _hypotheses(M, budget)
    applicable = hyp["internally_4_connected"]
    if not applicable:
        return AuditReport("contraction-3-connected", False, None,
                           notes=["matroid is not internally 4-connected"])
    witnesses, notes = [], []
    for i, e in enumerate(M.labels):
        if M.cols[i] == 0:
            notes.append(f"{e} is a loop; skipped")
            continue
        c = _contraction(M, e, budget)
        if not c.three_connected:
            witnesses.append(_element_witness(c))
    return AuditReport("contraction-3-connected", True, not witnesses, witnesses, notes)


def _standing(M: BinaryMatroid, budget: SearchBudget) -> tuple[bool, list[str]]:
    hyp = _hypotheses(M, budget)
    notes = []
    if hyp["census_uniform_k"] != 3:
        notes.append("census is not uniformly 3")
    if not hyp["internally_4_connected"]:
        notes.append("matroid is not internally 4-connected")
    if M.size < STANDING_MIN_SIZE:
        notes.append(f"|E| = {M.size} < {STANDING_MIN_SIZE}")
    return not notes, notes


def four_cocircuit_audit(M: BinaryMatroid, budget: SearchBudget = DEFAULT_BUDGET) -> AuditReport:
    """Each element of a 4-cocircuit has i4c triad-free ``si(M/e)``.

    Outside the standing hypotheses the check still runs on the 4-cocircuits
    (as information) but the report is not applicable.
    """
    applicable, notes = _standing(M, budget)
    witnesses = []
    fours = [m for m in cocircuit_masks(M) if popcount(m) == 4]
    for m in fours:
        for i in bits_of(m):
            c = _contraction(M, M.labels[i], budget)
            if not c.i4c or c.triad_count:
                w = _element_witness(c)
                w["cocircuit"] = M.sorted_labels(M.labels_of(m))
                w["triads"] = c.triad_count
                witnesses.append(w)
    if not fours:
        notes.append("no 4-element cocircuits; vacuous")
    if not applicable and witnesses:
        notes.append("conclusion would fail here; the hypotheses gate matters")
    return AuditReport("four-cocircuit", applicable,
                       (not witnesses) if applicable else None, witnesses, notes)


def _triangles_by_element(M: BinaryMatroid) -> dict[int, list[int]]:
    per: dict[int, list[int]] = {i: [] for i in range(M.size)}
    for t in triangle_masks(M):
        for i in bits_of(t):
            per[i].append(t)
    return per


def triangle_union_cocircuit_configs(M: BinaryMatroid) -> list[tuple[str, int]]:
    """Elements whose three triangles, minus the element, form a cocircuit."""
    cocs = set(cocircuit_masks(M))
    out = []
    for i, ts in _triangles_by_element(M).items():
        if len(ts) != 3:
            continue
        union = (ts[0] | ts[1] | ts[2]) & ~(1 << i)
        if union in cocs:
            out.append((M.labels[i], union))
    return out


def spike_cocircuit_configs(M: BinaryMatroid) -> list[int]:
    """6-cocircuits holding two 4-circuits that meet in two elements."""
    out = []
    for m in cocircuit_masks(M):
        if popcount(m) != 6:
            continue
        elems = bits_of(m)
        fours = [s for s in (sum(1 << i for i in c) for c in combinations(elems, 4))
                 if M.rank_mask(s) == 3 and all(M.rank_mask(s & ~(1 << j)) == 3 for j in bits_of(s))]
        if any(popcount(a & b) == 2 and (a | b) == m for a, b in combinations(fours, 2)):
            out.append(m)
    return out


def _all_good_audit(name: str, M: BinaryMatroid, configs: list[tuple[str, int]],
                    budget: SearchBudget) -> AuditReport:
    applicable, notes = _standing(M, budget)
    if not applicable:
        return AuditReport(name, False, None, notes=notes)
    witnesses = []
    for tag, mask in configs:
        for i in bits_of(mask):
            c = _contraction(M, M.labels[i], budget)
            if not c.i4c:
                w = _element_witness(c)
                w["configuration"] = M.sorted_labels(M.labels_of(mask))
                if tag:
                    w["centre"] = tag
                witnesses.append(w)
    if not configs:
        notes.append("no configurations present; vacuous")
    else:
        notes.append(f"{len(configs)} configuration(s) checked")
    return AuditReport(name, True, not witnesses, witnesses, notes)


def triangle_union_cocircuit_audit(M: BinaryMatroid,
                                   budget: SearchBudget = DEFAULT_BUDGET) -> AuditReport:
    applicable, _ = _standing(M, budget)
    configs = triangle_union_cocircuit_configs(M) if applicable else []
    return _all_good_audit("triangle-union-cocircuit", M, configs, budget)


def spike_cocircuit_audit(M: BinaryMatroid, budget: SearchBudget = DEFAULT_BUDGET) -> AuditReport:
    applicable, _ = _standing(M, budget)
    configs = [("", m) for m in spike_cocircuit_configs(M)] if applicable else []
    return _all_good_audit("spike-cocircuit", M, configs, budget)


def small_classification_check(M: BinaryMatroid, budget: SearchBudget = DEFAULT_BUDGET) -> AuditReport:
    hyp = _hypotheses(M, budget)
    notes = []
    if hyp["census_uniform_k"] != 3:
        notes.append("census is not uniformly 3")
    if not hyp["internally_4_connected"]:
        notes.append("matroid is not internally 4-connected")
    if M.size > SMALL_LIMIT:
        notes.append(f"|E| = {M.size} > {SMALL_LIMIT}")
    if notes:
        return AuditReport("small-classification", False, None, notes=notes)
    witnesses = []
    for name in ("f7", "mk5"):
        ref = catalog(name)
        if ref.size == M.size:
            iso = find_isomorphism(M, ref)
            if iso is not None:
                witnesses.append({"type": "isomorphism", "target": name, "mapping": iso})
    return AuditReport("small-classification", True, bool(witnesses), witnesses,
                       [] if witnesses else ["isomorphic to neither F7 nor M(K5)"])


# -- Theorem verifier ------------------------------------------------------------

def fingerprint(M: BinaryMatroid) -> str:
    data = json.dumps([list(M.labels), row_space_basis(M.matrix).to_strings()])
    return hashlib.sha256(data.encode()).hexdigest()


def _scan_order(M: BinaryMatroid) -> list[str]:
    glue = [x for x in M.labels if x in S6_GLUE_LABELS]
    if len(glue) == len(S6_GLUE_LABELS):
        return glue + [x for x in M.labels if x not in glue]
    return list(M.labels)


def _element_result(M: BinaryMatroid, e: str, budget: SearchBudget) -> dict:
    try:
        c = _contraction(M, e, budget)
    except SearchIndeterminate:
        return {"element": e, "status": "indeterminate"}
    return {"element": e, "status": "good" if c.i4c else "bad",
            "separation": c.witness.to_dict(c.minor) if c.witness else None}


def theorem_verifier(M: BinaryMatroid, budget: SearchBudget = DEFAULT_BUDGET,
                     checkpoint: str | Path | None = None) -> TheoremReport:
    """Compute the elements ``e`` with ``si(M/e)`` internally 4-connected and
    check the two clauses of the theorem against them.

    With ``checkpoint`` the per-element results are appended to a JSON file as
    they are produced, and already-recorded elements are not recomputed.
    """
    hyp = _hypotheses(M, budget)
    hyp_ok = hyp["internally_4_connected"] and hyp["census_uniform_k"] == 3
    done: dict[str, dict] = {}
    path = Path(checkpoint) if checkpoint else None
    fp = fingerprint(M)
    if path and path.exists():
        saved = json.loads(path.read_text())
        if saved.get("fingerprint") == fp:
            done = {r["element"]: r for r in saved["elements"] if r["status"] != "indeterminate"}

    def save():
        if path:
            rows = [done[x] for x in M.labels if x in done]
            path.write_text(json.dumps({"fingerprint": fp, "elements": rows}, indent=1))

    todo = [x for x in _scan_order(M) if x not in done]
    loops = {x for x in todo if M.cols[M.index[x]] == 0}
    for x in loops:
        done[x] = {"element": x, "status": "bad", "separation": None, "note": "loop"}
    todo = [x for x in todo if x not in loops]
    if budget.threads > 1 and len(todo) > 1:
        inner = SearchBudget(budget.strategy, budget.node_limit, budget.time_limit, 1)
        with ThreadPoolExecutor(max_workers=budget.threads) as pool:
            for res in pool.map(lambda x: _element_result(M, x, inner), todo):
                done[res["element"]] = res
                save()
    else:
        for x in todo:
            done[x] = _element_result(M, x, budget)
            save()

    good = tuple(x for x in M.labels if done[x]["status"] == "good")
    bad = {x: done[x] for x in M.labels if done[x]["status"] == "bad"}
    indet = tuple(x for x in M.labels if done[x]["status"] == "indeterminate")
    clause, coc = "not-triggered", None
    if not indet and len(good) < 6:
        if len(good) == 5:
            clause = "ambiguous-size-5"
        else:
            gmask = M.mask(good)
            hit = [m for m in cocircuit_masks(M) if popcount(m) == 4 and gmask & ~m == 0]
            if hit:
                clause, coc = "satisfied", tuple(M.sorted_labels(M.labels_of(hit[0])))
            else:
                clause = "violated"
    return TheoremReport(hyp_ok, hyp, good, bad, indet,
                         len(good) >= 4, clause, coc)


def clear_caches() -> None:
    """Drop memoised i4c and contraction results (for timing cold runs)."""
    _i4c.cache_clear()
    _contraction.cache_clear()


# -- witness revalidation -------------------------------------------------------

def _check_separation(minor: BinaryMatroid, sep: dict) -> bool:
    mask = minor.mask(sep["side_x"])
    size = popcount(mask)
    return (lambda_mask(minor, mask) == sep["lambda"]
            and [size, minor.size - size] == sep["sizes"]
            and sep["lambda"] <= (sep["k"] - 1 if sep["k"] else sep["lambda"]))


def revalidate(M: BinaryMatroid, report: AuditReport | TheoremReport) -> bool:
    """Re-derive every witness of ``report`` from scratch against ``M``."""
    cocs = None
    if isinstance(report, TheoremReport):
        for e, res in report.bad.items():
            sep = res.get("separation")
            if sep is None:
                continue
            minor, _ = si_contract(M, e)
            if not _check_separation(minor, sep):
                return False
        if report.cocircuit:
            if M.mask(report.cocircuit) not in set(cocircuit_masks(M)):
                return False
        return set(report.good) | set(report.bad) | set(report.indeterminate) == set(M.labels)
    for w in report.witnesses:
        kind = w["type"]
        if kind == "cocircuit":
            cocs = cocs if cocs is not None else set(cocircuit_masks(M))
            if M.mask(w["elements"]) not in cocs:
                return False
        elif kind == "contraction":
            minor, _ = si_contract(M, w["element"])
            if w["separation"] and not _check_separation(minor, w["separation"]):
                return False
            if "triads" in w and len(triads(minor)) != w["triads"]:
                return False
        elif kind == "isomorphism":
            if not is_isomorphism(M, catalog(w["target"]), w["mapping"]):
                return False
        else:
            return False
    return True


__all__ = [
    "CensusReport", "AuditReport", "TheoremReport", "triangle_census",
    "odd_cocircuit_audit", "contraction_3conn_audit", "four_cocircuit_audit",
    "triangle_union_cocircuit_audit", "spike_cocircuit_audit",
    "small_classification_check", "theorem_verifier", "revalidate", "fingerprint",
    "triangle_union_cocircuit_configs", "spike_cocircuit_configs",
]
