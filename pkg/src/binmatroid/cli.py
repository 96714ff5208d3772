"""Command-line interface.

Exit codes: 0 when the report verdict is ``pass``, 1 for ``fail``, 2 for
``not-applicable``, ``indeterminate`` or any input error.  Reports end with a
JSON mirror of their contents after a ``--- json`` line.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import analysis, connectivity
from .connectivity import SearchBudget, SearchIndeterminate
from .constructions import catalog, graphic, parse_edge_list
from .io import MatroidFormatError, read_matroid, render_matroid
from .matroid import (
    UnknownElementError,
    canonical,
    cocircuits,
    contract,
    delete,
    dual,
    restrict,
    simplify,
    triads,
    triangles,
)

EXIT = {"pass": 0, "fail": 1, "not-applicable": 2, "indeterminate": 2}


class _Report:
    def __init__(self, argv: list[str]):
        self.argv = argv
        self.blocks: list[str] = []
        self.data: dict = {"command": " ".join(argv)}

    def emit(self, verdict: str, out) -> int:
        self.data["verdict"] = verdict
        lines = [f"command: {' '.join(self.argv)}", f"verdict: {verdict}"]
        lines += self.blocks
        lines.append("--- json")
        lines.append(json.dumps(self.data, indent=2, sort_keys=True))
        out.write("\n".join(lines) + "\n")
        return EXIT[verdict]


def _budget(args) -> SearchBudget:
    threads = 1 if args.canonical else args.threads
    return SearchBudget(getattr(args, "strategy", "bnb") or "bnb", args.budget_nodes,
                        args.budget_seconds, threads)


def _labels(M, spec: str | None) -> list[str]:
    if not spec:
        return []
    return [x for x in spec.split(",") if x]


def _sep_block(M, w) -> str:
    return f"witness {w.kind} lambda={w.lam} sizes={w.sizes[0]},{w.sizes[1]}: " + \
        " ".join(M.sorted_labels(w.side_x))


def cmd_gen(args, out) -> int:
    if args.graph:
        with open(args.graph, encoding="utf-8") as fh:
            M = graphic(parse_edge_list(fh.read()))
    else:
        params = {k: v for k, v in (("n", args.n), ("r", args.r)) if v is not None}
        M = catalog(args.id, **params)
    out.write(render_matroid(M))
    return 0


def cmd_check(args, out, argv) -> int:
    M = read_matroid(args.input)
    budget = _budget(args)
    rep = _Report(argv)
    if args.kind == "census3":
        c = analysis.triangle_census(M)
        rep.data["census"] = c.to_dict()
        rep.blocks.append(f"triangles: {c.total_triangles}")
        odd = [x for x in M.labels if c.per_element[x] != 3]
        for x in odd:
            rep.blocks.append(f"witness element {x} in {c.per_element[x]} triangles")
        return rep.emit("pass" if c.uniform_k == 3 else "fail", out)
    if args.kind in ("i4c", "3conn"):
        if args.kind == "i4c":
            ok, w = connectivity.is_internally_4_connected(M, budget)
        else:
            w = connectivity._small_separation(M, 3, budget)
            ok = w is None
        rep.data["witness"] = w.to_dict(M) if w else None
        if w:
            rep.blocks.append(_sep_block(M, w))
        return rep.emit("pass" if ok else "fail", out)
    audit = analysis.odd_cocircuit_audit(M, budget)
    rep.data["audit"] = audit.to_dict()
    for w in audit.witnesses:
        rep.blocks.append("witness cocircuit: " + " ".join(w["elements"]))
    rep.blocks += [f"note: {n}" for n in audit.notes]
    return rep.emit(audit.verdict, out)


def cmd_theorem(args, out, argv) -> int:
    M = read_matroid(args.input)
    report = analysis.theorem_verifier(M, _budget(args), checkpoint=args.checkpoint)
    rep = _Report(argv)
    rep.data["theorem"] = report.to_dict()
    rep.blocks.append(f"hypotheses: {'hold' if report.hypotheses_ok else 'fail'}")
    rep.blocks.append(f"good elements ({len(report.good)}): " + " ".join(report.good))
    for e, res in report.bad.items():
        sep = res.get("separation")
        detail = " ".join(sep["side_x"]) if sep else res.get("note", "")
        rep.blocks.append(f"witness bad {e}: {sep['kind'] if sep else ''} {detail}".rstrip())
    rep.blocks.append(f"min4: {'ok' if report.min4_ok else 'violated'}")
    rep.blocks.append(f"cocircuit clause: {report.cocircuit_clause}")
    verdict = report.verdict
    return rep.emit(verdict, out)


def cmd_transform(args, out) -> int:
    M = read_matroid(args.input)
    labels = _labels(M, args.elements)
    op = args.op
    if op == "dual":
        R = dual(M)
    elif op == "delete":
        R = delete(M, labels)
    elif op == "contract":
        R = contract(M, labels)
    elif op == "restrict":
        R = restrict(M, labels)
    else:
        R, _ = simplify(M)
    out.write(render_matroid(canonical(R)))
    return 0


def cmd_separations(args, out, argv) -> int:
    M = read_matroid(args.input)
    rep = _Report(argv)
    w = connectivity.find_separation(M, args.lambda_bound, args.min_side, args.min_side,
                                     _budget(args))
    rep.data["witness"] = w.to_dict(M) if w else None
    rep.blocks.append(_sep_block(M, w) if w else "witness: none")
    return rep.emit("fail" if w else "pass", out)


def cmd_enumerate(args, out, argv) -> int:
    M = read_matroid(args.input)
    rep = _Report(argv)
    if args.kind == "triangles":
        sets = list(triangles(M).triangles)
    elif args.kind == "triads":
        sets = list(triads(M).triangles)
    elif args.kind == "cocircuits":
        sets = cocircuits(M)
    else:
        sets = [t | s for t, s in connectivity.find_4fans(M)]
    rows = [M.sorted_labels(s) for s in sets]
    rep.data[args.kind] = rows
    rep.data["count"] = len(rows)
    rep.blocks.append(f"count: {len(rows)}")
    rep.blocks += [" ".join(r) for r in rows]
    return rep.emit("pass", out)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget-nodes", type=int, default=10**9)
    common.add_argument("--budget-seconds", type=float, default=3600.0)
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--canonical", action="store_true",
                        help="force sequential search for byte-stable output")

    p = argparse.ArgumentParser(prog="binmatroid", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="emit a catalog or graphic matroid")
    g.add_argument("id", nargs="?", help="catalog id, e.g. f7, mk5, pg32, wheel, section6-m")
    g.add_argument("--n", type=int, help="wheel size")
    g.add_argument("--r", type=int, help="projective geometry dimension")
    g.add_argument("--graph", help="edge-list file ('u v label' per line)")

    c = sub.add_parser("check", parents=[common], help="decide a property")
    c.add_argument("kind", choices=["i4c", "3conn", "no-odd-cocircuits", "census3"])
    c.add_argument("input", nargs="?", default="-")

    t = sub.add_parser("theorem", parents=[common], help="verify the good-element theorem")
    t.add_argument("input", nargs="?", default="-")
    t.add_argument("--budget", dest="budget_nodes", type=int)
    t.add_argument("--checkpoint", help="JSON file for resumable per-element results")

    tr = sub.add_parser("transform", parents=[common], help="apply a minor or duality operation")
    tr.add_argument("op", choices=["dual", "delete", "contract", "simplify", "restrict"])
    tr.add_argument("input", nargs="?", default="-")
    tr.add_argument("-e", "--elements", help="comma-separated labels")

    s = sub.add_parser("separations", parents=[common], help="search for a separation")
    s.add_argument("input", nargs="?", default="-")
    s.add_argument("--lambda", dest="lambda_bound", type=int, default=2)
    s.add_argument("--min-side", type=int, default=4)
    s.add_argument("--strategy", choices=["bnb", "exhaustive"], default="bnb")

    e = sub.add_parser("enumerate", parents=[common], help="list small circuit-like sets")
    e.add_argument("kind", choices=["triangles", "triads", "cocircuits", "fans"])
    e.add_argument("input", nargs="?", default="-")
    return p


def main(argv: list[str] | None = None, out=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    if getattr(args, "budget_nodes", None) is None:
        args.budget_nodes = 10**9
    try:
        if args.command == "gen":
            if not args.id and not args.graph:
                raise ValueError("gen needs a catalog id or --graph")
            return cmd_gen(args, out)
        if args.command == "transform":
            return cmd_transform(args, out)
        handler = {"check": cmd_check, "theorem": cmd_theorem,
                   "separations": cmd_separations, "enumerate": cmd_enumerate}[args.command]
        return handler(args, out, argv)
    except SearchIndeterminate as exc:
        rep = _Report(argv)
        rep.blocks.append(f"note: {exc}")
        return rep.emit("indeterminate", out)
    except (MatroidFormatError, UnknownElementError, KeyError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
