"""Command-line interface.

Exit codes: 0 success (a negative verdict is still a success), 2 bad input,
3 infeasible descent or a failed internal invariant.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .circuits import circuit_matrix, fundamental_circuit_matrix
from .errors import (
    CircuitCapExceeded,
    GraphError,
    InfiniteLabelPresent,
    ParseError,
    SemifactError,
    ValidationError,
)
from .graph import (
    DEFAULT_CIRCUIT_CAP,
    Circuit,
    LabelledGraph,
    contract_infinite,
    nth_blowup,
    spanning_tree,
    total_blowup,
)
from .io import GraphDocument, parse_graph_file
from .labellings import component_group, descent_solve, pushforward_multidegree
from .verdict import METHODS, Verdict, semifactorial_verdict
from .zlinalg import IntMatrix, smith_diagonal, snf

SCHEMA_VERSION = "1"
SCHEMA_DIR = Path(__file__).parent / "schema"
REPORT_SCHEMA = SCHEMA_DIR / "report.schema.json"
CHECK_SCHEMA = SCHEMA_DIR / "check.schema.json"

EXIT_OK, EXIT_INPUT, EXIT_INFEASIBLE = 0, 2, 3


class InputError(Exception):
    pass


def _load(path: str) -> tuple[GraphDocument, LabelledGraph]:
    doc = parse_graph_file(path)
    return doc, doc.to_graph()


def verdict_dict(v: Verdict) -> dict:
    return {
        "circuit_coprime": v.circuit_coprime,
        "semi_factorial": v.semi_factorial,
        "neron_lft_model": v.neron_lft_model,
        "method": v.method,
        "witness": (None if v.circuit_coprime
                    else {"prime": v.prime, "edges": list(v.witness_edges)}),
    }


def _fundamental_data(g: LabelledGraph) -> dict:
    gc, _ = contract_infinite(g)
    t = spanning_tree(gc)
    diag = smith_diagonal(fundamental_circuit_matrix(gc, t, labelled=True).matrix) if gc.nullity else ()
    return {
        "contracted_vertex_order": list(gc.vertices),
        "contracted_edge_order": [e.id for e in gc.edges],
        "tree_edges": [e.id for e in gc.edges if e.id in t.tree_edges],
        "circuit_order": list(t.links),
        "snf_diagonal": list(diag),
    }


def graph_report(doc: GraphDocument, g: LabelledGraph, method: str,
                 cap: int = DEFAULT_CIRCUIT_CAP) -> dict:
    t0 = time.perf_counter()
    v = semifactorial_verdict(g, method, cap)
    t1 = time.perf_counter()
    fund = _fundamental_data(g)
    h = component_group(g)
    t2 = time.perf_counter()
    entry = {"name": doc.name,
             "vertex_order": list(g.vertices),
             "edge_order": [e.id for e in g.edges]}
    entry.update(verdict_dict(v))
    entry.update(fund)
    entry["component_group"] = {"free_rank": h.free_rank, "torsion": list(h.torsion)}
    entry["timings"] = {"verdict_s": round(t1 - t0, 6), "total_s": round(t2 - t0, 6)}
    return entry


def _describe_circuit(c: Circuit) -> str:
    return " ".join(f"{e}{'+' if s > 0 else '-'}" for e, s in zip(c.edges, c.agrees))


def cmd_check(args) -> int:
    doc, g = _load(args.file)
    v = semifactorial_verdict(g, args.method, args.cap)
    if args.json:
        out = {"schema_version": SCHEMA_VERSION, "name": doc.name}
        out.update(verdict_dict(v))
        out["snf_diagonal"] = list(v.snf_diagonal) if v.snf_diagonal is not None else None
        out["notes"] = list(v.notes)
        print(json.dumps(out, indent=2, ensure_ascii=False))
        return EXIT_OK
    print(v.summary())
    if v.circuit_coprime:
        print("snf diagonal: " + " ".join(map(str, v.snf_diagonal or ())))
    else:
        print(f"witness: prime {v.prime}, circuit {','.join(v.witness_edges)}")
        for note in v.notes:
            print(f"note: {note}")
    return EXIT_OK


def cmd_matrices(args) -> int:
    doc, g = _load(args.file)
    if args.fundamental:
        tree = args.tree.split(",") if args.tree else None
        bundle = fundamental_circuit_matrix(g, spanning_tree(g, tree), labelled=args.labelled)
    else:
        if args.tree:
            raise InputError("--tree only applies together with --fundamental")
        bundle = circuit_matrix(g, labelled=args.labelled, cap=args.cap)
    print("# edges: " + " ".join(bundle.edge_order))
    if bundle.tree is not None:
        print("# links: " + " ".join(bundle.tree.links))
    for i, c in enumerate(bundle.circuits):
        print(f"# row {i + 1}: {_describe_circuit(c)}")
    sys.stdout.write(bundle.matrix.to_text())
    return EXIT_OK


def cmd_snf(args) -> int:
    if (args.file is None) == (args.matrix is None):
        raise InputError("give exactly one of FILE or --matrix MFILE")
    if args.matrix:
        try:
            m = IntMatrix.from_text(Path(args.matrix).read_text(encoding="utf-8"))
        except (OSError, ValueError, SemifactError) as exc:
            raise InputError(f"{args.matrix}: {exc}") from None
    else:
        _, g = _load(args.file)
        gc, _ = contract_infinite(g)
        m = fundamental_circuit_matrix(gc, labelled=True).matrix
        print("# labelled fundamental circuit matrix after contracting infinite edges")
        print("# edges: " + " ".join(e.id for e in gc.edges))
    dec = snf(m)
    print("diagonal: " + " ".join(map(str, dec.diagonal)))
    if args.transforms:
        for name, mat in (("A", dec.a), ("D", dec.d), ("B", dec.b)):
            print(f"# {name}")
            sys.stdout.write(mat.to_text())
    return EXIT_OK


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_blowup(args) -> int:
    doc, g = _load(args.file)
    if args.total:
        bg, suffix = total_blowup(g), "total"
    else:
        if args.n is None or args.n < 0:
            raise InputError("--n N (N >= 0) is required unless --total is given")
        bg, suffix = nth_blowup(g, args.n), f"blowup{args.n}"
    _write(GraphDocument.from_graph(bg.graph, f"{doc.name}_{suffix}").to_json(), args.output)
    return EXIT_OK


def cmd_contract(args) -> int:
    doc, g = _load(args.file)
    gc, _ = contract_infinite(g)
    _write(GraphDocument.from_graph(gc, f"{doc.name}_contracted").to_json(), args.output)
    return EXIT_OK


def cmd_group(args) -> int:
    doc, g = _load(args.file)
    h = component_group(g)
    if args.json:
        print(json.dumps({"name": doc.name, "free_rank": h.free_rank,
                          "torsion": list(h.torsion)}, indent=2))
    else:
        print(f"free rank: {h.free_rank}")
        print("torsion: " + (" ".join(map(str, h.torsion)) or "none"))
        print(f"H = {h}")
    return EXIT_OK


def cmd_descend(args) -> int:
    doc, g = _load(args.file)
    if args.n < 0:
        raise InputError("--n must be non-negative")
    target = nth_blowup(g, args.n)
    try:
        alpha = json.loads(Path(args.alpha).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"{args.alpha}: {exc}") from None
    if not isinstance(alpha, dict) or not all(
            isinstance(v, int) and not isinstance(v, bool) for v in alpha.values()):
        raise InputError(f"{args.alpha}: alpha must be a JSON object of vertex id -> integer")
    unknown = sorted(set(alpha) - set(target.graph.vertices))
    if unknown:
        raise InputError(f"{args.alpha}: unknown vertex id(s) {unknown} in the level-{args.n} blow-up")
    phi = descent_solve(target, alpha)
    if phi is None:
        print(json.dumps({"name": doc.name, "level": args.n, "feasible": False}, indent=2))
        return EXIT_INFEASIBLE
    push = pushforward_multidegree(target, alpha, phi)
    print(json.dumps({"name": doc.name, "level": args.n, "feasible": True,
                      "phi": phi, "pushforward": push}, indent=2))
    return EXIT_OK


def _batch_one(path: Path, method: str, cap: int) -> dict:
    try:
        doc, g = _load(str(path))
        entry = graph_report(doc, g, method, cap)
    except (ParseError, ValidationError, GraphError, CircuitCapExceeded) as exc:
        return {"file": path.name, "error": str(exc)}
    return {"file": path.name, **entry}


def build_report(directory: str | Path, method: str = "prime-forest",
                 cap: int = DEFAULT_CIRCUIT_CAP, jobs: int = 1) -> dict:
    files = sorted(p for p in Path(directory).iterdir() if p.suffix == ".json" and p.is_file())
    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        entries = list(pool.map(lambda p: _batch_one(p, method, cap), files))
    return {"schema_version": SCHEMA_VERSION, "method": method, "graphs": entries}


def cmd_batch(args) -> int:
    if not Path(args.dir).is_dir():
        raise InputError(f"{args.dir}: not a directory")
    report = build_report(args.dir, args.method, args.cap, args.jobs)
    Path(args.report).write_text(json.dumps(report, indent=2, ensure_ascii=False) + "\n",
                                 encoding="utf-8")
    bad = sum(1 for e in report["graphs"] if "error" in e)
    print(f"{len(report['graphs'])} graph(s) processed, {bad} with errors -> {args.report}")
    return EXIT_INPUT if bad else EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="semifact",
        description="Circuit-coprimality and semi-factoriality of labelled dual graphs")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="decide circuit-coprimality / semi-factoriality")
    p.add_argument("file")
    p.add_argument("--method", choices=METHODS, default="prime-forest")
    p.add_argument("--json", action="store_true")
    p.add_argument("--cap", type=int, default=DEFAULT_CIRCUIT_CAP)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("matrices", help="print a (labelled) circuit matrix")
    p.add_argument("file")
    p.add_argument("--fundamental", action="store_true")
    p.add_argument("--labelled", action="store_true")
    p.add_argument("--tree", help="comma-separated spanning tree edge ids")
    p.add_argument("--cap", type=int, default=DEFAULT_CIRCUIT_CAP)
    p.set_defaults(func=cmd_matrices)

    p = sub.add_parser("snf", help="Smith normal form of a graph's lfc-matrix or a matrix file")
    p.add_argument("file", nargs="?")
    p.add_argument("--matrix", metavar="MFILE")
    p.add_argument("--transforms", action="store_true", help="also print A, D, B")
    p.set_defaults(func=cmd_snf)

    p = sub.add_parser("blowup", help="n-th or total blow-up graph")
    p.add_argument("file")
    p.add_argument("--n", type=int)
    p.add_argument("--total", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_blowup)

    p = sub.add_parser("contract", help="contract infinite edges")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_contract)

    p = sub.add_parser("group", help="component group H = coker of the multidegree operator")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_group)

    p = sub.add_parser("descend", help="descent witness on the n-th blow-up")
    p.add_argument("file")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", required=True, metavar="ALPHAFILE")
    p.set_defaults(func=cmd_descend)

    p = sub.add_parser("batch", help="report over every *.json graph in a directory")
    p.add_argument("dir")
    p.add_argument("--report", required=True, metavar="OUT")
    p.add_argument("--method", choices=METHODS, default="prime-forest")
    p.add_argument("--cap", type=int, default=DEFAULT_CIRCUIT_CAP)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_batch)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, ValidationError, GraphError, InfiniteLabelPresent,
            CircuitCapExceeded, InputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except AssertionError as exc:
        print(f"internal invariant failed: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
