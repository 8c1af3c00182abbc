"""Command line entry point: ``nodal-clifford <command> ...``."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .constructions import cycle, extremal_bundle, random_semistable, star_of_cycles, theta, with_random_coords
from .curves import CurveError, h0, standard_model
from .formats import FormatError, parse_multidegree, read_bundle, read_graph, write_bundle, write_multidegree
from .graph import DualGraph, GraphError
from .harness import clifford_index_estimate, verify_clifford, verify_generic, verify_lemmas
from .multidegree import (
    canonical_multidegree,
    clifford_bound,
    dhar_chain,
    enumerate_stable,
    enumerate_uniform,
)

FAMILIES = ("cycle", "theta", "star_of_cycles", "random_semistable")


def _add_source(p: argparse.ArgumentParser) -> None:
    p.add_argument("graph", nargs="?", help="graph file (omit when using --family)")
    p.add_argument("--family", choices=FAMILIES)
    p.add_argument("--n", type=int, default=3, help="cycle length / random vertex count")
    p.add_argument("--k", type=int, default=3, help="theta edge count")
    p.add_argument("--leaves", type=int, default=3)
    p.add_argument("--cycle-len", type=int, default=2)
    p.add_argument("--edges", type=int, default=4, help="random edge count")
    p.add_argument("--random-coords", action="store_true", help="random node coordinates instead of 0, 1, 2, ...")


def _graph(args: argparse.Namespace) -> DualGraph:
    if args.graph and args.family:
        raise GraphError("give either a graph file or --family, not both")
    if args.graph:
        return read_graph(args.graph)
    if args.family == "cycle":
        return cycle(args.n)
    if args.family == "theta":
        return theta(args.k)
    if args.family == "star_of_cycles":
        return star_of_cycles(args.leaves, args.cycle_len)
    if args.family == "random_semistable":
        return random_semistable(args.n, args.edges, args.seed)[0]
    raise GraphError("no graph given: pass a graph file or --family")


def _model(args: argparse.Namespace):
    g = _graph(args)
    return with_random_coords(g, args.seed) if args.random_coords else standard_model(g)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# -- commands ----------------------------------------------------------------------


def cmd_analyze(args: argparse.Namespace) -> int:
    g = _graph(args)
    bf = g.bridge_forest
    info = {
        "vertices": len(g),
        "edges": len(g.edges),
        "genus": g.genus,
        "components": len(g.components),
        "semistable": g.is_semistable,
        "stable": g.is_stable,
        "bridges": sorted(g.bridges),
        "leaves": g.leaf_count,
        "forest_vertices": len(bf.forest),
        "canonical": write_multidegree(canonical_multidegree(g)).removeprefix("multidegree "),
    }
    if args.json:
        print(json.dumps(info, indent=2))
    else:
        for k, v in info.items():
            if k == "bridges":
                v = " ".join(map(str, v)) if v else "none"
            print(f"{k}: {v}")
    return 0


def cmd_enumerate(args: argparse.Namespace) -> int:
    g = _graph(args)
    it = enumerate_uniform(g) if args.stable is None else enumerate_stable(g, args.stable)
    for d in it:
        print(write_multidegree(d))
    return 0


def cmd_h0(args: argparse.Namespace) -> int:
    b = read_bundle(args.bundle)
    print(h0(b))
    return 0


def cmd_dhar(args: argparse.Namespace) -> int:
    g = _graph(args)
    text = Path(args.multidegree).read_text() if Path(args.multidegree).is_file() else args.multidegree
    if not text.lstrip().startswith("multidegree"):
        text = "multidegree " + text
    d = parse_multidegree(text, g)
    chain = dhar_chain(g, d, args.vertex)
    for i, H in enumerate(chain):
        print(f"H{i}: {' '.join(map(str, sorted(H)))}")
    print(f"dhar: {' '.join(map(str, sorted(chain[-1])))}")
    return 0


def cmd_extremal(args: argparse.Namespace) -> int:
    m = _model(args)
    b = extremal_bundle(m)
    x = h0(b)
    header = f"# extremal bundle: total {b.total}, h0 {x}, bound {clifford_bound(m.graph, b.degree)}\n"
    _emit(header + write_bundle(b), args.output)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    m = _model(args)
    reports = {}
    if args.campaign in ("clifford", "all"):
        r = verify_clifford(m, args.samples, args.seed, args.workers)
        r.dump_witnesses(args.witness_dir)
        reports["clifford"] = r.to_json()
    if args.campaign in ("generic", "all"):
        r = verify_generic(m, args.trials, args.seed, args.workers)
        r.dump_witnesses(args.witness_dir)
        reports["generic"] = r.to_json()
    if args.campaign in ("lemmas", "all"):
        reports["lemmas"] = verify_lemmas(m, args.seed, args.lemma_samples).to_json()
    out = reports[args.campaign] if args.campaign != "all" else {"version": 1, "seed": args.seed, "campaigns": reports}
    text = json.dumps(out, indent=2) + "\n"
    _emit(text, args.report)
    if args.report:
        exceed = sum(1 for r in reports.values() for e in r.get("entries", []) if e["max_h0"] > Fraction(e["bound"]))
        print(f"wrote {args.report}: {exceed} exceedances", file=sys.stderr)
    return 0 if all(r["passed"] for r in reports.values()) else 1


def cmd_index(args: argparse.Namespace) -> int:
    m = _model(args)
    est = clifford_index_estimate(m, args.samples, args.seed)
    print(f"estimate: {'inf' if est.infinite else est.value}")
    if est.witness is not None:
        print(f"witness: {est.witness_kind} {write_multidegree(est.witness.degree)}")
        if args.witness:
            Path(args.witness).write_text(write_bundle(est.witness))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nodal-clifford", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help)
        p.add_argument("--seed", type=int, default=0)
        return p

    p = add("analyze", "graph invariants")
    _add_source(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = add("enumerate", "list uniform (or stable) multidegrees")
    _add_source(p)
    p.add_argument("--stable", type=int, metavar="TOTAL", help="stable multidegrees of this total instead")
    p.set_defaults(func=cmd_enumerate)

    p = add("h0", "h0 of a bundle file")
    p.add_argument("bundle")
    p.set_defaults(func=cmd_h0)

    p = add("dhar", "Dhar decomposition")
    _add_source(p)
    p.add_argument("--multidegree", required=True, help="'v:int ...' or a multidegree file")
    p.add_argument("--vertex", type=int, required=True)
    p.set_defaults(func=cmd_dhar)

    p = add("extremal", "emit the extremal bundle of a model")
    _add_source(p)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_extremal)

    p = add("verify", "run verification campaigns and write a JSON report")
    _add_source(p)
    p.add_argument("--campaign", choices=("clifford", "generic", "lemmas", "all"), default="clifford")
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--lemma-samples", type=int, default=10)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--report")
    p.add_argument("--witness-dir", default="witnesses")
    p.set_defaults(func=cmd_verify)

    p = add("index", "Clifford index estimate")
    _add_source(p)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--witness")
    p.set_defaults(func=cmd_index)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (FormatError, GraphError, CurveError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
