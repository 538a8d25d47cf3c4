"""Command-line surface: deterministic, text-first, golden-file friendly.

Exit code 0 means every requested check passed; parse and limit errors go to
stderr with a nonzero exit.
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import random
import sys
from pathlib import Path

from . import fileio
from .biased import (
    BiasedGraph,
    ClassLiftOracle,
    FrameOracle,
    frame_circuits,
    is_linear_class,
    matroid_axiom_check,
)
from .errors import LimitExceeded, RecoveryError
from .gaingraph import GainGraph, quotient_gains
from .groups import (
    DEFAULT_GROUP_LIMIT,
    FiniteGroup,
    FrobeniusPartition,
    Subgroup,
    frobenius_partitions,
)
from .groups import quotient as group_quotient
from .lifts import (
    FrobeniusContext,
    LiftedMatroid,
    bases,
    circuits,
    contract_kernel_loop,
    contract_nonloop,
    contract_unbalanced_loop,
    delete,
    linear_class,
)
from .recovery import recover_partition
from .represent import incidence_matrix, verify_representation


def _limit(args) -> int:
    if getattr(args, "limit", None):
        return args.limit
    env = os.environ.get("FROBMAT_LIMIT")
    return int(env) if env else DEFAULT_GROUP_LIMIT


def _select_partition(group: FiniteGroup, selector: str, limit: int) -> FrobeniusPartition:
    parts = frobenius_partitions(group, limit=limit)
    if selector == "auto":
        nontrivial = [p for p in parts if p.is_nontrivial(group.order)]
        if len(nontrivial) != 1:
            raise ValueError(
                f"'auto' needs exactly one nontrivial partition, found {len(nontrivial)}"
            )
        return nontrivial[0]
    want = tuple(sorted(fileio.parse_id_list(selector)))
    for p in parts:
        if p.kernel.elements == want:
            return p
    raise ValueError(f"no Frobenius partition has kernel {list(want)}")


def _context(args) -> tuple[FiniteGroup, GainGraph, FrobeniusContext]:
    graph = fileio.load_graph(args.graph)
    part = _select_partition(graph.group, args.kernel, _limit(args))
    return graph.group, graph, FrobeniusContext(graph.group, part, validate=False)


def cmd_frobpart(args) -> int:
    group = fileio.load_group(args.group)
    parts = frobenius_partitions(group, limit=_limit(args))
    for i, p in enumerate(parts, start=1):
        print(fileio.format_partition(group, p, i))
    return 0


def cmd_rank(args) -> int:
    _, graph, ctx = _context(args)
    oracle = LiftedMatroid(ctx, graph)
    subset = (
        fileio.parse_id_list(args.subset)
        if args.subset is not None
        else list(oracle.ground)
    )
    print(oracle.rank(subset))
    return 0


def cmd_circuits(args) -> int:
    _, graph, ctx = _context(args)
    fam = linear_class(ctx, graph) if args.of == "linear-class" else circuits(ctx, graph)
    sys.stdout.write(fileio.format_circuits(fam))
    return 0


def cmd_bases(args) -> int:
    _, graph, ctx = _context(args)
    sys.stdout.write(fileio.format_circuits(bases(ctx, graph)))
    return 0


def cmd_matrix(args) -> int:
    graph = fileio.load_graph(args.graph)
    sys.stdout.write(incidence_matrix(graph).to_text())
    return 0


def cmd_verify(args) -> int:
    _, graph, ctx = _context(args)
    oracle = LiftedMatroid(ctx, graph)
    failures = 0

    def report(name: str, ok: bool, detail: str = ""):
        nonlocal failures
        line = f"{name}: {'PASS' if ok else 'FAIL'}"
        if detail and not ok:
            line += f" ({detail})"
        print(line)
        failures += 0 if ok else 1

    if args.axioms:
        ok, witness = matroid_axiom_check(oracle)
        report("axioms", ok, f"witness {witness}")
    if args.linear_class is not None:
        host = FrameOracle(oracle.quotient_biased)
        host_circuits = frame_circuits(oracle.quotient_biased)
        if args.linear_class == "":
            cand = linear_class(ctx, graph)
        else:
            cand = fileio.parse_circuits(Path(args.linear_class).read_text())
        try:
            ok, witness = is_linear_class(host, host_circuits, cand)
        except ValueError as exc:
            ok, witness = False, str(exc)
        report("linear-class", ok, f"modular-pair witness {witness}")
    if args.representation:
        ok, witness = verify_representation(ctx, graph, seed=args.seed)
        report("representation", ok, f"witness subset {witness}")
    if args.minors:
        ok, detail = _verify_minors(ctx, graph, oracle, args.seed)
        report("minors", ok, detail)
    return 1 if failures else 0


def _verify_minors(ctx, graph, oracle, seed: int) -> tuple[bool, str]:
    """Each single-edge minor must match the oracle-level minor on subsets."""
    rng = random.Random(seed)
    ids = list(oracle.ground)
    for e in graph.edges:
        if not e.is_loop:
            minor = contract_nonloop(ctx, graph, e.id)
        elif e.gain == 0:
            minor = contract_unbalanced_loop(ctx, graph, e.id)
        elif ctx.in_kernel(e.gain):
            minor = contract_kernel_loop(ctx, graph, e.id)
        else:
            minor = contract_unbalanced_loop(ctx, graph, e.id)
        deletion = delete(ctx, graph, e.id)
        rest = [i for i in ids if i != e.id]
        r_e = oracle.rank([e.id])
        if len(rest) <= 12:
            subsets = [
                combo
                for r in range(len(rest) + 1)
                for combo in itertools.combinations(rest, r)
            ]
        else:
            subsets = [
                tuple(i for i in rest if rng.random() < 0.5) for _ in range(300)
            ]
        for sub in subsets:
            if deletion.rank(sub) != oracle.rank(sub):
                return False, f"deletion of {e.id} differs on {sub}"
            if minor.rank(sub) != oracle.rank(set(sub) | {e.id}) - r_e:
                return False, f"contraction of {e.id} differs on {sub}"
    return True, ""


def cmd_minor(args) -> int:
    _, graph, ctx = _context(args)
    current = graph
    for eid in fileio.parse_id_list(args.delete or ""):
        current = delete(ctx, current, eid).graph
    for eid in fileio.parse_id_list(args.contract or ""):
        e = current.edge(eid)
        if not e.is_loop:
            current = contract_nonloop(ctx, current, eid).graph
        elif e.gain != 0 and ctx.in_kernel(e.gain):
            current = contract_kernel_loop(ctx, current, eid).graph
        else:
            current = contract_unbalanced_loop(ctx, current, eid).graph
    raw = json.loads(Path(args.graph).read_text())
    group_spec = raw.get("group") or raw.get("complete", {}).get("group")
    print(json.dumps(fileio.graph_to_spec(current, group_spec), indent=1))
    return 0


def cmd_recover(args) -> int:
    graph = fileio.load_graph(args.graph)
    group = graph.group
    kernel = Subgroup(tuple(sorted(fileio.parse_id_list(args.kernel))))
    if args.cls:
        members = fileio.parse_circuits(Path(args.cls).read_text())
        qgraph = quotient_gains(graph, group_quotient(group, kernel))
        oracle = ClassLiftOracle(BiasedGraph.from_gain_graph(qgraph), members)
    else:
        part = _select_partition(group, args.kernel, _limit(args))
        oracle = LiftedMatroid(FrobeniusContext(group, part, validate=False), graph)
    n = graph.vertex_count
    recovered = recover_partition(group, kernel, n, oracle, seed=args.seed)
    print(fileio.format_partition(group, recovered, 1))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="frobmat",
        description="Matroids from gain graphs over groups with Frobenius partitions",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, graph=True, kernel=True):
        if graph:
            p.add_argument("--graph", required=True, help="gain graph JSON file")
        if kernel:
            p.add_argument(
                "--kernel",
                default="auto",
                help="partition selector: 'auto' or kernel elements 'e1,e2,...'",
            )
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--limit", type=int, default=0, help="group enumeration cap")

    p = sub.add_parser("frobpart", help="list Frobenius partitions of a group")
    p.add_argument("--group", required=True, help="group spec JSON file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--limit", type=int, default=0)
    p.set_defaults(fn=cmd_frobpart)

    p = sub.add_parser("rank", help="rank of an edge subset")
    common(p)
    p.add_argument("--subset", default=None, help="edge ids 'i,j,...'; omit for all")
    p.set_defaults(fn=cmd_rank)

    p = sub.add_parser("circuits", help="circuit list")
    common(p)
    p.add_argument("--of", choices=("matroid", "linear-class"), default="matroid")
    p.set_defaults(fn=cmd_circuits)

    p = sub.add_parser("bases", help="basis list")
    common(p)
    p.set_defaults(fn=cmd_bases)

    p = sub.add_parser("matrix", help="incidence matrix over GF(q)")
    p.add_argument("--graph", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--limit", type=int, default=0)
    p.set_defaults(fn=cmd_matrix)

    p = sub.add_parser("verify", help="verification report")
    common(p)
    p.add_argument("--axioms", action="store_true")
    p.add_argument(
        "--linear-class",
        nargs="?",
        const="",
        default=None,
        metavar="FILE",
        help="check the computed class, or a circuit-list file when given",
    )
    p.add_argument("--representation", action="store_true")
    p.add_argument("--minors", action="store_true")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("minor", help="delete/contract edges, print the graph")
    common(p)
    p.add_argument("--delete", default="", help="edge ids to delete")
    p.add_argument("--contract", default="", help="edge ids to contract")
    p.set_defaults(fn=cmd_minor)

    p = sub.add_parser("recover", help="recover the partition from a lift")
    common(p, kernel=False)
    p.add_argument("--kernel", required=True, help="kernel elements 'e1,e2,...'")
    p.add_argument(
        "--class",
        dest="cls",
        default="",
        metavar="FILE",
        help="linear-class circuit list; omitted = rebuild from the kernel's partition",
    )
    p.set_defaults(fn=cmd_recover)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, LimitExceeded, RecoveryError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
