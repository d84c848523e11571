"""Command-line front end.

Exit codes: 0 equivalent, 1 not equivalent, 2 inconclusive, 3 usage or
parse error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .causal import initial_process, run_process
from .check import RELATIONS, Bounds, decide
from .multiset import format_mset
from .net import NetError, disjoint_union, reach_graph
from .place_bisim import check_place_bisimulation, cross_universe
from .reversibility import reversibility_probe
from .textio import emit_witness, export_dot, load_relation, parse_marking, parse_net
from .verdict import Outcome

EXIT = {Outcome.YES: 0, Outcome.NO: 1, Outcome.INCONCLUSIVE: 2}
USAGE_ERROR = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(USAGE_ERROR)


def _read(path: str, allow_dup: bool):
    return parse_net(Path(path).read_text(encoding="utf-8"), allow_dup)


def _load_pair(args):
    """Single net with two markings, or two nets joined by disjoint union."""
    n1, _ = _read(args.net1, args.allow_dup)
    if args.net2 is None:
        return n1, parse_marking(n1, args.marking1), parse_marking(n1, args.marking2), None
    n2, _ = _read(args.net2, args.allow_dup)
    u = disjoint_union(n1, n2)
    m1 = u.left(parse_marking(n1, args.marking1))
    m2 = u.right(parse_marking(n2, args.marking2))
    return u.net, m1, m2, u


def _bounds(args) -> Bounds:
    return Bounds(cap=args.bound, depth=args.depth, budget=args.budget, timeout=args.timeout)


def cmd_check(args) -> int:
    positional = args.inputs
    if len(positional) == 3:
        args.net1, args.marking1, args.marking2, args.net2 = positional[0], positional[1], positional[2], None
    elif len(positional) == 4:
        args.net1, args.marking1, args.net2, args.marking2 = positional
    else:
        raise _Usage("check expects NET M1 M2 or NET1 M1 NET2 M2")
    net, m1, m2, u = _load_pair(args)
    universe = cross_universe(u) if u is not None else None
    v = decide(net, m1, m2, args.relation, _bounds(args), universe)
    print(f"{args.relation}: {format_mset(m1)} vs {format_mset(m2)}: {v}")
    if v.relation is not None:
        print("relation: " + ", ".join(f"({a},{b})" for a, b in sorted(v.relation)))
    if v.trace:
        print("trace: " + " ".join(f"{m.dir}{m.side}:{m.trans}" for m in v.trace))
    stats = ", ".join(f"{k}={v.stats[k]}" for k in sorted(v.stats))
    if stats:
        print(f"stats: {stats}")
    if args.probe:
        _probe(net, v, m1, m2, args)
    if args.witness:
        Path(args.witness).write_text(emit_witness(v), encoding="utf-8")
    return EXIT[v.outcome]


def _probe(net, v, m1, m2, args):
    if not v.yes:
        print("probe: skipped (no witness)")
        return
    w = v.relation if v.relation is not None else v.linkings
    if w is None:
        print("probe: skipped (engine gives no re-checkable witness)")
        return
    rep = reversibility_probe(net, w, m1, m2, runs=100, maxlen=args.depth, seed=args.seed)
    print(f"probe: {rep.runs} runs, {rep.undo_states} undo states, {len(rep.violations)} violations")


def cmd_verify(args) -> int:
    if len(args.inputs) not in (2, 3):
        raise _Usage("verify-place-bisim expects NET [NET2] RELATION.json")
    *nets, rel_path = args.inputs
    net, _ = _read(nets[0], args.allow_dup)
    if len(nets) == 2:
        n2, _ = _read(nets[1], args.allow_dup)
        net = disjoint_union(net, n2).net
    R = load_relation(Path(rel_path).read_text(encoding="utf-8"))
    rep = check_place_bisimulation(net, R)
    if rep.ok:
        print("place bisimulation: yes")
        code = 0
    else:
        x = rep.violation
        print(f"place bisimulation: no (side {x.side}, transition {x.transition}, "
              f"marking {format_mset(x.marking)}: {x.reason})")
        code = 1
    if args.witness:
        Path(args.witness).write_text(emit_witness(rep), encoding="utf-8")
    return code


def cmd_reach(args) -> int:
    net, m0 = _read(args.net, args.allow_dup)
    if args.marking is not None:
        m0 = parse_marking(net, args.marking)
    g = reach_graph(net, m0, args.bound)
    state = "complete" if g.complete else "incomplete (cap hit)"
    print(f"{len(g.nodes)} nodes, {len(g.edges)} edges, {state}")
    if args.dot:
        Path(args.dot).write_text(export_dot(g), encoding="utf-8")
    return 0


def cmd_unfold(args) -> int:
    net, m0 = _read(args.net, args.allow_dup)
    if args.marking is not None:
        m0 = parse_marking(net, args.marking)
    p = run_process(net, m0, args.depth) if args.depth else initial_process(net, m0)
    c = p.cnet
    print(f"causal net with {len(c.events)} event{'s' if len(c.events) != 1 else ''}, "
          f"{len(c.conditions)} conditions; marking {format_mset(p.marking())}")
    if args.dot:
        Path(args.dot).write_text(export_dot(p), encoding="utf-8")
    return 0


class _Usage(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pnbisim", description="Behavioral equivalence checks for P/T nets.")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--allow-dup", action="store_true",
                        help="accept transitions with identical (pre, label, post)")

    c = sub.add_parser("check", help="decide an equivalence between two markings",
                       formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    c.add_argument("inputs", nargs="+", metavar="ARG", help="NET M1 M2  |  NET1 M1 NET2 M2")
    c.add_argument("--relation", choices=RELATIONS, default="place")
    c.add_argument("--bound", type=int, default=10_000, help="reachability node cap")
    c.add_argument("--depth", type=int, default=6, help="game depth when runs are infinite")
    c.add_argument("--budget", type=int, default=200_000, help="game position budget")
    c.add_argument("--timeout", type=float, default=60.0, help="place decider wall clock, seconds")
    c.add_argument("--seed", type=int, default=0, help="seed for --probe")
    c.add_argument("--witness", metavar="PATH", help="write witness JSON")
    c.add_argument("--probe", action="store_true", help="run the reversibility probe on a YES witness")
    common(c)
    c.set_defaults(func=cmd_check)

    v = sub.add_parser("verify-place-bisim", help="check a relation is a place bisimulation")
    v.add_argument("inputs", nargs="+", metavar="ARG", help="NET [NET2] RELATION.json")
    v.add_argument("--witness", metavar="PATH")
    common(v)
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("reach", help="build the reachability graph",
                       formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    r.add_argument("net")
    r.add_argument("marking", nargs="?")
    r.add_argument("--bound", type=int, default=10_000)
    r.add_argument("--dot", metavar="PATH")
    common(r)
    r.set_defaults(func=cmd_reach)

    u = sub.add_parser("unfold", help="build one deterministic process",
                       formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    u.add_argument("net")
    u.add_argument("marking", nargs="?")
    u.add_argument("--depth", type=int, default=3)
    u.add_argument("--dot", metavar="PATH")
    common(u)
    u.set_defaults(func=cmd_unfold)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (NetError, OSError, _Usage) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
