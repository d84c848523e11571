"""Interleaving and structure-preserving bisimilarity on bounded nets."""

from __future__ import annotations

from collections import deque

from .closure import Linking, linkings_between, pi1, pi2, sublinkings_with_left, sublinkings_with_right
from .multiset import Multiset
from .net import Marking, PetriNet, fire, reach_graph
from .verdict import Move, Outcome, Verdict


# -- interleaving --------------------------------------------------------


def _union_graph(net: PetriNet, m1: Marking, m2: Marking, cap: int):
    g1 = reach_graph(net, m1, cap)
    g2 = reach_graph(net, m2, cap)
    complete = g1.complete and g2.complete
    nodes = sorted(set(g1.nodes) | set(g2.nodes), key=Multiset.sort_key)
    succ = {m: [] for m in nodes}
    for src, tid, dst in set(g1.edges) | set(g2.edges):
        succ[src].append((tid, dst))
    for m in nodes:
        succ[m].sort(key=lambda e: (e[0], e[1].sort_key()))
    return nodes, succ, complete


def refine(nodes: list, succ: dict, label) -> list:
    """Partition refinement by signature splitting.

    Returns the block map of every round; ``rounds[-1]`` is the coarsest
    bisimulation. ``label(tid)`` gives the action of an edge.
    """
    block = {m: 0 for m in nodes}
    rounds = [block]
    while True:
        sigs = {}
        new = {}
        for m in nodes:
            sig = (block[m], frozenset((label(t), block[d]) for t, d in succ[m]))
            new[m] = sigs.setdefault(sig, len(sigs))
        if len(sigs) == len(set(block.values())):
            return rounds
        block = new
        rounds.append(block)


def _split_round(rounds, a, b):
    for k, blk in enumerate(rounds):
        if blk[a] != blk[b]:
            return k
    return None


def _distinguishing_play(succ, label, rounds, a, b) -> list:
    """Principal line of Spoiler's strategy: a move that every answer loses
    strictly faster, followed by the first such answer."""
    trace = []
    while True:
        k = _split_round(rounds, a, b)
        if k is None or k == 0:  # pragma: no cover
            return trace
        prev = rounds[k - 1]
        found = None
        for side, (x, y) in ((1, (a, b)), (2, (b, a))):
            for t, dx in succ[x]:
                answers = [(u, dy) for u, dy in succ[y] if label(u) == label(t)]
                if all(prev[dx] != prev[dy] for _, dy in answers):
                    found = (side, t, dx, answers)
                    break
            if found:
                break
        side, t, dx, answers = found
        trace.append(Move("fwd", side, t))
        if not answers:
            return trace
        u, dy = answers[0]
        trace.append(Move("fwd", 3 - side, u))
        a, b = (dx, dy) if side == 1 else (dy, dx)


def interleaving_bisimilar(net: PetriNet, m1: Marking, m2: Marking, cap: int = 10_000) -> Verdict:
    net.check_marking(m1)
    net.check_marking(m2)
    nodes, succ, complete = _union_graph(net, m1, m2, cap)
    stats = {"configurations": len(nodes)}
    if not complete:
        return Verdict(Outcome.INCONCLUSIVE, reason=f"reachability cap {cap} hit", stats=stats)
    label = lambda tid: net.transition(tid).label  # noqa: E731
    rounds = refine(nodes, succ, label)
    stats["rounds"] = len(rounds) - 1
    final = rounds[-1]
    if final[m1] == final[m2]:
        cls = sorted((m for m in nodes if final[m] == final[m1]), key=Multiset.sort_key)
        return Verdict(Outcome.YES, reason="same bisimulation class", stats=stats,
                       strategy={"class": cls})
    trace = _distinguishing_play(succ, label, rounds, m1, m2)
    stats["depth"] = len([mv for mv in trace if mv.side == trace[0].side]) if trace else 0
    return Verdict(Outcome.NO, reason="distinguishing play found", trace=trace, stats=stats)


# -- structure-preserving bisimulation -----------------------------------


def _challenges(net: PetriNet, l: Linking):
    """Spoiler challenges on a linking: ``(side, t, c)`` with ``c`` a
    sub-linking whose projection on ``side`` is the pre-set of ``t``."""
    p1, p2 = pi1(l), pi2(l)
    for t in net.transitions:
        if t.pre <= p1:
            for c in sublinkings_with_left(l, t.pre):
                yield 1, t, c
    for t in net.transitions:
        if t.pre <= p2:
            for c in sublinkings_with_right(l, t.pre):
                yield 2, t, c


def _responses(net: PetriNet, l: Linking, side: int, t, c: Linking):
    """Linkings reachable by Duplicator's answers, with the answering transition."""
    rest = l - c
    other = pi2(c) if side == 1 else pi1(c)
    for u in net.with_pre(other):
        if u.label != t.label:
            continue
        if side == 1:
            bars = linkings_between(t.post, u.post)
        else:
            bars = linkings_between(u.post, t.post)
        for cbar in bars:
            yield u, rest + cbar


def sp_bisimilar(net: PetriNet, m1: Marking, m2: Marking, cap: int = 10_000,
                 budget: int = 200_000) -> Verdict:
    """Greatest sp-bisimulation over the linkings reachable from the roots.

    The universe is the closure of all linkings of ``(m1, m2)`` under joint
    moves; a linking is dropped as soon as one challenge has no surviving
    answer.
    """
    net.check_marking(m1)
    net.check_marking(m2)
    stats = {}
    if m1.size != m2.size:
        return Verdict(Outcome.NO, reason="markings differ in size", trace=[], stats={"configurations": 0})
    for m in (m1, m2):
        if not reach_graph(net, m, cap).complete:
            return Verdict(Outcome.INCONCLUSIVE, reason=f"reachability cap {cap} hit (unbounded?)",
                           stats=stats)
    roots = linkings_between(m1, m2)
    index = {l: i for i, l in enumerate(roots)}
    universe = list(roots)
    moves: list = []  # per linking: [(side, t, c, [(u, target)])]
    queue = deque(range(len(roots)))
    while queue:
        i = queue.popleft()
        l = universe[i]
        lm = []
        for side, t, c in _challenges(net, l):
            resp = []
            for u, nxt in _responses(net, l, side, t, c):
                if nxt not in index:
                    index[nxt] = len(universe)
                    universe.append(nxt)
                    queue.append(index[nxt])
                    if len(universe) > budget:
                        return Verdict(Outcome.INCONCLUSIVE,
                                       reason=f"linking universe exceeds budget {budget}",
                                       stats={"configurations": len(universe)})
                resp.append((u, index[nxt]))
            lm.append((side, t, c, resp))
        moves.append(lm)

    good = [True] * len(universe)
    killer = {}
    live = {}
    preds: dict = {}
    work = deque()
    for i, lm in enumerate(moves):
        for j, (_, _, _, resp) in enumerate(lm):
            tg = {k for _, k in resp}
            live[(i, j)] = len(tg)
            for k in tg:
                preds.setdefault(k, []).append((i, j))
            if not tg and good[i]:
                good[i] = False
                killer[i] = j
                work.append(i)
    while work:
        x = work.popleft()
        for i, j in preds.get(x, ()):
            live[(i, j)] -= 1
            if live[(i, j)] == 0 and good[i]:
                good[i] = False
                killer[i] = j
                work.append(i)

    stats["configurations"] = len(universe)
    surviving = sorted((universe[i] for i in range(len(universe)) if good[i]), key=Multiset.sort_key)
    winners = [l for l in roots if good[index[l]]]
    if winners:
        return Verdict(Outcome.YES, linkings=surviving, reason="a root linking survives",
                       strategy={"roots": winners}, stats=stats)
    trace = _sp_trace(universe, moves, killer, index[roots[0]]) if roots else []
    return Verdict(Outcome.NO, reason="every root linking is refuted", trace=trace, stats=stats)


def _sp_trace(universe, moves, killer, i) -> list:
    trace = []
    seen = set()
    while i not in seen:
        seen.add(i)
        side, t, _, resp = moves[i][killer[i]]
        trace.append(Move("fwd", side, t.id))
        if not resp:
            break
        u, i = resp[0]
        trace.append(Move("fwd", 3 - side, u.id))
    return trace


def verify_sp_bisimulation(net: PetriNet, linkings) -> list:
    """Direct check of both transfer clauses for every linking of the set.

    Returns the list of failures ``(linking, side, transition, sub-linking)``;
    empty means the set is an sp-bisimulation.
    """
    S = set(linkings)
    bad = []
    for l in sorted(S, key=Multiset.sort_key):
        for side, t, c in _challenges(net, l):
            if not any(nxt in S for _, nxt in _responses(net, l, side, t, c)):
                bad.append((l, side, t.id, c))
    return bad
