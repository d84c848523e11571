"""Spoiler/Duplicator games on processes: cn, hcn, fc and hfc bisimilarity.

Positions are built explicitly from causal nets:

* cn / hcn: one shared causal net with two foldings (one per marking);
  Spoiler extends it through one folding, Duplicator must extend the same
  conditions through the other. Roots are all token pairings of the two
  initial markings.
* fc / hfc: two processes and an event bijection that must stay an
  isomorphism of their event orders; Duplicator answers an event with an
  event whose causal past is the image of the challenger's past.

Hereditary modes also let Spoiler undo a maximal event; the answer is
forced (same event, or its image under the bijection).

Positions are interned up to isomorphism and the winning region is the
greatest fixpoint on the explored graph. When every run of both markings
is finite the exploration closes and the verdict is exact. Otherwise
positions are explored up to ``depth`` events; frontier positions are
assumed winning for Duplicator, so refutations stay sound while a
surviving root only yields INCONCLUSIVE.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from .canon import CanonTable, LabeledDag, isomorphic
from .causal import CausalNet, _consumption_choices as _choices, _origin
from .closure import linkings_between
from .multiset import Multiset
from .net import InconclusiveError, Marking, PetriNet, is_acyclic, reach_graph
from .verdict import Move, Outcome, Verdict

MODES = ("int", "sp", "cn", "hcn", "fc", "hfc")


@dataclass
class GameConfig:
    mode: str = "cn"
    depth: Optional[int] = 6      # event bound used when runs are infinite
    budget: int = 200_000         # explored positions
    cap: int = 10_000             # reachability-graph node cap

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")

    @property
    def hereditary(self) -> bool:
        return self.mode in ("hcn", "hfc")


# -- positions -----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class JointPos:
    """Shared causal net with one folding per side (cn / hcn)."""
    cnet: CausalNet
    place: tuple   # (dict cond->place side 1, dict side 2)
    trans: tuple   # (dict event->transition side 1, dict side 2)

    def n_events(self) -> int:
        return len(self.cnet.events)

    def graph(self) -> LabeledDag:
        c = self.cnet
        p1, p2 = self.place
        t1, t2 = self.trans
        labels = {("b", b): ("b", p1[b], p2[b]) for b in c.conditions}
        labels.update({("e", e): ("e", t1[e], t2[e]) for e in c.events})
        edges = [(("b", b), ("e", e)) for e in c.events for b in c.pre[e]]
        edges += [(("e", e), ("b", b)) for e in c.events for b in c.post[e]]
        return LabeledDag(labels, edges)

    def marking(self, side: int) -> Marking:
        pl = self.place[side - 1]
        return Multiset([pl[b] for b in self.cnet.maximal()])


@dataclass(frozen=True, eq=False)
class PairPos:
    """Two processes plus an event bijection (fc / hfc)."""
    cnets: tuple
    place: tuple
    trans: tuple
    g: dict        # event of side 1 -> event of side 2

    def n_events(self) -> int:
        return len(self.g)

    def graph(self) -> LabeledDag:
        c1, c2 = self.cnets
        p1, p2 = self.place
        t1, t2 = self.trans
        ginv = {v: k for k, v in self.g.items()}
        labels = {("b1", b): ("b1", p1[b]) for b in c1.conditions}
        labels.update({("b2", b): ("b2", p2[b]) for b in c2.conditions})
        labels.update({("e", e): ("e", t1[e], t2[self.g[e]]) for e in c1.events})
        edges = []
        for e in c1.events:
            edges += [(("b1", b), ("e", e)) for b in c1.pre[e]]
            edges += [(("e", e), ("b1", b)) for b in c1.post[e]]
        for e in c2.events:
            k = ginv[e]
            edges += [(("b2", b), ("e", k)) for b in c2.pre[e]]
            edges += [(("e", k), ("b2", b)) for b in c2.post[e]]
        return LabeledDag(labels, edges)

    def marking(self, side: int) -> Marking:
        pl = self.place[side - 1]
        return Multiset([pl[b] for b in self.cnets[side - 1].maximal()])


@dataclass
class SpoilerMove:
    move: Move
    detail: tuple                 # ("fwd", consumed, tid) or ("bwd", event)
    responses: list = field(default_factory=list)  # [(Move, position)]


# -- move generation: cn / hcn --------------------------------------------


def joint_roots(m1: Marking, m2: Marking) -> list:
    roots = []
    for l in linkings_between(m1, m2):
        links = l.elements()
        c = CausalNet.initial(len(links))
        p1 = {i: a for i, (a, _) in enumerate(links)}
        p2 = {i: b for i, (_, b) in enumerate(links)}
        roots.append(JointPos(c, (p1, p2), ({}, {})))
    return roots


def joint_extend(net: PetriNet, pos: JointPos, side: int, consumed, t, u, pairs) -> JointPos:
    """Extend ``pos`` by one event folded to ``t`` on ``side`` and ``u`` on the other;
    ``pairs`` lists (side place, other place) for the new conditions."""
    c, e, new = pos.cnet.extend(consumed, t.label, len(pairs))
    o = 2 - side  # index of the other side
    s = side - 1
    places = [dict(pos.place[0]), dict(pos.place[1])]
    trans = [dict(pos.trans[0]), dict(pos.trans[1])]
    for b, (ps, po) in zip(new, pairs):
        places[s][b] = ps
        places[o][b] = po
    trans[s][e] = t.id
    trans[o][e] = u.id
    return JointPos(c, tuple(places), tuple(trans))


def joint_moves(net: PetriNet, pos: JointPos, hereditary: bool) -> list:
    c = pos.cnet
    maxconds = c.maximal()
    out = []
    for side in (1, 2):
        s, o = side - 1, 2 - side
        mine, other = pos.place[s], pos.place[o]
        current = Multiset([mine[b] for b in maxconds])
        key = lambda b: (_origin(c, b), mine[b], other[b])  # noqa: E731
        for t in net.transitions:
            if not t.pre <= current:
                continue
            for X in _choices(mine, maxconds, t.pre, key):
                opre = Multiset([other[b] for b in X])
                sm = SpoilerMove(Move("fwd", side, t.id), ("fwd", X, t.id))
                for u in net.with_pre(opre):
                    if u.label != t.label or u.post.size != t.post.size:
                        continue
                    for lk in linkings_between(t.post, u.post):
                        nxt = joint_extend(net, pos, side, X, t, u, lk.elements())
                        sm.responses.append((Move("fwd", o + 1, u.id), nxt))
                out.append(sm)
    if hereditary:
        for e in c.maximal_events():
            gone = set(c.post[e])
            nc = c.remove(e)
            places = tuple({b: p for b, p in pl.items() if b not in gone} for pl in pos.place)
            trans = tuple({x: tt for x, tt in tr.items() if x != e} for tr in pos.trans)
            target = JointPos(nc, places, trans)
            for side in (1, 2):
                o = 3 - side
                out.append(SpoilerMove(Move("bwd", side, pos.trans[side - 1][e]), ("bwd", e),
                                       [(Move("bwd", o, pos.trans[o - 1][e]), target)]))
    return out


# -- move generation: fc / hfc --------------------------------------------


def pair_root(m1: Marking, m2: Marking) -> PairPos:
    e1, e2 = m1.elements(), m2.elements()
    return PairPos((CausalNet.initial(len(e1)), CausalNet.initial(len(e2))),
                   (dict(enumerate(e1)), dict(enumerate(e2))), ({}, {}), {})


def _pair_fire(pos: PairPos, side: int, consumed, t):
    s = side - 1
    c, e, new = pos.cnets[s].extend(consumed, t.label, t.post.size)
    place = dict(pos.place[s])
    place.update(zip(new, t.post.elements()))
    trans = dict(pos.trans[s])
    trans[e] = t.id
    return c, place, trans, e


def pair_moves(net: PetriNet, pos: PairPos, hereditary: bool) -> list:
    out = []
    ginv = {v: k for k, v in pos.g.items()}
    maps = (pos.g, ginv)
    for side in (1, 2):
        s, o = side - 1, 2 - side
        cs, co = pos.cnets[s], pos.cnets[o]
        ps, po = pos.place[s], pos.place[o]
        ms, mo = cs.maximal(), co.maximal()
        cur_s = Multiset([ps[b] for b in ms])
        cur_o = Multiset([po[b] for b in mo])
        key_s = lambda b, c=cs: _origin(c, b)  # noqa: E731
        key_o = lambda b, c=co: _origin(c, b)  # noqa: E731
        to_other = maps[s]
        for t in net.transitions:
            if not t.pre <= cur_s:
                continue
            for X in _choices(ps, ms, t.pre, key_s):
                want = frozenset(to_other[x] for x in cs.past_of_conditions(X))
                sm = SpoilerMove(Move("fwd", side, t.id), ("fwd", X, t.id))
                c_new, p_new, t_new, e_new = _pair_fire(pos, side, X, t)
                for u in net.transitions:
                    if u.label != t.label or not u.pre <= cur_o:
                        continue
                    for Y in _choices(po, mo, u.pre, key_o):
                        if co.past_of_conditions(Y) != want:
                            continue
                        c2, p2, t2, e2 = _pair_fire(pos, o + 1, Y, u)
                        cn, pl, tr = [None, None], [None, None], [None, None]
                        cn[s], pl[s], tr[s] = c_new, p_new, t_new
                        cn[o], pl[o], tr[o] = c2, p2, t2
                        g = dict(pos.g)
                        if side == 1:
                            g[e_new] = e2
                        else:
                            g[e2] = e_new
                        nxt = PairPos(tuple(cn), tuple(pl), tuple(tr), g)
                        sm.responses.append((Move("fwd", o + 1, u.id), nxt))
                out.append(sm)
    if hereditary:
        for e1 in pos.cnets[0].maximal_events():
            e2 = pos.g[e1]
            target = pair_undo(pos, e1)
            t1, t2 = pos.trans[0][e1], pos.trans[1][e2]
            out.append(SpoilerMove(Move("bwd", 1, t1), ("bwd", e1), [(Move("bwd", 2, t2), target)]))
            out.append(SpoilerMove(Move("bwd", 2, t2), ("bwd", e2), [(Move("bwd", 1, t1), target)]))
    return out


def pair_undo(pos: PairPos, e1) -> PairPos:
    e2 = pos.g[e1]
    cn, pl, tr = [], [], []
    for s, e in ((0, e1), (1, e2)):
        c = pos.cnets[s]
        gone = set(c.post[e])
        cn.append(c.remove(e))
        pl.append({b: p for b, p in pos.place[s].items() if b not in gone})
        tr.append({x: t for x, t in pos.trans[s].items() if x != e})
    g = {k: v for k, v in pos.g.items() if k != e1}
    return PairPos(tuple(cn), tuple(pl), tuple(tr), g)


# -- solver --------------------------------------------------------------


@dataclass
class _Node:
    pos: object
    moves: Optional[list] = None  # list of (SpoilerMove, [target ids]); None = frontier


def finite_unfolding(net: PetriNet, m1: Marking, m2: Marking, cap: int) -> bool:
    """Both markings have a complete, acyclic reachability graph."""
    for m in (m1, m2):
        g = reach_graph(net, m, cap)
        if not g.complete:
            return False
        try:
            if not is_acyclic(g):
                return False
        except InconclusiveError:  # pragma: no cover
            return False
    return True


def game_decide(net: PetriNet, m1: Marking, m2: Marking, cfg: GameConfig = None) -> Verdict:
    cfg = cfg or GameConfig()
    if cfg.mode == "int":
        from .engines import interleaving_bisimilar
        return interleaving_bisimilar(net, m1, m2, cfg.cap)
    if cfg.mode == "sp":
        from .engines import sp_bisimilar
        return sp_bisimilar(net, m1, m2, cfg.cap, cfg.budget)
    net.check_marking(m1)
    net.check_marking(m2)
    joint = cfg.mode in ("cn", "hcn")
    if joint:
        roots = joint_roots(m1, m2)
        if not roots:
            return Verdict(Outcome.NO, reason="markings differ in size", trace=[],
                           stats={"configurations": 0, "depth": 0})
        expand = joint_moves
    else:
        roots = [pair_root(m1, m2)]
        expand = pair_moves
    finite = finite_unfolding(net, m1, m2, cfg.cap)
    limit = None if finite else cfg.depth
    return _solve(net, roots, expand, cfg, limit, finite)


def _solve(net, roots, expand, cfg: GameConfig, limit, finite) -> Verdict:
    table = CanonTable()
    nodes: list[_Node] = []
    root_ids = []
    queue = deque()

    def intern(pos) -> int:
        idx, new = table.intern(pos.graph(), pos)
        if new:
            nodes.append(_Node(pos))
            queue.append(idx)
        return idx

    for r in roots:
        rid = intern(r)
        if rid not in root_ids:
            root_ids.append(rid)

    truncated = False
    budget_hit = False
    depth_seen = 0
    while queue:
        idx = queue.popleft()
        node = nodes[idx]
        k = node.pos.n_events()
        depth_seen = max(depth_seen, k)
        if limit is not None and k >= limit:
            truncated = True
            continue
        if len(nodes) > cfg.budget:
            budget_hit = True
            continue
        moves = []
        for sm in expand(net, node.pos, cfg.hereditary):
            targets = [intern(p) for _, p in sm.responses]
            moves.append((sm, targets))
        node.moves = moves

    # greatest fixpoint by counter-based removal
    good = [True] * len(nodes)
    removal = {}            # id -> (sequence number, index of killing move)
    live = {}               # (id, move index) -> number of distinct good targets
    preds: dict = {}        # target -> [(id, move index)]
    work = deque()
    for i, node in enumerate(nodes):
        if node.moves is None:
            continue
        for j, (_, targets) in enumerate(node.moves):
            distinct = set(targets)
            live[(i, j)] = len(distinct)
            for tid in distinct:
                preds.setdefault(tid, []).append((i, j))
            if not distinct and good[i]:
                good[i] = False
                removal[i] = (len(removal), j)
                work.append(i)
    while work:
        x = work.popleft()
        for i, j in preds.get(x, ()):
            live[(i, j)] -= 1
            if live[(i, j)] == 0 and good[i]:
                good[i] = False
                removal[i] = (len(removal), j)
                work.append(i)

    stats = {
        "configurations": len(nodes),
        "depth": depth_seen,
        "finite_unfolding": finite,
        "iso_checks": table.iso_checks,
    }
    winners = [r for r in root_ids if good[r]]
    if winners:
        if truncated or budget_hit:
            why = (f"node budget {cfg.budget} exhausted" if budget_hit
                   else f"depth bound {limit} reached (infinite runs)")
            return Verdict(Outcome.INCONCLUSIVE, reason=why, stats=stats)
        return Verdict(Outcome.YES, reason="Duplicator wins from a root",
                       strategy={"winning_roots": len(winners), "roots": len(root_ids)},
                       stats=stats)
    memo: dict = {}
    trees = [_strategy(nodes, removal, r, memo) for r in root_ids]
    return Verdict(Outcome.NO, reason="Spoiler wins from every root",
                   trace=_principal_line(trees[0]), strategy=trees, stats=stats)


def _strategy(nodes, removal, idx, memo) -> dict:
    """Spoiler's winning strategy from a losing position; shared subtrees are
    built once, so the result is a DAG of dicts."""
    if idx in memo:
        return memo[idx]
    _, j = removal[idx]
    sm, targets = nodes[idx].moves[j]
    children = []
    for (resp, _), tid in zip(sm.responses, targets):
        children.append((resp, _strategy(nodes, removal, tid, memo)))
    memo[idx] = {"pos": nodes[idx].pos, "move": sm.move, "detail": sm.detail, "responses": children}
    return memo[idx]


def _principal_line(tree: dict) -> list:
    out = []
    while tree is not None:
        out.append(tree["move"])
        if not tree["responses"]:
            break
        resp, tree = tree["responses"][0]
        out.append(resp)
    return out


# -- replay --------------------------------------------------------------


def replay_strategy(net: PetriNet, tree: dict, mode: str, _memo=None) -> bool:
    """Re-derive every Duplicator answer from scratch and check the strategy
    tree covers each of them and ends with Duplicator stuck."""
    memo = {} if _memo is None else _memo
    key = id(tree)
    if key not in memo:
        memo[key] = _replay(net, tree, mode, memo)
    return memo[key]


def _replay(net, tree, mode, memo) -> bool:
    pos = tree["pos"]
    detail = tree["detail"]
    side = tree["move"].side
    answers = _independent_answers(net, pos, detail, side, mode)
    children = [child for _, child in tree["responses"]]
    if len(answers) == 0:
        return not children
    for ans in answers:
        match = [ch for ch in children if isomorphic(ch["pos"].graph(), ans.graph())]
        if not match:
            return False
    return all(replay_strategy(net, ch, mode, memo) for ch in children)


def _independent_answers(net: PetriNet, pos, detail, side: int, mode: str) -> list:
    """All positions Duplicator can reach after Spoiler's move, computed with
    the process API rather than the solver's move generator."""
    from .causal import Process, ProcessMove, apply_move, event_poset, forward_moves, undo_event
    o = 3 - side
    if mode in ("cn", "hcn"):
        if detail[0] == "bwd":
            e = detail[1]
            return [_joint_from_processes(*(undo_event(p, e) for p in _joint_split(net, pos)))]
        _, X, tid = detail
        procs = _joint_split(net, pos)
        mine, _ = apply_move(procs[side - 1], ProcessMove(tid, X))
        t = net.transition(tid)
        out = []
        for mv in forward_moves(procs[o - 1]):
            if tuple(sorted(mv.consumed)) != tuple(sorted(X)):
                continue
            u = net.transition(mv.transition)
            if u.label != t.label or u.post.size != t.post.size:
                continue
            theirs, e = apply_move(procs[o - 1], mv)
            # every way to pair Duplicator's fresh conditions with Spoiler's
            new = mine.cnet.post[e]
            for perm in set(itertools.permutations([theirs.place[b] for b in new])):
                other_place = dict(theirs.place)
                other_place.update(zip(new, perm))
                p_o = Process(theirs.cnet, other_place, theirs.trans, net, theirs.initial)
                pair = (mine, p_o) if side == 1 else (p_o, mine)
                out.append(_joint_from_processes(*pair))
        return out
    # fc / hfc
    procs = _pair_split(net, pos)
    g = dict(pos.g)
    if detail[0] == "bwd":
        e = detail[1]
        e1 = e if side == 1 else {v: k for k, v in g.items()}[e]
        p1 = undo_event(procs[0], e1)
        p2 = undo_event(procs[1], g[e1])
        g.pop(e1)
        return [_pair_from_processes(p1, p2, g)]
    _, X, tid = detail
    mine, e_s = apply_move(procs[side - 1], ProcessMove(tid, X))
    ps = event_poset(mine.cnet)
    t = net.transition(tid)
    out = []
    for mv in forward_moves(procs[o - 1]):
        u = net.transition(mv.transition)
        if u.label != t.label:
            continue
        theirs, e_o = apply_move(procs[o - 1], mv)
        po = event_poset(theirs.cnet)
        gg = dict(g) if side == 1 else {v: k for k, v in g.items()}
        gg[e_s] = e_o
        # order-preserving in both directions
        if all(ps.leq(a, b) == po.leq(gg[a], gg[b]) for a in gg for b in gg):
            g_final = gg if side == 1 else {v: k for k, v in gg.items()}
            pair = (mine, theirs) if side == 1 else (theirs, mine)
            out.append(_pair_from_processes(pair[0], pair[1], g_final))
    return out


def _joint_split(net, pos: JointPos):
    from .causal import Process
    return tuple(Process(pos.cnet, pos.place[i], pos.trans[i], net,
                         Multiset([pos.place[i][b] for b in pos.cnet.minimal()])) for i in (0, 1))


def _joint_from_processes(p1, p2) -> JointPos:
    return JointPos(p1.cnet, (dict(p1.place), dict(p2.place)), (dict(p1.trans), dict(p2.trans)))


def _pair_split(net, pos: PairPos):
    from .causal import Process
    return tuple(Process(pos.cnets[i], pos.place[i], pos.trans[i], net,
                         Multiset([pos.place[i][b] for b in pos.cnets[i].minimal()])) for i in (0, 1))


def _pair_from_processes(p1, p2, g) -> PairPos:
    return PairPos((p1.cnet, p2.cnet), (dict(p1.place), dict(p2.place)),
                   (dict(p1.trans), dict(p2.trans)), dict(g))
