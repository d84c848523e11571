"""Randomized probe that bisimilar markings stay related under undo.

A random run is played from the left marking. Each step is answered on the
right using the witness, so both runs share one causal net (one event per
joint step) with a folding per side. Afterwards every configuration reached
by undoing maximal events is visited and checked: both foldings must still
be processes and the current markings must still be witness-related.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from .causal import CausalNet, _consumption_choices
from .closure import PlaceRelation, in_additive_closure, linkings_between, pi1, pi2
from .engines import verify_sp_bisimulation
from .multiset import Multiset
from .net import Marking, NetError, PetriNet
from .place_bisim import check_place_bisimulation


@dataclass
class ProbeReport:
    runs: int = 0
    steps: int = 0
    undo_states: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


class _Witness:
    """Uniform view of a place relation or an sp linking set."""

    def __init__(self, net: PetriNet, w):
        self.net = net
        if isinstance(w, PlaceRelation):
            self.R = w
            self.links = None
            rep = check_place_bisimulation(net, w)
            if not rep.ok:
                raise NetError(f"witness is not a place bisimulation: {rep.violation}")
        else:
            self.R = None
            self.links = frozenset(w)
            bad = verify_sp_bisimulation(net, self.links)
            if bad:
                raise NetError(f"witness is not an sp-bisimulation: {bad[0]}")

    def root(self, m1, m2) -> Optional[Multiset]:
        if self.R is not None:
            return in_additive_closure(self.R, m1, m2)
        for l in sorted(self.links, key=Multiset.sort_key):
            if pi1(l) == m1 and pi2(l) == m2:
                return l
        return None

    def answer(self, current: Multiset, c: Multiset, t):
        """Right transition and post linking answering ``t`` on sub-linking ``c``."""
        for u in self.net.with_pre(pi2(c)):
            if u.label != t.label:
                continue
            if self.R is not None:
                cbar = in_additive_closure(self.R, t.post, u.post)
                if cbar is not None:
                    return u, cbar
            else:
                for cbar in linkings_between(t.post, u.post):
                    if (current - c) + cbar in self.links:
                        return u, cbar
        return None

    def holds(self, l: Multiset) -> bool:
        if self.R is not None:
            return all(p in self.R for p in l.support())
        return l in self.links


def _linking(c: CausalNet, f1: dict, f2: dict) -> Multiset:
    return Multiset([(f1[b], f2[b]) for b in c.maximal()])


def _check_folding(net: PetriNet, c: CausalNet, fold: dict, trans: dict, m0: Marking):
    if Multiset([fold[b] for b in c.minimal()]) != m0:
        return "initial marking not preserved"
    for e in c.events:
        t = net.transition(trans[e])
        if Multiset([fold[b] for b in c.pre[e]]) != t.pre or Multiset([fold[b] for b in c.post[e]]) != t.post:
            return f"event {e} does not fold onto {t.id}"
    return None


def reversibility_probe(net: PetriNet, witness, m1: Marking, m2: Marking, runs: int = 100,
                        maxlen: int = 6, seed: int = 0, undo_budget: int = 2000) -> ProbeReport:
    W = _Witness(net, witness)
    root = W.root(m1, m2)
    if root is None:
        raise NetError("witness does not relate the two markings")
    rng = random.Random(seed)
    report = ProbeReport()
    links = root.elements()
    for run in range(runs):
        report.runs += 1
        c = CausalNet.initial(len(links))
        f1 = {i: a for i, (a, _) in enumerate(links)}
        f2 = {i: b for i, (_, b) in enumerate(links)}
        tr1, tr2 = {}, {}
        length = rng.randint(0, maxlen)
        for _ in range(length):
            maxc = c.maximal()
            cur = Multiset([f1[b] for b in maxc])
            opts = [(t, X) for t in net.transitions if t.pre <= cur
                    for X in _consumption_choices(f1, maxc, t.pre)]
            if not opts:
                break
            t, X = rng.choice(opts)
            sub = Multiset([(f1[b], f2[b]) for b in X])
            ans = W.answer(_linking(c, f1, f2), sub, t)
            if ans is None:
                report.violations.append((run, "no answer", t.id, tuple(X)))
                break
            u, cbar = ans
            c, e, new = c.extend(X, t.label, t.post.size)
            for b, (p, q) in zip(new, cbar.elements()):
                f1[b], f2[b] = p, q
            tr1[e], tr2[e] = t.id, u.id
            report.steps += 1
        report.undo_states += _explore_undo(net, W, c, f1, f2, tr1, tr2, m1, m2, run,
                                            report.violations, undo_budget)
    return report


def _explore_undo(net, W, c, f1, f2, tr1, tr2, m1, m2, run, violations, budget) -> int:
    seen = {frozenset(c.events)}
    queue = deque([c])
    n = 0
    while queue and n < budget:
        cur = queue.popleft()
        n += 1
        l = _linking(cur, f1, f2)
        if not W.holds(l):
            violations.append((run, "unrelated after undo", tuple(sorted(cur.events))))
            continue
        for fold, trans, m0 in ((f1, tr1, m1), (f2, tr2, m2)):
            err = _check_folding(net, cur, fold, trans, m0)
            if err:
                violations.append((run, err, tuple(sorted(cur.events))))
        for e in cur.maximal_events():
            nxt = cur.remove(e)
            key = frozenset(nxt.events)
            if key not in seen:
                seen.add(key)
                queue.append(nxt)
    return n
