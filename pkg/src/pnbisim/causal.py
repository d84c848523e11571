"""Causal nets, processes of a P/T net, and moves on processes.

A process pairs a causal net (an acyclic, unbranched run) with a folding
onto the target net. Conditions and events are integers drawn from a single
per-process counter, so moving forward and then undoing the same event
gives back an identical value.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Optional

from .multiset import Multiset
from .net import Marking, NetError, PetriNet


class ProcessError(NetError):
    pass


@dataclass(frozen=True, eq=False)
class CausalNet:
    conditions: tuple
    events: tuple
    pre: Mapping   # event -> tuple of conditions
    post: Mapping  # event -> tuple of conditions
    labels: Mapping  # event -> action label
    producer: Mapping = field(default=None)  # condition -> event or None
    consumer: Mapping = field(default=None)

    def __post_init__(self):
        if self.producer is None:
            prod = {b: None for b in self.conditions}
            cons = {b: None for b in self.conditions}
            for e in self.events:
                for b in self.post[e]:
                    if prod[b] is not None:
                        raise ProcessError(f"condition {b} has two producers")
                    prod[b] = e
                for b in self.pre[e]:
                    if cons[b] is not None:
                        raise ProcessError(f"condition {b} has two consumers")
                    cons[b] = e
            object.__setattr__(self, "producer", prod)
            object.__setattr__(self, "consumer", cons)

    @classmethod
    def initial(cls, n: int) -> "CausalNet":
        return cls(tuple(range(n)), (), {}, {}, {})

    def __eq__(self, other) -> bool:
        if not isinstance(other, CausalNet):
            return NotImplemented
        return (set(self.conditions) == set(other.conditions)
                and set(self.events) == set(other.events)
                and all(set(self.pre[e]) == set(other.pre[e])
                        and set(self.post[e]) == set(other.post[e])
                        and self.labels[e] == other.labels[e] for e in self.events))

    def minimal(self) -> tuple:
        return tuple(b for b in self.conditions if self.producer[b] is None)

    def maximal(self) -> tuple:
        return tuple(b for b in self.conditions if self.consumer[b] is None)

    def next_id(self) -> int:
        return max(itertools.chain(self.conditions, self.events), default=-1) + 1

    def is_maximal_event(self, e) -> bool:
        return all(self.consumer[b] is None for b in self.post[e])

    def maximal_events(self) -> tuple:
        return tuple(e for e in self.events if self.is_maximal_event(e))

    def extend(self, consumed, label: str, n_post: int):
        """Add one event consuming ``consumed`` (all maximal) and producing
        ``n_post`` fresh conditions. Returns ``(net, event, new_conditions)``."""
        for b in consumed:
            if b not in self.consumer:
                raise ProcessError(f"unknown condition {b}")
            if self.consumer[b] is not None:
                raise ProcessError(f"condition {b} is not maximal")
        if len(set(consumed)) != len(consumed):
            raise ProcessError("a condition is consumed twice")
        e = self.next_id()
        new = tuple(range(e + 1, e + 1 + n_post))
        pre = dict(self.pre)
        post = dict(self.post)
        labels = dict(self.labels)
        pre[e] = tuple(sorted(consumed))
        post[e] = new
        labels[e] = label
        prod = dict(self.producer)
        cons = dict(self.consumer)
        for b in consumed:
            cons[b] = e
        for b in new:
            prod[b] = e
            cons[b] = None
        c = CausalNet(self.conditions + new, self.events + (e,), pre, post, labels, prod, cons)
        return c, e, new

    def remove(self, e) -> "CausalNet":
        """Undo a maximal event: drop it and its post-conditions."""
        if e not in self.pre:
            raise ProcessError(f"unknown event {e}")
        for b in self.post[e]:
            if self.consumer[b] is not None:
                raise ProcessError(
                    f"event {e} is not maximal: event {self.consumer[b]} depends on it")
        gone = set(self.post[e])
        pre = {k: v for k, v in self.pre.items() if k != e}
        post = {k: v for k, v in self.post.items() if k != e}
        labels = {k: v for k, v in self.labels.items() if k != e}
        prod = {b: v for b, v in self.producer.items() if b not in gone}
        cons = {b: v for b, v in self.consumer.items() if b not in gone}
        for b in self.pre[e]:
            cons[b] = None
        return CausalNet(tuple(b for b in self.conditions if b not in gone),
                         tuple(x for x in self.events if x != e), pre, post, labels, prod, cons)

    def past(self, e) -> frozenset:
        """Events strictly before ``e``."""
        seen = set()
        stack = [e]
        while stack:
            x = stack.pop()
            for b in self.pre[x]:
                p = self.producer[b]
                if p is not None and p not in seen:
                    seen.add(p)
                    stack.append(p)
        return frozenset(seen)

    def past_of_conditions(self, conds) -> frozenset:
        """Events on some path into one of ``conds``."""
        out = set()
        for b in conds:
            p = self.producer[b]
            if p is not None and p not in out:
                out.add(p)
                out |= self.past(p)
        return frozenset(out)

    def check(self) -> None:
        """Assert the causal-net conditions; raises ``ProcessError``."""
        order = topological_events(self)
        if len(order) != len(self.events):
            raise ProcessError("flow relation is cyclic")
        for e in self.events:
            for b in itertools.chain(self.pre[e], self.post[e]):
                if b not in self.producer:
                    raise ProcessError(f"event {e} touches unknown condition {b}")


def topological_events(c: CausalNet) -> list:
    """Events in a deterministic topological order (smallest id first)."""
    import heapq
    indeg = {}
    for e in c.events:
        indeg[e] = len({c.producer[b] for b in c.pre[e] if c.producer[b] is not None})
    heap = [e for e, d in indeg.items() if d == 0]
    heapq.heapify(heap)
    out = []
    while heap:
        e = heapq.heappop(heap)
        out.append(e)
        succ = {c.consumer[b] for b in c.post[e] if c.consumer[b] is not None}
        for f in succ:
            indeg[f] -= 1
            if indeg[f] == 0:
                heapq.heappush(heap, f)
    return out


# -- processes -----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Process:
    cnet: CausalNet
    place: Mapping   # condition -> place
    trans: Mapping   # event -> transition id
    net: PetriNet
    initial: Marking

    def __eq__(self, other) -> bool:
        if not isinstance(other, Process):
            return NotImplemented
        return (self.cnet == other.cnet and dict(self.place) == dict(other.place)
                and dict(self.trans) == dict(other.trans) and self.initial == other.initial)

    def marking(self) -> Marking:
        """Current marking: the image of the maximal conditions."""
        return Multiset([self.place[b] for b in self.cnet.maximal()])

    def check(self) -> None:
        """Assert the folding invariants against the target net."""
        c = self.cnet
        c.check()
        if Multiset([self.place[b] for b in c.minimal()]) != self.initial:
            raise ProcessError("folding does not preserve the initial marking")
        for e in c.events:
            t = self.net.transition(self.trans[e])
            if c.labels[e] != t.label:
                raise ProcessError(f"event {e} label differs from {t.id}")
            if Multiset([self.place[b] for b in c.pre[e]]) != t.pre:
                raise ProcessError(f"pre-set of event {e} does not fold onto {t.id}")
            if Multiset([self.place[b] for b in c.post[e]]) != t.post:
                raise ProcessError(f"post-set of event {e} does not fold onto {t.id}")


@dataclass(frozen=True)
class ProcessMove:
    transition: str
    consumed: tuple


def initial_process(net: PetriNet, m0: Marking, assignment=None) -> Process:
    """Event-free process of ``net`` from ``m0``.

    ``assignment`` lists the place of each fresh condition ``0, 1, ...``;
    by default the token occurrences of ``m0`` in sorted order.
    """
    net.check_marking(m0)
    if assignment is None:
        assignment = m0.elements()
    assignment = list(assignment)
    if Multiset(assignment) != m0:
        raise ProcessError("condition assignment does not cover the initial marking")
    c = CausalNet.initial(len(assignment))
    return Process(c, dict(enumerate(assignment)), {}, net, m0)


def _consumption_choices(p_place: Mapping, maxconds, pre: Multiset, key=None) -> list:
    """Injective choices of maximal conditions folding onto ``pre``.

    With ``key`` given, conditions with equal keys are interchangeable and
    only one representative choice per key multiset is produced.
    """
    per_place = []
    for s, k in pre.items():
        avail = [b for b in maxconds if p_place[b] == s]
        if len(avail) < k:
            return []
        if key is None:
            per_place.append(list(itertools.combinations(avail, k)))
        else:
            seen = {}
            for combo in itertools.combinations(avail, k):
                sig = tuple(sorted(key(b) for b in combo))
                seen.setdefault(sig, combo)
            per_place.append(list(seen.values()))
    return [tuple(sorted(itertools.chain.from_iterable(ch))) for ch in itertools.product(*per_place)]


def _origin(c: CausalNet, b) -> int:
    """Producing event of ``b``, or -1 for an initial condition."""
    e = c.producer[b]
    return -1 if e is None else e


def forward_moves(p: Process, collapse: bool = False) -> list:
    """Candidate extensions of ``p`` by one event.

    Without ``collapse`` every injective assignment of maximal conditions is a
    separate move. With ``collapse`` conditions on the same place that share
    their producing event (hence their whole causal history) are treated as
    interchangeable.
    """
    maxconds = p.cnet.maximal()
    key = (lambda b: _origin(p.cnet, b)) if collapse else None
    current = p.marking()
    out = []
    for t in p.net.transitions:
        if not t.pre <= current:
            continue
        for ch in _consumption_choices(p.place, maxconds, t.pre, key):
            out.append(ProcessMove(t.id, ch))
    return out


def apply_move(p: Process, mv: ProcessMove):
    """Fire ``mv`` on ``p``; returns ``(process, new_event)``."""
    t = p.net.transition(mv.transition)
    if Multiset([p.place[b] for b in mv.consumed]) != t.pre:
        raise ProcessError(f"consumed conditions do not fold onto the pre-set of {t.id}")
    post_places = t.post.elements()
    c, e, new = p.cnet.extend(mv.consumed, t.label, len(post_places))
    place = dict(p.place)
    place.update(zip(new, post_places))
    trans = dict(p.trans)
    trans[e] = t.id
    return Process(c, place, trans, p.net, p.initial), e


def undo_event(p: Process, e) -> Process:
    c = p.cnet.remove(e)
    gone = set(p.cnet.post[e])
    place = {b: s for b, s in p.place.items() if b not in gone}
    trans = {x: t for x, t in p.trans.items() if x != e}
    return Process(c, place, trans, p.net, p.initial)


def run_process(net: PetriNet, m0: Marking, depth: int) -> Process:
    """Deterministic run: keep applying the first available move."""
    p = initial_process(net, m0)
    for _ in range(depth):
        moves = forward_moves(p, collapse=True)
        if not moves:
            break
        p, _ = apply_move(p, moves[0])
    return p


# -- event posets --------------------------------------------------------


@dataclass(frozen=True)
class EventPoset:
    events: tuple            # topological order
    labels: Mapping
    order: frozenset         # pairs (e1, e2) with e1 <= e2, reflexive

    def leq(self, a, b) -> bool:
        return (a, b) in self.order

    def down(self, e) -> frozenset:
        return frozenset(a for a in self.events if (a, e) in self.order)

    def up(self, e) -> frozenset:
        return frozenset(b for b in self.events if (e, b) in self.order)


def event_poset(c: CausalNet) -> EventPoset:
    events = tuple(topological_events(c))
    order = set()
    for e in events:
        order.add((e, e))
        for a in c.past(e):
            order.add((a, e))
    return EventPoset(events, {e: c.labels[e] for e in events}, frozenset(order))


def poset_iso(p1: EventPoset, p2: EventPoset, g: Optional[Mapping] = None) -> Optional[dict]:
    """Extend the partial map ``g`` to a label- and order-preserving bijection."""
    if len(p1.events) != len(p2.events):
        return None
    g = dict(g or {})
    if len(set(g.values())) != len(g):
        return None

    def sig(p, e):
        return (p.labels[e], len(p.down(e)), len(p.up(e)))

    sig1 = {e: sig(p1, e) for e in p1.events}
    sig2 = {e: sig(p2, e) for e in p2.events}
    if sorted(sig1.values()) != sorted(sig2.values()):
        return None

    def consistent(a, b, mapping) -> bool:
        if sig1[a] != sig2[b]:
            return False
        for x, y in mapping.items():
            if p1.leq(x, a) != p2.leq(y, b) or p1.leq(a, x) != p2.leq(b, y):
                return False
        return True

    check = {}
    for a, b in g.items():
        if not consistent(a, b, check):
            return None
        check[a] = b
    todo = [e for e in p1.events if e not in g]
    used = set(g.values())

    def rec(i: int) -> bool:
        if i == len(todo):
            return True
        a = todo[i]
        for b in p2.events:
            if b in used or not consistent(a, b, g):
                continue
            g[a] = b
            used.add(b)
            if rec(i + 1):
                return True
            del g[a]
            used.discard(b)
        return False

    return dict(g) if rec(0) else None
