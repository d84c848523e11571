"""Place/Transition nets: structure, firing and reachability."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import NamedTuple

from .multiset import EMPTY, Multiset

Marking = Multiset


class NetError(ValueError):
    """Malformed net, marking or relation supplied by the caller."""


class NotEnabledError(NetError):
    pass


class InconclusiveError(RuntimeError):
    """Raised when a query needs a complete state space that is not available."""


@dataclass(frozen=True)
class Transition:
    id: str
    pre: Multiset
    label: str
    post: Multiset

    def __post_init__(self):
        if not self.pre:
            raise NetError(f"transition {self.id}: empty pre-set")

    def triple(self) -> tuple:
        return (self.pre, self.label, self.post)

    def __str__(self) -> str:
        return f"{self.id}: {self.pre} -[{self.label}]-> {self.post}"


@dataclass(frozen=True)
class PetriNet:
    places: tuple
    transitions: tuple
    alphabet: frozenset = None
    name: str = "net"
    _by_id: dict = field(init=False, repr=False, compare=False, hash=False)
    _by_pre: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        places = tuple(self.places)
        trans = tuple(self.transitions)
        object.__setattr__(self, "places", places)
        object.__setattr__(self, "transitions", trans)
        labels = {t.label for t in trans}
        if self.alphabet is None:
            object.__setattr__(self, "alphabet", frozenset(labels))
        else:
            object.__setattr__(self, "alphabet", frozenset(self.alphabet))
            missing = labels - self.alphabet
            if missing:
                raise NetError(f"labels not in alphabet: {sorted(missing)}")
        if len(set(places)) != len(places):
            raise NetError("duplicate place")
        declared = set(places)
        by_id = {}
        by_pre: dict = {}
        for t in trans:
            if t.id in by_id:
                raise NetError(f"duplicate transition id {t.id}")
            for s in list(t.pre) + list(t.post):
                if s not in declared:
                    raise NetError(f"transition {t.id} mentions undeclared place {s}")
            by_id[t.id] = t
            by_pre.setdefault(t.pre, []).append(t)
        object.__setattr__(self, "_by_id", by_id)
        object.__setattr__(self, "_by_pre", {k: tuple(v) for k, v in by_pre.items()})

    def transition(self, tid: str) -> Transition:
        try:
            return self._by_id[tid]
        except KeyError:
            raise NetError(f"unknown transition {tid}") from None

    def with_pre(self, pre: Multiset) -> tuple:
        """Transitions whose pre-set is exactly ``pre``."""
        return self._by_pre.get(pre, ())

    def check_marking(self, m: Marking) -> None:
        declared = set(self.places)
        for s in m:
            if s not in declared:
                raise NetError(f"marking mentions undeclared place {s}")

    def flow(self, x: str, y: str) -> int:
        """Arc weight between a place and a transition (either direction)."""
        if x in self._by_id:
            return self._by_id[x].post[y]
        return self.transition(y).pre[x]


def _resolve(net: PetriNet, t) -> Transition:
    if isinstance(t, Transition):
        if net._by_id.get(t.id) != t:
            raise NetError(f"transition {t.id} does not belong to net {net.name}")
        return t
    return net.transition(t)


def enabled(net: PetriNet, m: Marking, t) -> bool:
    return _resolve(net, t).pre <= m


def fire(net: PetriNet, m: Marking, t) -> Marking:
    t = _resolve(net, t)
    for s, n in t.pre.items():
        if m[s] < n:
            raise NotEnabledError(
                f"{t.id} not enabled: place {s} holds {m[s]} token(s), needs {n}")
    return (m - t.pre) + t.post


def enabled_transitions(net: PetriNet, m: Marking) -> list:
    return [t for t in net.transitions if t.pre <= m]


@dataclass
class ReachGraph:
    root: Marking
    nodes: list
    edges: list  # (marking, transition id, marking)
    complete: bool

    def successors(self) -> dict:
        succ = {n: [] for n in self.nodes}
        for m, tid, m2 in self.edges:
            succ[m].append((tid, m2))
        return succ


def reach_graph(net: PetriNet, m0: Marking, cap: int = 10_000) -> ReachGraph:
    """Breadth-first reachability graph, stopping after ``cap`` nodes."""
    if cap < 1:
        raise NetError("cap must be at least 1")
    net.check_marking(m0)
    order = sorted(net.transitions, key=lambda t: t.id)
    seen = {m0}
    edges = []
    queue = deque([m0])
    complete = True
    while queue:
        m = queue.popleft()
        for t in order:
            if not t.pre <= m:
                continue
            m2 = (m - t.pre) + t.post
            if m2 not in seen:
                if len(seen) >= cap:
                    complete = False
                    continue
                seen.add(m2)
                queue.append(m2)
            edges.append((m, t.id, m2))
    nodes = sorted(seen, key=Multiset.sort_key)
    edges.sort(key=lambda e: (e[0].sort_key(), e[1], e[2].sort_key()))
    return ReachGraph(m0, nodes, edges, complete)


def is_safe(g: ReachGraph) -> bool:
    if not g.complete:
        raise InconclusiveError("reachability graph is incomplete (cap hit)")
    return all(n <= 1 for m in g.nodes for _, n in m.items())


def is_acyclic(g: ReachGraph) -> bool:
    """True when the (complete) graph has no cycle, i.e. every run is finite."""
    if not g.complete:
        raise InconclusiveError("reachability graph is incomplete (cap hit)")
    succ = g.successors()
    state = {}
    for start in g.nodes:
        if start in state:
            continue
        stack = [(start, iter(succ[start]))]
        state[start] = 1
        while stack:
            node, it = stack[-1]
            for _, nxt in it:
                st = state.get(nxt)
                if st == 1:
                    return False
                if st is None:
                    state[nxt] = 1
                    stack.append((nxt, iter(succ[nxt])))
                    break
            else:
                state[node] = 2
                stack.pop()
    return True


class DisjointUnion(NamedTuple):
    net: PetriNet
    places1: dict
    places2: dict
    trans1: dict
    trans2: dict

    def left(self, m: Marking) -> Marking:
        return m.map(self.places1.__getitem__)

    def right(self, m: Marking) -> Marking:
        return m.map(self.places2.__getitem__)


def _fresh(name: str, taken: set) -> str:
    new = name
    while new in taken:
        new = new + "_2"
    return new


def disjoint_union(n1: PetriNet, n2: PetriNet) -> DisjointUnion:
    """Place both nets side by side; names of ``n2`` are suffixed on collision."""
    taken = set(n1.places) | {t.id for t in n1.transitions}
    pmap2 = {}
    for s in n2.places:
        pmap2[s] = _fresh(s, taken)
        taken.add(pmap2[s])
    tmap2 = {}
    for t in n2.transitions:
        tmap2[t.id] = _fresh(t.id, taken)
        taken.add(tmap2[t.id])
    ren = pmap2.__getitem__
    trans = list(n1.transitions) + [
        Transition(tmap2[t.id], t.pre.map(ren), t.label, t.post.map(ren))
        for t in n2.transitions
    ]
    net = PetriNet(
        places=tuple(n1.places) + tuple(pmap2[s] for s in n2.places),
        transitions=tuple(trans),
        alphabet=n1.alphabet | n2.alphabet,
        name=f"{n1.name}+{n2.name}",
    )
    return DisjointUnion(
        net,
        {s: s for s in n1.places},
        pmap2,
        {t.id: t.id for t in n1.transitions},
        tmap2,
    )


__all__ = [
    "EMPTY", "Marking", "NetError", "NotEnabledError", "InconclusiveError",
    "Transition", "PetriNet", "enabled", "fire", "enabled_transitions",
    "ReachGraph", "reach_graph", "is_safe", "is_acyclic", "DisjointUnion",
    "disjoint_union",
]
