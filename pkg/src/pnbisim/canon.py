"""Isomorphism-aware interning of labeled DAGs.

Game positions are causal nets decorated with foldings. Two positions that
are isomorphic (respecting every decoration) have the same future, so the
game solver stores one representative per isomorphism class. Lookup hashes
each graph by layered topological hashing (bottom-up over labels and
pre-sets, then top-down over post-sets) and confirms candidates in the same
bucket with an exact isomorphism test.
"""

from __future__ import annotations

from typing import Hashable

import networkx as nx
from networkx.algorithms.isomorphism import DiGraphMatcher


class LabeledDag:
    __slots__ = ("labels", "edges", "_succ", "_pred", "_hash", "_colors")

    def __init__(self, labels: dict, edges):
        self.labels = labels
        self.edges = list(edges)
        self._succ = {n: [] for n in labels}
        self._pred = {n: [] for n in labels}
        for u, v in self.edges:
            self._succ[u].append(v)
            self._pred[v].append(u)
        self._hash = None
        self._colors = None

    def _topo(self) -> list:
        indeg = {n: len(p) for n, p in self._pred.items()}
        order = [n for n, d in indeg.items() if d == 0]
        i = 0
        while i < len(order):
            for v in self._succ[order[i]]:
                indeg[v] -= 1
                if indeg[v] == 0:
                    order.append(v)
            i += 1
        if len(order) != len(indeg):
            raise ValueError("graph is cyclic")
        return order

    def invariant(self) -> tuple:
        if self._hash is None:
            order = self._topo()
            up = {}
            for n in order:
                up[n] = hash((self.labels[n], tuple(sorted(up[p] for p in self._pred[n]))))
            down = {}
            for n in reversed(order):
                down[n] = hash((up[n], tuple(sorted(down[s] for s in self._succ[n]))))
            self._colors = down
            self._hash = (len(self.labels), len(self.edges), tuple(sorted(down.values())))
        return self._hash

    def to_networkx(self) -> nx.DiGraph:
        """Nodes carry their layered hash as colour: an isomorphism must
        preserve it, which lets the matcher skip hopeless candidates."""
        self.invariant()
        g = nx.DiGraph()
        for n, lab in self.labels.items():
            g.add_node(n, l=(lab, self._colors[n]))
        g.add_edges_from(self.edges)
        return g


def isomorphic(a: LabeledDag, b: LabeledDag, steps: int = 10_000) -> bool:
    """Exact isomorphism test.

    Nodes are matched in topological order among nodes of equal colour,
    checking only predecessor edges (every edge is seen once, from its
    target). Colours fix in-degrees and both graphs have the same edge
    count, so an injective edge-preserving map is an isomorphism. If the
    search needs more than ``steps`` candidate tries it defers to VF2.
    """
    if a.invariant() != b.invariant():
        return False
    found = _color_match(a, b, steps)
    if found is not None:
        return found
    m = DiGraphMatcher(a.to_networkx(), b.to_networkx(), node_match=lambda x, y: x["l"] == y["l"])
    return m.is_isomorphic()


def _color_match(a: LabeledDag, b: LabeledDag, steps: int):
    by_color: dict = {}
    for n, c in b._colors.items():
        by_color.setdefault(c, []).append(n)
    order = a._topo()
    ca = a._colors
    mapping: dict = {}
    used: set = set()
    budget = [steps]

    def rec(i: int):
        if i == len(order):
            return True
        n = order[i]
        want = sorted(mapping[p] for p in a._pred[n])
        for cand in by_color.get(ca[n], ()):
            if cand in used:
                continue
            budget[0] -= 1
            if budget[0] < 0:
                return None
            if sorted(b._pred[cand]) != want:
                continue
            mapping[n] = cand
            used.add(cand)
            r = rec(i + 1)
            if r is not False:
                return r
            del mapping[n]
            used.discard(cand)
        return False

    return rec(0)


class CanonTable:
    """Map graphs to dense ids, one id per isomorphism class."""

    def __init__(self):
        self._buckets: dict[Hashable, list] = {}
        self.items: list = []   # id -> payload
        self.iso_checks = 0

    def __len__(self) -> int:
        return len(self.items)

    def lookup(self, graph: LabeledDag):
        for idx, g in self._buckets.get(graph.invariant(), ()):
            self.iso_checks += 1
            if isomorphic(g, graph):
                return idx
        return None

    def intern(self, graph: LabeledDag, payload) -> tuple:
        """Return ``(id, is_new)``."""
        idx = self.lookup(graph)
        if idx is not None:
            return idx, False
        idx = len(self.items)
        self.items.append(payload)
        self._buckets.setdefault(graph.invariant(), []).append((idx, graph))
        return idx, True
