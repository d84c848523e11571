"""Place relations, linkings and the additive closure of a place relation.

Membership ``(m1, m2) in R+`` asks for a perfect matching between the token
occurrences of ``m1`` and ``m2`` that only uses pairs of ``R``. Tokens on the
same place are interchangeable, so the matching is solved as a transport
problem over place counts; a matching is returned as a linking (a multiset
of place pairs).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional

from .multiset import EMPTY, Multiset
from .net import Marking, NetError, PetriNet

Linking = Multiset

RELATED_CAP = 10**6


@dataclass(frozen=True)
class PlaceRelation:
    pairs: frozenset

    def __init__(self, pairs: Iterable = ()):
        object.__setattr__(self, "pairs", frozenset((a, b) for a, b in pairs))

    def __contains__(self, pair) -> bool:
        return pair in self.pairs

    def __iter__(self):
        return iter(sorted(self.pairs))

    def __len__(self) -> int:
        return len(self.pairs)

    def image(self, s) -> list:
        return sorted(b for a, b in self.pairs if a == s)

    def preimage(self, s) -> list:
        return sorted(a for a, b in self.pairs if b == s)

    def inverse(self) -> "PlaceRelation":
        return PlaceRelation((b, a) for a, b in self.pairs)

    def validate(self, net: PetriNet) -> None:
        declared = set(net.places)
        for a, b in self.pairs:
            for s in (a, b):
                if s not in declared:
                    raise NetError(f"relation mentions undeclared place {s}")

    def __repr__(self) -> str:
        return f"PlaceRelation({sorted(self.pairs)!r})"


def pi1(l: Linking) -> Marking:
    return l.map(lambda p: p[0])


def pi2(l: Linking) -> Marking:
    return l.map(lambda p: p[1])


def _max_transport(cap1: dict, cap2: dict, adj: dict) -> int:
    """Maximum number of tokens of ``cap1`` that can be matched into ``cap2``.

    ``adj[s]`` lists the admissible partners of ``s``. Plain augmenting
    paths over places; capacities on the middle edges are unbounded.
    """
    flow: dict = {}
    out1 = {s: 0 for s in cap1}
    in2 = {s: 0 for s in cap2}
    total = 0
    for src in cap1:
        while out1[src] < cap1[src]:
            # BFS from src over the residual graph, alternating left/right
            parent = {("L", src): None}
            queue = [("L", src)]
            sink = None
            qi = 0
            while qi < len(queue) and sink is None:
                side, node = queue[qi]
                qi += 1
                if side == "L":
                    for b in adj.get(node, ()):
                        if b in cap2 and ("R", b) not in parent:
                            parent[("R", b)] = (side, node)
                            if in2[b] < cap2[b]:
                                sink = b
                                break
                            queue.append(("R", b))
                else:
                    for a in cap1:
                        if flow.get((a, node), 0) > 0 and ("L", a) not in parent:
                            parent[("L", a)] = (side, node)
                            queue.append(("L", a))
            if sink is None:
                break
            cur = ("R", sink)
            while parent[cur] is not None:
                prev = parent[cur]
                if cur[0] == "R":
                    flow[(prev[1], cur[1])] = flow.get((prev[1], cur[1]), 0) + 1
                else:
                    flow[(cur[1], prev[1])] -= 1
                cur = prev
            out1[src] += 1
            in2[sink] += 1
            total += 1
    return total


def _adjacency(R: PlaceRelation, m1: Marking, m2: Marking) -> dict:
    return {s: [b for b in R.image(s) if b in m2] for s in m1}


def related(R: PlaceRelation, m1: Marking, m2: Marking) -> bool:
    """Boolean membership in the additive closure, without a witness."""
    n = m1.size
    if n != m2.size:
        return False
    if n == 0:
        return True
    adj = _adjacency(R, m1, m2)
    return _max_transport(dict(m1.items()), dict(m2.items()), adj) == n


def in_additive_closure(R: PlaceRelation, m1: Marking, m2: Marking) -> Optional[Linking]:
    """Return a linking over ``R`` projecting onto ``(m1, m2)``, or ``None``.

    The witness is the lexicographically least one: occurrences of ``m1`` are
    taken in sorted order and each is sent to the smallest partner that
    still leaves a perfect matching for the rest.
    """
    if not related(R, m1, m2):
        return None
    rest1 = dict(m1.items())
    rest2 = dict(m2.items())
    adj = _adjacency(R, m1, m2)
    chosen: dict = {}
    for s in m1.support():
        while rest1[s] > 0:
            for b in adj[s]:
                if rest2.get(b, 0) == 0:
                    continue
                rest1[s] -= 1
                rest2[b] -= 1
                remaining = sum(rest1.values())
                c1 = {k: v for k, v in rest1.items() if v}
                c2 = {k: v for k, v in rest2.items() if v}
                if _max_transport(c1, c2, adj) == remaining:
                    chosen[(s, b)] = chosen.get((s, b), 0) + 1
                    break
                rest1[s] += 1
                rest2[b] += 1
            else:  # pragma: no cover - related() guaranteed a perfect matching
                raise AssertionError("matching vanished")
    return Multiset(chosen)


def _choose(options: list, k: int):
    """All multisets of size ``k`` over ``options`` as sorted tuples."""
    return itertools.combinations_with_replacement(options, k)


def related_markings(R: PlaceRelation, m: Marking, side: str = "left",
                     cap: int = RELATED_CAP) -> list:
    """All markings related to ``m`` through ``R+``.

    ``side="left"`` treats ``m`` as the first component and returns every
    ``m'`` with ``(m, m') in R+``; ``side="right"`` the converse.
    """
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    look = R.image if side == "left" else R.preimage
    per_place = []
    for s, n in m.items():
        opts = look(s)
        if not opts:
            return []
        per_place.append([Multiset(c) for c in _choose(opts, n)])
    results = {EMPTY} if not per_place else set()
    if per_place:
        for combo in itertools.product(*per_place):
            acc = EMPTY
            for part in combo:
                acc = acc + part
            results.add(acc)
            if len(results) > cap:
                raise RuntimeError(f"related_markings exceeded cap of {cap} results")
    return sorted(results, key=lambda x: tuple(x.elements()))


def decompose(R: PlaceRelation, l: Linking, m1_part: Marking):
    """Split a witnessed pair along a sub-marking of its left projection.

    Returns ``(m2_part, c, rest)`` where ``c`` is a sub-linking of ``l`` with
    ``pi1(c) == m1_part``, ``pi2(c) == m2_part`` and ``rest == l - c``.
    """
    for link in l:
        if link not in R:
            raise NetError(f"linking uses pair {link} outside the relation")
    if not m1_part <= pi1(l):
        raise NetError("sub-marking is not included in the left projection")
    taken: dict = {}
    for s, need in m1_part.items():
        for link, n in l.items():
            if need == 0:
                break
            if link[0] != s:
                continue
            k = min(n, need)
            taken[link] = k
            need -= k
    c = Multiset(taken)
    return pi2(c), c, l - c


def linkings_between(m1: Marking, m2: Marking, allowed=None) -> list:
    """Every linking projecting onto ``(m1, m2)``; ``allowed`` filters pairs."""
    if m1.size != m2.size:
        return []
    out = []
    items1 = list(m1.items())

    def rec(i: int, rest2: dict, acc: dict):
        if i == len(items1):
            out.append(Multiset(acc))
            return
        s, n = items1[i]
        targets = [b for b, k in sorted(rest2.items()) if k and (allowed is None or (s, b) in allowed)]
        for combo in _choose(targets, n):
            ok = True
            use: dict = {}
            for b in combo:
                use[b] = use.get(b, 0) + 1
                if use[b] > rest2[b]:
                    ok = False
                    break
            if not ok:
                continue
            for b, k in use.items():
                rest2[b] -= k
                acc[(s, b)] = k
            rec(i + 1, rest2, acc)
            for b, k in use.items():
                rest2[b] += k
                del acc[(s, b)]

    rec(0, dict(m2.items()), {})
    return out


def sublinkings_with_left(l: Linking, m: Marking) -> list:
    """All sub-linkings ``c`` of ``l`` with ``pi1(c) == m``."""
    per_place = []
    for s, need in m.items():
        links = [(p, n) for p, n in l.items() if p[0] == s]
        opts = []

        def rec(i, left, acc):
            if left == 0:
                opts.append(dict(acc))
                return
            if i == len(links):
                return
            p, n = links[i]
            for k in range(min(n, left), -1, -1):
                if k:
                    acc[p] = k
                rec(i + 1, left - k, acc)
                acc.pop(p, None)

        rec(0, need, {})
        if not opts:
            return []
        per_place.append(opts)
    out = []
    for combo in itertools.product(*per_place):
        d: dict = {}
        for part in combo:
            d.update(part)
        out.append(Multiset(d))
    return out


def sublinkings_with_right(l: Linking, m: Marking) -> list:
    flipped = l.map(lambda p: (p[1], p[0]))
    return [c.map(lambda p: (p[1], p[0])) for c in sublinkings_with_left(flipped, m)]
