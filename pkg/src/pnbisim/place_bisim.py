"""Place bisimulation: checking a candidate relation and deciding bisimilarity.

The check uses the finitary characterization of place bisimulations: it is
enough to look at transition pre-sets, every marking related to a pre-set,
and the post-sets of the matching transitions. No reachability is involved,
so both functions work on unbounded nets.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import Optional

from .closure import PlaceRelation, in_additive_closure, related, related_markings
from .multiset import Multiset
from .net import Marking, NetError, PetriNet
from .verdict import Outcome, Verdict


@dataclass(frozen=True)
class Violation:
    transition: str
    marking: Marking
    reason: str  # "no-matching-transition" | "post-sets-unrelated"
    side: int


@dataclass(frozen=True)
class PlaceBisimReport:
    ok: bool
    violation: Optional[Violation] = None


def check_place_bisimulation(net: PetriNet, R: PlaceRelation) -> PlaceBisimReport:
    R.validate(net)
    v = _first_violation(net, R)
    return PlaceBisimReport(v is None, v)


def _first_violation(net: PetriNet, R: PlaceRelation) -> Optional[Violation]:
    for side, direction in ((1, "left"), (2, "right")):
        for t in net.transitions:
            for m in related_markings(R, t.pre, direction):
                partners = [u for u in net.with_pre(m) if u.label == t.label]
                if not partners:
                    return Violation(t.id, m, "no-matching-transition", side)
                if side == 1:
                    ok = any(related(R, t.post, u.post) for u in partners)
                else:
                    ok = any(related(R, u.post, t.post) for u in partners)
                if not ok:
                    return Violation(t.id, m, "post-sets-unrelated", side)
    return None


def _shape(net: PetriNet, s) -> frozenset:
    """(multiplicity, label, post size) of every transition whose pre-set is k*s."""
    out = set()
    for t in net.transitions:
        if len(t.pre) == 1 and s in t.pre:
            out.add((t.pre[s], t.label, t.post.size))
    return frozenset(out)


def prune_universe(net: PetriNet, universe) -> list:
    """Drop pairs that no place bisimulation can contain.

    If ``(s, s')`` is in a place bisimulation then ``(k*s, k*s')`` is in its
    closure for every ``k``, so each transition with pre-set ``k*s`` needs a
    partner with pre-set ``k*s'``, the same label and a related post-set (and
    conversely). Post-sets are tested against the closure of the surviving
    universe, which only over-approximates; the filter is iterated to a
    fixpoint.
    """
    pairs = set(universe)
    pairs = {(a, b) for a, b in pairs if _shape(net, a) == _shape(net, b)}
    single = {}
    for t in net.transitions:
        if len(t.pre) == 1:
            (s,) = t.pre.support()
            single.setdefault(s, []).append(t)
    changed = True
    while changed:
        changed = False
        U = PlaceRelation(pairs)
        for a, b in sorted(pairs):
            if not _pair_survives(single, U, a, b):
                pairs.discard((a, b))
                changed = True
                break
    return sorted(pairs)


def _pair_survives(single: dict, U: PlaceRelation, a, b) -> bool:
    for t1 in single.get(a, ()):
        k = t1.pre[a]
        if not any(t2.pre[b] == k and t2.label == t1.label and related(U, t1.post, t2.post)
                   for t2 in single.get(b, ())):
            return False
    for t2 in single.get(b, ()):
        k = t2.pre[b]
        if not any(t1.pre[a] == k and t1.label == t2.label and related(U, t1.post, t2.post)
                   for t1 in single.get(a, ())):
            return False
    return True


def decide_place_bisimilar(net: PetriNet, m1: Marking, m2: Marking, universe=None,
                           max_candidates: int = 2**22, timeout: float = 60.0,
                           prune: bool = True, search: str = "grow") -> Verdict:
    """Search for a place bisimulation relating ``m1`` and ``m2``.

    Candidate relations are drawn from ``universe`` (default: all place
    pairs). The witness reported is the first one in order of increasing
    size, lexicographically within a size. The answer is NO once the search
    space is exhausted and INCONCLUSIVE when the candidate or time budget
    runs out first.

    ``search="enumerate"`` walks all subsets in that order. ``search="grow"``
    (default) returns the same witness faster: it starts from the pairs of a
    root linking and repairs the first violation by adding the pairs of one
    possible answer, branching over answers. Every minimal place bisimulation
    containing a root linking is generated this way, so the smallest ones are
    all visited; relations larger than the best found are cut off.
    """
    net.check_marking(m1)
    net.check_marking(m2)
    if universe is None:
        universe = [(a, b) for a in net.places for b in net.places]
    universe = sorted(set(universe))
    for a, b in universe:
        if a not in net.places or b not in net.places:
            raise NetError(f"pair ({a}, {b}) mentions an undeclared place")
    stats = {"universe": len(universe), "search": search}
    if m1.size != m2.size:
        stats["candidates"] = 0
        return Verdict(Outcome.NO, reason="markings differ in size", stats=stats)
    if prune:
        universe = prune_universe(net, universe)
    stats["pruned_universe"] = len(universe)
    deadline = time.monotonic() + timeout
    if search == "enumerate":
        R, count, why = _enumerate(net, m1, m2, universe, max_candidates, deadline)
    elif search == "grow":
        R, count, why = _grow(net, m1, m2, universe, max_candidates, deadline)
    else:
        raise ValueError(f"unknown search {search!r}")
    stats["candidates"] = count
    if why == "budget":
        return Verdict(Outcome.INCONCLUSIVE, reason=f"candidate budget {max_candidates} exhausted",
                       stats=stats)
    if why == "time":
        return Verdict(Outcome.INCONCLUSIVE, reason=f"time budget {timeout}s exhausted", stats=stats)
    if R is None:
        return Verdict(Outcome.NO, reason="no place bisimulation in the pair universe", stats=stats)
    root = in_additive_closure(R, m1, m2)
    assert root is not None and check_place_bisimulation(net, R).ok
    return Verdict(Outcome.YES, relation=R, linkings=[root], stats=stats)


def _enumerate(net, m1, m2, universe, max_candidates, deadline):
    count = 0
    for k in range(len(universe) + 1):
        for combo in itertools.combinations(universe, k):
            count += 1
            if count > max_candidates:
                return None, count - 1, "budget"
            if count & 1023 == 0 and time.monotonic() > deadline:
                return None, count, "time"
            R = PlaceRelation(combo)
            if not related(R, m1, m2):
                continue
            if _first_violation(net, R) is None:
                return R, count, None
    return None, count, None


def _grow(net, m1, m2, universe, max_candidates, deadline):
    from .closure import linkings_between

    allowed = frozenset(universe)
    best = None
    best_key = None
    seen = set()
    count = 0
    stack = [frozenset(l.support()) for l in reversed(linkings_between(m1, m2, allowed))]
    while stack:
        pairs = stack.pop()
        if pairs in seen:
            continue
        seen.add(pairs)
        if best_key is not None and len(pairs) > best_key[0]:
            continue
        count += 1
        if count > max_candidates:
            return None, count - 1, "budget"
        if count & 255 == 0 and time.monotonic() > deadline:
            return None, count, "time"
        R = PlaceRelation(pairs)
        v = _first_violation(net, R)
        if v is None:
            key = (len(pairs), tuple(sorted(pairs)))
            if best_key is None or key < best_key:
                best, best_key = R, key
            continue
        if v.reason == "no-matching-transition":
            continue  # adding pairs only adds challenges
        t = net.transition(v.transition)
        for u in net.with_pre(v.marking):
            if u.label != t.label:
                continue
            a, b = (t.post, u.post) if v.side == 1 else (u.post, t.post)
            for cbar in linkings_between(a, b, allowed):
                nxt = pairs | frozenset(cbar.support())
                if nxt not in seen:
                    stack.append(nxt)
    return best, count, None


def cross_universe(union) -> list:
    """Pairs (left place, right place) of a disjoint union."""
    return [(a, b) for a in union.places1.values() for b in union.places2.values()]
