"""Strategies and brute-force oracles shared by the test modules."""

import itertools

from hypothesis import strategies as st

from pnbisim.multiset import Multiset
from pnbisim.net import PetriNet, Transition

PLACES = ("s1", "s2", "s3", "s4")


def msets(places=PLACES, max_size=6):
    return st.lists(st.sampled_from(places), max_size=max_size).map(Multiset)


def relations(left=PLACES, right=PLACES):
    return st.sets(st.tuples(st.sampled_from(left), st.sampled_from(right))).map(frozenset)


@st.composite
def nets(draw, max_places=4, max_trans=4, labels="ab", prefix="p"):
    n = draw(st.integers(1, max_places))
    places = tuple(f"{prefix}{i}" for i in range(n))
    ms = st.lists(st.sampled_from(places), min_size=1, max_size=2).map(Multiset)
    ms0 = st.lists(st.sampled_from(places), max_size=2).map(Multiset)
    triples = draw(st.lists(st.tuples(ms, st.sampled_from(labels), ms0), max_size=max_trans,
                            unique=True))
    trans = tuple(Transition(f"t{i}", a, l, b) for i, (a, l, b) in enumerate(triples))
    return PetriNet(places, trans)


def brute_related(R, m1, m2) -> bool:
    """Additive closure by trying every permutation of the occurrences."""
    a, b = m1.elements(), m2.elements()
    if len(a) != len(b):
        return False
    return any(all((x, y) in R for x, y in zip(a, perm)) for perm in set(itertools.permutations(b)))


def all_msets(places, size):
    return [Multiset(c) for c in itertools.combinations_with_replacement(sorted(places), size)]


def brute_is_place_bisim(net, R) -> bool:
    """The finitary transfer conditions, with every related marking found by
    scanning all multisets of the right size."""
    for t1 in net.transitions:
        for m in all_msets(net.places, t1.pre.size):
            if brute_related(R, t1.pre, m):
                if not any(t2.pre == m and t2.label == t1.label and brute_related(R, t1.post, t2.post)
                           for t2 in net.transitions):
                    return False
            if brute_related(R, m, t1.pre):
                if not any(t2.pre == m and t2.label == t1.label and brute_related(R, t2.post, t1.post)
                           for t2 in net.transitions):
                    return False
    return True


def brute_place_bisimilar(net, m1, m2, universe) -> bool:
    universe = sorted(universe)
    for k in range(len(universe) + 1):
        for combo in itertools.combinations(universe, k):
            R = set(combo)
            if brute_related(R, m1, m2) and brute_is_place_bisim(net, R):
                return True
    return False


def naive_bisim(nodes, succ, label):
    """Greatest fixpoint over node pairs by repeated deletion."""
    rel = {(x, y) for x in nodes for y in nodes}
    changed = True
    while changed:
        changed = False
        for x, y in sorted(rel, key=lambda p: (p[0].sort_key(), p[1].sort_key())):
            ok = all(any(label(u) == label(t) and (dx, dy) in rel for u, dy in succ[y]) for t, dx in succ[x]) \
                and all(any(label(u) == label(t) and (dx, dy) in rel for u, dx in succ[x]) for t, dy in succ[y])
            if not ok:
                rel.discard((x, y))
                changed = True
    return rel
