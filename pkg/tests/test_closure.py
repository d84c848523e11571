import itertools

import pytest
from hypothesis import given, settings, strategies as st

from pnbisim.closure import (PlaceRelation, decompose, in_additive_closure, linkings_between, pi1, pi2,
                             related, related_markings, sublinkings_with_left, sublinkings_with_right)
from pnbisim.multiset import EMPTY, Multiset
from pnbisim.net import NetError

from helpers import PLACES, brute_related, msets, relations

M = Multiset.of
CASE_R = PlaceRelation([("P1", "P2"), ("P1", "P2'"), ("D1", "D2'"), ("D1", "D2''"),
                        ("C1", "C2"), ("C1'", "C2'")])


def test_membership_examples():
    R = PlaceRelation([("s1", "s3"), ("s1", "s4"), ("s2", "s3"), ("s2", "s4")])
    assert in_additive_closure(R, M("s1", "s2"), M("s3", "s4")) == M(("s1", "s3"), ("s2", "s4"))
    assert in_additive_closure(R, EMPTY, EMPTY) == EMPTY
    R = PlaceRelation([("s1", "s2")])
    assert in_additive_closure(R, M("s1", "s1"), M("s2", "s2")) == Multiset({("s1", "s2"): 2})
    assert in_additive_closure(R, M("s1", "s1"), M("s2")) is None


def test_witness_is_lexicographically_least():
    R = PlaceRelation([("a", "x"), ("a", "y"), ("b", "x"), ("b", "y")])
    assert in_additive_closure(R, M("a", "b"), M("x", "y")) == M(("a", "x"), ("b", "y"))


def test_related_markings_examples():
    assert related_markings(CASE_R, M("D1", "C1")) == [M("C2", "D2'"), M("C2", "D2''")]
    assert related_markings(CASE_R, EMPTY) == [EMPTY]
    R = PlaceRelation([("s1", "s3"), ("s1", "s4")])
    assert related_markings(R, M("s1", "s1")) == [M("s3", "s3"), M("s3", "s4"), M("s4", "s4")]
    assert related_markings(R, M("s3", "s4"), "right") == [M("s1", "s1")]


def test_related_markings_cap():
    R = PlaceRelation([("a", x) for x in "abcdefgh"])
    with pytest.raises(RuntimeError, match="cap of 10"):
        related_markings(R, Multiset({"a": 4}), cap=10)


def test_decompose_examples():
    R = PlaceRelation([("s1", "s3"), ("s2", "s4")])
    l = M(("s1", "s3"), ("s2", "s4"))
    m2, c, rest = decompose(R, l, M("s1"))
    assert m2 == M("s3") and c == M(("s1", "s3")) and rest == M(("s2", "s4"))
    assert decompose(R, l, EMPTY)[0] == EMPTY
    R = PlaceRelation([("s1", "s2")])
    assert decompose(R, Multiset({("s1", "s2"): 2}), M("s1"))[0] == M("s2")


def test_decompose_rejects_bad_input():
    R = PlaceRelation([("s1", "s3")])
    with pytest.raises(NetError):
        decompose(R, M(("s1", "s3")), M("s2"))
    with pytest.raises(NetError):
        decompose(R, M(("s2", "s3")), M("s2"))


def test_linkings_between_counts():
    # 2*s1 + s2 onto x + y + z: choose the partner of s2
    ls = linkings_between(M("s1", "s1", "s2"), M("x", "y", "z"))
    assert len(ls) == 3
    assert all(pi1(l) == M("s1", "s1", "s2") and pi2(l) == M("x", "y", "z") for l in ls)
    assert linkings_between(M("a"), M("x", "y")) == []


def test_sublinkings():
    l = Multiset({("a", "x"): 1, ("a", "y"): 1, ("b", "x"): 1})
    subs = sublinkings_with_left(l, M("a"))
    assert sorted(subs, key=Multiset.sort_key) == [M(("a", "x")), M(("a", "y"))]
    subs = sublinkings_with_right(l, M("x"))
    assert len(subs) == 2 and all(pi2(c) == M("x") for c in subs)
    assert sublinkings_with_left(l, M("c")) == []


def _equivalence(blocks):
    return PlaceRelation([(a, b) for blk in blocks for a in blk for b in blk])


partitions = st.permutations(PLACES).flatmap(
    lambda perm: st.lists(st.integers(1, 3), min_size=4, max_size=4).map(
        lambda cuts: _cut(perm, cuts)))


def _cut(perm, cuts):
    blocks, i = [], 0
    for c in cuts:
        if i >= len(perm):
            break
        blocks.append(perm[i:i + c])
        i += c
    return blocks


@given(relations(), msets(max_size=5), msets(max_size=5))
def test_matches_permutation_oracle(R, a, b):
    R = PlaceRelation(R)
    assert related(R, a, b) == brute_related(R, a, b)
    w = in_additive_closure(R, a, b)
    assert (w is not None) == related(R, a, b)
    if w is not None:
        assert pi1(w) == a and pi2(w) == b and all(p in R for p in w.support())


@given(partitions, msets(max_size=4), msets(max_size=4), msets(max_size=4))
def test_equivalence_lifts_to_equivalence(blocks, a, b, c):
    R = _equivalence(blocks)
    assert related(R, a, a)
    assert related(R, a, b) == related(R, b, a)
    if related(R, a, b) and related(R, b, c):
        assert related(R, a, c)


@given(relations(), relations(), msets(max_size=4), msets(max_size=4))
def test_monotone(R1, extra, a, b):
    if related(PlaceRelation(R1), a, b):
        assert related(PlaceRelation(R1 | extra), a, b)


@given(relations(), msets(max_size=3), msets(max_size=3), msets(max_size=3), msets(max_size=3))
def test_additive(R, a, b, c, d):
    R = PlaceRelation(R)
    w1, w2 = in_additive_closure(R, a, b), in_additive_closure(R, c, d)
    if w1 is not None and w2 is not None:
        l = w1 + w2
        assert pi1(l) == a + c and pi2(l) == b + d
        assert related(R, a + c, b + d)


@given(partitions, msets(max_size=3), msets(max_size=3), msets(max_size=3), msets(max_size=3))
def test_subtractive_for_equivalences(blocks, a, b, c, d):
    R = _equivalence(blocks)
    if related(R, a + c, b + d) and related(R, a, b):
        assert related(R, c, d)


@given(relations(), msets(max_size=5), msets(max_size=5), st.data())
def test_decomposition(R, a, b, data):
    R = PlaceRelation(R)
    l = in_additive_closure(R, a, b)
    if l is None:
        return
    part = Multiset(data.draw(st.lists(st.sampled_from(a.elements()), unique_by=None, max_size=a.size))
                    if a.size else [])
    part = Multiset({s: min(n, a[s]) for s, n in part.items()})
    m2, c, rest = decompose(R, l, part)
    assert m2 <= b and pi1(c) == part and pi2(c) == m2
    assert c + rest == l
    assert related(R, a - part, b - m2)


@settings(max_examples=150)
@given(relations(), msets(max_size=3))
def test_related_markings_agrees_with_membership(R, m):
    R = PlaceRelation(R)
    got = set(related_markings(R, m))
    for cand in (Multiset(c) for c in itertools.combinations_with_replacement(PLACES, m.size)):
        assert (cand in got) == related(R, m, cand)
