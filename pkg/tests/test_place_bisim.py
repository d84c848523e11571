import random

import pytest
from hypothesis import given, settings, strategies as st

from pnbisim.closure import PlaceRelation, in_additive_closure
from pnbisim.corpus import load_case, load_net
from pnbisim.multiset import Multiset
from pnbisim.net import NetError, PetriNet, disjoint_union
from pnbisim.place_bisim import (check_place_bisimulation, cross_universe, decide_place_bisimilar,
                                 prune_universe)
from pnbisim.randnet import RandomNetConfig, random_net

from helpers import brute_is_place_bisim, brute_place_bisimilar, nets

M = Multiset.of


def test_case_study_relation_is_a_place_bisimulation():
    case = load_case("case-study")
    assert check_place_bisimulation(case.net, case.relation).ok


def test_fig4_violation():
    case = load_case("fig4")
    R = PlaceRelation([("s1", "s5"), ("s2", "s6"), ("s3", "s6"), ("s4", "s7")])
    rep = check_place_bisimulation(case.net, R)
    assert not rep.ok
    v = rep.violation
    assert (v.transition, v.marking, v.reason, v.side) == ("t4", M("s2", "s2"), "no-matching-transition", 2)


def test_empty_and_identity_relations():
    for name in ("fig2", "fig5", "case-study"):
        net = load_case(name).net
        assert check_place_bisimulation(net, PlaceRelation()).ok
        assert check_place_bisimulation(net, PlaceRelation((p, p) for p in net.places)).ok


def test_undeclared_place_is_rejected():
    net = load_case("fig4").net
    with pytest.raises(NetError):
        check_place_bisimulation(net, PlaceRelation([("s1", "zz")]))


def test_decider_examples():
    six, _ = load_net("fig6.pn")
    v = decide_place_bisimilar(six, M("s1", "s1"), M("s2", "s2"))
    assert v.yes and v.relation == PlaceRelation([("s1", "s2")])
    fig3 = load_case("fig3")
    assert decide_place_bisimilar(fig3.net, fig3.m1, fig3.m2, fig3.universe).no
    fig4 = load_case("fig4")
    assert decide_place_bisimilar(fig4.net, fig4.m1, fig4.m2, fig4.universe).no
    cs = load_case("case-study")
    v = decide_place_bisimilar(cs.net, cs.m1, cs.m2, cs.universe)
    assert v.yes and v.relation == cs.relation
    assert v.linkings == [in_additive_closure(v.relation, cs.m1, cs.m2)]


@pytest.mark.parametrize("name", ["fig1", "fig2", "fig4", "fig6", "case-study"])
def test_search_strategies_return_the_same_witness(name):
    c = load_case(name)
    a = decide_place_bisimilar(c.net, c.m1, c.m2, c.universe, search="grow")
    b = decide_place_bisimilar(c.net, c.m1, c.m2, c.universe, search="enumerate")
    assert a.outcome == b.outcome and a.relation == b.relation


def test_budget_gives_inconclusive():
    c = load_case("fig5")
    v = decide_place_bisimilar(c.net, c.m1, c.m2, c.universe, max_candidates=50, search="enumerate")
    assert not v.definite and "budget" in v.reason


def test_pruning_preserves_witnesses():
    c = load_case("case-study")
    pruned = set(prune_universe(c.net, c.universe))
    assert set(c.relation) <= pruned


@settings(max_examples=60)
@given(nets(max_places=3, max_trans=3, prefix="a"), nets(max_places=3, max_trans=3, prefix="b"),
       st.data())
def test_decider_matches_subset_oracle(n1, n2, data):
    u = disjoint_union(n1, n2)
    k = data.draw(st.integers(0, 2))
    m1 = u.left(Multiset(data.draw(st.lists(st.sampled_from(n1.places), min_size=k, max_size=k))))
    m2 = u.right(Multiset(data.draw(st.lists(st.sampled_from(n2.places), min_size=k, max_size=k))))
    universe = cross_universe(u)
    v = decide_place_bisimilar(u.net, m1, m2, universe)
    assert v.definite
    assert v.yes == brute_place_bisimilar(u.net, m1, m2, universe)


@settings(max_examples=100)
@given(nets(), st.data())
def test_check_matches_brute_force(net, data):
    pairs = data.draw(st.sets(st.tuples(st.sampled_from(net.places), st.sampled_from(net.places))))
    assert check_place_bisimulation(net, PlaceRelation(pairs)).ok == brute_is_place_bisim(net, pairs)


@settings(max_examples=100)
@given(nets(), st.data())
def test_check_ignores_transition_order_and_names(net, data):
    pairs = data.draw(st.sets(st.tuples(st.sampled_from(net.places), st.sampled_from(net.places))))
    ok = check_place_bisimulation(net, PlaceRelation(pairs)).ok
    perm = data.draw(st.permutations(net.transitions))
    rename = {p: f"z{i}" for i, p in enumerate(data.draw(st.permutations(net.places)))}
    f = rename.__getitem__
    renamed = PetriNet(tuple(rename[p] for p in net.places),
                       tuple(type(t)(t.id, t.pre.map(f), t.label, t.post.map(f)) for t in perm))
    R2 = PlaceRelation((f(a), f(b)) for a, b in pairs)
    assert check_place_bisimulation(renamed, R2).ok == ok
