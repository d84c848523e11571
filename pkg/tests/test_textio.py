import json

import pytest
from hypothesis import given

from pnbisim.causal import CausalNet
from pnbisim.corpus import FIXTURES, all_cases, load_net
from pnbisim.multiset import EMPTY, Multiset
from pnbisim.net import reach_graph
from pnbisim.place_bisim import check_place_bisimulation
from pnbisim.textio import (ParseError, emit_witness, export_dot, load_relation, parse_marking, parse_net,
                            serialize_net)
from pnbisim.verdict import Move, Outcome, Verdict

from helpers import nets

M = Multiset.of


def test_parse_example():
    net, m0 = parse_net("net g\nplace s1 init 2\ntrans t: s1 -[a]-> s1\n")
    assert net.places == ("s1",) and m0 == Multiset({"s1": 2})
    t = net.transition("t")
    assert (t.pre, t.label, t.post) == (M("s1"), "a", M("s1"))


def test_empty_pre_set_is_rejected():
    with pytest.raises(ParseError, match="empty pre-set"):
        parse_net("net g\nplace s1\ntrans t: 0 -[a]-> s1\n")


@pytest.mark.parametrize("text,where", [
    ("net g\nplace s1\ntrans t: s1 -[a] s1\n", "3:"),
    ("net g\nplace s1\nplace s1\n", "3:7"),
    ("net g\nplace s1\ntrans t: s2 -[a]-> 0\n", "undeclared place s2"),
    ("place s1\n", "1:1"),
    ("net g\nplace s1 init x\n", "2:"),
    ("net g\nplace s1\ntrans t: s1 -[a]-> $\n", "3:20"),
])
def test_errors_carry_positions(text, where):
    with pytest.raises(ParseError, match=where):
        parse_net(text)


def test_duplicate_triples():
    text = "net g\nplace s\ntrans t1: s -[a]-> s\ntrans t2: s -[a]-> s\n"
    with pytest.raises(ParseError, match="duplicates"):
        parse_net(text)
    net, _ = parse_net(text, allow_dup=True)
    assert len(net.transitions) == 2


def test_comments_and_primes():
    net, m0 = parse_net("# header\nnet x  # trailing\nplace C1' init 1\nplace D2''\n"
                        "trans t: C1' -[del]-> 2*D2''\n")
    assert net.transition("t").post == Multiset({"D2''": 2})


def test_marking_literals():
    spec, _ = load_net("spec.pn")
    assert parse_marking(spec, "P1 + C1") == M("P1", "C1")
    six, _ = load_net("fig6.pn")
    assert parse_marking(six, "2*s1") == Multiset({"s1": 2})
    assert parse_marking(six, "0") == EMPTY
    with pytest.raises(ParseError, match="unknown place"):
        parse_marking(six, "s9")


@pytest.mark.parametrize("path", sorted(p.name for p in FIXTURES.glob("*.pn")))
def test_fixture_round_trip(path):
    net, m0 = load_net(path)
    text = serialize_net(net, m0)
    net2, m02 = parse_net(text)
    assert net2 == net and m02 == m0
    assert serialize_net(net2, m02) == text


@given(nets())
def test_random_round_trip(net):
    assert parse_net(serialize_net(net))[0] == net


def test_witness_schema():
    c = [x for x in all_cases() if x.name == "case-study"][0]
    v = Verdict(Outcome.YES, relation=c.relation, linkings=[M(("C1", "C2"), ("P1", "P2"))], stats={"n": 1})
    d = json.loads(emit_witness(v))
    assert d["verdict"] == "YES"
    assert d["relation"] == [list(p) for p in sorted(c.relation)]
    assert d["relation"][0] == ["C1", "C2"] and len(d["relation"]) == 6
    assert d["linkings"] == [[[["C1", "C2"], 1], [["P1", "P2"], 1]]]
    no = json.loads(emit_witness(Verdict(Outcome.NO, trace=[Move("fwd", 1, "t1")])))
    assert no["trace"] == [{"dir": "fwd", "side": 1, "trans": "t1"}]
    inc = json.loads(emit_witness(Verdict(Outcome.INCONCLUSIVE, reason="cap", stats={"k": 2})))
    assert set(inc) == {"verdict", "stats"}


def test_witness_for_reports_and_relations():
    c = [x for x in all_cases() if x.name == "case-study"][0]
    rep = check_place_bisimulation(c.net, c.relation)
    assert json.loads(emit_witness(rep)) == {"verdict": "YES"}
    assert load_relation(emit_witness(c.relation)) == c.relation
    with pytest.raises(ParseError):
        load_relation('{"relation": [["a"]]}')
    with pytest.raises(ParseError):
        load_relation("not json")


def test_dot_net():
    a, m0 = load_net("fig1a.pn")
    dot = export_dot(a, m0)
    assert dot.count("shape=circle") == 2 and dot.count("shape=box") == 1 and dot.count("->") == 2
    r, _ = load_net("fig4r.pn")
    dot = export_dot(r)
    assert dot.count('[label="2"]') == 2


def test_dot_causal_and_reach():
    assert export_dot(CausalNet.initial(0)) == "digraph causal {\n}\n"
    b, m0 = load_net("fig3b.pn")
    dot = export_dot(reach_graph(b, m0))
    assert dot.count("->") == 4 and "doublecircle" in dot
