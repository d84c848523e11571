import pytest

from pnbisim.closure import PlaceRelation
from pnbisim.corpus import load_case
from pnbisim.engines import sp_bisimilar
from pnbisim.net import NetError
from pnbisim.reversibility import reversibility_probe


def test_fig6_replicas():
    c = load_case("fig6")
    rep = reversibility_probe(c.net, PlaceRelation([("s1", "s2")]), c.m1, c.m2, runs=50, maxlen=4, seed=1)
    assert rep.ok and rep.steps > 0 and rep.undo_states > rep.runs


def test_zero_length_runs_pass():
    c = load_case("fig6")
    rep = reversibility_probe(c.net, PlaceRelation([("s1", "s2")]), c.m1, c.m2, runs=5, maxlen=0)
    assert rep.ok and rep.steps == 0 and rep.undo_states == 5


def test_case_study():
    c = load_case("case-study")
    rep = reversibility_probe(c.net, c.relation, c.m1, c.m2, runs=60, maxlen=5, seed=3)
    assert rep.ok and rep.steps > 0


def test_sp_linking_witness():
    c = load_case("fig4")
    v = sp_bisimilar(c.net, c.m1, c.m2)
    rep = reversibility_probe(c.net, v.linkings, c.m1, c.m2, runs=20, maxlen=3)
    assert rep.ok and rep.steps > 0


def test_unverified_witness_is_rejected():
    c = load_case("fig4")
    with pytest.raises(NetError):
        reversibility_probe(c.net, PlaceRelation([("s1", "s5"), ("s2", "s6"), ("s3", "s6"), ("s4", "s7")]),
                            c.m1, c.m2)
    c = load_case("fig6")
    with pytest.raises(NetError):
        reversibility_probe(c.net, PlaceRelation(), c.m1, c.m2)


def test_same_seed_same_report():
    c = load_case("case-study")
    a = reversibility_probe(c.net, c.relation, c.m1, c.m2, runs=20, seed=7)
    b = reversibility_probe(c.net, c.relation, c.m1, c.m2, runs=20, seed=7)
    assert (a.steps, a.undo_states) == (b.steps, b.undo_states)
