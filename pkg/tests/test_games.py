import pytest

from pnbisim.corpus import load_case
from pnbisim.games import GameConfig, game_decide, replay_strategy
from pnbisim.multiset import Multiset
from pnbisim.textio import parse_net

M = Multiset.of


def _run(name, mode, **kw):
    c = load_case(name)
    return game_decide(c.net, c.m1, c.m2, GameConfig(mode=mode, **kw))


def test_fc_examples():
    assert _run("fig2", "fc").yes
    assert _run("fig5", "fc").yes
    assert _run("fig3", "fc").no


def test_fig5_hfc_refutation_goes_backwards():
    v = _run("fig5", "hfc")
    assert v.no
    dirs = [m.dir for m in v.trace]
    assert "bwd" in dirs and dirs[-1] == "fwd"
    assert v.stats["finite_unfolding"]


def test_fig5_fc_is_exact():
    v = _run("fig5", "fc")
    assert v.yes and v.stats["finite_unfolding"]


@pytest.mark.parametrize("name", ["fig1", "fig2", "fig3", "fig4", "fig5", "fig6"])
def test_hereditary_cn_agrees_with_cn(name):
    assert _run(name, "cn").outcome == _run(name, "hcn").outcome


@pytest.mark.parametrize("name,mode", [("fig1", "cn"), ("fig2", "cn"), ("fig2", "hcn"), ("fig3", "fc"),
                                       ("fig5", "cn"), ("fig5", "hfc")])
def test_refutations_replay(name, mode):
    c = load_case(name)
    v = game_decide(c.net, c.m1, c.m2, GameConfig(mode=mode))
    assert v.no
    assert all(replay_strategy(c.net, tree, mode) for tree in v.strategy)


def test_replay_detects_a_missing_answer():
    c = load_case("fig5")
    v = game_decide(c.net, c.m1, c.m2, GameConfig(mode="hfc"))
    tree = v.strategy[0]
    # find a node with an answer and drop it
    stack = [tree]
    while stack:
        node = stack.pop()
        if node["responses"]:
            node["responses"] = node["responses"][1:]
            break
        stack.extend(ch for _, ch in node["responses"])
    assert not replay_strategy(c.net, tree, "hfc")


def test_cyclic_nets_are_depth_bounded():
    net, _ = parse_net("net c\nplace p\nplace q\ntrans t1: p -[a]-> p\ntrans t2: q -[a]-> q\n"
                       "place r\ntrans t3: r -[b]-> r\n")
    v = game_decide(net, M("p"), M("q"), GameConfig(mode="cn", depth=3))
    assert not v.definite and "depth bound 3" in v.reason
    v = game_decide(net, M("p"), M("r"), GameConfig(mode="cn", depth=3))
    assert v.no


def test_size_mismatch_and_bad_mode():
    assert _run("fig3", "cn").no
    with pytest.raises(ValueError):
        GameConfig(mode="bogus")


def test_budget_exhaustion_is_reported():
    v = _run("fig5", "fc", budget=3)
    assert not v.definite and "budget" in v.reason
