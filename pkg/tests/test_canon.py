from hypothesis import given, settings, strategies as st

from pnbisim.canon import CanonTable, LabeledDag, isomorphic


def _dag(labels, edges):
    return LabeledDag(dict(labels), edges)


def test_relabeled_copies_share_an_id():
    a = _dag({1: "x", 2: "y", 3: "y"}, [(1, 2), (1, 3)])
    b = _dag({"p": "y", "q": "x", "r": "y"}, [("q", "p"), ("q", "r")])
    t = CanonTable()
    assert t.intern(a, "a") == (0, True)
    assert t.intern(b, "b") == (0, False)
    assert t.items == ["a"]


def test_labels_and_edges_matter():
    a = _dag({1: "x", 2: "y"}, [(1, 2)])
    b = _dag({1: "y", 2: "x"}, [(1, 2)])
    c = _dag({1: "x", 2: "y"}, [])
    assert not isomorphic(a, b) and not isomorphic(a, c)
    t = CanonTable()
    assert [t.intern(g, None)[0] for g in (a, b, c)] == [0, 1, 2]


def test_hash_collision_is_resolved_exactly():
    # a matching versus a fan: same label counts, different shape
    a = _dag({1: "x", 2: "x", 3: "y", 4: "y"}, [(1, 3), (2, 4)])
    b = _dag({1: "x", 2: "x", 3: "y", 4: "y"}, [(1, 3), (1, 4)])
    assert not isomorphic(a, b)
    assert isomorphic(a, _dag({5: "x", 6: "x", 7: "y", 8: "y"}, [(5, 8), (6, 7)]))


def _vf2(a, b):
    from networkx.algorithms.isomorphism import DiGraphMatcher
    m = DiGraphMatcher(a.to_networkx(), b.to_networkx(), node_match=lambda x, y: x["l"][0] == y["l"][0])
    return m.is_isomorphic()


@st.composite
def _dags(draw):
    n = draw(st.integers(1, 7))
    labels = {i: draw(st.sampled_from("xy")) for i in range(n)}
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if draw(st.booleans())]
    return _dag(labels, edges)


@st.composite
def _dag_and_shuffle(draw):
    g = draw(_dags())
    perm = draw(st.permutations(list(g.labels)))
    m = dict(zip(g.labels, perm))
    if draw(st.booleans()):
        # perturb one label so roughly half the pairs are not isomorphic
        k = draw(st.sampled_from(list(g.labels)))
        labels = {m[n]: ("y" if lab == "x" else "x") if n == k else lab for n, lab in g.labels.items()}
    else:
        labels = {m[n]: lab for n, lab in g.labels.items()}
    return g, _dag(labels, [(m[u], m[v]) for u, v in g.edges])


@settings(max_examples=300)
@given(_dag_and_shuffle())
def test_matcher_agrees_with_vf2(pair):
    a, b = pair
    assert isomorphic(a, b) == _vf2(a, b)


@settings(max_examples=100)
@given(_dags(), _dags())
def test_matcher_agrees_with_vf2_on_unrelated_graphs(a, b):
    assert isomorphic(a, b) == _vf2(a, b)


def test_vf2_fallback_when_search_budget_runs_out():
    # eight interchangeable roots: a budget of one try cannot finish
    a = _dag({i: "x" for i in range(8)}, [])
    b = _dag({i + 10: "x" for i in range(8)}, [])
    assert isomorphic(a, b, steps=1)
