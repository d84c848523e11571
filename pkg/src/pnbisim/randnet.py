"""Random small nets for property tests and experiments."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .multiset import Multiset
from .net import PetriNet, Transition, disjoint_union, reach_graph


@dataclass
class RandomNetConfig:
    places: int = 5
    transitions: int = 5
    tokens: int = 4
    labels: str = "ab"
    max_arc: int = 2       # size of pre/post multisets
    reach_cap: int = 200   # nets whose markings exceed this are rejected


def random_net(rng: random.Random, cfg: RandomNetConfig, prefix: str = "p", tprefix: str = "t") -> PetriNet:
    n = rng.randint(1, cfg.places)
    places = [f"{prefix}{i}" for i in range(n)]
    trans = []
    seen = set()
    for j in range(rng.randint(1, cfg.transitions)):
        pre = Multiset(rng.choices(places, k=rng.randint(1, cfg.max_arc)))
        post = Multiset(rng.choices(places, k=rng.randint(0, cfg.max_arc)))
        lab = rng.choice(cfg.labels)
        if (pre, lab, post) in seen:
            continue
        seen.add((pre, lab, post))
        trans.append(Transition(f"{tprefix}{j}", pre, lab, post))
    return PetriNet(tuple(places), tuple(trans))


def random_marking(rng: random.Random, net: PetriNet, size: int) -> Multiset:
    return Multiset(rng.choices(net.places, k=size))


def rename_copy(net: PetriNet, prefix: str, tprefix: str, rng: random.Random = None) -> tuple:
    """Copy of ``net`` under fresh names; with ``rng`` the place order is shuffled."""
    order = list(net.places)
    if rng is not None:
        rng.shuffle(order)
    pmap = {p: f"{prefix}{i}" for i, p in enumerate(order)}
    trans = tuple(Transition(f"{tprefix}{i}", t.pre.map(pmap.__getitem__), t.label,
                             t.post.map(pmap.__getitem__)) for i, t in enumerate(net.transitions))
    return PetriNet(tuple(pmap[p] for p in net.places), trans), pmap


def bounded(net: PetriNet, markings, cap: int) -> bool:
    return all(reach_graph(net, m, cap).complete for m in markings)


def random_instance(rng: random.Random, cfg: RandomNetConfig, tries: int = 200):
    """A bounded net with two equal-size markings to compare.

    Half of the instances join a net with a renamed (possibly mutated) copy
    so that equivalent pairs occur often; the rest compare two markings of
    one net.
    """
    for _ in range(tries):
        base = random_net(rng, cfg)
        k = rng.randint(1, cfg.tokens)
        if rng.random() < 0.5:
            copy, pmap = rename_copy(base, "q", "u", rng)
            if rng.random() < 0.5 and copy.transitions:
                copy = _mutate(rng, copy)
            u = disjoint_union(base, copy)
            m = random_marking(rng, base, k)
            m2 = m.map(pmap.__getitem__) if rng.random() < 0.7 else random_marking(rng, copy, k)
            net, m1, m2 = u.net, u.left(m), u.right(m2)
        else:
            net = base
            m1, m2 = random_marking(rng, net, k), random_marking(rng, net, k)
        if bounded(net, (m1, m2), cfg.reach_cap):
            return net, m1, m2
    raise RuntimeError("no bounded instance found")


def _mutate(rng: random.Random, net: PetriNet) -> PetriNet:
    trans = list(net.transitions)
    i = rng.randrange(len(trans))
    t = trans[i]
    kind = rng.choice(["post", "label", "drop"])
    if kind == "post":
        t = Transition(t.id, t.pre, t.label, Multiset(rng.choices(net.places, k=rng.randint(0, 2))))
    elif kind == "label":
        t = Transition(t.id, t.pre, "b" if t.label == "a" else "a", t.post)
    else:
        trans.pop(i)
        return PetriNet(net.places, tuple(trans), name=net.name)
    if any(u.triple() == t.triple() for j, u in enumerate(trans) if j != i):
        return net
    trans[i] = t
    return PetriNet(net.places, tuple(trans), name=net.name)


def random_net_pair(rng: random.Random, cfg: RandomNetConfig):
    """Two nets (the second often a mutated copy of the first) joined by
    disjoint union, with equal-size markings; boundedness is not required."""
    n1 = random_net(rng, cfg, "a", "t")
    if rng.random() < 0.5:
        n2, _ = rename_copy(n1, "b", "u", rng)
        if rng.random() < 0.5 and n2.transitions:
            n2 = _mutate(rng, n2)
    else:
        n2 = random_net(rng, cfg, "b", "u")
    u = disjoint_union(n1, n2)
    k = rng.randint(1, cfg.tokens)
    return u, u.left(random_marking(rng, n1, k)), u.right(random_marking(rng, n2, k))
