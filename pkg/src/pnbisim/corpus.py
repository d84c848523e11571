"""Bundled fixture nets and their expected verdicts."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .closure import PlaceRelation
from .net import Marking, PetriNet, disjoint_union
from .place_bisim import cross_universe
from .textio import parse_marking, parse_net

FIXTURES = Path(__file__).with_name("fixtures")


@dataclass
class Case:
    name: str
    net: PetriNet
    m1: Marking
    m2: Marking
    expected: dict
    implied: dict
    universe: list = None          # place pairs for the place decider
    relation: PlaceRelation = None
    parts: tuple = field(default=())   # (left net, right net) when two nets were joined


def load_net(name: str) -> tuple:
    return parse_net((FIXTURES / name).read_text())


def manifest() -> list:
    return json.loads((FIXTURES / "manifest.json").read_text())["cases"]


def load_case(name: str) -> Case:
    for entry in manifest():
        if entry["name"] == name:
            return _build(entry)
    raise KeyError(name)


def all_cases() -> list:
    return [_build(e) for e in manifest()]


def _build(e: dict) -> Case:
    n1, _ = load_net(e["left"][0])
    if e["right"] is None:
        m1 = parse_marking(n1, e["left"][1])
        m2 = parse_marking(n1, e["right_marking"])
        net, universe, parts = n1, None, (n1,)
    else:
        n2, _ = load_net(e["right"][0])
        u = disjoint_union(n1, n2)
        net = u.net
        m1 = u.left(parse_marking(n1, e["left"][1]))
        m2 = u.right(parse_marking(n2, e["right"][1]))
        universe, parts = cross_universe(u), (n1, n2)
    rel = PlaceRelation(tuple(p) for p in e["relation"]) if "relation" in e else None
    return Case(e["name"], net, m1, m2, e["expected"], e["implied"], universe, rel, parts)
