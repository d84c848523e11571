"""One entry point for every equivalence."""

from __future__ import annotations

from dataclasses import dataclass

from .games import GameConfig, game_decide
from .net import Marking, PetriNet
from .place_bisim import decide_place_bisimilar
from .verdict import Verdict

RELATIONS = ("int", "place", "sp", "cn", "hcn", "fc", "hfc")

# finest first
SPECTRUM = ("place", "cn", "hfc", "fc", "int")


@dataclass
class Bounds:
    cap: int = 10_000            # reachability nodes
    depth: int = 6               # game depth on infinite runs
    budget: int = 200_000        # game positions / sp linkings
    candidates: int = 2**22      # place relations tried
    timeout: float = 60.0        # seconds, place decider


def decide(net: PetriNet, m1: Marking, m2: Marking, relation: str,
           bounds: Bounds = None, universe=None) -> Verdict:
    b = bounds or Bounds()
    if relation == "place":
        return decide_place_bisimilar(net, m1, m2, universe=universe,
                                      max_candidates=b.candidates, timeout=b.timeout)
    if relation not in RELATIONS:
        raise ValueError(f"unknown relation {relation!r}")
    return game_decide(net, m1, m2, GameConfig(relation, b.depth, b.budget, b.cap))
