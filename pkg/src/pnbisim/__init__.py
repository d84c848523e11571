"""Behavioral equivalence checking for finite Place/Transition nets."""

import sys

from .check import RELATIONS, SPECTRUM, Bounds, decide
from .closure import (PlaceRelation, decompose, in_additive_closure, linkings_between, pi1, pi2,
                      related, related_markings)
from .engines import interleaving_bisimilar, sp_bisimilar, verify_sp_bisimulation
from .games import GameConfig, game_decide
from .multiset import EMPTY, Multiset
from .net import (InconclusiveError, NetError, NotEnabledError, PetriNet, Transition,
                  disjoint_union, enabled, fire, is_acyclic, is_safe, reach_graph)
from .place_bisim import check_place_bisimulation, decide_place_bisimilar
from .reversibility import reversibility_probe
from .textio import emit_witness, export_dot, parse_marking, parse_net, serialize_net
from .verdict import Move, Outcome, Verdict

__all__ = [name for name, obj in list(globals().items())
           if not name.startswith("_") and not isinstance(obj, type(sys))]
