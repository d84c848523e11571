"""Sample random bounded nets and tally how often each pair of adjacent
relations in the chain place < cn < hfc < fc < int is separated.

    python3 scripts/spectrum.py --instances 300 --seed 7
"""

import argparse
import random
import sys
from collections import Counter
from dataclasses import dataclass, fields

from pnbisim.check import SPECTRUM, Bounds, decide
from pnbisim.randnet import RandomNetConfig, random_instance


@dataclass
class SpectrumConfig:
    instances: int = 200
    seed: int = 2024
    places: int = 5
    transitions: int = 5
    tokens: int = 4
    depth: int = 4
    budget: int = 20_000


def run(cfg: SpectrumConfig):
    rng = random.Random(cfg.seed)
    net_cfg = RandomNetConfig(places=cfg.places, transitions=cfg.transitions, tokens=cfg.tokens)
    bounds = Bounds(depth=cfg.depth, budget=cfg.budget, timeout=20.0)
    yes, definite, split, violations = Counter(), Counter(), Counter(), []
    for i in range(cfg.instances):
        net, m1, m2 = random_instance(rng, net_cfg)
        out = {r: decide(net, m1, m2, r, bounds).outcome.value for r in SPECTRUM}
        for r, v in out.items():
            definite[r] += v != "INCONCLUSIVE"
            yes[r] += v == "YES"
        for finer, coarser in zip(SPECTRUM, SPECTRUM[1:]):
            a, b = out[finer], out[coarser]
            if a == "YES" and b == "NO":
                violations.append((i, finer, coarser))
            if a == "NO" and b == "YES":
                split[(finer, coarser)] += 1
    return yes, definite, split, violations


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for f in fields(SpectrumConfig):
        p.add_argument("--" + f.name, type=type(f.default), default=f.default)
    cfg = SpectrumConfig(**vars(p.parse_args(argv)))
    yes, definite, split, violations = run(cfg)
    print(f"{cfg.instances} instances, seed {cfg.seed}")
    print(f"{'relation':<8}{'definite':>10}{'yes':>6}")
    for r in SPECTRUM:
        print(f"{r:<8}{definite[r]:>10}{yes[r]:>6}")
    print("\nseparating instances (finer NO, coarser YES):")
    for finer, coarser in zip(SPECTRUM, SPECTRUM[1:]):
        print(f"  {finer:>5} / {coarser:<5} {split[(finer, coarser)]}")
    print(f"\nordering violations: {violations or 'none'}")
    return 1 if violations else 0


if __name__ == "__main__":
    sys.exit(main())
