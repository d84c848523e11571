"""Run the reversibility probe on a fixture whose place relation is known.

    python3 scripts/probe.py case-study --runs 500 --maxlen 5
"""

import argparse
import sys

from pnbisim.check import decide
from pnbisim.corpus import load_case
from pnbisim.reversibility import reversibility_probe


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("case", nargs="?", default="case-study")
    p.add_argument("--runs", type=int, default=200)
    p.add_argument("--maxlen", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    a = p.parse_args(argv)
    c = load_case(a.case)
    witness = c.relation
    if witness is None:
        v = decide(c.net, c.m1, c.m2, "place", universe=c.universe)
        if not v.yes:
            print(f"{a.case}: markings are not place bisimilar ({v.outcome.value}); nothing to probe")
            return 2
        witness = v.relation
    rep = reversibility_probe(c.net, witness, c.m1, c.m2, runs=a.runs, maxlen=a.maxlen, seed=a.seed)
    print(f"{a.case}: {rep.runs} runs, {rep.steps} steps, {rep.undo_states} undo states, "
          f"{len(rep.violations)} violations")
    for v in rep.violations[:10]:
        print("  ", v)
    return 1 if rep.violations else 0


if __name__ == "__main__":
    sys.exit(main())
