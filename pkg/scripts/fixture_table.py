"""Decide every relation on every bundled fixture and print the verdict table.

    python3 scripts/fixture_table.py [--depth 6] [--csv out.csv]
"""

import argparse
import csv
import sys
import time
from dataclasses import dataclass

from pnbisim.check import RELATIONS, Bounds, decide
from pnbisim.corpus import all_cases

SHORT = {"YES": "Y", "NO": "N", "INCONCLUSIVE": "?"}


@dataclass
class TableConfig:
    depth: int = 6
    budget: int = 200_000
    timeout: float = 60.0
    csv: str = None


def run(cfg: TableConfig) -> list:
    bounds = Bounds(depth=cfg.depth, budget=cfg.budget, timeout=cfg.timeout)
    rows = []
    for case in all_cases():
        row = {"case": case.name}
        for rel in RELATIONS:
            t0 = time.perf_counter()
            got = decide(case.net, case.m1, case.m2, rel, bounds, case.universe).outcome.value
            want = case.expected.get(rel) or case.implied.get(rel)
            row[rel] = got
            row[rel + "_s"] = round(time.perf_counter() - t0, 3)
            row[rel + "_ok"] = want is None or got == want
        rows.append(row)
    return rows


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--depth", type=int, default=6)
    p.add_argument("--budget", type=int, default=200_000)
    p.add_argument("--timeout", type=float, default=60.0)
    p.add_argument("--csv")
    cfg = TableConfig(**vars(p.parse_args(argv)))
    rows = run(cfg)
    print(f"{'case':<22}" + "".join(f"{r:>7}" for r in RELATIONS))
    bad = 0
    for row in rows:
        cells = []
        for r in RELATIONS:
            mark = SHORT[row[r]] + ("" if row[r + "_ok"] else "!")
            bad += not row[r + "_ok"]
            cells.append(f"{mark:>7}")
        print(f"{row['case']:<22}" + "".join(cells))
    print(f"\nY yes, N no, ? inconclusive, ! differs from manifest; {bad} mismatches")
    if cfg.csv:
        with open(cfg.csv, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(rows[0]))
            w.writeheader()
            w.writerows(rows)
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
