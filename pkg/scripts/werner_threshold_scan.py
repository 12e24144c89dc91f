"""Scan the Werner line: closed-form threshold vs oracle bisection over C_p.

    python3 scripts/werner_threshold_scan.py [--points 21] [--out werner.csv]
"""

import argparse
import csv
import math
import sys

from qmixpar.geometry import bisect_threshold, werner_threshold
from qmixpar.parametrize import TwoQubitCoords


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=21)
    ap.add_argument("--out", default=None)
    args = ap.parse_args(argv)

    rows = []
    for k in range(args.points):
        chi = (math.pi / 4) * k / (args.points - 1)
        cp = math.sin(2 * chi)
        mu_star, nu_star = werner_threshold(cp)
        found = bisect_threshold(TwoQubitCoords.from_flat({"chi": chi}))
        rows.append((cp, mu_star, nu_star, found, abs(found - mu_star)))

    out = open(args.out, "w", newline="") if args.out else sys.stdout
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["c_p", "mu_star", "nu1_star", "mu_bisect", "abs_diff"])
    for row in rows:
        w.writerow([format(x, ".17g") for x in row])
    worst = max(r[-1] for r in rows)
    print(f"# worst |bisection - closed form| = {worst:.2e}", file=sys.stderr)
    return 0 if worst < 1e-6 else 1


if __name__ == "__main__":
    sys.exit(main())
