"""Run every verification suite at its default size and print a summary table.

    python3 scripts/run_acceptance.py [--seed 42] [--jobs 4]
"""

import argparse
import sys
import time

from qmixpar.verify import SUITES, run_suites


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args(argv)
    t0 = time.time()
    outcomes = run_suites(list(SUITES), seed=args.seed, jobs=args.jobs)
    for o in outcomes:
        print(o.line())
    print(f"# {sum(o.passed for o in outcomes)}/{len(outcomes)} suites passed in {time.time() - t0:.1f}s")
    return 0 if all(o.passed for o in outcomes) else 1


if __name__ == "__main__":
    sys.exit(main())
