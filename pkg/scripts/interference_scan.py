"""Concurrence of e_1 against the relative phase 2 psi21 + zeta.

Prints the scanned curve and the predicted extremes
|C_p cos^2(theta21/2) +- C_Psi1 sin^2(theta21/2)|.

    python3 scripts/interference_scan.py --chi 0.4 --theta21 1.3 --theta32 0.8
"""

import argparse
import math
import sys

import numpy as np

from qmixpar.entangle import concurrence_pure, interference_extremes, part_concurrences
from qmixpar.parametrize import TwoQubitCoords, ek_basis


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--chi", type=float, default=0.4)
    ap.add_argument("--theta21", type=float, default=1.3)
    ap.add_argument("--theta32", type=float, default=0.8)
    ap.add_argument("--zeta", type=float, default=0.6)
    ap.add_argument("--steps", type=int, default=73)
    args = ap.parse_args(argv)

    base = TwoQubitCoords.from_flat({"chi": args.chi, "theta21": args.theta21, "theta32": args.theta32, "zeta": args.zeta})
    pc = part_concurrences(base)
    lo, hi = interference_extremes(pc.c_p, pc.c_psi1, math.cos(args.theta21 / 2) ** 2)
    psis = np.linspace(0, 2 * math.pi, args.steps)
    vals = [concurrence_pure(ek_basis(base.with_(psi21=float(p)))[:, 1]) for p in psis]

    print("psi21,phase,c_e1")
    for p, v in zip(psis, vals):
        print(f"{p:.6f},{(2 * p + args.zeta) % (2 * math.pi):.6f},{v:.12f}")
    print(f"# predicted min/max {lo:.12f} {hi:.12f}; scanned {min(vals):.12f} {max(vals):.12f}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
