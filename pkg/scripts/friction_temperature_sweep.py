"""Blackbody drag versus temperature for a damped Lorentz particle, with the
low-temperature T^6 law and the narrow-line estimate for comparison.

    python3 scripts/friction_temperature_sweep.py --out drag_vs_T.csv
"""
import argparse
import math
import sys

import numpy as np

from nanoforce.friction import FrictionScene, friction_force
from nanoforce.response_models import PolarizabilityModel

ZETA6 = math.pi**6 / 945


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--alpha0", type=float, default=1.0)
    ap.add_argument("--omega0", type=float, default=1.0)
    ap.add_argument("--gamma", type=float, default=0.1)
    ap.add_argument("--v", type=float, default=1e-4)
    ap.add_argument("--points", type=int, default=41)
    ap.add_argument("--out")
    args = ap.parse_args(argv)

    p = PolarizabilityModel.isotropic(args.alpha0, args.omega0, args.gamma)
    out = open(args.out, "w") if args.out else sys.stdout
    out.write("T,drag,T6_law,narrow_line,converged\n")
    for T in np.geomspace(1e-3, 1e2, args.points) * args.omega0:
        r = friction_force(FrictionScene(args.v, float(T), p))
        low = args.alpha0 * args.gamma * 2880 * ZETA6 * T**6 / (3 * math.pi * args.omega0**2)
        x = args.omega0 / (2 * T)
        narrow = args.alpha0 * args.omega0**6 / (6 * T * math.sinh(x) ** 2) if x < 300 else 0.0
        out.write(f"{T:.16e},{r.drag:.16e},{low:.16e},{narrow:.16e},{int(r.converged)}\n")
    if args.out:
        out.close()


if __name__ == "__main__":
    main()
