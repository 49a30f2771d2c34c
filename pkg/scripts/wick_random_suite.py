"""Real-axis versus Matsubara sides for random damped-Lorentz responses, plus
the upper-half-plane negative control.

    python3 scripts/wick_random_suite.py --cases 200 --seed 1
"""
import argparse

import numpy as np

from nanoforce.wick import RationalResponse, random_response, random_temperatures, verify_wick


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--cases", type=int, default=100)
    ap.add_argument("--terms", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--tol", type=float, default=1e-6)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    verdicts = {"pass": 0, "fail": 0, "indeterminate": 0}
    worst = 0.0
    for T in random_temperatures(rng, args.cases):
        rep = verify_wick(random_response(rng, args.terms), T, args.tol)
        verdicts[rep.verdict] += 1
        worst = max(worst, rep.rel_diff)
    neg = verify_wick(RationalResponse.of((1.0, 1.0, 0.5), (0.5, 2.0, -0.8)), 0.3, args.tol)
    print(f"cases={args.cases} {verdicts} max_rel_diff={worst:.3e}")
    print(f"negative control: verdict={neg.verdict} lhs={neg.lhs:.6g} rhs={neg.rhs:.6g}")


if __name__ == "__main__":
    main()
