"""Locate where the ball-shell pair stops being entangled.

Bisects ``D_T = 0`` along the separation and mass axes; these thresholds
set the default scan ranges of the CLI.

    python scripts/find_thresholds.py --d-b 0.5
"""

import argparse

from scipy import optimize

from partner_overlap.field.scans import evaluate_point


def d_t(rb: float, db: float, mu: float, tol: float) -> float:
    return evaluate_point(rb, db, mu, tol)["d_t"]


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    parser.add_argument("--d-b", type=float, default=0.5)
    parser.add_argument("--r-b", type=float, default=1.0, help="shell radius for the mass threshold")
    parser.add_argument("--tol", type=float, default=1e-10)
    args = parser.parse_args()

    gap = optimize.brentq(lambda g: d_t(1.0 + g, args.d_b, 0.0, args.tol), 0.0, 0.5, xtol=1e-8)
    print(f"massless separation threshold: R_B - R_A = {gap:.6f} (d_B = {args.d_b})")
    mu = optimize.brentq(lambda m: d_t(args.r_b, args.d_b, m, args.tol), 0.0, 10.0, xtol=1e-8)
    print(f"mass threshold at R_B = {args.r_b}: mu = {mu:.6f}")


if __name__ == "__main__":
    main()
