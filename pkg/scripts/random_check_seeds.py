"""Run the Monte-Carlo criterion check over several seeds and state families.

    python scripts/random_check_seeds.py --trials 100000 --seeds 1 2 3
"""

import argparse
import json

from partner_overlap.cli import RandomCheckConfig, random_check

FAMILIES = {
    "default": {},
    "near_pure": {"nu_max": 1.05},
    "strong_squeezing": {"squeeze_max": 2.0},
}


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    parser.add_argument("--trials", type=int, default=100_000)
    parser.add_argument("--seeds", type=int, nargs="+", default=[1, 2, 3])
    args = parser.parse_args()
    bad = 0
    for name, extra in FAMILIES.items():
        for seed in args.seeds:
            rep = random_check(RandomCheckConfig(n_trials=args.trials, seed=seed, **extra))
            bad += rep["n_disagreements"] + rep["n_unphysical"]
            print(json.dumps({"family": name, **rep}, sort_keys=True))
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main())
