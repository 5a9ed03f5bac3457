#!/usr/bin/env python3
"""Power along sqrt(n)-local contamination alternatives for several gamma.

Writes results/pitman_gamma{-0.1,0,0.1}.{csv,json}.  gamma = 0.1 skips n = 50,
where the mixing weight 5 n^gamma / sqrt(n) would exceed one.
"""

import sys

from spheresym.cli import main


def run() -> int:
    jobs = [
        ("-0.1", ["50", "100", "250", "500"]),
        ("0", ["50", "100", "250", "500"]),
        ("0.1", ["100", "250", "500"]),
    ]
    for gamma, grid in jobs:
        rc = main(
            ["pitman", "--gamma", gamma, "--n-grid", *grid,
             "--R", "500", "--B", "500", "--seed", "102",
             "--output", f"results/pitman_gamma{gamma}"]
        )
        if rc != 0:
            return rc
    return 0


if __name__ == "__main__":
    sys.exit(run())
