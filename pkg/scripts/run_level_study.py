#!/usr/bin/env python3
"""Level of the test under the spherical Gaussian null (three (n, d) cells)."""

import sys

from spheresym.cli import main

if __name__ == "__main__":
    sys.exit(main(["simulate", "--config", "configs/level_example1a.cfg"]))
