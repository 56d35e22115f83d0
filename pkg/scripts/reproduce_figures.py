#!/usr/bin/env python3
"""Regenerate the headline frequency scans and the asymmetry-map slice.

Writes plot-ready CSV tables (plus JSON summaries) into ./figures_out:

  scan_gb1.csv    gamma_b = gamma_a,      pump at 60% of critical
  scan_gb025.csv  gamma_b = 0.25 gamma_a, pump at 60% of critical
  map_slice.csv   symmetric-steering indicator along pump fraction 0.6

Equivalent to running the `shgsteer spectrum` / `asymmetry-map`
subcommands; kept as a script so the whole set regenerates with one
command.
"""

import os
import sys

from shgsteer.cli import main

OUT_DIR = "figures_out"


def run(argv):
    print("+ shgsteer " + " ".join(argv))
    code = main(argv)
    if code != 0:
        sys.exit(code)


if __name__ == "__main__":
    os.makedirs(OUT_DIR, exist_ok=True)
    run(["spectrum", "--gamma-b", "1.0", "--pump-frac", "0.6",
         "--out", os.path.join(OUT_DIR, "scan_gb1.csv")])
    run(["spectrum", "--gamma-b", "0.25", "--pump-frac", "0.6",
         "--out", os.path.join(OUT_DIR, "scan_gb025.csv")])
    run(["asymmetry-map", "--frac-min", "0.6", "--frac-max", "0.6",
         "--omega-points", "201",
         "--out", os.path.join(OUT_DIR, "map_slice.csv")])
    print("done; outputs in", OUT_DIR)
