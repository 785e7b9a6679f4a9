#!/usr/bin/env python3
"""Smoothed sums of (singular series - 1) over dyadic H, both test weights.

For each weight kind the sum should decay like -w(0) * r_K * 2 * log H; the
CLI prints per-H rows and the comparison target.  Large cutoffs matter here:
the truncation deficit scales like H^2 / (P log P), so the default P = 10^6.
"""

import argparse
import sys

from quadprimes.cli import main as cli_main


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--field", default="D=-1")
    ap.add_argument("--H", default="32,64,128,256,512",
                    help="comma-separated H values")
    ap.add_argument("--cutoff", type=int, default=1_000_000)
    ap.add_argument("--outdir", default=None,
                    help="write one CSV per weight kind here (default stdout)")
    args = ap.parse_args()

    for kind in ("disc", "square"):
        argv = ["sum-singular", "--field", args.field, "--H", args.H,
                "--w", kind, "--cutoff", str(args.cutoff)]
        if args.outdir:
            import os

            os.makedirs(args.outdir, exist_ok=True)
            argv += ["--out", os.path.join(args.outdir, f"sum_{kind}.csv")]
        code = cli_main(argv)
        if code != 0:
            return code
    return 0


if __name__ == "__main__":
    sys.exit(main())
