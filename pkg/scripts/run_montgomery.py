#!/usr/bin/env python3
"""Montgomery's weighted sum of (singular series - 1) over a dyadic H range.

Thin wrapper over `quadprimes montgomery`; prints the CSV table with the
fitted slope trailer (target -0.5).
"""

import argparse
import sys

from quadprimes.cli import main as cli_main


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--Hmax", type=int, default=131072, help="largest dyadic H")
    ap.add_argument("--cutoff", type=int, default=1_000_000,
                    help="Euler product truncation")
    ap.add_argument("--out", default=None, help="CSV path (default stdout)")
    args = ap.parse_args()

    argv = ["montgomery", "--Hmax", str(args.Hmax), "--cutoff", str(args.cutoff)]
    if args.out:
        argv += ["--out", args.out]
    return cli_main(argv)


if __name__ == "__main__":
    sys.exit(main())
