#!/usr/bin/env python3
"""Hybridization sweep of the two-site Anderson impurity model.

Runs the three expansion variants (Cioslowski, Knowles, PDS) at orders 1-4
against the analytic ground energy and writes one CSV plus a gnuplot script.

    python scripts/siam_sweep.py --out siam_sweep.csv
"""

import argparse
import sys

from cmxlab.cli import main as cli_main


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--U", type=float, default=8.0)
    parser.add_argument("--sweep-values", default="0.1,0.25,0.5,1,1.5,2,3,4,6,8,10")
    parser.add_argument("--orders", default="1,2,3,4")
    parser.add_argument("--out", default="siam_sweep.csv")
    args = parser.parse_args()

    methods = ",".join(
        f"{name}:{order}"
        for order in args.orders.split(",")
        for name in ("cmx-cioslowski", "cmx-knowles", "pds")
    )
    return cli_main(
        [
            "sweep",
            "--U", str(args.U),
            "--sweep-values", args.sweep_values,
            "--methods", methods,
            "--output", args.out,
            "--emit-plot", args.out.replace(".csv", ".gp"),
        ]
    )


if __name__ == "__main__":
    sys.exit(main())
