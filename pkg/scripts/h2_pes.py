#!/usr/bin/env python3
"""Potential-energy-surface sweep for the six-term two-qubit Hamiltonian.

The geometry-dependent coefficients are external data: supply a CSV with
columns R,g0..g5 (see data/h2_pes_template.csv for the format).  Each row is
referenced against its exact dense ground energy.

    python scripts/h2_pes.py --pes my_coefficients.csv --out h2_pes.csv
"""

import argparse
import sys
from pathlib import Path

from cmxlab.cli import main as cli_main

TEMPLATE = Path(__file__).resolve().parents[1] / "data" / "h2_pes_template.csv"


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--pes", required=True, help="CSV with columns R,g0..g5")
    parser.add_argument("--orders", default="1,2,3,4")
    parser.add_argument("--out", default="h2_pes.csv")
    args = parser.parse_args()

    if not Path(args.pes).exists():
        print(f"error: {args.pes} not found; the coefficient table is user-supplied "
              f"data (format: {TEMPLATE})", file=sys.stderr)
        return 2

    methods = ",".join(
        f"{name}:{order}"
        for order in args.orders.split(",")
        for name in ("cmx-cioslowski", "cmx-knowles", "pds")
    )
    return cli_main(
        [
            "sweep",
            "--model", "h2",
            "--h2-file", args.pes,
            "--trial", "01",
            "--methods", methods,
            "--output", args.out,
            "--emit-plot", args.out.replace(".csv", ".gp"),
        ]
    )


if __name__ == "__main__":
    sys.exit(main())
