"""Exact invariant report for every shipped polygon fixture.

Writes the invariants table (one row per fixture, all entries exact
rationals) and a per-fixture table of the pair invariant as a function of
the cone angle; the critical angle row is included whenever it exists.
Everything routes through the CLI dispatcher, so the files are exactly
what `conekit futaki ...` prints.

Usage: python scripts/futaki_report.py [--out-dir .]
"""

import argparse
import os

from conekit.cli import parse_and_dispatch
from conekit.toric_futaki import FIXTURE_NAMES


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default=".")
    args = ap.parse_args()
    os.makedirs(args.out_dir, exist_ok=True)

    for name in FIXTURE_NAMES:
        table = os.path.join(args.out_dir, f"futaki_{name}.csv")
        code = parse_and_dispatch(
            ["futaki", "pair", "--fixture", name, "--output", table]
        )
        assert code == 0, f"futaki pair failed on {name}"
        betas = os.path.join(args.out_dir, f"futaki_{name}_betas.csv")
        code = parse_and_dispatch(
            ["futaki", "pair", "--fixture", name, "--beta-table",
             "--output", betas]
        )
        assert code == 0, f"beta table failed on {name}"
        print(f"{name}: wrote {table} and {betas}")


if __name__ == "__main__":
    main()
