#!/usr/bin/env python3
"""Plot concurrence trajectories from one or more trajectory CSV files.

Reads only the emitted CSV (no library import needed), so it doubles as a
check that the files are consumable by external tools.

Example:
    python scripts/plot_trajectories.py results/fig1-*.csv -o fig1.png
"""

import argparse
import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def read_columns(path: Path, names):
    columns = {name: [] for name in names}
    with open(path, newline="") as handle:
        for row in csv.DictReader(handle):
            for name in names:
                columns[name].append(float(row[name]))
    return columns


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("csv_files", nargs="+", type=Path)
    parser.add_argument("-o", "--output", type=Path, default=Path("concurrence.png"))
    parser.add_argument(
        "--survival", action="store_true", help="plot |q(t)|^2 instead of concurrence"
    )
    args = parser.parse_args()

    column = "abs_q2" if args.survival else "C"
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    for path in args.csv_files:
        data = read_columns(path, ("t", column))
        ax.plot(data["t"], data[column], label=path.stem)
    ax.set_xlabel("t (decay-rate units)")
    ax.set_ylabel("survival probability" if args.survival else "concurrence")
    ax.set_ylim(-0.02, 1.02)
    ax.legend()
    fig.tight_layout()
    fig.savefig(args.output, dpi=150)
    print(f"wrote {args.output}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
