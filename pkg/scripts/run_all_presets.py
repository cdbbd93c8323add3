#!/usr/bin/env python3
"""Run every built-in preset and print a one-line event summary per run.

Example:
    python scripts/run_all_presets.py --out-dir results --oracle
"""

import argparse
import json
from pathlib import Path

from entdyn.cli import PRESETS
from entdyn.cli import main as simulate


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", type=Path, default=Path("results"))
    parser.add_argument(
        "--oracle", action="store_true", help="also run the integral-equation oracle"
    )
    args = parser.parse_args()

    for name in sorted(PRESETS):
        argv = ["preset", name, "--out-dir", str(args.out_dir), "--quiet"]
        if args.oracle:
            argv.append("--oracle")
        code = simulate(argv)
        if code != 0:
            return code

    print(f"{'preset':<10} {'esd_time':>12} {'revivals':>9} {'plateau':>10}")
    for name in sorted(PRESETS):
        report = json.loads((args.out_dir / f"{name}.json").read_text())
        esd = "-" if report["esd_time"] is None else f"{report['esd_time']:.4f}"
        plateau = "-" if report["plateau"] is None else f"{report['plateau']:.5f}"
        print(f"{name:<10} {esd:>12} {len(report['revivals']):>9} {plateau:>10}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
