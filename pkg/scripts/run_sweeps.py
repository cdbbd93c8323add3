#!/usr/bin/env python3
"""Generate and run the two example parameter sweeps.

The detuning sweep moves the cavity peak away from the qubit frequency
(deaths arrive later, then revivals appear, then no death at all); the
dip-depth sweep weakens the spectral gap (the trapping plateau survives
only at full depth).

Example:
    python scripts/run_sweeps.py --out-dir sweeps
"""

import argparse
from pathlib import Path

from entdyn.cli import main as simulate

DETUNING_SWEEP = """\
# Narrow resonant line, Psi-family initial state; sweep the detuning.
model.kind = lorentzian
model.gamma = 1.0
model.lambda = 0.1
initial.family = psi
initial.alpha = 0.5773502691896258
grid.t_max = 15.0
grid.n = 1501
sweep.key = model.delta
sweep.values = 0.0, 0.2, 0.5, 0.8
"""

DIP_DEPTH_SWEEP = """\
# Lorentzian with a spectral dip at the qubit frequency; sweep the dip depth.
model.kind = bandgap-dip
model.gamma1 = 1.0
model.lambda1 = 50.0
model.lambda2 = 5.0
initial.family = phi
initial.alpha = 0.7071067811865476
grid.t_max = 50.0
grid.n = 2001
sweep.key = model.gamma2
sweep.values = 1.0, 0.6666666666666666, 0.3333333333333333, 0.0
"""


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", type=Path, default=Path("sweeps"))
    args = parser.parse_args()
    args.out_dir.mkdir(parents=True, exist_ok=True)

    for name, text in (("detuning", DETUNING_SWEEP), ("dip_depth", DIP_DEPTH_SWEEP)):
        config = args.out_dir / f"{name}.conf"
        config.write_text(text, encoding="ascii")
        code = simulate(["sweep", str(config), "--out-dir", str(args.out_dir)])
        if code != 0:
            return code
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
