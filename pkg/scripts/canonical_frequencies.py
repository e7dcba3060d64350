"""Frequency map of the canonical model y0 dth0 + y1 dth1 (+ x2 dx1).

For each y1 on a grid, compares the rotation numbers of the integrated Reeb
flow with the frequencies z(y) from the linear constraints, for several
initial angles and (with --s 1) several x values.  Prints CSV.
"""

import argparse
import csv
import sys

import numpy as np

from contactkit.integrability import frequencies_from_y0, measured_rotation, torus_actions, torus_point
from contactkit.systems import canonical_system


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--y0", default="1 - y1^2", help="y0 as an expression in y1")
    ap.add_argument("--s", type=int, choices=(0, 1), default=0)
    ap.add_argument("--points", type=int, default=8)
    ap.add_argument("--starts", type=int, default=2, help="initial angles per torus")
    ap.add_argument("--t-end", type=float, default=20.0)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    system = canonical_system(1, args.s, args.y0, ["x2", "0"] if args.s else [])
    rng = np.random.default_rng(args.seed)
    xs = [{}] if not args.s else [{"x1": 0.1, "x2": 0.2}, {"x1": -0.4, "x2": 0.5}]
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["y1", "x1", "x2", "th0_start", "th1_start", "action_th0", "z0", "z1", "omega0", "omega1", "max_abs_diff"])
    worst = 0.0
    for y1 in np.linspace(0.3, 1.4, args.points):
        for xv in xs:
            base = torus_point(system, {"y1": y1, **xv})
            a0 = torus_actions(system, base)["th0"].value
            z = frequencies_from_y0(args.y0, ["y1"], [y1])
            for k in range(args.starts):
                x = base.copy()
                if k:
                    x[:2] = rng.uniform(0, 2 * np.pi, 2)
                om = measured_rotation(system, x, args.t_end).omega
                diff = float(np.max(np.abs(om - z)))
                worst = max(worst, diff)
                w.writerow([f"{v:.17g}" for v in (y1, xv.get("x1", 0.0), xv.get("x2", 0.0), x[0], x[1], a0, *z, *om, diff)])
    print(f"# worst |omega - z| = {worst:.3e}", file=sys.stderr)


if __name__ == "__main__":
    main()
