"""Remainder E_j + beta^2/4 - mu_j along a beta sweep, with C_j and the a-priori check.

    python scripts/strong_coupling_table.py --curve quarter --betas 50 100 200 400 800 --workers 4
"""
import argparse
import math

from leakyarc import asympt
from leakyarc.curve import make_circular_arc, make_polynomial, make_segment

CURVES = {
    "segment": lambda: make_segment(1.0),
    "quarter": lambda: make_circular_arc(1.0, math.pi / 2, margin=0.48),
    "parabola": lambda: make_polynomial([0.0, 1.0], [0.0, 0.0, 0.5], (-1.0, 1.0)),
}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--curve", choices=sorted(CURVES), default="segment")
    ap.add_argument("--betas", type=float, nargs="+", default=[50.0, 100.0, 200.0, 400.0])
    ap.add_argument("--j-max", type=int, default=2)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--csv", help="also write the table here")
    args = ap.parse_args()
    table = asympt.sweep(CURVES[args.curve](), args.betas, args.j_max, workers=args.workers)
    print(f"{'j':>2} {'beta':>7} {'E':>20} {'mu':>12} {'delta':>12} {'|d| b/log b':>12}")
    for r in table.rows:
        print(f"{r.j:2d} {r.beta:7g} {r.E:20.10f} {r.mu:12.8f} {r.delta:12.6f} "
              f"{abs(r.delta) * r.beta / math.log(r.beta):12.4f}")
    for m in table.missing:
        print(f"absent: j={m.j} beta={m.beta:g} ({m.reason})")
    if len(args.betas) >= 3:
        fit = asympt.fit_rate(table)
        for j in fit.C:
            print(f"C_{j} = {fit.C[j]:.4f}   shrinking over the top half: {fit.trend[j]}")
    print(f"a-priori bracket respected: {asympt.check_apriori(table)}")
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(table.to_csv())


if __name__ == "__main__":
    main()
