"""E_j(beta) under mesh refinement: default N, 2N, 4N, and the N/2N gap at each beta.

    python scripts/convergence_study.py --curve segment --betas 50 100 200 --j 1
"""
import argparse
import math
import time

from leakyarc import bs_solver
from leakyarc.curve import make_circular_arc, make_segment

CURVES = {
    "segment": lambda: make_segment(1.0),
    "quarter": lambda: make_circular_arc(1.0, math.pi / 2, margin=0.48),
}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--curve", choices=sorted(CURVES), default="segment")
    ap.add_argument("--betas", type=float, nargs="+", default=[50.0, 100.0, 200.0])
    ap.add_argument("--j", type=int, default=1)
    ap.add_argument("--levels", type=int, default=3, help="number of doublings of N")
    args = ap.parse_args()
    c = CURVES[args.curve]()
    print(f"{'beta':>6} {'N':>6} {'E':>22} {'|dE|':>10} {'s':>6}")
    for beta in args.betas:
        n0 = bs_solver.default_nodes(beta, c.length)
        prev = None
        for k in range(args.levels):
            t0 = time.perf_counter()
            st = bs_solver.solve_eigenvalue(c, beta, args.j, N=n0 * 2 ** k, tol=1e-11)
            gap = "" if prev is None else f"{abs(st.energy - prev):.2e}"
            print(f"{beta:6g} {st.N:6d} {st.energy:22.12f} {gap:>10} {time.perf_counter() - t0:6.1f}")
            prev = st.energy


if __name__ == "__main__":
    main()
