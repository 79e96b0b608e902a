#!/usr/bin/env python
"""Measured front speeds of swirl Riemann problems against s = -(b_L + b_R) / r0."""
import argparse

from hallmhd.axisym import run_kmc

CASES = ((1, 0, 1), (2, 0, 2), (1, -1, 1), (0, 1, 1), (0.5, 1.5, 2), (-1, 1, 1))


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--nx", type=int, nargs="+", default=[256, 512, 1024, 2048])
    ap.add_argument("--t-end", type=float, default=0.2)
    args = ap.parse_args()
    print(f"{'b_L':>5} {'b_R':>5} {'r0':>4} {'nx':>5} {'kind':>12} {'speed':>11} {'oracle':>8} {'rel err':>9}")
    for bl, br, r0 in CASES:
        for nx in args.nx:
            res = run_kmc(bl, br, r0, nx=nx, t_end=args.t_end)
            err = abs(res.speed - res.rh_speed) / max(abs(res.rh_speed), 2 * max(abs(bl), abs(br)) / r0)
            print(f"{bl:5g} {br:5g} {r0:4g} {nx:5d} {res.kind:>12} {res.speed:11.6f} "
                  f"{res.rh_speed + 0.0:8.4f} {err:9.2e}")


if __name__ == "__main__":
    main()
