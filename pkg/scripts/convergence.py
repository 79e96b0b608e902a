#!/usr/bin/env python
"""Temporal self-convergence of the time integrators on a smooth random run."""
import argparse
import math

from hallmhd import presets
from hallmhd import spectral as sp
from hallmhd.integrate import IntegratorConfig, run


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=32)
    ap.add_argument("--scheme", default="imex_rk2")
    ap.add_argument("--hall-only", action="store_true")
    ap.add_argument("--amplitude", type=float, default=0.1)
    ap.add_argument("--t-end", type=float, default=0.02)
    ap.add_argument("--dts", type=float, nargs="+", default=[4e-4, 2e-4, 1e-4])
    ap.add_argument("--ref-dt", type=float, default=2.5e-5)
    args = ap.parse_args()
    s0 = presets.random_state(sp.Grid3(args.n), seed=2, amplitude=args.amplitude,
                              coupled=not args.hall_only)

    def final(dt):
        return run(s0, IntegratorConfig(dt=dt, t_end=args.t_end, scheme=args.scheme, adapt=True))

    def dist(a, b):
        du = 0.0 if a.u_hat is None else sp.norm(a.u_hat - b.u_hat)
        return math.hypot(du, sp.norm(a.B_hat - b.B_hat))

    ref = final(args.ref_dt)
    prev = None
    for dt in args.dts:
        e = dist(final(dt), ref)
        print(f"dt {dt:.3e}  error {e:.4e}" + ("" if prev is None else f"  ratio {prev / e:.3f}"))
        prev = e


if __name__ == "__main__":
    main()
