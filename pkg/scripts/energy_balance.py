#!/usr/bin/env python
"""Energy and helicity budgets of a Hall-only or coupled run.

Prints the balance residual with trapezoid and Simpson quadrature of the
emitted diagnostics, so the quadrature error can be told apart from the
time-stepping error.
"""
import argparse

import numpy as np
from scipy.integrate import simpson

from hallmhd import presets
from hallmhd import spectral as sp
from hallmhd.integrate import IntegratorConfig, run


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=32)
    ap.add_argument("--coupled", action="store_true")
    ap.add_argument("--amplitude", type=float, default=1.0)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--dt", type=float, default=1e-4)
    ap.add_argument("--t-end", type=float, default=0.2)
    ap.add_argument("--scheme", default="integrating_factor_rk4")
    args = ap.parse_args()

    s0 = presets.random_state(sp.Grid3(args.n), seed=args.seed, amplitude=args.amplitude,
                              coupled=args.coupled)
    recs = []
    run(s0, IntegratorConfig(dt=args.dt, t_end=args.t_end, scheme=args.scheme), recs.append)
    t = np.array([r.t for r in recs])
    E = np.array([r.energy_sym for r in recs])
    D = np.array([r.dissipation for r in recs])
    print(f"{len(t)} samples, max step-to-step energy change {np.max(np.diff(E)):.3e}")
    for name, quad in (("trapezoid", np.trapezoid), ("simpson", lambda y, x: simpson(y, x=x))):
        res = abs(E[-1] + quad(D, t) - E[0]) / E[0]
        line = f"{name:10s} energy residual {res:.3e}"
        if not args.coupled:
            H = np.array([r.helicity for r in recs])
            CH = np.array([r.current_helicity for r in recs])
            line += f"   helicity residual {abs(H[-1] - H[0] + 2 * quad(CH, t)) / (2 * E[0]):.3e}"
        print(line)


if __name__ == "__main__":
    main()
