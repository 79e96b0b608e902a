#!/usr/bin/env python
"""Deviation of the Maxwell-regularized run from the non-resistive Hall run over an eps ladder.

The default ladder spans four decades on purpose: for eps comparable to
t_end, or eps (2 pi)^2 of order one, the deviation saturates and the
local slope drops well below one.
"""
import argparse
import os

from hallmhd import presets
from hallmhd import spectral as sp
from hallmhd.maxreg import eps_convergence_study, fit_order


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=16)
    ap.add_argument("--t-end", type=float, default=0.005)
    ap.add_argument("--eps", type=float, nargs="+", default=[1e-1, 1e-2, 1e-3, 1e-4])
    ap.add_argument("--scheme", default="rk2", choices=("rk2", "rk4"))
    ap.add_argument("--workers", type=int, default=int(os.environ.get("HALLMHD_THREADS", "1")))
    args = ap.parse_args()
    B0 = presets.guide_abc(sp.Grid3(args.n))
    study = eps_convergence_study(B0, args.eps, args.t_end, args.scheme, workers=args.workers)
    prev = None
    for row in study.rows:
        if row.deviation is None:
            print(f"eps {row.eps:9.3e}  failed: {row.error}")
            continue
        slope = "" if prev is None else f"  local order {fit_order([prev.eps, row.eps], [prev.deviation, row.deviation]):.3f}"
        print(f"eps {row.eps:9.3e}  deviation {row.deviation:.4e}{slope}")
        prev = row
    print(f"fitted order over the ladder: {study.order}")


if __name__ == "__main__":
    main()
