"""Command-line entry point: ``hallmhd <mode> --config FILE [--out DIR] [--seed N] [--resume SNAP]``."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import axisym, maxreg, presets, scaling, verify
from . import spectral as sp
from .errors import BlowUpError, ConfigError, SnapshotError, StepRejected
from .integrate import IntegratorConfig, hall_cfl_dt, run
from .io import config as cfgmod
from .io import snapshot as snap
from .io.diagcsv import DiagnosticsWriter

EXIT_OK, EXIT_CONFIG, EXIT_BLOWUP, EXIT_VERIFY = 0, 2, 3, 4


def _threads():
    try:
        return max(1, int(os.environ.get("HALLMHD_THREADS", "1")))
    except ValueError:
        return 1


def _initial_mhd(cfg, coupled, resume):
    mode = "coupled3d" if coupled else "hall3d"
    path = resume or cfg.snapshot
    if path:
        s = snap.to_state(snap.load_snapshot(path, expect_mode=mode))
        if s.grid.n != cfg.n:
            raise ConfigError([f"snapshot resolution {s.grid.n} differs from n = {cfg.n}"])
        return s
    return presets.make_state(cfg.preset, sp.Grid3(cfg.n), coupled, seed=cfg.seed,
                              amplitude=cfg.amplitude)


def _run_mhd(cfg, out, resume):
    coupled = cfg.mode == "coupled3d"
    s0 = _initial_mhd(cfg, coupled, resume)
    dt = cfg.dt if cfg.dt is not None else hall_cfl_dt(s0.B_hat, cfg.cfl_safety)
    icfg = IntegratorConfig(dt=dt, t_end=cfg.t_end, scheme=cfg.scheme,
                            cfl_safety=cfg.cfl_safety, adapt=cfg.adapt,
                            diag_every=cfg.diag_every)
    unused = () if coupled else ("energy_u", "div_u_max")
    with open(out / "diagnostics.csv", "w", newline="") as fh:
        try:
            final = run(s0, icfg, DiagnosticsWriter(fh, unused))
        except BlowUpError as exc:
            if exc.last_good is not None:
                snap.save_snapshot(snap.from_state(exc.last_good, cfg.mode), out / "last_good.snap")
            raise
    snap.save_snapshot(snap.from_state(final, cfg.mode), out / "final.snap")
    return final


def _run_maxreg(cfg, out, resume):
    g = sp.Grid3(cfg.n)
    if resume or cfg.snapshot:
        s0 = snap.to_state(snap.load_snapshot(resume or cfg.snapshot, expect_mode="maxreg"))
    else:
        B0 = presets.make_state(cfg.preset, g, False, seed=cfg.seed, amplitude=cfg.amplitude).B_hat
        s0 = maxreg.MaxwellRegState(B0, maxreg.well_prepared_E(B0), cfg.eps)
    rows = []

    def sink(s):
        rows.append({"t": s.t, "energy_B": 0.5 * sp.inner_product(s.B_hat, s.B_hat),
                     "energy_sym": maxreg.regularized_energy(s),
                     "div_B_max": sp.max_divergence(s.B_hat)})
        w.write(rows[-1])

    with open(out / "diagnostics.csv", "w", newline="") as fh:
        w = DiagnosticsWriter(fh)
        final = maxreg.run_maxreg(s0, cfg.t_end, cfg.dt, cfg.rk, sink, cfg.diag_every)
    snap.save_snapshot(snap.from_state(final, "maxreg"), out / "final.snap")
    (out / "constraint.txt").write_text(f"{maxreg.constraint(final):.17g}\n")


def _run_eps_sweep(cfg, out, resume):
    g = sp.Grid3(cfg.n)
    B0 = presets.make_state(cfg.preset, g, False, seed=cfg.seed, amplitude=cfg.amplitude).B_hat
    study = maxreg.eps_convergence_study(B0, cfg.eps_list, cfg.t_end, scheme=cfg.rk,
                                         dt=cfg.dt, workers=_threads())
    for k, row in enumerate(study.rows):
        sub = out / f"eps_{k:02d}"
        sub.mkdir(parents=True, exist_ok=True)
        (sub / "result.json").write_text(json.dumps(
            {"eps": row.eps, "deviation": row.deviation, "error": row.error}) + "\n")
    with open(out / "eps_study.csv", "w") as fh:
        fh.write("eps,deviation,error\n")
        for row in study.rows:
            dev = "" if row.deviation is None else "%.17g" % row.deviation
            fh.write(f"{row.eps:.17g},{dev},{row.error or ''}\n")
        fh.write(f"# fitted order: {study.order}\n")
    print(f"fitted order {study.order}")
    if not study.complete:
        raise BlowUpError("one or more eps members failed")


def _run_axi(cfg, out, resume):
    grid = axisym.AxiGrid(cfg.nx, cfg.nr)
    if resume or cfg.snapshot:
        s0 = snap.to_state(snap.load_snapshot(resume or cfg.snapshot, expect_mode="axi"))
    else:
        s0 = axisym.swirl_state(grid, presets.swirl_ring(cfg.amplitude))
    w_r = grid.r[None, :] * grid.dx * grid.dr

    with open(out / "diagnostics.csv", "w", newline="") as fh:
        w = DiagnosticsWriter(fh)

        def sink(s):
            w.write({"t": s.t, "energy_B": 0.5 * float(np.sum(s.b**2 * w_r))})

        final = axisym.run_axi(s0, grid, cfg.t_end, cfg.dt, sink, cfg.diag_every)
    snap.save_snapshot(snap.from_state(final, "axi"), out / "final.snap")
    (out / "psi_max.txt").write_text(f"{float(np.max(np.abs(final.psi))):.17g}\n")


def _run_kmc(cfg, out, resume):
    res = axisym.run_kmc(cfg.b_left, cfg.b_right, cfg.r0, nx=cfg.nx, t_end=cfg.t_end, nu=cfg.nu)
    with open(out / "front.csv", "w") as fh:
        fh.write("t,position\n")
        for t, p in zip(res.times, res.positions):
            fh.write(f"{t:.17g},{p:.17g}\n")
    snap.save_snapshot(snap.from_state(res.profiles[-1], "kmc", t=cfg.t_end), out / "final.snap")
    summary = {"kind": res.kind, "speed": res.speed, "rankine_hugoniot": res.rh_speed,
               "nu": res.nu, "truncated": res.truncated}
    (out / "summary.json").write_text(json.dumps(summary, indent=2) + "\n")
    print(json.dumps(summary))


def _run_scaling(cfg, out, resume):
    if cfg.params:
        params, closure, threshold = scaling.parse_params(Path(cfg.params).read_text())
    else:
        params, closure, threshold = scaling.PhysicalParams(), "ampere", 0.1
    g = scaling.compute_groups(params, closure)
    label = scaling.classify_regime(g, threshold)
    res = {k: getattr(g, k) for k in ("eps2", "alpha2", "beta", "gamma", "lambda2", "eta_ratio",
                                      "inv_alpha2", "beta_over_alpha4", "u0", "B0", "E0")}
    res["regime"] = label.value
    (out / "groups.json").write_text(json.dumps(res, indent=2) + "\n")
    print(json.dumps(res))


def _run_verify(cfg, out, resume):
    checks = verify.run_all()
    for c in checks:
        print(c.line())
    (out / "verify.txt").write_text("".join(c.line() + "\n" for c in checks))
    return all(c.passed for c in checks)


RUNNERS = {
    "hall3d": _run_mhd, "coupled3d": _run_mhd, "maxreg": _run_maxreg,
    "eps-sweep": _run_eps_sweep, "axi": _run_axi, "kmc": _run_kmc,
    "scaling": _run_scaling, "verify": _run_verify,
}


def build_parser():
    p = argparse.ArgumentParser(prog="hallmhd", description=__doc__)
    p.add_argument("mode", choices=cfgmod.MODES)
    p.add_argument("--config", type=Path, help="key = value configuration file")
    p.add_argument("--out", type=Path, help="output directory (overrides 'out')")
    p.add_argument("--seed", type=int, help="RNG seed (overrides 'seed')")
    p.add_argument("--resume", type=Path, help="start from this snapshot")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    overrides = {"mode": args.mode}
    if args.seed is not None:
        overrides["seed"] = args.seed
    try:
        text = args.config.read_text() if args.config else ""
        cfg = cfgmod.parse_config(text, overrides)
    except ConfigError as exc:
        for e in exc.errors:
            print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    out = args.out or Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "config.txt").write_text(cfgmod.format_config(cfg))
    if cfg.warnings:
        (out / "run.log").write_text("".join(f"WARNING {w}\n" for w in cfg.warnings))
    try:
        ok = RUNNERS[cfg.mode](cfg, out, args.resume)
    except ConfigError as exc:
        for e in exc.errors:
            print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except SnapshotError as exc:
        print(f"snapshot error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except StepRejected as exc:
        print(f"config error: {exc}; set dt <= {exc.admissible_dt:.3e} or adapt = true",
              file=sys.stderr)
        return EXIT_CONFIG
    except (BlowUpError, FloatingPointError) as exc:
        print(f"numerical blow-up: {exc}", file=sys.stderr)
        return EXIT_BLOWUP
    if cfg.mode == "verify" and not ok:
        return EXIT_VERIFY
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
