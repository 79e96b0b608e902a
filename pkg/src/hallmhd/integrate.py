"""Time stepping for the spectral Hall-MHD and Hall-only systems.

Diffusion (unit viscosity and resistivity) is diagonal in Fourier space
and is treated implicitly or exactly; the nonlinear terms are explicit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

from . import spectral as sp
from .errors import BlowUpError, InvariantError, StepRejected
from .hall import MhdState, diagnostics, energy_sym, nonlinear_terms
from .spectral import SpectralVectorField

SCHEMES = ("imex_euler", "imex_rk2", "integrating_factor_rk4")
NU_EFF = 1.0

# ARS(2,2,2): L-stable, stiffly accurate
_GAMMA = 1.0 - 1.0 / math.sqrt(2.0)
_DELTA = 1.0 - 1.0 / (2.0 * _GAMMA)


@dataclass(frozen=True)
class IntegratorConfig:
    dt: float
    t_end: float
    scheme: str = "imex_rk2"
    cfl_safety: float = 1.0
    adapt: bool = False
    diag_every: int = 1
    max_halvings: int = 20
    energy_rtol: float = 1e-12

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if not self.t_end >= 0:
            raise ValueError("t_end must be non-negative")
        if not 0 < self.cfl_safety <= 1:
            raise ValueError("cfl_safety must lie in (0, 1]")
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}; choose from {SCHEMES}")
        if self.diag_every < 1:
            raise ValueError("diag_every must be >= 1")


def hall_cfl_dt(B: SpectralVectorField, safety: float = 1.0) -> float:
    """Whistler-type bound safety * dx^2 / (pi max|B| + nu_eff)."""
    return safety * B.grid.dx**2 / (math.pi * sp.max_abs(B) + NU_EFF)


def _decay(grid, dt):
    return np.exp(-(sp.TWO_PI**2) * grid.k2 * dt)


def _mu(grid):
    return (sp.TWO_PI**2) * grid.k2


class _Packed:
    """Coefficient arrays of (u, B) stacked so the schemes stay field-agnostic."""

    def __init__(self, s: MhdState):
        self.grid = s.grid
        self.hall_only = s.hall_only

    def pack(self, s):
        if self.hall_only:
            return s.B_hat.coeffs
        return np.concatenate([s.u_hat.coeffs, s.B_hat.coeffs])

    def unpack(self, y, t):
        g = self.grid
        if self.hall_only:
            return MhdState(None, SpectralVectorField(g, y), t)
        return MhdState(SpectralVectorField(g, y[:3]), SpectralVectorField(g, y[3:]), t)

    def N(self, y, t):
        nu, nB = nonlinear_terms(self.unpack(y, t))
        if self.hall_only:
            return nB.coeffs
        return np.concatenate([nu.coeffs, nB.coeffs])


def _advance(s: MhdState, dt: float, scheme: str) -> MhdState:
    p = _Packed(s)
    g = s.grid
    y0 = p.pack(s)
    t0 = s.t
    if scheme == "imex_euler":
        y1 = (y0 + dt * p.N(y0, t0)) / (1.0 + dt * _mu(g))
    elif scheme == "imex_rk2":
        denom = 1.0 + _GAMMA * dt * _mu(g)
        n1 = p.N(y0, t0)
        y2 = (y0 + _GAMMA * dt * n1) / denom
        l2 = -_mu(g) * y2
        n2 = p.N(y2, t0 + _GAMMA * dt)
        y1 = (y0 + dt * ((1.0 - _GAMMA) * l2 + _DELTA * n1 + (1.0 - _DELTA) * n2)) / denom
    elif scheme == "integrating_factor_rk4":
        e1 = _decay(g, dt)
        eh = _decay(g, 0.5 * dt)
        k1 = p.N(y0, t0)
        k2 = p.N(eh * (y0 + 0.5 * dt * k1), t0 + 0.5 * dt)
        k3 = p.N(eh * y0 + 0.5 * dt * k2, t0 + 0.5 * dt)
        k4 = p.N(e1 * y0 + dt * eh * k3, t0 + dt)
        y1 = e1 * y0 + (dt / 6.0) * (e1 * k1 + 2.0 * eh * (k2 + k3) + k4)
    else:
        raise ValueError(f"unknown scheme {scheme!r}")
    return p.unpack(y1, t0 + dt)


def _check_mean(before: MhdState, after: MhdState):
    for a, b in ((before.B_hat, after.B_hat), (before.u_hat, after.u_hat)):
        if a is None:
            continue
        tol = 1e-12 * (1.0 + sp.norm(a))
        if np.max(np.abs(a.coeffs[:, 0, 0, 0] - b.coeffs[:, 0, 0, 0])) > tol:
            raise InvariantError("mean mode changed during a step")


def step(s: MhdState, cfg: IntegratorConfig, dt: Optional[float] = None) -> MhdState:
    """Advance by ``dt`` (default ``cfg.dt``).

    If ``dt`` exceeds the Hall CFL bound, adaptive configs split the step
    into equal substeps; otherwise ``StepRejected`` is raised.
    """
    dt = cfg.dt if dt is None else dt
    admissible = hall_cfl_dt(s.B_hat, cfg.cfl_safety)
    nsub = 1
    if dt > admissible * (1.0 + 1e-12):
        if not cfg.adapt:
            raise StepRejected(
                f"dt={dt:.3e} exceeds the Hall CFL bound {admissible:.3e}",
                admissible_dt=admissible)
        nsub = math.ceil(dt / admissible)
    h = dt / nsub
    out = s
    for _ in range(nsub):
        new = _advance(out, h, cfg.scheme)
        _check_mean(out, new)
        out = new
    return replace(out, t=s.t + dt)


def _finite(s: MhdState):
    ok = np.all(np.isfinite(s.B_hat.coeffs))
    if s.u_hat is not None:
        ok = ok and np.all(np.isfinite(s.u_hat.coeffs))
    return bool(ok)


def run(s0: MhdState, cfg: IntegratorConfig,
        sink: Optional[Callable] = None) -> MhdState:
    """Advance to ``cfg.t_end``, emitting diagnostics every ``diag_every`` steps.

    A step that raises the symmetric energy by more than ``energy_rtol``
    (relative) is retried with half the step, at most ``max_halvings`` times.
    """
    emit = sink if sink is not None else (lambda rec: None)
    s = s0
    emit(diagnostics(s))
    if cfg.t_end <= s0.t:
        return s0
    t_final = cfg.t_end
    nstep = 0
    e_old = energy_sym(s)
    while s.t < t_final - 1e-12 * max(1.0, t_final):
        dt = min(cfg.dt, t_final - s.t)
        for _ in range(cfg.max_halvings + 1):
            new = step(s, cfg, dt)
            if not _finite(new):
                raise BlowUpError(f"non-finite field at t={new.t:.6g}", last_good=s)
            e_new = energy_sym(new)
            if e_new <= e_old * (1.0 + cfg.energy_rtol) + 1e-300:
                break
            dt *= 0.5
        else:
            raise StepRejected(f"energy increased at t={s.t:.6g} after "
                               f"{cfg.max_halvings} halvings", admissible_dt=dt)
        s, e_old = new, e_new
        nstep += 1
        done = s.t >= t_final - 1e-12 * max(1.0, t_final)
        if nstep % cfg.diag_every == 0 or done:
            emit(diagnostics(s))
    return replace(s, t=t_final) if abs(s.t - t_final) < 1e-9 else s
