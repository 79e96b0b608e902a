"""Fast structural property checks, run by ``hallmhd verify``."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List

import numpy as np

from . import axisym, maxreg, presets
from . import spectral as sp
from .hall import random_solenoidal


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    tol: float

    @property
    def passed(self):
        return bool(np.isfinite(self.value) and self.value <= self.tol)

    def line(self):
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: {self.value:.3e} (tol {self.tol:.1e})"


def skew_symmetry(n=16, trials=5) -> Check:
    g = sp.Grid3(n)
    worst = 0.0
    for seed in range(trials):
        B = random_solenoidal(g, seed=seed)
        J = sp.curl(B)
        p = abs(sp.inner_product(J, sp.cross_product_dealiased(J, B)))
        scale = (sp.norm(B) ** 2 + sp.grad_norm_sq(B)) * sp.max_abs(B)
        worst = max(worst, p / scale)
    return Check("Hall skew-symmetry", worst, 1e-12)


def parseval(n=16) -> Check:
    g = sp.Grid3(n)
    B = random_solenoidal(g, seed=3)
    phys = sp.inverse_transform(B).values
    direct = float(np.mean(np.sum(phys**2, axis=0)))
    return Check("Parseval", abs(direct - sp.inner_product(B, B)) / direct, 1e-12)


def projection_idempotence(n=16) -> Check:
    g = sp.Grid3(n)
    rng = np.random.default_rng(5)
    F = sp.forward_transform(sp.RealVectorField(g, rng.standard_normal((3,) + g.physical_shape)))
    P1 = sp.leray_project(F)
    P2 = sp.leray_project(P1)
    return Check("Leray idempotence", sp.norm(P2 - P1) / sp.norm(F), 1e-14)


def psi_invariance(t_end=0.05) -> Check:
    grid = axisym.AxiGrid(64, 32)
    s0 = axisym.swirl_state(grid, presets.swirl_ring())
    s = axisym.run_axi(s0, grid, t_end)
    return Check("psi invariance", float(np.max(np.abs(s.psi))) / np.max(np.abs(s0.b)), 1e-13)


def constraint_rate(n=16, eps=1e-2) -> Check:
    g = sp.Grid3(n)
    B = presets.guide_abc(g)
    s = maxreg.MaxwellRegState(B, maxreg.well_prepared_E(B), eps)
    dB, dE = maxreg.rhs_BE(s)
    phys = lambda F: sp.inverse_transform(F).values  # noqa: E731
    rate = sp.dot(phys(dE), phys(B)) + sp.dot(phys(s.E_hat), phys(dB))
    scale = np.max(np.abs(phys(dE))) * np.max(np.abs(phys(B)))
    return Check("E.B conservation rate", float(np.max(np.abs(rate)) / scale), 1e-10)


def run_all() -> List[Check]:
    return [skew_symmetry(), parseval(), projection_idempotence(), psi_invariance(),
            constraint_rate()]
