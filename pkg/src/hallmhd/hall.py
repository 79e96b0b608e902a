"""Right-hand sides and diagnostics of incompressible resistive Hall-MHD.

Velocity equation (rotational form, pressure removed by projection)::

    du/dt = P(u x curl u + (curl B) x B) + lap u

Induction with the Hall term::

    dB/dt = curl(u x B) - curl((curl B) x B) + lap B

With ``u = None`` the state describes the standalone Hall problem.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from typing import Optional, Sequence

import numpy as np

from . import spectral as sp
from .errors import DimensionError, InsufficientDataError
from .spectral import SpectralVectorField


@dataclass(frozen=True)
class MhdState:
    u_hat: Optional[SpectralVectorField]
    B_hat: SpectralVectorField
    t: float = 0.0

    @property
    def grid(self):
        return self.B_hat.grid

    @property
    def hall_only(self):
        return self.u_hat is None

    def velocity(self):
        return sp.zeros(self.grid) if self.u_hat is None else self.u_hat


@dataclass(frozen=True)
class RhsTerms:
    advection: SpectralVectorField
    lorentz: SpectralVectorField
    induction: SpectralVectorField
    hall: SpectralVectorField
    diffusion_u: SpectralVectorField
    diffusion_B: SpectralVectorField

    @property
    def du(self):
        return self.advection + self.lorentz + self.diffusion_u

    @property
    def dB(self):
        return self.induction + self.hall + self.diffusion_B


@dataclass(frozen=True)
class DiagnosticsRecord:
    t: float
    energy_paper: float
    energy_sym: float
    energy_u: float
    energy_B: float
    dissipation: float
    hall_power: float
    helicity: Optional[float]
    current_helicity: float
    div_u_max: float
    div_B_max: float

    @property
    def helicity_defined(self):
        return self.helicity is not None

    def as_row(self):
        return [getattr(self, f.name) for f in fields(self)]


def hall_term(B: SpectralVectorField, J: Optional[SpectralVectorField] = None):
    """Return ``-curl((curl B) x B)`` and ``(curl B) x B``."""
    if J is None:
        J = sp.curl(B)
    JxB = sp.cross_product_dealiased(J, B)
    return -sp.curl(JxB), JxB


def rhs_hall_only(B: SpectralVectorField) -> SpectralVectorField:
    hall, _ = hall_term(B)
    return hall + sp.laplacian(B)


def rhs_hall_nonlinear(B: SpectralVectorField) -> SpectralVectorField:
    hall, _ = hall_term(B)
    return hall


def rhs_terms(s: MhdState) -> RhsTerms:
    g = s.grid
    B = s.B_hat
    J = sp.curl(B)
    Bp = sp.to_product_grid(B)
    Jp = sp.to_product_grid(J)
    JxB = sp.from_product_grid(g, sp.cross(Jp, Bp))
    hall = -sp.curl(JxB)
    diff_B = sp.laplacian(B)
    if s.u_hat is None:
        zero = sp.zeros(g)
        return RhsTerms(zero, zero, zero, hall, zero, diff_B)
    u = s.u_hat
    up = sp.to_product_grid(u)
    wp = sp.to_product_grid(sp.curl(u))
    advection = sp.leray_project(sp.from_product_grid(g, sp.cross(up, wp)))
    lorentz = sp.leray_project(JxB)
    induction = sp.curl(sp.from_product_grid(g, sp.cross(up, Bp)))
    return RhsTerms(advection, lorentz, induction, hall, sp.laplacian(u), diff_B)


def nonlinear_terms(s: MhdState):
    """Nonlinear parts ``(N_u, N_B)`` of the right-hand side (no diffusion)."""
    r = rhs_terms(s)
    if s.u_hat is None:
        return None, r.hall
    return r.advection + r.lorentz, r.induction + r.hall


def rhs_coupled(s: MhdState):
    r = rhs_terms(s)
    return r.du, r.dB


def ohm_electric_field(s: MhdState) -> SpectralVectorField:
    """E = -u x B + (curl B) x B + curl B, so that dB/dt = -curl E."""
    B = s.B_hat
    J = sp.curl(B)
    E = sp.cross_product_dealiased(J, B) + J
    if s.u_hat is not None:
        E = E - sp.cross_product_dealiased(s.u_hat, B)
    return E


def current_helicity(B: SpectralVectorField) -> float:
    return sp.inner_product(B, sp.curl(B))


def magnetic_helicity(B: SpectralVectorField) -> Optional[float]:
    """<A, B> in the zero-mean Coulomb gauge; None when B has a mean part."""
    scale = sp.norm(B)
    if np.max(np.abs(B.mean)) > 1e-14 * max(scale, 1e-300):
        return None
    return sp.inner_product(sp.vector_potential(B), B)


def diagnostics(s: MhdState) -> DiagnosticsRecord:
    B = s.B_hat
    u = s.velocity()
    J = sp.curl(B)
    B2 = sp.inner_product(B, B)
    u2 = sp.inner_product(u, u)
    JxB = sp.cross_product_dealiased(J, B)
    return DiagnosticsRecord(
        t=float(s.t),
        energy_paper=0.5 * u2 + B2,
        energy_sym=0.5 * (u2 + B2),
        energy_u=0.5 * u2,
        energy_B=0.5 * B2,
        dissipation=sp.grad_norm_sq(u) + sp.grad_norm_sq(B),
        hall_power=sp.inner_product(J, JxB),
        helicity=magnetic_helicity(B),
        current_helicity=sp.inner_product(B, J),
        div_u_max=sp.max_divergence(u),
        div_B_max=sp.max_divergence(B),
    )


def energy_sym(s: MhdState) -> float:
    e = sp.inner_product(s.B_hat, s.B_hat)
    if s.u_hat is not None:
        e += sp.inner_product(s.u_hat, s.u_hat)
    return 0.5 * e


def weak_form_rate(B: SpectralVectorField, A: SpectralVectorField) -> float:
    """<curl A, (curl B) x B> + <curl A, curl B>, i.e. -<A, dB/dt> for the Hall problem."""
    J = sp.curl(B)
    cA = sp.curl(A)
    return sp.inner_product(cA, sp.cross_product_dealiased(J, B)) + sp.inner_product(cA, J)


def weak_residual(times: Sequence[float], B_traj: Sequence[SpectralVectorField],
                  A: SpectralVectorField, rtol_dt=1e-9) -> float:
    """Max over interior samples of the weak-form residual of the Hall problem.

    The time derivative uses the 5-point centered stencil (fourth order)
    when at least five samples are available and the 3-point one
    otherwise. Samples must be uniformly spaced.
    """
    if len(times) != len(B_traj):
        raise DimensionError("times and trajectory differ in length")
    if len(B_traj) < 3:
        raise InsufficientDataError("weak residual needs at least 3 samples")
    t = np.asarray(times, dtype=float)
    steps = np.diff(t)
    dt = steps.mean()
    if np.any(np.abs(steps - dt) > rtol_dt * abs(dt)):
        raise ValueError("trajectory samples must be uniformly spaced")
    # project once: <A, B_m> per sample, then difference the scalars
    a = np.array([sp.inner_product(A, B) for B in B_traj])
    if len(a) >= 5:
        m = np.arange(2, len(a) - 2)
        dadt = (a[m - 2] - 8 * a[m - 1] + 8 * a[m + 1] - a[m + 2]) / (12.0 * dt)
    else:
        m = np.arange(1, len(a) - 1)
        dadt = (a[m + 1] - a[m - 1]) / (2.0 * dt)
    worst = 0.0
    for i, d in zip(m, dadt):
        worst = max(worst, abs(d + weak_form_rate(B_traj[i], A)))
    return worst


def weak_test_fields(B0: SpectralVectorField, seed=0, kmax=2.0):
    """Test-field library: B0, real single solenoidal modes with |k| <= kmax, one random field."""
    g = B0.grid
    out = {"B0": B0}
    kint = int(math.floor(kmax))
    for k in _half_space_modes(kint, kmax):
        for j, e in enumerate(_polarizations(k)):
            for phase in ("cos", "sin"):
                out[f"mode{k}_{j}_{phase}"] = single_mode(g, k, e, phase)
    out["random"] = random_solenoidal(g, seed=seed)
    return out


def _half_space_modes(kint, kmax):
    modes = []
    for kx in range(-kint, kint + 1):
        for ky in range(-kint, kint + 1):
            for kz in range(-kint, kint + 1):
                k = (kx, ky, kz)
                if k == (0, 0, 0) or kx * kx + ky * ky + kz * kz > kmax * kmax:
                    continue
                if k > tuple(-c for c in k):
                    modes.append(k)
    return modes


def _polarizations(k):
    k = np.asarray(k, dtype=float)
    trial = np.eye(3)[int(np.argmin(np.abs(k)))]
    e1 = np.cross(k, trial)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(k, e1)
    e2 /= np.linalg.norm(e2)
    return e1, e2


def single_mode(grid, k, e, phase="cos"):
    """Real solenoidal field e * cos(2 pi k.x) (or sin); requires e . k = 0."""
    trig = np.cos if phase == "cos" else np.sin

    def f(x, y, z):
        arg = sp.TWO_PI * (k[0] * x + k[1] * y + k[2] * z)
        return tuple(c * trig(arg) for c in e)

    return sp.from_function(grid, f)


def random_solenoidal(grid, seed=0, amplitude=1.0, k0=2.0, kcut=None):
    """Seeded random zero-mean solenoidal field with a Gaussian spectral envelope.

    Modes get independent normal amplitudes times ``exp(-|k|^2 / k0^2)``,
    restricted to ``|k| <= kcut`` (default: all kept modes), projected,
    and rescaled so the rms of |B| equals ``amplitude``.
    """
    rng = np.random.default_rng(seed)
    noise = sp.RealVectorField(grid, rng.standard_normal((3,) + grid.physical_shape))
    F = sp.forward_transform(noise)
    env = np.exp(-grid.k2 / k0**2)
    if kcut is not None:
        env = env * (grid.k2 <= kcut**2)
    F = sp.leray_project(sp.SpectralVectorField(grid, F.coeffs * env))
    F.coeffs[:, 0, 0, 0] = 0.0
    rms = sp.norm(F)
    return F * (amplitude / rms)
