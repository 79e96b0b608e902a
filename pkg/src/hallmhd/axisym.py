"""Axisymmetric Hall problem in (x, r) and its purely swirling reduction.

With ``B = b e_theta + curl(psi e_theta)`` the resistive Hall problem reads::

    psi_t + (1/r^2) {r b, r psi} = L psi
    b_t + {j/r, r psi} - {b/r, r b} = L b,      j = -L psi

where ``L = d_xx + d_rr + (1/r) d_r - 1/r^2`` and
``{a, c} = a_x c_r - c_x a_r``. For ``psi = 0`` the swirl obeys
``b_t - (2/r) b b_x = L b``, a viscous Burgers equation along x.

Grid: x periodic on [0, Lx); r cell-centred on (0, R] so no node sits on
the axis. b and psi are odd across the axis; every bracket argument
(``r b``, ``r psi``, ``b/r``, ``j/r``) is even. All fields vanish at r = R.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.interpolate import CubicSpline

from . import spectral as sp
from .errors import ConfigurationError
from .hall import rhs_hall_only

ODD, EVEN = -1.0, 1.0


@dataclass(frozen=True)
class AxiGrid:
    nx: int
    nr: int
    length: float = 1.0
    radius: float = 1.0

    def __post_init__(self):
        if self.nx < 8 or self.nr < 8:
            raise ValueError("AxiGrid needs nx, nr >= 8")
        if not (self.length > 0 and self.radius > 0):
            raise ValueError("length and radius must be positive")

    @property
    def dx(self):
        return self.length / self.nx

    @property
    def dr(self):
        return self.radius / self.nr

    @property
    def x(self):
        return np.arange(self.nx) * self.dx

    @property
    def r(self):
        return (np.arange(self.nr) + 0.5) * self.dr

    def mesh(self):
        return np.meshgrid(self.x, self.r, indexing="ij")


@dataclass(frozen=True)
class AxiState:
    psi: np.ndarray
    b: np.ndarray
    t: float = 0.0


def _pad_r(f, parity):
    # axis ghost by parity reflection, outer ghost by odd reflection about r = R
    return np.concatenate([parity * f[:, :1], f, -f[:, -1:]], axis=1)


def d_r(f, grid: AxiGrid, parity):
    fp = _pad_r(f, parity)
    return (fp[:, 2:] - fp[:, :-2]) / (2.0 * grid.dr)


def d_x(f, grid: AxiGrid):
    return (np.roll(f, -1, axis=0) - np.roll(f, 1, axis=0)) / (2.0 * grid.dx)


def operator_L(f, grid: AxiGrid):
    """Second-order discretization of d_xx + d_rr + (1/r) d_r - 1/r^2 for odd f.

    The radial part is written as d_r((1/r) d_r(r f)) and differenced on
    cell faces. At the axis face the flux q = (1/r) d_r(r f) is even in r,
    so it is extrapolated as q(0) = (4 q(dr) - q(2 dr)) / 3; this keeps the
    first cell second-order accurate and makes L r = 0 exact.
    """
    dr = grid.dr
    r = grid.r[None, :]
    g = r * f
    ghost = -(grid.radius + 0.5 * dr) * f[:, -1:]
    gp = np.concatenate([g, ghost], axis=1)
    faces = (np.arange(1, grid.nr + 1) * dr)[None, :]
    q = (gp[:, 1:] - gp[:, :-1]) / (dr * faces)
    q0 = (4.0 * q[:, :1] - q[:, 1:2]) / 3.0
    radial = np.diff(np.concatenate([q0, q], axis=1), axis=1) / dr
    f_xx = (np.roll(f, -1, axis=0) - 2.0 * f + np.roll(f, 1, axis=0)) / grid.dx**2
    return f_xx + radial


def bracket(a, c, grid: AxiGrid, parity_a=EVEN, parity_c=EVEN):
    """Poisson bracket {a, c} = a_x c_r - c_x a_r with centred differences."""
    return (d_x(a, grid) * d_r(c, grid, parity_c)
            - d_x(c, grid) * d_r(a, grid, parity_a))


def current(psi, grid: AxiGrid):
    return -operator_L(psi, grid)


def rhs_axi(s: AxiState, grid: AxiGrid, resistive=True):
    r = grid.r[None, :]
    psi, b = s.psi, s.b
    rpsi = r * psi
    rb = r * b
    j = current(psi, grid)
    dpsi = -bracket(rb, rpsi, grid) / r**2
    db = -bracket(j / r, rpsi, grid) + bracket(b / r, rb, grid)
    if resistive:
        dpsi = dpsi - j
        db = db + operator_L(b, grid)
    return dpsi, db


def stable_dt(s: AxiState, grid: AxiGrid, safety=0.4):
    """Heun step bound from the L-operator spectral radius and the x-advection speed."""
    rmin = grid.r[0]
    lam = 4.0 / grid.dx**2 + 4.0 / grid.dr**2 + 1.0 / (rmin * grid.dr) + 1.0 / rmin**2
    dt = 2.0 / lam
    speed = np.max(np.abs(2.0 * s.b / grid.r[None, :]))
    if speed > 0:
        dt = min(dt, grid.dx / speed)
    return safety * dt


def run_axi(s0: AxiState, grid: AxiGrid, t_end: float, dt: Optional[float] = None,
            sink: Optional[Callable] = None, every=1):
    """Heun (explicit RK2) integration of the axisymmetric Hall problem."""
    s = s0
    if sink:
        sink(s)
    nstep = 0
    while s.t < t_end - 1e-12 * max(1.0, t_end):
        h = min(dt if dt else stable_dt(s, grid), t_end - s.t)
        k1 = rhs_axi(s, grid)
        mid = AxiState(s.psi + h * k1[0], s.b + h * k1[1], s.t + h)
        k2 = rhs_axi(mid, grid)
        s = AxiState(s.psi + 0.5 * h * (k1[0] + k2[0]), s.b + 0.5 * h * (k1[1] + k2[1]), s.t + h)
        nstep += 1
        if not (np.all(np.isfinite(s.b)) and np.all(np.isfinite(s.psi))):
            raise FloatingPointError(f"non-finite axisymmetric state at t={s.t:.6g}")
        if sink and (nstep % every == 0 or s.t >= t_end - 1e-12):
            sink(s)
    return s


def swirl_state(grid: AxiGrid, b0: Callable) -> AxiState:
    X, R = grid.mesh()
    return AxiState(np.zeros_like(X), np.asarray(b0(X, R), dtype=float))


# --- KMC waves -------------------------------------------------------------


class TruncatedMeasurementWarning(UserWarning):
    pass


@dataclass
class KmcResult:
    times: np.ndarray
    positions: np.ndarray
    x: np.ndarray
    profiles: list
    speed: Optional[float]
    rh_speed: Optional[float]
    kind: str
    nu: float
    truncated: bool = False
    fit_times: np.ndarray = field(default_factory=lambda: np.empty(0))


def burgers_flux(b, r0):
    return -(b * b) / r0


def level_set_position(x, b, level):
    """Linear-interpolated position of the first crossing of ``level``; None if absent."""
    d = b - level
    idx = np.nonzero(np.sign(d[:-1]) * np.sign(d[1:]) <= 0)[0]
    idx = [i for i in idx if d[i] != d[i + 1]]
    if not idx:
        return None
    i = idx[0]
    return x[i] + (x[i + 1] - x[i]) * d[i] / (d[i] - d[i + 1])


def kmc_rhs(b, r0, nu, dx):
    bp = np.concatenate([b[:1], b, b[-1:]])
    f = burgers_flux(bp, r0)
    return -(f[2:] - f[:-2]) / (2.0 * dx) + nu * (bp[2:] - 2.0 * b + bp[:-2]) / dx**2


def run_kmc(b_left, b_right, r0, nx=1024, length=1.0, t_end=0.2, nu=None,
            n_samples=101, x_jump=None, b_init=None):
    """Swirl equation b_t - (2/r0) b b_x = nu b_xx at a frozen radius r0.

    ``nu=None`` selects the inviscid limit, regularised with nu = 2 dx.
    The front is tracked through the midpoint level (b_left + b_right)/2 and
    its speed fitted by least squares over the second half of the run.
    Zero-gradient boundaries; samples whose front lies within 4 cells of
    either end are discarded with a ``TruncatedMeasurementWarning``.
    """
    if r0 <= 0:
        raise ValueError("r0 must be positive")
    dx = length / nx
    x = (np.arange(nx) + 0.5) * dx
    nu = 2.0 * dx if nu is None else float(nu)
    x_jump = 0.5 * length if x_jump is None else x_jump
    if b_init is None:
        b = np.where(x < x_jump, float(b_left), float(b_right))
    else:
        b = np.asarray(b_init(x), dtype=float)
    bmax = max(abs(b_left), abs(b_right), 1e-300)
    dt = 0.4 * min(dx * dx / nu if nu > 0 else np.inf, dx * r0 / (2.0 * bmax))
    nsteps = max(1, math.ceil(t_end / dt))
    dt = t_end / nsteps
    sample_at = set(np.unique(np.linspace(0, nsteps, n_samples).round().astype(int)))

    flat = b_left == b_right
    level = 0.5 * (b_left + b_right)
    times, positions, profiles = [], [], []
    truncated = False

    def record(step, b):
        nonlocal truncated
        t = step * dt
        profiles.append(b.copy())
        if flat:
            return
        pos = level_set_position(x, b, level)
        if pos is None or pos < 4 * dx or pos > length - 4 * dx:
            truncated = True
            return
        times.append(t)
        positions.append(pos)

    record(0, b)
    for n in range(1, nsteps + 1):
        k1 = kmc_rhs(b, r0, nu, dx)
        k2 = kmc_rhs(b + dt * k1, r0, nu, dx)
        b = b + 0.5 * dt * (k1 + k2)
        if n in sample_at:
            record(n, b)

    times = np.asarray(times)
    positions = np.asarray(positions)
    if flat:
        return KmcResult(times, positions, x, profiles, None, None, "none", nu)
    rh = (burgers_flux(b_right, r0) - burgers_flux(b_left, r0)) / (b_right - b_left)
    # concave flux: entropy shocks need b_left < b_right
    kind = "shock" if b_left < b_right else "rarefaction"
    if truncated:
        warnings.warn("front left the domain; speed fitted on the remaining samples",
                      TruncatedMeasurementWarning, stacklevel=2)
    sel = times >= 0.5 * t_end - 1e-12
    speed = None
    if np.count_nonzero(sel) >= 2:
        speed = float(np.polyfit(times[sel], positions[sel], 1)[0])
    return KmcResult(times, positions, x, profiles, speed, float(rh), kind, nu, truncated,
                     times[sel])


def burgers_traveling_wave(b_left, b_right, r0, nu):
    """Exact viscous traveling wave of the swirl equation (requires b_left < b_right).

    In u = -2 b / r0 the equation is u_t + u u_x = nu u_xx, whose wave is
    u = s - (du/2) tanh(du (x - s t) / (4 nu)) with du = u_left - u_right.
    """
    uL, uR = -2.0 * b_left / r0, -2.0 * b_right / r0
    s = 0.5 * (uL + uR)
    du = uL - uR
    if du <= 0:
        raise ValueError("a viscous shock needs b_left < b_right")

    def profile(x, t, x0=0.0):
        u = s - 0.5 * du * np.tanh(du * (x - x0 - s * t) / (4.0 * nu))
        return -0.5 * r0 * u
    return profile, s


# --- 3D consistency ----------------------------------------------------------


def bump_window(r, r_w, width):
    """Smooth compact cutoff: 1 for r <= r_w, 0 for r >= r_w + width."""
    s = np.clip((r - r_w) / width, 0.0, 1.0)

    def h(t):
        out = np.zeros_like(t)
        pos = t > 0
        out[pos] = np.exp(-1.0 / t[pos])
        return out
    return h(1.0 - s) / (h(1.0 - s) + h(s))


def swirl_consistency_check(b0: Callable, grid3: sp.Grid3, axi: AxiGrid,
                            r_window=0.25, width=0.25, return_parts=False):
    """Relative mismatch between the 3D and axisymmetric Hall+diffusion RHS.

    The swirl ``b0(x, r)`` is multiplied by a compact window so that the
    field vanishes before the faces of the unit box (symmetry axis along x
    through the box centre). Both right-hand sides are compared on
    ``r <= r_window``; the axisymmetric one is interpolated in r with a
    cubic spline. The mismatch includes any poloidal part of the 3D RHS and
    is normalised by the largest 3D RHS value in the box.
    """
    if r_window + width > 0.5 + 1e-12:
        raise ConfigurationError("window must close inside the box: r_window + width <= 0.5")
    if r_window < 0.25 * 0.5:
        raise ConfigurationError("interior region smaller than 25% of the half box")
    if abs(axi.length - 1.0) > 1e-12 or axi.nx % grid3.n:
        raise ConfigurationError("axisymmetric grid must span x in [0, 1) with nx a multiple of n")
    if axi.radius < r_window + width:
        raise ConfigurationError("axisymmetric radius must cover the window")

    def bw(x, r):
        return np.asarray(b0(x, r), dtype=float) * bump_window(r, r_window, width)

    n = grid3.n
    X, Y, Z = grid3.coords
    yc, zc = Y - 0.5, Z - 0.5
    R = np.hypot(yc, zc)
    safe = np.where(R > 0, R, 1.0)
    eth_y, eth_z = -zc / safe, yc / safe
    bval = np.where(R > 0, bw(X, R), 0.0)
    B = sp.forward_transform(sp.RealVectorField(
        grid3, np.stack([np.zeros_like(X), bval * eth_y, bval * eth_z])))
    rhs3 = sp.inverse_transform(rhs_hall_only(B)).values
    scale = float(np.max(np.sqrt(sp.dot(rhs3, rhs3))))

    s = swirl_state(axi, bw)
    _, db = rhs_axi(s, axi)
    stride = axi.nx // n
    db = db[::stride]
    rr = axi.r
    r_ext = np.concatenate([-rr[:3][::-1], rr])
    db_ext = np.concatenate([-db[:, :3][:, ::-1], db], axis=1)

    inside = (R <= r_window) & (R > 0)
    ix = np.nonzero(inside)
    vals = np.empty(ix[0].size)
    for i in np.unique(ix[0]):
        sel = ix[0] == i
        vals[sel] = CubicSpline(r_ext, db_ext[i])(R[ix][sel])
    theta3 = rhs3[1][ix] * eth_y[ix] + rhs3[2][ix] * eth_z[ix]
    radial3 = rhs3[1][ix] * (yc[ix] / safe[ix]) + rhs3[2][ix] * (zc[ix] / safe[ix])
    axial3 = rhs3[0][ix]
    diff = np.sqrt((theta3 - vals) ** 2 + radial3**2 + axial3**2)
    if scale == 0.0:
        mismatch = 0.0 if np.max(np.abs(vals), initial=0.0) == 0.0 else np.inf
    else:
        mismatch = float(np.max(diff)) / scale
    if return_parts:
        return mismatch, {"theta3": theta3, "axi": vals, "scale": scale}
    return mismatch
