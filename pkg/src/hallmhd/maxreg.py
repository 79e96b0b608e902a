"""Maxwell regularization of the non-resistive Hall problem.

(B, E) formulation::

    dB/dt = -curl E
    dE/dt = (1/eps) (curl B - j),   j = (B x E)/|B|^2 + lam B
    lam   = (-eps (curl E).E + (curl B).B) / |B|^2

The right-hand side is evaluated pointwise on the collocation grid without
spectral truncation, so that d(E.B)/dt vanishes at every grid point up to
round-off. Truncating the non-polynomial products would break that
pointwise cancellation.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from . import spectral as sp
from .errors import FormulationError, MagneticNullError
from .spectral import SpectralVectorField, cross, dot

NULL_FLOOR = 1e-8


@dataclass(frozen=True)
class MaxwellRegState:
    B_hat: SpectralVectorField
    E_hat: SpectralVectorField
    eps: float
    t: float = 0.0

    def __post_init__(self):
        if not self.eps > 0:
            raise ValueError("regularization parameter eps must be positive")


def _phys(F):
    return sp.inverse_transform(F).values


def _spec(grid, values):
    return sp.forward_transform(sp.RealVectorField(grid, values), dealias=False)


def _check_nulls(B2):
    floor = NULL_FLOOR * float(np.mean(B2))
    if float(np.min(B2)) < floor or floor == 0.0:
        raise MagneticNullError(
            f"min |B|^2 = {float(np.min(B2)):.3e} below floor {floor:.3e}")


def _fields(s: MaxwellRegState):
    B = _phys(s.B_hat)
    E = _phys(s.E_hat)
    J = _phys(sp.curl(s.B_hat))
    curlE_hat = sp.curl(s.E_hat)
    CE = _phys(curlE_hat)
    B2 = dot(B, B)
    _check_nulls(B2)
    return B, E, J, CE, curlE_hat, B2


def lambda_multiplier(s: MaxwellRegState) -> np.ndarray:
    B, E, J, CE, _, B2 = _fields(s)
    return (-s.eps * dot(CE, E) + dot(J, B)) / B2


def rhs_BE(s: MaxwellRegState):
    B, E, J, CE, curlE_hat, B2 = _fields(s)
    # curl B - j  ==  (B x (J x B - E) + eps (curl E . E) B) / |B|^2
    jside = (cross(B, cross(J, B) - E) + s.eps * dot(CE, E) * B) / B2
    dE = _spec(s.B_hat.grid, jside / s.eps)
    return -curlE_hat, dE


def recover_current(B_hat: SpectralVectorField, G_hat: SpectralVectorField) -> np.ndarray:
    """j = (B x G)/|B|^2 + ((curl B).B/|B|^2) B, physical values."""
    B = _phys(B_hat)
    G = _phys(G_hat)
    J = _phys(sp.curl(B_hat))
    B2 = dot(B, B)
    floor = NULL_FLOOR * float(np.mean(B2))
    if floor == 0.0 or float(np.min(B2)) < floor:
        raise FormulationError("j cannot be recovered from G = j x B where B vanishes; "
                               "use the (B, E) formulation")
    return (cross(B, G) + dot(J, B) * B) / B2


def rhs_Bj(B_hat: SpectralVectorField, j, eps: float):
    """(B, j) formulation: returns (dB, dG) for G = j x B.

    ``j`` is either physical values (3, n, n, n) or a spectral field.
    """
    if not eps > 0:
        raise ValueError("regularization parameter eps must be positive")
    g = B_hat.grid
    jv = _phys(j) if isinstance(j, SpectralVectorField) else np.asarray(j)
    B = _phys(B_hat)
    G_hat = _spec(g, cross(jv, B))
    J = _phys(sp.curl(B_hat))
    return -sp.curl(G_hat), _spec(g, (J - jv) / eps)


def well_prepared_E(B_hat: SpectralVectorField) -> SpectralVectorField:
    """E0 = (curl B0) x B0 evaluated pointwise, so E0 . B0 = 0 on the grid."""
    B = _phys(B_hat)
    J = _phys(sp.curl(B_hat))
    return _spec(B_hat.grid, cross(J, B))


def constraint(s: MaxwellRegState) -> float:
    return float(np.max(np.abs(dot(_phys(s.B_hat), _phys(s.E_hat)))))


def regularized_energy(s: MaxwellRegState) -> float:
    return 0.5 * sp.inner_product(s.B_hat, s.B_hat) + 0.5 * s.eps * sp.inner_product(s.E_hat, s.E_hat)


def stable_dt(grid, eps, safety=0.5):
    return safety * eps * grid.dx


def study_dt(B0: SpectralVectorField, eps: float, safety=0.5) -> float:
    """Step shared by a regularized member and its Hall reference.

    The reference has undamped whistler modes, so the eps-CFL is also capped
    by the Hall bound.
    """
    whistler = safety * B0.grid.dx**2 / (math.pi * sp.max_abs(B0))
    return min(stable_dt(B0.grid, eps, safety), whistler)


def _rk(y0, f, h, scheme):
    if scheme == "rk2":
        k1 = f(y0)
        k2 = f([a + h * b for a, b in zip(y0, k1)])
        return [a + 0.5 * h * (b + c) for a, b, c in zip(y0, k1, k2)]
    if scheme == "rk4":
        k1 = f(y0)
        k2 = f([a + 0.5 * h * b for a, b in zip(y0, k1)])
        k3 = f([a + 0.5 * h * b for a, b in zip(y0, k2)])
        k4 = f([a + h * b for a, b in zip(y0, k3)])
        return [a + h / 6.0 * (b + 2 * c + 2 * d + e)
                for a, b, c, d, e in zip(y0, k1, k2, k3, k4)]
    raise ValueError(f"unknown scheme {scheme!r}")


def run_maxreg(s0: MaxwellRegState, t_end: float, dt: Optional[float] = None,
               scheme="rk2", sink: Optional[Callable] = None, every=1) -> MaxwellRegState:
    g = s0.B_hat.grid
    dt = stable_dt(g, s0.eps) if dt is None else dt
    nsteps = max(1, math.ceil((t_end - s0.t) / dt - 1e-9)) if t_end > s0.t else 0
    h = (t_end - s0.t) / nsteps if nsteps else 0.0
    eps = s0.eps

    def f(y):
        st = MaxwellRegState(SpectralVectorField(g, y[0]), SpectralVectorField(g, y[1]), eps)
        dB, dE = rhs_BE(st)
        return [dB.coeffs, dE.coeffs]

    y = [s0.B_hat.coeffs, s0.E_hat.coeffs]
    s = s0
    if sink:
        sink(s)
    for n in range(1, nsteps + 1):
        y = _rk(y, f, h, scheme)
        s = MaxwellRegState(SpectralVectorField(g, y[0]), SpectralVectorField(g, y[1]), eps,
                            s0.t + n * h)
        if not (np.all(np.isfinite(y[0])) and np.all(np.isfinite(y[1]))):
            raise FloatingPointError(f"non-finite regularized state at t={s.t:.6g}")
        if sink and (n % every == 0 or n == nsteps):
            sink(s)
    return s


def run_Bj(B0: SpectralVectorField, G0: SpectralVectorField, eps: float, t_end: float,
           dt: Optional[float] = None, scheme="rk2"):
    """Integrate the (B, G = j x B) system, recovering j from (B, G) at every stage."""
    g = B0.grid
    dt = stable_dt(g, eps) if dt is None else dt
    nsteps = max(1, math.ceil(t_end / dt - 1e-9))
    h = t_end / nsteps

    def f(y):
        B = SpectralVectorField(g, y[0])
        j = recover_current(B, SpectralVectorField(g, y[1]))
        dB, dG = rhs_Bj(B, j, eps)
        return [dB.coeffs, dG.coeffs]

    y = [B0.coeffs, G0.coeffs]
    for _ in range(nsteps):
        y = _rk(y, f, h, scheme)
    return SpectralVectorField(g, y[0]), SpectralVectorField(g, y[1])


def rhs_hall_nonresistive(B_hat: SpectralVectorField, dealias=False) -> SpectralVectorField:
    """-curl((curl B) x B); pointwise on the collocation grid unless ``dealias``."""
    J_hat = sp.curl(B_hat)
    if dealias:
        return -sp.curl(sp.cross_product_dealiased(J_hat, B_hat))
    return -sp.curl(_spec(B_hat.grid, cross(_phys(J_hat), _phys(B_hat))))


def run_hall_nonresistive(B0: SpectralVectorField, t_end: float, dt: float, scheme="rk2",
                          dealias=False) -> SpectralVectorField:
    g = B0.grid
    nsteps = max(1, math.ceil(t_end / dt - 1e-9))
    h = t_end / nsteps

    def f(y):
        return [rhs_hall_nonresistive(SpectralVectorField(g, y[0]), dealias).coeffs]

    y = [B0.coeffs]
    for _ in range(nsteps):
        y = _rk(y, f, h, scheme)
    return SpectralVectorField(g, y[0])


@dataclass(frozen=True)
class EpsRow:
    eps: float
    deviation: Optional[float]
    error: Optional[str] = None


@dataclass(frozen=True)
class EpsStudy:
    rows: tuple
    order: Optional[float]

    @property
    def complete(self):
        return all(r.deviation is not None for r in self.rows)


def _eps_member(B0, eps, t_end, scheme, dt):
    try:
        h = study_dt(B0, eps) if dt is None else dt
        s = run_maxreg(MaxwellRegState(B0, well_prepared_E(B0), eps), t_end, h, scheme)
        ref = run_hall_nonresistive(B0, t_end, h, scheme)
        return EpsRow(eps, sp.norm(s.B_hat - ref))
    except Exception as exc:  # member failures become table markers
        return EpsRow(eps, None, f"{type(exc).__name__}: {exc}")


def fit_order(eps, dev):
    eps = np.asarray(eps, dtype=float)
    dev = np.asarray(dev, dtype=float)
    ok = dev > 0
    if np.count_nonzero(ok) < 2:
        return None
    return float(np.polyfit(np.log(eps[ok]), np.log(dev[ok]), 1)[0])


def eps_convergence_study(B0: SpectralVectorField, eps_list: Sequence[float], t_end: float,
                          scheme="rk2", dt=None, workers: int = 1) -> EpsStudy:
    """Deviation ||B_eps(t_end) - B_Hall(t_end)|| along an eps ladder.

    Each member runs the (B, E) system from well-prepared data and a
    non-resistive Hall reference with the same step and collocation
    treatment. The order is the least-squares slope of log deviation
    against log eps over the successful members.
    """
    args = [(B0, float(e), t_end, scheme, dt) for e in eps_list]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_eps_member, *zip(*args)))
    else:
        rows = [_eps_member(*a) for a in args]
    ok = [r for r in rows if r.deviation is not None]
    order = fit_order([r.eps for r in ok], [r.deviation for r in ok]) if ok else None
    return EpsStudy(tuple(rows), order)
