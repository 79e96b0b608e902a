"""Named initial conditions. Formulas are reproduced in the README."""

from __future__ import annotations

import numpy as np

from . import spectral as sp
from .hall import MhdState, random_solenoidal

TWO_PI = sp.TWO_PI


def abc(grid, amplitude=1.0):
    """a (sin 2pi z + cos 2pi y, sin 2pi x + cos 2pi z, sin 2pi y + cos 2pi x); curl = 2 pi B."""
    def f(x, y, z):
        return (amplitude * (np.sin(TWO_PI * z) + np.cos(TWO_PI * y)),
                amplitude * (np.sin(TWO_PI * x) + np.cos(TWO_PI * z)),
                amplitude * (np.sin(TWO_PI * y) + np.cos(TWO_PI * x)))
    return sp.from_function(grid, f)


def orszag_tang(grid, amplitude=1.0):
    """Orszag-Tang-like state with a z-perturbation so the flow is 3D.

    u = a (-sin 2pi y, sin 2pi x, 0.2 sin 2pi(x + y))
    B = a (-sin 2pi y + 0.2 cos 2pi(x + z), sin 4pi x, -0.2 cos 2pi(x + z))

    Both fields are solenoidal.
    """
    def fu(x, y, z):
        return (-amplitude * np.sin(TWO_PI * y), amplitude * np.sin(TWO_PI * x),
                0.2 * amplitude * np.sin(TWO_PI * (x + y)))

    def fb(x, y, z):
        return (-amplitude * np.sin(TWO_PI * y) + 0.2 * amplitude * np.cos(TWO_PI * (x + z)),
                amplitude * np.sin(2 * TWO_PI * x),
                -0.2 * amplitude * np.cos(TWO_PI * (x + z)))
    return sp.from_function(grid, fu), sp.from_function(grid, fb)


def helical(grid, amplitude=1.0):
    """a (0, sin 2pi x, cos 2pi x): Beltrami (curl = 2 pi B) with |B| = a everywhere, so null-free."""
    def f(x, y, z):
        return (0.0 * x, amplitude * np.sin(TWO_PI * x), amplitude * np.cos(TWO_PI * x))
    return sp.from_function(grid, f)


def guide_abc(grid, guide=1.0, amplitude=0.2):
    """Null-free field: uniform guide field along x plus a small ABC perturbation."""
    B = abc(grid, amplitude)
    B.coeffs[0, 0, 0, 0] += guide
    return B


def random_state(grid, seed=0, amplitude=1.0, coupled=True, k0=2.0):
    """Random solenoidal B (and u, from an independent stream) with zero means."""
    B = random_solenoidal(grid, seed=seed, amplitude=amplitude, k0=k0)
    u = random_solenoidal(grid, seed=seed + 7919, amplitude=amplitude, k0=k0) if coupled else None
    return MhdState(u, B, 0.0)


def make_state(name, grid, coupled, seed=0, amplitude=1.0):
    if name == "abc":
        B = abc(grid, amplitude)
        return MhdState(B.copy() if coupled else None, B, 0.0)
    if name == "random":
        return random_state(grid, seed=seed, amplitude=amplitude, coupled=coupled)
    if name == "orszag_tang":
        u, B = orszag_tang(grid, amplitude)
        return MhdState(u if coupled else None, B, 0.0)
    if name == "helical":
        B = helical(grid, amplitude)
        return MhdState(B.copy() if coupled else None, B, 0.0)
    if name == "guide_abc":
        B = guide_abc(grid, guide=amplitude, amplitude=0.2 * amplitude)
        return MhdState(sp.zeros(grid) if coupled else None, B, 0.0)
    raise ValueError(f"unknown preset {name!r}")


def swirl_ring(amplitude=1.0, x_c=0.5, r_c=0.15, width=0.06):
    """b(x, r) = a (r / r_c) exp(-((x - x_c)^2 + (r - r_c)^2) / w^2); vanishes like r on the axis."""
    def b(x, r):
        return amplitude * (r / r_c) * np.exp(-((x - x_c) ** 2 + (r - r_c) ** 2) / width**2)
    return b


def rigid_rotor(c=1.0):
    def b(x, r):
        return c * r + 0.0 * x
    return b
