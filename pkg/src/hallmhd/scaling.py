"""Nondimensionalization of the two-fluid plasma model and regime classification.

Unit relations: u0 = sqrt(T/m_i), x0 = u0 t0, E0 = u0 B0. The electric
scale is closed by one of

* ``ampere``: gamma^2 eta / (alpha^2 lambda^2) = 1, i.e. B0 = mu0 j0 x0;
* ``lorentz``: alpha^2 eta = 1, i.e. E0 = T n0 u0 / (j0 x0);
* ``given``: B0 supplied by the caller.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, fields
from typing import Optional

from scipy import constants as C

from .errors import ConfigError, DimensionError

E_CHARGE = C.elementary_charge
EPS0 = C.epsilon_0
MU0 = C.mu_0
C_LIGHT = C.c
M_E = C.m_e
M_P = C.m_p

if abs(EPS0 * MU0 * C_LIGHT**2 - 1.0) > 1e-9:
    raise ImportError("inconsistent electromagnetic constants: eps0 mu0 c^2 != 1")

CLOSURES = ("ampere", "lorentz", "given")


class RegimeLabel(enum.Enum):
    IdealMHD = "IdealMHD"
    ResistiveMHD = "ResistiveMHD"
    HallMHD = "HallMHD"
    ResistiveHallMHD = "ResistiveHallMHD"
    Indeterminate = "Indeterminate"


@dataclass(frozen=True)
class PhysicalParams:
    """SI inputs. ``eta_phys`` may be zero (collisionless); the rest must be positive."""

    m_e: float = M_E
    m_i: float = M_P
    T: float = 1.602176634e-17  # 100 eV
    n0: float = 1e20
    x0: float = 1e-2
    eta_phys: float = 1e-7
    j0: float = 1e6
    B0: Optional[float] = None

    def __post_init__(self):
        for name in ("m_e", "m_i", "T", "n0", "x0", "j0"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise DimensionError(f"{name} must be positive and finite, got {v!r}")
        if not (math.isfinite(self.eta_phys) and self.eta_phys >= 0):
            raise DimensionError(f"eta_phys must be non-negative, got {self.eta_phys!r}")
        if self.B0 is not None and not (math.isfinite(self.B0) and self.B0 > 0):
            raise DimensionError(f"B0 must be positive, got {self.B0!r}")

    @property
    def u0(self):
        return math.sqrt(self.T / self.m_i)


@dataclass(frozen=True)
class DimensionlessGroups:
    eps2: float
    alpha2: float
    beta: float
    gamma: float
    lambda2: float
    eta_ratio: float
    u0: float
    B0: float
    E0: float

    @property
    def inv_alpha2(self):
        return 1.0 / self.alpha2

    @property
    def beta_over_alpha4(self):
        return self.beta / self.alpha2**2

    @property
    def ampere_coefficient(self):
        """gamma^2 eta / (alpha^2 lambda^2), the current coefficient in Ampere's law."""
        return self.gamma**2 * self.eta_ratio / (self.alpha2 * self.lambda2)

    @property
    def lorentz_coefficient(self):
        """alpha^2 eta, the Lorentz-force coefficient in the momentum equation."""
        return self.alpha2 * self.eta_ratio


def electric_scale(p: PhysicalParams, closure="ampere") -> float:
    u0 = p.u0
    if closure == "ampere":
        return u0 * MU0 * p.j0 * p.x0
    if closure == "lorentz":
        return p.T * p.n0 * u0 / (p.j0 * p.x0)
    if closure == "given":
        if p.B0 is None:
            raise DimensionError("closure 'given' requires B0")
        return u0 * p.B0
    raise ValueError(f"unknown closure {closure!r}; choose from {CLOSURES}")


def compute_groups(p: PhysicalParams, closure="ampere") -> DimensionlessGroups:
    e = E_CHARGE
    u0 = p.u0
    E0 = electric_scale(p, closure)
    return DimensionlessGroups(
        eps2=p.m_e / p.m_i,
        alpha2=e * E0 * p.x0 / p.T,
        beta=e**2 * p.eta_phys * p.n0 * u0 * p.x0 / p.T,
        gamma=u0 / C_LIGHT,
        lambda2=EPS0 * p.T / (e**2 * p.n0 * p.x0**2),
        eta_ratio=p.j0 / (e * p.n0 * u0),
        u0=u0,
        B0=E0 / u0,
        E0=E0,
    )


def classify_regime(g, threshold: float = 0.1) -> RegimeLabel:
    """Map (1/alpha^2, beta/alpha^4) to a model.

    A parameter counts as vanishing below ``threshold`` and as order one
    inside ``[threshold, 1/threshold]``; anything else is Indeterminate.
    ``g`` is a DimensionlessGroups or an ``(inv_alpha2, beta_over_alpha4)`` pair.
    """
    if not 0 < threshold < 1:
        raise ValueError("threshold must lie in (0, 1)")
    if isinstance(g, DimensionlessGroups):
        a, b = g.inv_alpha2, g.beta_over_alpha4
    else:
        a, b = g

    def band(v):
        if v < threshold:
            return "small"
        if v <= 1.0 / threshold:
            return "unit"
        return "large"

    table = {
        ("small", "small"): RegimeLabel.IdealMHD,
        ("small", "unit"): RegimeLabel.ResistiveMHD,
        ("unit", "small"): RegimeLabel.HallMHD,
        ("unit", "unit"): RegimeLabel.ResistiveHallMHD,
    }
    return table.get((band(a), band(b)), RegimeLabel.Indeterminate)


_PARAM_KEYS = {f.name for f in fields(PhysicalParams)} | {"closure", "threshold"}


def parse_params(text: str):
    """Read ``key = value`` SI parameters; returns (PhysicalParams, closure, threshold)."""
    values, errors = {}, []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            errors.append(f"line {lineno}: expected 'key = value'")
            continue
        key, val = (s.strip() for s in line.split("=", 1))
        if key not in _PARAM_KEYS:
            errors.append(f"line {lineno}: unknown key {key!r}")
            continue
        if key == "closure":
            if val not in CLOSURES:
                errors.append(f"line {lineno}: closure must be one of {CLOSURES}")
            values[key] = val
            continue
        try:
            values[key] = float(val)
        except ValueError:
            errors.append(f"line {lineno}: cannot parse {val!r} as a number")
    if errors:
        raise ConfigError(errors)
    closure = values.pop("closure", "ampere")
    threshold = values.pop("threshold", 0.1)
    try:
        params = PhysicalParams(**values)
    except DimensionError as exc:
        raise ConfigError([str(exc)]) from exc
    return params, closure, threshold
