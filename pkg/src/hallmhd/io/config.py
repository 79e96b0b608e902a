"""``key = value`` run configuration with whole-file error reporting."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, fields, replace
from typing import Optional, Tuple

from ..errors import ConfigError

log = logging.getLogger(__name__)

MODES = ("hall3d", "coupled3d", "axi", "kmc", "maxreg", "eps-sweep", "scaling", "verify")
PRESETS = ("random", "abc", "helical", "orszag_tang", "guide_abc")


def _bool(text):
    low = text.lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _floats(text):
    return tuple(float(x) for x in text.replace(",", " ").split())


@dataclass(frozen=True)
class RunConfig:
    mode: str
    n: int = 32
    dt: Optional[float] = None
    cfl_safety: float = 0.5
    t_end: Optional[float] = None
    scheme: str = "imex_rk2"
    adapt: bool = False
    preset: str = "random"
    amplitude: float = 1.0
    snapshot: Optional[str] = None
    seed: int = 0
    diag_every: int = 1
    snapshot_every: int = 0
    out: str = "out"
    eps: Optional[float] = None
    eps_list: Tuple[float, ...] = ()
    rk: str = "rk2"
    nx: int = 256
    nr: int = 128
    b_left: Optional[float] = None
    b_right: Optional[float] = None
    r0: Optional[float] = None
    nu: Optional[float] = None
    params: Optional[str] = None
    warnings: Tuple[str, ...] = field(default=(), compare=False)


_PARSERS = {
    "mode": str, "n": int, "dt": float, "cfl_safety": float, "t_end": float,
    "scheme": str, "adapt": _bool, "preset": str, "amplitude": float,
    "snapshot": str, "seed": int, "diag_every": int, "snapshot_every": int,
    "out": str, "eps": float, "eps_list": _floats, "rk": str, "nx": int,
    "nr": int, "b_left": float, "b_right": float, "r0": float, "nu": float,
    "params": str,
}

_REQUIRED = {
    "hall3d": ("n", "t_end"),
    "coupled3d": ("n", "t_end"),
    "axi": ("nx", "nr", "t_end"),
    "kmc": ("b_left", "b_right", "r0", "t_end"),
    "maxreg": ("n", "t_end", "eps"),
    "eps-sweep": ("n", "t_end", "eps_list"),
    "scaling": (),
    "verify": (),
}


def _validate(cfg: RunConfig, where):
    errs = []

    def bad(key, msg):
        loc = f"line {where[key]}: " if key in where else ""
        errs.append(f"{loc}{key}: {msg}")

    if cfg.n < 4 or cfg.n % 2:
        bad("n", f"resolution must be even and >= 4, got {cfg.n}")
    if cfg.dt is not None and cfg.dt <= 0:
        bad("dt", "must be positive")
    if not 0 < cfg.cfl_safety <= 1:
        bad("cfl_safety", "must lie in (0, 1]")
    if cfg.t_end is not None and cfg.t_end < 0:
        bad("t_end", "must be non-negative")
    if cfg.scheme not in ("imex_euler", "imex_rk2", "integrating_factor_rk4"):
        bad("scheme", f"unknown scheme {cfg.scheme!r}")
    if cfg.rk not in ("rk2", "rk4"):
        bad("rk", f"unknown scheme {cfg.rk!r}")
    if cfg.preset not in PRESETS:
        bad("preset", f"unknown preset {cfg.preset!r}; choose from {PRESETS}")
    if cfg.diag_every < 1:
        bad("diag_every", "must be >= 1")
    if cfg.snapshot_every < 0:
        bad("snapshot_every", "must be >= 0")
    if cfg.eps is not None and cfg.eps <= 0:
        bad("eps", "must be positive")
    if any(e <= 0 for e in cfg.eps_list):
        bad("eps_list", "entries must be positive")
    if cfg.nx < 4 or cfg.nr < 4:
        bad("nx" if cfg.nx < 4 else "nr", "must be >= 4")
    if cfg.r0 is not None and cfg.r0 <= 0:
        bad("r0", "must be positive")
    if cfg.seed < 0:
        bad("seed", "must be non-negative")
    return errs


def parse_config(text: str, overrides=None) -> RunConfig:
    """Parse and validate; raises ConfigError listing every problem found.

    Duplicate keys are allowed, the last occurrence wins and a warning is
    recorded on the config and logged.
    """
    values, where, errors, warnings = {}, {}, [], []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            errors.append(f"line {lineno}: expected 'key = value', got {line!r}")
            continue
        key, val = (s.strip() for s in line.split("=", 1))
        if key not in _PARSERS:
            errors.append(f"line {lineno}: unknown key {key!r}")
            continue
        seen.add(key)
        try:
            parsed = _PARSERS[key](val)
        except ValueError:
            errors.append(f"line {lineno}: cannot parse {key} = {val!r}")
            continue
        if key in values:
            msg = f"line {lineno}: duplicate key {key!r} overrides line {where[key]}"
            warnings.append(msg)
            log.warning(msg)
        values[key] = parsed
        where[key] = lineno
    values.update(overrides or {})
    mode = values.get("mode")
    if mode is None:
        errors.append("missing required key 'mode'")
    elif mode not in MODES:
        errors.append(f"line {where.get('mode', '?')}: unknown mode {mode!r}; choose from {MODES}")
    else:
        for key in _REQUIRED[mode]:
            if key not in values and key not in seen:
                errors.append(f"missing required key {key!r} for mode {mode}")
    if errors and mode not in MODES:
        raise ConfigError(errors)
    cfg = RunConfig(**values, warnings=tuple(warnings))
    errors.extend(_validate(cfg, where))
    if errors:
        raise ConfigError(errors)
    return cfg


def format_config(cfg: RunConfig) -> str:
    lines = []
    for f in fields(cfg):
        v = getattr(cfg, f.name)
        if f.name == "warnings" or v is None or v == ():
            continue
        if isinstance(v, tuple):
            v = ", ".join(repr(x) for x in v)
        lines.append(f"{f.name} = {v}")
    return "\n".join(lines) + "\n"


def with_overrides(cfg: RunConfig, **kw) -> RunConfig:
    return replace(cfg, **{k: v for k, v in kw.items() if v is not None})
