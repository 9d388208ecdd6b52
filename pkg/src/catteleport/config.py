"""Flat key-value run configuration.

Config files hold one ``key = value`` pair per line with ``#`` comments.
Frequencies are given in Hz (matching how experiments quote them) and are
converted to angular units with explicit 2*pi factors when the mode system
is built; damping is given as inverse rates in seconds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .dynamics import ChiMode, ModeSystem
from .errors import ConfigError
from .protocol import ProtocolConfig

TWO_PI = 2.0 * math.pi

# key -> (type, default).  Unknown keys in a file are a hard error.
_SCHEMA = {
    "gamma11_inv_s": (float, 1.0e-3),
    "gamma22_inv_s": (float, 0.9e-3),
    "gamma12": (float, 0.0),
    "gamma21": (float, 0.0),
    "omega1_Hz": (float, 51.1e9),       # microwave-domain mode 1
    "Delta_Hz": (float, 1.0e7),         # omega2 = omega1 + 2*pi*Delta
    "delta_Hz": (float, 1.0e5),         # atom detuning from mode 1
    "g_Hz": (float, 1.0e4),             # Rabi frequency
    "lamb11_Hz": (float, 0.0),
    "lamb22_Hz": (float, 0.0),
    "lamb12_Hz": (float, 0.0),
    "lamb21_Hz": (float, 0.0),
    "alpha_re": (float, 1.0),
    "alpha_im": (float, 0.0),
    "beta_re": (float, 1.0),
    "beta_im": (float, 0.0),
    "c_plus": (float, 1.0 / math.sqrt(2.0)),
    "c_minus": (float, 1.0 / math.sqrt(2.0)),
    "parity": (int, 1),
    "spectator_phase_on": (bool, True),
    "seed": (int, 0),
    "t_max_s": (float, 1.0e-3),
    "n_points": (int, 200),
    "t_tel_s": (float, 3.5e-4),
    "frame": (str, "rotating"),
}


@dataclass(frozen=True)
class RunConfig:
    gamma11_inv_s: float
    gamma22_inv_s: float
    gamma12: float
    gamma21: float
    omega1_Hz: float
    Delta_Hz: float
    delta_Hz: float
    g_Hz: float
    lamb11_Hz: float
    lamb22_Hz: float
    lamb12_Hz: float
    lamb21_Hz: float
    alpha_re: float
    alpha_im: float
    beta_re: float
    beta_im: float
    c_plus: float
    c_minus: float
    parity: int
    spectator_phase_on: bool
    seed: int
    t_max_s: float
    n_points: int
    t_tel_s: float
    frame: str

    def __post_init__(self):
        if self.frame not in ("rotating", "lab"):
            raise ConfigError(f"frame must be 'rotating' or 'lab', got {self.frame!r}")
        if self.parity not in (1, -1):
            raise ConfigError("parity must be +1 or -1")
        if self.n_points < 2:
            raise ConfigError("n_points must be at least 2")
        for key in ("gamma11_inv_s", "gamma22_inv_s", "t_max_s", "t_tel_s"):
            if getattr(self, key) <= 0.0:
                raise ConfigError(f"{key} must be positive")
        try:
            self.mode_system()
            self.protocol_config()
        except (ValueError, ConfigError) as exc:
            raise ConfigError(str(exc)) from exc

    @property
    def alpha(self) -> complex:
        return complex(self.alpha_re, self.alpha_im)

    @property
    def beta(self) -> complex:
        return complex(self.beta_re, self.beta_im)

    @property
    def rotating_frame(self) -> bool:
        return self.frame == "rotating"

    @property
    def spectator_phase(self) -> float:
        """pi*delta/(Delta+delta): the phase the spectator mode picks up
        during one dispersive pi interval (chi*tau = pi)."""
        if not self.spectator_phase_on:
            return 0.0
        return math.pi * self.delta_Hz / (self.Delta_Hz + self.delta_Hz)

    def mode_system(self, chi_mode: ChiMode = ChiMode.NONE) -> ModeSystem:
        omega1 = TWO_PI * self.omega1_Hz
        chi = TWO_PI * self.g_Hz ** 2 / self.delta_Hz if chi_mode is not ChiMode.NONE else 0.0
        return ModeSystem(
            omega1=omega1,
            omega2=omega1 + TWO_PI * self.Delta_Hz,
            gamma11=1.0 / self.gamma11_inv_s,
            gamma22=1.0 / self.gamma22_inv_s,
            gamma12=self.gamma12,
            gamma21=self.gamma21,
            lamb11=TWO_PI * self.lamb11_Hz,
            lamb22=TWO_PI * self.lamb22_Hz,
            lamb12=TWO_PI * self.lamb12_Hz,
            lamb21=TWO_PI * self.lamb21_Hz,
            chi_active=chi,
            chi_mode=chi_mode,
        )

    def protocol_config(self) -> ProtocolConfig:
        norm = math.hypot(self.c_plus, self.c_minus)
        if norm < 1e-14:
            raise ConfigError("c_plus and c_minus cannot both vanish")
        return ProtocolConfig(
            alpha=self.alpha,
            beta=self.beta,
            c_plus=self.c_plus / norm,
            c_minus=self.c_minus / norm,
            parity_sign=self.parity,
            spectator_phase=self.spectator_phase,
            rng_seed=self.seed,
        )


def default_config() -> RunConfig:
    return RunConfig(**{k: d for k, (_t, d) in _SCHEMA.items()})


def _coerce(key: str, raw: str):
    typ, _default = _SCHEMA[key]
    if typ is bool:
        low = raw.lower()
        if low in ("true", "1", "yes", "on"):
            return True
        if low in ("false", "0", "no", "off"):
            return False
        raise ConfigError(f"key {key!r}: cannot parse boolean from {raw!r}")
    try:
        return typ(raw)
    except ValueError as exc:
        raise ConfigError(f"key {key!r}: {exc}") from exc


def parse_config(text: str) -> RunConfig:
    values = {k: d for k, (_t, d) in _SCHEMA.items()}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, raw = (part.strip() for part in stripped.split("=", 1))
        if key not in _SCHEMA:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        values[key] = _coerce(key, raw)
    return RunConfig(**values)


def load_config(path) -> RunConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    return parse_config(text)
