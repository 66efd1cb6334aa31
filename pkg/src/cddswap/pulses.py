"""Scalar time profiles on the scaled interval t in [0, 1].

All times are in units of the total gate time, so the control frequency is
``omega = 2*pi``.
"""

from dataclasses import dataclass
import math

import numpy as np
from scipy.integrate import cumulative_simpson

TIME_TOL = 1e-12
OMEGA = 2.0 * math.pi

SRI_AMPLITUDE = 2.2
LRI_AMPLITUDE = 1.15


@dataclass(frozen=True)
class ExchangeScheme:
    """Gaussian exchange pulse ``A exp(-B (t - 1/2)^2)`` with ``B = (8A)^2 / pi``.

    The width is tied to the height so the pulse area is pi/8, which makes the
    pulse a sqrt(SWAP) gate.
    """

    label: str
    amplitude: float

    def __post_init__(self):
        if not self.amplitude > 0:
            raise ValueError(f"exchange amplitude must be positive, got {self.amplitude}")

    @property
    def width(self) -> float:
        return 64.0 * self.amplitude**2 / math.pi

    @classmethod
    def from_label(cls, label: str) -> "ExchangeScheme":
        key = label.upper()
        if key == "SRI":
            return cls("SRI", SRI_AMPLITUDE)
        if key == "LRI":
            return cls("LRI", LRI_AMPLITUDE)
        raise ValueError(f"unknown exchange scheme {label!r}; expected 'SRI' or 'LRI'")


@dataclass(frozen=True)
class TransitionParams:
    c: float = 2.86
    d: int = 9

    def __post_init__(self):
        if not self.c > 0:
            raise ValueError(f"transition parameter c must be positive, got {self.c}")
        if int(self.d) != self.d or self.d < 1:
            raise ValueError(f"transition parameter d must be a positive integer, got {self.d}")


SHUTDOWN_SCOPES = ("all", "x")


@dataclass(frozen=True)
class ControlSchedule:
    """Protection field strengths and switching times.

    ``shutdown_scope`` selects what is switched off at ``shutdown_time``:
    ``"all"`` removes the whole field, ``"x"`` stops only the static x
    component (dephasing protection) while the n_z part keeps running.
    """

    n_x: int = 0
    n_z: int = 0
    omega: float = OMEGA
    shutdown_time: float | None = None
    halt_time: float | None = None
    shutdown_scope: str = "all"

    def __post_init__(self):
        for name in ("n_x", "n_z"):
            v = getattr(self, name)
            if int(v) != v or v < 0:
                raise ValueError(f"{name} must be a non-negative integer, got {v}")
        if self.n_x and self.n_z and self.n_x == self.n_z:
            raise ValueError(f"n_x and n_z must differ when both are nonzero, got {self.n_x}")
        for name in ("shutdown_time", "halt_time"):
            v = getattr(self, name)
            if v is not None and not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")
        if self.shutdown_scope not in SHUTDOWN_SCOPES:
            raise ValueError(f"shutdown_scope must be one of {SHUTDOWN_SCOPES}, got {self.shutdown_scope!r}")

    def x_clock(self, t: float) -> float:
        if self.shutdown_time is not None and t > self.shutdown_time:
            return self.shutdown_time
        return t

    def z_clock(self, t: float) -> float:
        if self.shutdown_scope == "all":
            return self.x_clock(t)
        return t


def check_time(t):
    t = float(t)
    if not -TIME_TOL <= t <= 1.0 + TIME_TOL:
        raise ValueError(f"time {t} outside the scaled interval [0, 1]")
    return min(max(t, 0.0), 1.0)


def _halted(t, halt_time):
    if halt_time is not None and t > halt_time:
        return halt_time
    return t


def exchange_profile(t, scheme: ExchangeScheme, halt_time=None) -> float:
    t = _halted(check_time(t), halt_time)
    return scheme.amplitude * math.exp(-scheme.width * (t - 0.5) ** 2)


def transition_profile(t, params: TransitionParams = TransitionParams(), halt_time=None) -> float:
    """Common-bath weight: 1 on the central plateau, 0 when the qubits are apart."""
    t = _halted(check_time(t), halt_time)
    return math.exp(-((params.c * (t - 0.5)) ** (2 * params.d)))


def control_field(t, sched: ControlSchedule) -> np.ndarray:
    """Field vector (Omega_x, Omega_y, Omega_z) driving the protection."""
    t = check_time(t)
    w = sched.omega
    if sched.shutdown_time is not None and t > sched.shutdown_time:
        if sched.shutdown_scope == "all":
            return np.zeros(3)
        phase = sched.n_x * w * sched.shutdown_time
        return np.array([0.0, -sched.n_z * w * math.sin(phase), sched.n_z * w * math.cos(phase)])
    phase = sched.n_x * w * t
    return np.array(
        [sched.n_x * w, -sched.n_z * w * math.sin(phase), sched.n_z * w * math.cos(phase)]
    )


def exchange_area(times, scheme: ExchangeScheme, halt_time=None) -> np.ndarray:
    """Cumulative integral of the exchange pulse over ``times`` (composite Simpson)."""
    times = np.asarray(times, dtype=float)
    values = np.array([exchange_profile(t, scheme, halt_time) for t in times])
    return cumulative_simpson(values, x=times, initial=0.0)
