"""Gate and control propagators, and the dressed system-bath coupling operators.

The interaction picture used by the solver is generated by ``W(t) = U_c(t) U_gate(t)``.
Both factors commute: the Heisenberg exchange is invariant under the global
rotations produced by the protection field.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import linalg
from .linalg import I2, I4, SWAP, SX, SY, SZ, dag
from .pulses import (
    ControlSchedule,
    ExchangeScheme,
    TransitionParams,
    check_time,
    exchange_area,
    transition_profile,
)

DEPHASING = "dephasing"
AMPLITUDE_DAMPING = "amplitude_damping"
CHANNEL_KINDS = (DEPHASING, AMPLITUDE_DAMPING)

_KIND_ALIASES = {
    "dephasing": DEPHASING,
    "amplitude_damping": AMPLITUDE_DAMPING,
    "amplitude-damping": AMPLITUDE_DAMPING,
    "ad": AMPLITUDE_DAMPING,
}

DEFAULT_GATE_GRID = 4000


@dataclass(frozen=True)
class NoiseChannel:
    kind: str

    def __post_init__(self):
        kind = _KIND_ALIASES.get(str(self.kind).lower())
        if kind is None:
            raise ValueError(f"unknown noise channel {self.kind!r}; expected one of {CHANNEL_KINDS}")
        object.__setattr__(self, "kind", kind)

    @property
    def lambda_vector(self) -> np.ndarray:
        if self.kind == DEPHASING:
            return np.array([0, 0, 1], dtype=complex)
        return np.array([1, 1j, 0], dtype=complex)

    def single_qubit_operator(self) -> np.ndarray:
        """lambda . sigma on one qubit, unnormalised (x + iy gives 2 sigma_+)."""
        lam = self.lambda_vector
        return lam[0] * SX + lam[1] * SY + lam[2] * SZ


@dataclass(frozen=True)
class CouplingOperators:
    """Dressed operators for the common bath and the two individual baths."""

    lambda_1: np.ndarray
    lambda_2: np.ndarray
    lambda_3: np.ndarray

    def as_tuple(self):
        return (self.lambda_1, self.lambda_2, self.lambda_3)


# --- closed-form propagators (vectorised over time) ---------------------------

def heisenberg_propagator(theta):
    """exp(-i theta sigma.sigma) = e^{i theta} [cos(2 theta) I - i sin(2 theta) SWAP]."""
    theta = np.asarray(theta, dtype=float)
    ph = np.exp(1j * theta)[..., None, None]
    return ph * (np.cos(2 * theta)[..., None, None] * I4 - 1j * np.sin(2 * theta)[..., None, None] * SWAP)


def single_qubit_control(x_angle, z_angle):
    """exp(-i a sigma_x) exp(-i b sigma_z) for arrays of angles a, b."""
    a = np.asarray(x_angle, dtype=float)[..., None, None]
    b = np.asarray(z_angle, dtype=float)[..., None, None]
    ux = np.cos(a) * I2 - 1j * np.sin(a) * SX
    uz = np.cos(b) * I2 - 1j * np.sin(b) * SZ
    return ux @ uz


def control_angles(times, sched: ControlSchedule):
    times = np.asarray(times, dtype=float)
    tx = times if sched.shutdown_time is None else np.minimum(times, sched.shutdown_time)
    tz = tx if sched.shutdown_scope == "all" else times
    return sched.omega * sched.n_x * tx, sched.omega * sched.n_z * tz


def control_propagators(times, sched: ControlSchedule):
    a, b = control_angles(times, sched)
    u = single_qubit_control(a, b)
    return np.einsum("...ij,...kl->...ikjl", u, u).reshape(u.shape[:-2] + (4, 4))


# --- gate phase ---------------------------------------------------------------

class GatePhase:
    """Accumulated exchange phase theta(t) tabulated on a uniform grid.

    Values between nodes are linearly interpolated.
    """

    def __init__(self, scheme: ExchangeScheme, halt_time=None, grid_size=DEFAULT_GATE_GRID):
        self.scheme = scheme
        self.halt_time = halt_time
        self.times = np.linspace(0.0, 1.0, grid_size + 1)
        self.values = exchange_area(self.times, scheme, halt_time)

    def __call__(self, t):
        return np.interp(t, self.times, self.values)


@lru_cache(maxsize=32)
def _gate_phase(scheme, halt_time, grid_size):
    return GatePhase(scheme, halt_time, grid_size)


def gate_unitary(t, scheme: ExchangeScheme, halt_time=None, grid_size=DEFAULT_GATE_GRID):
    t = check_time(t)
    theta = float(_gate_phase(scheme, halt_time, grid_size)(t))
    return linalg.unitary_exp(linalg.HEISENBERG, theta)


def control_unitary(t, sched: ControlSchedule):
    t = check_time(t)
    a, b = control_angles(t, sched)
    u = linalg.unitary_exp(SX, float(a)) @ linalg.unitary_exp(SZ, float(b))
    return np.kron(u, u)


# --- coupling operators -------------------------------------------------------

def bare_couplings(channel: NoiseChannel, xi):
    """lambda . S_n for n = 1, 2, 3 at transition weight(s) ``xi``.

    Returns an array of shape ``xi.shape + (3, 4, 4)``.
    """
    xi = np.asarray(xi, dtype=float)[..., None, None]
    op = channel.single_qubit_operator()
    s1 = linalg.on_qubit(op, 1)
    s2 = linalg.on_qubit(op, 2)
    return np.stack([xi * (s1 + s2), (1 - xi) * s1, (1 - xi) * s2], axis=-3)


def dress(ops, frame):
    """W^dag A W with broadcasting over leading axes."""
    return dag(frame) @ ops @ frame


def coupling_operators(
    t,
    channel: NoiseChannel,
    scheme: ExchangeScheme | None,
    sched: ControlSchedule,
    params: TransitionParams = TransitionParams(),
    xi_override=None,
    grid_size=DEFAULT_GATE_GRID,
) -> CouplingOperators:
    """Interaction-picture coupling operators at time ``t``.

    ``scheme=None`` switches the exchange gate off.
    """
    t = check_time(t)
    xi = transition_profile(t, params, sched.halt_time) if xi_override is None else float(xi_override)
    frame = control_unitary(t, sched)
    if scheme is not None:
        frame = frame @ gate_unitary(t, scheme, sched.halt_time, grid_size)
    ops = dress(bare_couplings(channel, xi), frame)
    return CouplingOperators(*ops)


def decoupling_residual(sched: ControlSchedule, channel: NoiseChannel, n_quad=4096) -> float:
    """Relative size of the time-averaged single-qubit coupling in the control frame.

    Zero means the control field cancels the coupling to first order.
    """
    times = np.linspace(0.0, 1.0, n_quad + 1)
    a, b = control_angles(times, sched)
    u = single_qubit_control(a, b)
    op = channel.single_qubit_operator()
    avg = np.trapezoid(dag(u) @ op @ u, times, axis=0)
    # the identity factor on qubit 2 scales both norms by sqrt(2)
    return float(np.linalg.norm(avg) / np.linalg.norm(op))
