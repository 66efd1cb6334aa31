"""Time-nonlocal Redfield evolution of the two-qubit state.

In the frame generated by ``W(t) = U_c(t) U_gate(t)`` the reduced state obeys

    d rho/dt = sum_n  [L, rho A] + [L^dag, rho B] + [A^dag rho, L^dag] + [B^dag rho, L]

with ``L = Lambda_n(t)`` and the memory integrals

    A(t) = int_0^t Lambda_n^dag(t') G1(t - t') dt'
    B(t) = int_0^t Lambda_n(t')     G2(t - t') dt'.

The memory integrals do not depend on the state, so the generator is tabulated
once per grid node as a 16x16 superoperator (row-major vectorisation) and the
state is then stepped with Heun's method.
"""

from dataclasses import dataclass, field
import logging

import numpy as np
from scipy.signal import fftconvolve

from . import observables
from .bath import build_kernels
from .config import ScenarioConfig
from .hamiltonians import bare_couplings, control_propagators, dress, heisenberg_propagator
from .linalg import I4, dag
from .pulses import exchange_area, transition_profile

log = logging.getLogger(__name__)

TRACE_ABORT = 1e-4
POSITIVITY_WARN = 0.05


class SolverAbort(RuntimeError):
    pass


@dataclass
class Trajectory:
    times: np.ndarray
    rho_interaction: np.ndarray
    rho_schrodinger: np.ndarray
    concurrence: np.ndarray
    dfs_occupancy: np.ndarray
    fidelity: np.ndarray
    purity: np.ndarray
    positivity_defect: np.ndarray
    diagnostics: dict = field(default_factory=dict)

    @property
    def final_concurrence(self) -> float:
        return float(self.concurrence[-1])

    @property
    def final_state(self) -> np.ndarray:
        return self.rho_schrodinger[-1]

    @property
    def positivity_warning(self) -> bool:
        return bool(self.diagnostics.get("positivity_warning", False))

    def records(self):
        for k, t in enumerate(self.times):
            yield observables.ObservableRecord(
                float(t),
                float(self.concurrence[k]),
                float(self.dfs_occupancy[k]),
                float(self.fidelity[k]),
                float(self.purity[k]),
                float(self.positivity_defect[k]),
            )


def grid_times(n):
    return np.linspace(0.0, 1.0, n + 1)


def frames(config: ScenarioConfig, times):
    """W(t_k) = U_c(t_k) U_gate(t_k) on the grid, shape (N+1, 4, 4)."""
    w = control_propagators(times, config.schedule)
    scheme = config.exchange
    if scheme is not None:
        theta = exchange_area(times, scheme, config.schedule.halt_time)
        w = w @ heisenberg_propagator(theta)
    return w


def transition_weights(config: ScenarioConfig, times):
    if config.xi_override is not None:
        return np.full(len(times), float(config.xi_override))
    halt = config.schedule.halt_time
    return np.array([transition_profile(t, config.transition, halt) for t in times])


def coupling_history(config: ScenarioConfig, channel, times, w=None, xi=None):
    """Lambda_n(t_k) for n = 1..3, shape (3, N+1, 4, 4)."""
    w = frames(config, times) if w is None else w
    xi = transition_weights(config, times) if xi is None else xi
    ops = dress(bare_couplings(channel, xi), w[:, None])
    return np.moveaxis(ops, 1, 0)


def memory_integral(ops, kernel, h):
    """Trapezoid rule for int_0^{t_k} ops(t') kernel(t_k - t') dt' at every node."""
    n = ops.shape[0]
    conv = fftconvolve(ops, kernel[:, None, None], axes=0)[:n]
    conv -= 0.5 * (ops[0][None] * kernel[:, None, None] + ops * kernel[0])
    conv[0] = 0.0
    return h * conv


def _super(left, right):
    """Matrix of rho -> left @ rho @ right acting on row-major vec(rho)."""
    return np.einsum("kij,klm->kimjl", left, right).reshape(left.shape[0], 16, 16)


def dissipator_superop(lam, a, b):
    """Generator contribution of one bath given Lambda, A and B on the grid."""
    eye = np.broadcast_to(I4, lam.shape)
    lam_d = dag(lam)
    a_d = dag(a)
    b_d = dag(b)
    return (
        _super(lam, a) - _super(eye, a @ lam)
        + _super(lam_d, b) - _super(eye, b @ lam_d)
        + _super(a_d, lam_d) - _super(lam_d @ a_d, eye)
        + _super(b_d, lam) - _super(lam @ b_d, eye)
    )


class Generator:
    """Tabulated Redfield generator for a scenario and a subset of its channels."""

    def __init__(self, config: ScenarioConfig, channels=None):
        self.config = config
        self.times = grid_times(config.grid_size)
        self.h = 1.0 / config.grid_size
        channels = config.active_channels if channels is None else tuple(channels)
        w = frames(config, self.times)
        xi = transition_weights(config, self.times)
        self.frames = w
        self.superop = np.zeros((len(self.times), 16, 16), dtype=complex)
        for spec in channels:
            if spec.bath.eta == 0:
                continue
            kernels = build_kernels(spec.bath, self.times)
            for lam in coupling_history(config, spec.channel, self.times, w, xi):
                a = memory_integral(dag(lam), kernels.g1, self.h)
                b = memory_integral(lam, kernels.g2, self.h)
                self.superop += dissipator_superop(lam, a, b)

    def apply(self, k, rho):
        return (self.superop[k] @ np.asarray(rho).reshape(16)).reshape(4, 4)


def evolve(config: ScenarioConfig, generator: Generator | None = None) -> Trajectory:
    gen = Generator(config) if generator is None else generator
    times, h, sup = gen.times, gen.h, gen.superop
    n = len(times)
    rho = np.empty((n, 16), dtype=complex)
    rho[0] = config.initial_state.reshape(16)
    transpose = np.arange(16).reshape(4, 4).T.ravel()
    max_herm = 0.0
    max_drift = 0.0
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(n - 1):
            r = rho[k]
            k1 = sup[k] @ r
            k2 = sup[k + 1] @ (r + h * k1)
            nxt = r + 0.5 * h * (k1 + k2)
            if not np.all(np.isfinite(nxt)):
                raise SolverAbort(f"state diverged at t={times[k + 1]:.6f}")
            herm = np.linalg.norm(nxt - nxt[transpose].conj())
            nxt = 0.5 * (nxt + nxt[transpose].conj())
            tr = nxt[0] + nxt[5] + nxt[10] + nxt[15]
            drift = abs(tr - 1.0)
            if drift > TRACE_ABORT:
                raise SolverAbort(f"trace drift {drift:.3e} at t={times[k + 1]:.6f} exceeds {TRACE_ABORT:g}")
            max_herm = max(max_herm, herm)
            max_drift = max(max_drift, drift)
            rho[k + 1] = nxt / tr.real
    if max_drift > 0:
        log.debug("max per-step trace drift %.3e, max hermiticity error %.3e", max_drift, max_herm)

    rho_i = rho.reshape(n, 4, 4)
    w = gen.frames
    rho_s = w @ rho_i @ dag(w)
    target = config.target_state
    conc = np.empty(n)
    dfs = np.empty(n)
    fid = np.empty(n)
    pur = np.empty(n)
    defect = np.empty(n)
    for k in range(n):
        s = rho_s[k]
        defect[k] = observables.positivity_defect(s)
        conc[k] = observables.concurrence(s, tol=np.inf)
        dfs[k] = observables.dfs_occupancy(s)
        fid[k] = observables.fidelity(s, target)
        pur[k] = observables.purity(s)
    warn = bool(defect.max() > POSITIVITY_WARN)
    if warn:
        log.warning("%s: positivity defect %.3e exceeds %g", config.name, defect.max(), POSITIVITY_WARN)
    diagnostics = {
        "max_hermiticity_error": float(max_herm),
        "max_trace_drift": float(max_drift),
        "max_positivity_defect": float(defect.max()),
        "positivity_warning": warn,
    }
    return Trajectory(times, rho_i, rho_s, conc, dfs, fid, pur, defect, diagnostics)
