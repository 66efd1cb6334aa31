"""Ohmic thermal bath: spectral density, Bose factor and correlation kernels.

Kernels follow

    G1(t) = int_0^inf J(w) h(w) exp(-i w t) dw
    G2(t) = int_0^inf J(w) [h(w) + 1] exp(+i w t) dw

with J(w) = eta * w * exp(-w / omega_c) and h the Bose occupation. Frequencies
are in units of 1/tau and times in units of tau.
"""

from dataclasses import dataclass
from functools import lru_cache
import math

import numpy as np
from scipy import constants

DEFAULT_TEMPERATURE = 0.2  # K
DEFAULT_TIME_SCALE = 1e-9  # s
DEFAULT_OMEGA_C = 2.0

CUTOFF_MULTIPLE = 40.0
GAUSS_ORDER = 16
START_PANELS = 16
MAX_PANELS = 4096
CONVERGED = 1e-10
FAIL_TOL = 1e-8


def scaled_beta(temperature=DEFAULT_TEMPERATURE, time_scale=DEFAULT_TIME_SCALE) -> float:
    """hbar / (k_B T tau): inverse temperature in units of the gate time."""
    return constants.hbar / (constants.k * temperature * time_scale)


DEFAULT_BETA = scaled_beta()


@dataclass(frozen=True)
class BathSpec:
    eta: float = 0.0
    omega_c: float = DEFAULT_OMEGA_C
    beta: float = DEFAULT_BETA

    def __post_init__(self):
        if not self.eta >= 0:
            raise ValueError(f"eta must be non-negative, got {self.eta}")
        if not self.omega_c > 0:
            raise ValueError(f"omega_c must be positive, got {self.omega_c}")
        if not self.beta > 0:
            raise ValueError(f"beta must be positive, got {self.beta}")


@dataclass(frozen=True)
class KernelTable:
    times: np.ndarray
    g1: np.ndarray
    g2: np.ndarray


def spectral_density(omega, spec: BathSpec):
    omega = np.asarray(omega, dtype=float)
    if np.any(omega < 0):
        raise ValueError("spectral density is defined for omega >= 0")
    return spec.eta * omega * np.exp(-omega / spec.omega_c)


def bose_occupation(omega, beta):
    omega = np.asarray(omega, dtype=float)
    if np.any(omega <= 0):
        raise ValueError("Bose occupation requires omega > 0")
    x = beta * omega
    # e^{-x} / (1 - e^{-x}) does not overflow for large x
    return np.exp(-x) / -np.expm1(-x)


def _thermal_weight(omega, beta):
    """omega * h(omega), finite (= 1/beta) at omega -> 0."""
    if math.isinf(beta):
        return np.zeros_like(omega)
    x = beta * omega
    out = np.empty_like(omega)
    small = x < 1e-8
    out[small] = 1.0 / beta
    xs = x[~small]
    out[~small] = omega[~small] * np.exp(-xs) / -np.expm1(-xs)
    return out


def _panel_nodes(upper, panels):
    x, w = np.polynomial.legendre.leggauss(GAUSS_ORDER)
    edges = np.linspace(0.0, upper, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def _kernels_at(times, omega_c, beta, panels, chunk=256):
    nodes, weights = _panel_nodes(CUTOFF_MULTIPLE * omega_c, panels)
    damp = np.exp(-nodes / omega_c) * weights
    f1 = _thermal_weight(nodes, beta) * damp  # J h  (eta = 1)
    f2 = f1 + nodes * damp  # J (h + 1)
    g1 = np.empty(len(times), dtype=complex)
    g2 = np.empty(len(times), dtype=complex)
    for start in range(0, len(times), chunk):
        t = times[start:start + chunk]
        phase = np.exp(1j * np.outer(t, nodes))
        g1[start:start + chunk] = np.conj(phase @ f1)
        g2[start:start + chunk] = phase @ f2
    return g1, g2


@lru_cache(maxsize=16)
def _unit_kernels(times_key, omega_c, beta):
    times = np.array(times_key)
    panels = START_PANELS
    g1, g2 = _kernels_at(times, omega_c, beta, panels)
    change = math.inf
    while panels < MAX_PANELS:
        panels *= 2
        n1, n2 = _kernels_at(times, omega_c, beta, panels)
        scale = max(abs(n2[0]), 1e-300)
        change = max(np.max(np.abs(n1 - g1)), np.max(np.abs(n2 - g2))) / scale
        g1, g2 = n1, n2
        if change < CONVERGED:
            break
    if change > FAIL_TOL:
        raise RuntimeError(
            f"bath kernel quadrature did not converge (relative change {change:.2e} at {panels} panels)"
        )
    g1.setflags(write=False)
    g2.setflags(write=False)
    return g1, g2


def build_kernels(spec: BathSpec, times) -> KernelTable:
    """Tabulate G1 and G2 at the given (non-negative) lag times."""
    times = np.asarray(times, dtype=float)
    g1, g2 = _unit_kernels(tuple(times.tolist()), float(spec.omega_c), float(spec.beta))
    return KernelTable(times, spec.eta * g1, spec.eta * g2)


def zero_temperature_g2(t, spec: BathSpec):
    """Closed form of G2 at T = 0: eta omega_c^2 / (1 - i omega_c t)^2."""
    t = np.asarray(t, dtype=float)
    return spec.eta * spec.omega_c**2 / (1 - 1j * spec.omega_c * t) ** 2
