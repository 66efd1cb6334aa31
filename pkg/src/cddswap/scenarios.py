"""Named scenarios for every figure panel, and bath-strength calibration."""

import logging
import math

from .bath import DEFAULT_BETA, DEFAULT_OMEGA_C, BathSpec
from .config import AD_ETA_RATIO, DEFAULT_GRID, ChannelSpec, ConfigError, ScenarioConfig
from .hamiltonians import AMPLITUDE_DAMPING, DEPHASING, NoiseChannel
from .pulses import ControlSchedule

log = logging.getLogger(__name__)

# calibrate(DEFAULT_BAND) on fig2a with n_x = 0 at the default grid and bath
DEFAULT_ETA = 0.131072
DEFAULT_BAND = (0.05, 0.3)
ETA_MIN = 1e-6
ETA_MAX = 1.0
MAX_BISECTIONS = 40

SHUTDOWN_2C = 0.75
HALT_3A = 0.755
HALT_3B = 0.72

# name -> (scheme, channels, default n_x, default n_z, shutdown, halt, shutdown scope)
_PRESETS = {
    "fig2a": ("SRI", (DEPHASING,), 8, 0, None, None, "all"),
    "fig2b": ("LRI", (DEPHASING,), 8, 0, None, None, "all"),
    "fig2c": ("SRI", (DEPHASING,), 8, 0, SHUTDOWN_2C, None, "all"),
    "fig2d": ("SRI", (DEPHASING,), 8, 0, SHUTDOWN_2C, SHUTDOWN_2C, "all"),
    "fig3a": ("SRI", (DEPHASING, AMPLITUDE_DAMPING), 8, 32, HALT_3A, HALT_3A, "x"),
    "fig3b": ("SRI", (DEPHASING, AMPLITUDE_DAMPING), 8, 32, HALT_3B, HALT_3B, "x"),
    "fig3c": ("LRI", (DEPHASING, AMPLITUDE_DAMPING), 8, 0, None, None, "all"),
    "fig3d": ("SRI", (DEPHASING, AMPLITUDE_DAMPING), 8, 0, None, None, "all"),
    "fig3e": ("LRI", (DEPHASING, AMPLITUDE_DAMPING), 16, 32, None, None, "all"),
    "fig3f": ("SRI", (DEPHASING, AMPLITUDE_DAMPING), 16, 32, None, None, "all"),
}
PRESET_NAMES = tuple(_PRESETS)


def build_preset(
    name,
    nx=None,
    nz=None,
    eta=None,
    omega_c=DEFAULT_OMEGA_C,
    beta=DEFAULT_BETA,
    grid=DEFAULT_GRID,
    ad_ratio=AD_ETA_RATIO,
) -> ScenarioConfig:
    """Configuration for one figure panel.

    ``nx`` and ``nz`` select the protection-strength variant drawn in that
    panel; ``eta`` defaults to the calibrated coupling.
    """
    try:
        scheme, kinds, nx0, nz0, shutdown, halt, scope = _PRESETS[name]
    except KeyError:
        raise ConfigError("preset", f"unknown preset {name!r}; valid presets: {', '.join(PRESET_NAMES)}") from None
    eta = DEFAULT_ETA if eta is None else eta
    baths = {
        DEPHASING: BathSpec(eta=eta, omega_c=omega_c, beta=beta),
        AMPLITUDE_DAMPING: BathSpec(eta=eta * ad_ratio, omega_c=omega_c, beta=beta),
    }
    try:
        schedule = ControlSchedule(
            n_x=nx0 if nx is None else nx,
            n_z=nz0 if nz is None else nz,
            shutdown_time=shutdown,
            halt_time=halt,
            shutdown_scope=scope,
        )
    except ValueError as exc:
        raise ConfigError("nx/nz", str(exc)) from None
    return ScenarioConfig(
        name=name,
        scheme=scheme,
        channels=tuple(ChannelSpec(NoiseChannel(k), baths[k]) for k in kinds),
        schedule=schedule,
        grid_size=grid,
    )


def final_concurrence(config: ScenarioConfig) -> float:
    from .redfield import evolve

    return evolve(config).final_concurrence


class CalibrationError(RuntimeError):
    pass


def calibrate(band=DEFAULT_BAND, base: ScenarioConfig | None = None, evaluate=final_concurrence):
    """Coupling strength eta for which the unprotected run ends with concurrence in ``band``.

    eta is doubled from ``ETA_MIN`` until the final concurrence drops to the
    band, checking along the way that it never increases, and the last
    doubling interval is then bisected geometrically.
    """
    lo_c, hi_c = band
    if not 0 < lo_c < hi_c < 1:
        raise ValueError(f"band must satisfy 0 < lo < hi < 1, got {band}")
    base = build_preset("fig2a", nx=0, eta=0.0) if base is None else base
    if not base.channels:
        raise ConfigError("channels", "calibration needs at least one noise channel")

    def c_of(eta):
        c = evaluate(base.with_eta(eta))
        log.info("calibrate: eta=%.6g -> final concurrence %.6f", eta, c)
        return c

    eta, c = ETA_MIN, c_of(ETA_MIN)
    if c < lo_c:
        raise CalibrationError(f"final concurrence {c:.4f} already below band at eta={ETA_MIN:g}")
    prev_eta, prev_c = eta, c
    while c > hi_c:
        prev_eta, prev_c = eta, c
        eta *= 2
        if eta > ETA_MAX:
            raise CalibrationError(f"no bracket for band {band} with eta <= {ETA_MAX:g}")
        c = c_of(eta)
        if c > prev_c + 1e-9:
            raise CalibrationError(f"final concurrence increased from {prev_c:.6f} to {c:.6f} at eta={eta:g}")
    if c >= lo_c:
        return eta
    lo, hi = prev_eta, eta
    for _ in range(MAX_BISECTIONS):
        mid = math.sqrt(lo * hi)
        c = c_of(mid)
        if c > hi_c:
            lo = mid
        elif c < lo_c:
            hi = mid
        else:
            return mid
    raise CalibrationError(f"bisection did not reach band {band} in {MAX_BISECTIONS} steps")
