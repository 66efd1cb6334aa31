"""Scenario configuration and its flat JSON form."""

from dataclasses import dataclass, field, replace
import json

import numpy as np

from .bath import DEFAULT_BETA, DEFAULT_OMEGA_C, BathSpec
from .hamiltonians import AMPLITUDE_DAMPING, NoiseChannel
from .observables import PURE_TOL, purity
from .pulses import ControlSchedule, ExchangeScheme, TransitionParams

MIN_GRID = 500
DEFAULT_GRID = 4000
# amplitude-damping coupling relative to the dephasing coupling when only one eta is given
AD_ETA_RATIO = 1.0 / 16.0


class ConfigError(ValueError):
    """Invalid scenario configuration; ``key`` names the offending entry."""

    def __init__(self, key, message):
        super().__init__(f"{key}: {message}")
        self.key = key


def ket(*amplitudes):
    v = np.asarray(amplitudes, dtype=complex)
    return v / np.linalg.norm(v)


def projector(v):
    v = np.asarray(v, dtype=complex)
    return np.outer(v, v.conj())


UP_DOWN = ket(0, 1, 0, 0)
_A = (1 + 1j) / 2
TARGET_KET = np.array([0, _A, np.conj(_A), 0], dtype=complex)


@dataclass(frozen=True)
class ChannelSpec:
    channel: NoiseChannel
    bath: BathSpec

    @property
    def kind(self):
        return self.channel.kind


@dataclass(frozen=True, eq=False)
class ScenarioConfig:
    """Everything needed for one run.

    ``scheme=None`` disables the exchange gate; ``xi_override`` pins the
    common-bath weight to a constant.
    """

    name: str = "custom"
    scheme: str | None = "SRI"
    channels: tuple = ()
    schedule: ControlSchedule = field(default_factory=ControlSchedule)
    transition: TransitionParams = field(default_factory=TransitionParams)
    grid_size: int = DEFAULT_GRID
    initial_ket: np.ndarray = field(default_factory=lambda: UP_DOWN.copy())
    target_ket: np.ndarray = field(default_factory=lambda: TARGET_KET.copy())
    xi_override: float | None = None

    def __post_init__(self):
        if self.scheme is not None:
            try:
                object.__setattr__(self, "scheme", ExchangeScheme.from_label(self.scheme).label)
            except ValueError as exc:
                raise ConfigError("scheme", str(exc)) from None
        if int(self.grid_size) != self.grid_size or self.grid_size < MIN_GRID:
            raise ConfigError("grid", f"grid size must be an integer >= {MIN_GRID}, got {self.grid_size}")
        kinds = [c.kind for c in self.channels]
        if len(set(kinds)) != len(kinds):
            raise ConfigError("channels", f"duplicate channel in {kinds}")
        for name, key in (("initial_ket", "initial_state"), ("target_ket", "target_state")):
            v = np.asarray(getattr(self, name), dtype=complex)
            if v.shape != (4,) or not np.isclose(np.linalg.norm(v), 1.0, atol=1e-9):
                raise ConfigError(key, "must be a normalised 4-component state vector")
            object.__setattr__(self, name, v)
        if self.xi_override is not None and not 0.0 <= self.xi_override <= 1.0:
            raise ConfigError("xi_override", f"must lie in [0, 1], got {self.xi_override}")

    @property
    def exchange(self) -> ExchangeScheme | None:
        return None if self.scheme is None else ExchangeScheme.from_label(self.scheme)

    @property
    def initial_state(self):
        return projector(self.initial_ket)

    @property
    def target_state(self):
        t = projector(self.target_ket)
        assert purity(t) > 1 - PURE_TOL
        return t

    @property
    def active_channels(self):
        return tuple(c for c in self.channels if c.bath.eta > 0)

    def with_eta(self, eta, ad_ratio=AD_ETA_RATIO):
        """Copy with dephasing coupling ``eta`` and amplitude damping at ``eta * ad_ratio``."""

        def scaled(c):
            value = eta * ad_ratio if c.kind == AMPLITUDE_DAMPING else eta
            return replace(c, bath=replace(c.bath, eta=value))

        return replace(self, channels=tuple(scaled(c) for c in self.channels))

    def with_bath(self, **changes):
        return replace(self, channels=tuple(replace(c, bath=replace(c.bath, **changes)) for c in self.channels))

    def with_schedule(self, **changes):
        return replace(self, schedule=replace(self.schedule, **changes))

    def to_dict(self) -> dict:
        s = self.schedule
        return {
            "name": self.name,
            "scheme": self.scheme,
            "gate": self.scheme is not None,
            "channels": [
                {"kind": c.kind, "eta": c.bath.eta, "omega_c": c.bath.omega_c, "beta": c.bath.beta}
                for c in self.channels
            ],
            "nx": s.n_x,
            "nz": s.n_z,
            "shutdown": s.shutdown_time,
            "shutdown_scope": s.shutdown_scope,
            "halt": s.halt_time,
            "c": self.transition.c,
            "d": self.transition.d,
            "grid": self.grid_size,
            "xi_override": self.xi_override,
            "initial_state": [[v.real, v.imag] for v in self.initial_ket.tolist()],
            "target_state": [[v.real, v.imag] for v in self.target_ket.tolist()],
        }

    def same_as(self, other) -> bool:
        return self.to_dict() == other.to_dict()


_KNOWN_KEYS = {
    "name", "preset", "scheme", "gate", "channels", "nx", "nz", "shutdown", "shutdown_scope",
    "halt", "c", "d", "grid", "xi_override", "initial_state", "target_state", "eta", "omega_c", "beta",
    "ad_ratio",
}


def _channel_kind(name):
    try:
        return NoiseChannel(name).kind
    except ValueError:
        return None


def _read_ket(key, value):
    try:
        return np.array([complex(re, im) for re, im in value])
    except (TypeError, ValueError):
        raise ConfigError(key, "expected a list of four [re, im] pairs") from None


def from_dict(data: dict, base: ScenarioConfig | None = None) -> ScenarioConfig:
    """Build a config from the flat schema; keys absent from ``data`` come from ``base``.

    Top-level ``omega_c`` and ``beta`` apply to every channel that does not set
    its own value. Top-level ``eta`` is the dephasing coupling; an
    amplitude-damping channel without its own ``eta`` gets ``eta * ad_ratio``.
    """
    unknown = set(data) - _KNOWN_KEYS
    if unknown:
        raise ConfigError(sorted(unknown)[0], "unknown config key")
    base = base or ScenarioConfig()
    default_bath = {
        "eta": data.get("eta", base.channels[0].bath.eta if base.channels else 0.0),
        "omega_c": data.get("omega_c", base.channels[0].bath.omega_c if base.channels else DEFAULT_OMEGA_C),
        "beta": data.get("beta", base.channels[0].bath.beta if base.channels else DEFAULT_BETA),
    }
    if "channels" in data:
        raw = data["channels"]
        if not isinstance(raw, list):
            raise ConfigError("channels", "expected a list")
    else:
        raw = [{"kind": c.kind} for c in base.channels]
    channels = []
    for i, entry in enumerate(raw):
        if isinstance(entry, str):
            entry = {"kind": entry}
        if not isinstance(entry, dict) or "kind" not in entry:
            raise ConfigError(f"channels[{i}]", "expected a channel name or an object with 'kind'")
        params = {k: entry.get(k, default_bath[k]) for k in default_bath}
        if "eta" not in entry and "eta" in data and _channel_kind(entry["kind"]) == AMPLITUDE_DAMPING:
            params["eta"] = data["eta"] * data.get("ad_ratio", AD_ETA_RATIO)
        try:
            channels.append(ChannelSpec(NoiseChannel(entry["kind"]), BathSpec(**params)))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"channels[{i}]", str(exc)) from None

    scheme = data.get("scheme", base.scheme)
    if data.get("gate", True) is False:
        scheme = None
    elif data.get("gate") is True and scheme is None:
        raise ConfigError("scheme", "gate is enabled but no exchange scheme is set")
    s = base.schedule
    try:
        schedule = ControlSchedule(
            n_x=data.get("nx", s.n_x),
            n_z=data.get("nz", s.n_z),
            shutdown_time=data.get("shutdown", s.shutdown_time),
            halt_time=data.get("halt", s.halt_time),
            shutdown_scope=data.get("shutdown_scope", s.shutdown_scope),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError("schedule (nx/nz/shutdown/halt)", str(exc)) from None
    try:
        transition = TransitionParams(data.get("c", base.transition.c), data.get("d", base.transition.d))
    except (TypeError, ValueError) as exc:
        raise ConfigError("c/d", str(exc)) from None
    initial = _read_ket("initial_state", data["initial_state"]) if "initial_state" in data else base.initial_ket
    target = _read_ket("target_state", data["target_state"]) if "target_state" in data else base.target_ket
    return ScenarioConfig(
        name=data.get("name", base.name),
        scheme=scheme,
        channels=tuple(channels),
        schedule=schedule,
        transition=transition,
        grid_size=data.get("grid", base.grid_size),
        initial_ket=initial,
        target_ket=target,
        xi_override=data.get("xi_override", base.xi_override),
    )


def dumps(config: ScenarioConfig) -> str:
    return json.dumps(config.to_dict(), indent=2, sort_keys=True)
