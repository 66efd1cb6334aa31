import math

import pytest

from cddswap import scenarios
from cddswap.config import ConfigError
from cddswap.hamiltonians import AMPLITUDE_DAMPING, DEPHASING
from cddswap.scenarios import PRESET_NAMES, CalibrationError, build_preset, calibrate


def differing_fields(a, b):
    da, db = a.to_dict(), b.to_dict()
    return {k for k in da if da[k] != db[k]}


def test_preset_list():
    assert PRESET_NAMES == tuple(f"fig{n}{x}" for n, xs in ((2, "abcd"), (3, "abcdef")) for x in xs)


@pytest.mark.parametrize("name", PRESET_NAMES)
def test_presets_build(name):
    c = build_preset(name)
    assert c.name == name and c.channels
    assert all(ch.bath.eta > 0 for ch in c.channels)


def test_field_level_diffs():
    assert differing_fields(build_preset("fig2a"), build_preset("fig2b")) == {"name", "scheme"}
    assert differing_fields(build_preset("fig2c"), build_preset("fig2d")) == {"name", "halt"}


def test_fig2d():
    c = build_preset("fig2d")
    assert c.scheme == "SRI" and [ch.kind for ch in c.channels] == [DEPHASING]
    assert c.schedule.shutdown_time == 0.75 and c.schedule.halt_time == 0.75


def test_fig3b():
    c = build_preset("fig3b")
    s = c.schedule
    assert s.halt_time == 0.72 and s.shutdown_time == 0.72
    # damping protection stays on after the halt
    assert s.shutdown_scope == "x" and s.n_z > 0
    etas = {ch.kind: ch.bath.eta for ch in c.channels}
    assert etas[AMPLITUDE_DAMPING] == pytest.approx(etas[DEPHASING] * scenarios.AD_ETA_RATIO)


def test_variant_overrides():
    c = build_preset("fig3e", nx=2, nz=4, eta=0.01, grid=1000)
    assert (c.schedule.n_x, c.schedule.n_z, c.grid_size) == (2, 4, 1000)
    with pytest.raises(ConfigError):
        build_preset("fig2a", nx=3, nz=3)


def test_unknown_preset_lists_names():
    with pytest.raises(ConfigError) as info:
        build_preset("fig9x")
    assert all(n in str(info.value) for n in PRESET_NAMES)


def fake_evaluate(rate):
    def evaluate(config):
        return math.exp(-rate * config.channels[0].bath.eta)

    return evaluate


def test_calibrate_hits_band():
    eta = calibrate((0.05, 0.3), evaluate=fake_evaluate(20.0))
    assert 0.05 <= math.exp(-20.0 * eta) <= 0.3


def test_calibrate_is_deterministic():
    ev = fake_evaluate(7.0)
    assert calibrate((0.1, 0.11), evaluate=ev) == calibrate((0.1, 0.11), evaluate=ev)


def test_calibrate_rejects_non_monotone():
    def bumpy(config):
        eta = config.channels[0].bath.eta
        return 0.99 if eta < 1e-3 else (0.9 if eta < 0.01 else 0.95)

    with pytest.raises(CalibrationError):
        calibrate(evaluate=bumpy)


def test_calibrate_without_bracket():
    with pytest.raises(CalibrationError):
        calibrate(evaluate=lambda c: 0.99)


@pytest.mark.parametrize("band", [(0.3, 0.05), (0.0, 0.2), (0.5, 1.0)])
def test_calibrate_band_validation(band):
    with pytest.raises(ValueError):
        calibrate(band, evaluate=lambda c: 0.5)


def test_closed_system_is_above_band():
    assert scenarios.final_concurrence(build_preset("fig2a", nx=0, eta=0.0, grid=500)) == pytest.approx(1.0, abs=1e-6)


def test_real_calibration_repeatable():
    base = build_preset("fig2a", nx=0, eta=0.0, grid=500)
    first = calibrate((0.05, 0.3), base)
    assert calibrate((0.05, 0.3), base) == first
    assert 0.05 <= scenarios.final_concurrence(base.with_eta(first)) <= 0.3


def test_default_eta_matches_calibration(calibrated_eta):
    assert calibrated_eta == scenarios.DEFAULT_ETA
