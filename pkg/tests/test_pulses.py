import math

import numpy as np
import pytest
from scipy.special import erf

from cddswap import pulses
from cddswap.pulses import ControlSchedule, ExchangeScheme, TransitionParams

SRI = ExchangeScheme.from_label("SRI")
LRI = ExchangeScheme.from_label("lri")


def gaussian_area(a, b, upper=1.0):
    """Closed form of int_0^upper a exp(-b (t - 1/2)^2) dt."""
    s = math.sqrt(b)
    return a * math.sqrt(math.pi / b) * 0.5 * (erf(s * (upper - 0.5)) + erf(s * 0.5))


def test_scheme_constants():
    assert SRI.amplitude == 2.2 and LRI.amplitude == 1.15
    assert SRI.width == pytest.approx(64 * 2.2**2 / math.pi)
    with pytest.raises(ValueError):
        ExchangeScheme.from_label("XYZ")
    with pytest.raises(ValueError):
        ExchangeScheme("bad", 0.0)


@pytest.mark.parametrize("scheme", [SRI, LRI])
def test_exchange_profile_peak_and_symmetry(scheme):
    assert pulses.exchange_profile(0.5, scheme) == pytest.approx(scheme.amplitude)
    for t in (0.1, 0.3, 0.45):
        assert pulses.exchange_profile(t, scheme) == pytest.approx(pulses.exchange_profile(1 - t, scheme))


@pytest.mark.parametrize("scheme", [SRI, LRI])
def test_exchange_area_matches_erf(scheme):
    times = np.linspace(0, 1, 4001)
    theta = pulses.exchange_area(times, scheme)
    assert theta[0] == 0.0
    assert theta[-1] == pytest.approx(gaussian_area(scheme.amplitude, scheme.width), abs=1e-10)
    k = 1600
    assert theta[k] == pytest.approx(gaussian_area(scheme.amplitude, scheme.width, times[k]), abs=1e-10)


def test_sri_area_is_sqrt_swap_angle():
    theta = pulses.exchange_area(np.linspace(0, 1, 4001), SRI)
    assert theta[-1] == pytest.approx(math.pi / 8, abs=1e-9)


def test_lri_area_is_truncated():
    # the wider pulse loses a tail of relative size erfc(sqrt(B)/2) ~ 2.4e-4
    theta = pulses.exchange_area(np.linspace(0, 1, 4001), LRI)[-1]
    assert 1e-4 < 1 - theta / (math.pi / 8) < 5e-4


def test_halt_freezes_profiles():
    assert pulses.exchange_profile(0.9, SRI, halt_time=0.75) == pulses.exchange_profile(0.75, SRI)
    p = TransitionParams()
    assert pulses.transition_profile(0.95, p, halt_time=0.72) == pulses.transition_profile(0.72, p)


def test_transition_profile_values():
    p = TransitionParams()
    assert pulses.transition_profile(0.5, p) == 1.0
    assert pulses.transition_profile(0.0, p) < 1e-200
    t = 0.8
    assert pulses.transition_profile(t, p) == pytest.approx(math.exp(-((2.86 * 0.3) ** 18)))
    assert pulses.transition_profile(0.2, p) == pytest.approx(pulses.transition_profile(0.8, p))


def test_transition_params_validation():
    with pytest.raises(ValueError):
        TransitionParams(c=-1)
    with pytest.raises(ValueError):
        TransitionParams(d=2.5)


def test_time_domain():
    assert pulses.check_time(1.0 + 1e-13) == 1.0
    with pytest.raises(ValueError):
        pulses.exchange_profile(1.1, SRI)
    with pytest.raises(ValueError):
        pulses.transition_profile(-0.01)


def test_control_field_static_x():
    f = pulses.control_field(0.3, ControlSchedule(n_x=8))
    assert np.allclose(f, [16 * math.pi, 0, 0])


def test_control_field_rotating_z_part():
    s = ControlSchedule(n_x=2, n_z=1)
    t = 0.1
    ph = 2 * 2 * math.pi * t
    assert np.allclose(pulses.control_field(t, s), [4 * math.pi, -2 * math.pi * math.sin(ph), 2 * math.pi * math.cos(ph)])


def test_control_field_shutdown():
    s = ControlSchedule(n_x=8, shutdown_time=0.75)
    assert np.allclose(pulses.control_field(0.8, s), 0)
    assert not np.allclose(pulses.control_field(0.7, s), 0)
    partial = ControlSchedule(n_x=8, n_z=32, shutdown_time=0.72, shutdown_scope="x")
    f = pulses.control_field(0.9, partial)
    assert f[0] == 0 and np.linalg.norm(f) == pytest.approx(32 * 2 * math.pi)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"n_x": 4, "n_z": 4},
        {"n_x": -1},
        {"n_x": 1.5},
        {"shutdown_time": 1.2},
        {"halt_time": -0.1},
        {"shutdown_scope": "z"},
    ],
)
def test_schedule_validation(kwargs):
    with pytest.raises(ValueError):
        ControlSchedule(**kwargs)


def test_schedule_clocks():
    s = ControlSchedule(n_x=1, shutdown_time=0.5, shutdown_scope="x")
    assert s.x_clock(0.7) == 0.5 and s.z_clock(0.7) == 0.7
    assert ControlSchedule(shutdown_time=0.5).z_clock(0.7) == 0.5
