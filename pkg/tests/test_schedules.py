import math

import numpy as np
import pytest
from scipy import integrate

from isingdyn.schedules import (TANH_CENTER, FieldSchedule, UnsupportedScheduleError,
                                discretize, field_at, parse_angle, parse_schedule,
                                schedule_normal_form, spectral_density)


def test_step_values():
    s = FieldSchedule.step(1.0, 2.0)
    assert field_at(s, -0.5) == 1.0
    assert field_at(s, 0.0) == 1.0
    assert field_at(s, 1e-9) == 2.0
    assert field_at(s, 40.0) == 2.0


def test_step_with_offset():
    s = FieldSchedule.step(0.5, 3.0, t0=5.0)
    assert field_at(s, 4.999) == 0.5
    assert field_at(s, 5.0) == 0.5
    assert field_at(s, 5.001) == 3.0


def test_exp_limits_and_rate():
    s = FieldSchedule.exponential(1.0, 2.0, omega=0.1)
    assert field_at(s, 0.0) == pytest.approx(1.0)
    assert field_at(s, 1e4) == pytest.approx(2.0)
    # one decay time covers 1 - 1/e of the ramp
    assert field_at(s, 10.0) == pytest.approx(2.0 - 1.0 / math.e)


def test_tanh_continuity_and_limits():
    s = FieldSchedule.hyperbolic(1.0, 2.0, omega=0.1)
    assert field_at(s, 0.0) == 1.0  # pre-drive value
    # the switched-on ramp begins within tanh(-TANH_CENTER) of the base: no jump
    start_gap = abs(field_at(s, 1e-9) - 1.0)
    assert start_gap < (2.0 - 1.0) * (1 + math.tanh(-TANH_CENTER)) / 2 + 1e-12
    assert field_at(s, 1e4) == pytest.approx(2.0)
    # midpoint of the ramp sits at the centering offset
    tmid = TANH_CENTER / 0.1
    assert field_at(s, tmid) == pytest.approx(1.5)


def test_sin_waveform():
    s = FieldSchedule.sinusoidal(2.0, omega=0.5, phi=0.0)
    assert field_at(s, 0.0) == pytest.approx(2.0)
    t = np.linspace(0, 50, 2001)
    vals = field_at(s, t)
    expect = 2.0 - 2.0 * np.sin(0.5 * t)
    assert np.abs(vals - expect).max() < 1e-12
    # before the switch the field sits at a; phase pi/2 then drops it to zero
    s2 = FieldSchedule.sinusoidal(2.0, omega=0.5, phi=math.pi / 2)
    assert field_at(s2, 0.0) == pytest.approx(2.0)
    assert field_at(s2, 1e-9) == pytest.approx(0.0, abs=1e-8)


def test_const_and_aliases():
    assert field_at(FieldSchedule.constant(1.3), 99.0) == 1.3
    assert FieldSchedule("exponential", 1, 2, omega=1).kind == "exp"
    assert FieldSchedule("sine", 1, omega=1).kind == "sin"
    assert FieldSchedule("hyperbolic", 1, 2, omega=1).kind == "tanh"


def test_schedule_validation():
    with pytest.raises(UnsupportedScheduleError):
        FieldSchedule("sawtooth", 1.0)
    with pytest.raises(ValueError):
        FieldSchedule("exp", 1.0, 2.0, omega=0.0)
    with pytest.raises(ValueError):
        FieldSchedule("sin", math.nan, omega=1.0)


def test_vectorized_matches_scalar(rng):
    s = FieldSchedule.hyperbolic(0.5, 2.5, omega=0.3, t0=2.0)
    ts = rng.uniform(-5, 40, size=50)
    vec = field_at(s, ts)
    scal = np.array([field_at(s, float(t)) for t in ts])
    assert np.abs(vec - scal).max() == 0


@pytest.mark.parametrize("text,value", [
    ("pi/2", math.pi / 2), ("pi/4", math.pi / 4), ("pi", math.pi),
    ("-pi/3", -math.pi / 3), ("2pi", 2 * math.pi), ("0.5*pi", math.pi / 2),
    ("1.25", 1.25), ("0", 0.0),
])
def test_parse_angle(text, value):
    assert parse_angle(text) == pytest.approx(value)


def test_parse_angle_rejects_garbage():
    with pytest.raises(ValueError):
        parse_angle("two pi")


def test_discretize_midpoint_sampling():
    s = FieldSchedule.exponential(1.0, 2.0, omega=0.1)
    pcf = discretize(s, 0.0, 1.0, 0.25)
    assert pcf.n_segments == 4
    assert pcf.times.tolist() == pytest.approx([0.0, 0.25, 0.5, 0.75])
    mids = np.array([0.125, 0.375, 0.625, 0.875])
    assert pcf.values == pytest.approx(field_at(s, mids))
    assert pcf.initial_field == pytest.approx(1.0)
    assert pcf.t_end == 1.0


def test_discretize_ragged_tail():
    s = FieldSchedule.constant(1.0)
    pcf = discretize(s, 0.0, 1.0, 0.3)
    assert pcf.n_segments == 4
    assert pcf.durations == pytest.approx([0.3, 0.3, 0.3, 0.1])
    # exact multiples do not grow a phantom segment
    pcf2 = discretize(s, 0.0, 1.2, 0.3)
    assert pcf2.n_segments == 4


def test_discretize_counts_match_rowcount_rule():
    s = FieldSchedule.step(1.0, 2.0)
    for t_end, dt in [(50.0, 0.01), (40.0, 0.02), (5.0, 0.01), (1.0, 0.25)]:
        pcf = discretize(s, 0.0, t_end, dt)
        assert pcf.n_segments == int(math.floor(t_end / dt + 0.5))


def test_spectral_density_exp_closed_form():
    s = FieldSchedule.exponential(1.0, 2.0, omega=0.1)
    for w in np.linspace(0.0, 10.0, 11):
        assert spectral_density(s, w) == pytest.approx(
            1.0 / (w ** 2 + 0.01), rel=1e-12)
    # amplitude scales with the ramp height squared
    s3 = FieldSchedule.exponential(1.0, 4.0, omega=0.1)
    assert spectral_density(s3, 1.0) == pytest.approx(9.0 / (1.0 + 0.01), rel=1e-12)


def test_spectral_density_exp_matches_quadrature():
    # independent windowed Fourier integral of the switched part
    s = FieldSchedule.exponential(1.0, 2.0, omega=0.1)
    big_t = 400.0

    def switched(t):
        return field_at(s, t) - 2.0

    for w in (0.5, 2.0, 7.0):
        re, _ = integrate.quad(switched, 0, big_t, weight="cos", wvar=w, limit=400)
        im, _ = integrate.quad(switched, 0, big_t, weight="sin", wvar=w, limit=400)
        assert spectral_density(s, w) == pytest.approx(re ** 2 + im ** 2, abs=1e-6)


def test_spectral_density_tanh_decays():
    s = FieldSchedule.hyperbolic(1.0, 2.0, omega=0.1)
    lo = spectral_density(s, 0.5)
    hi = spectral_density(s, 5.0)
    assert lo > hi > 0


def test_spectral_density_sin_peaks_at_drive():
    s = FieldSchedule.sinusoidal(1.0, omega=0.5, phi=0.0)
    at_drive = spectral_density(s, 0.5)
    off_drive = spectral_density(s, 1.7)
    assert at_drive > 50 * off_drive


def test_spectral_density_step_unsupported():
    with pytest.raises(UnsupportedScheduleError):
        spectral_density(FieldSchedule.step(1.0, 2.0), 1.0)


def test_parse_schedule_and_normal_form():
    s = parse_schedule({"kind": "sin", "a": 1.0, "omega": 0.1, "phi": "pi/2"})
    assert s.kind == "sin" and s.phi == pytest.approx(math.pi / 2)
    norm = schedule_normal_form(s)
    assert set(norm) == {"kind", "a", "b", "omega", "phi", "t0"}
    assert norm["b"] == 0.0
    # normal form is a fixed point of parsing
    assert schedule_normal_form(parse_schedule(norm)) == norm


def test_parse_schedule_rejects_bad_docs():
    with pytest.raises(ValueError):
        parse_schedule({"kind": "step", "a": 1.0})  # missing b
    with pytest.raises(ValueError):
        parse_schedule({"kind": "exp", "a": 1.0, "b": 2.0, "omega": 0.1, "zeta": 1})
    with pytest.raises(ValueError):
        parse_schedule({"a": 1.0})
