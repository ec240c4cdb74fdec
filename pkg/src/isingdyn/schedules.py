"""Time-dependent magnetic-field waveforms and their discretization.

Four driven waveforms plus a constant field.  For t <= t0 every kind
returns the initial value a; the switched part starts at t0 (default 0):

    step:  a + (b - a) theta(t - t0)
    exp:   b + (a - b) exp(-omega (t - t0))
    tanh:  (b - a)/2 [tanh(omega (t - t0) - 3) + 1] + a
    sin:   a - a sin(omega (t - t0) + phi)

The tanh ramp is centered at t0 + 3/omega so that switching it on is
continuous to 2.5e-3 of the ramp height (tanh(-3) is that close to -1);
an uncentered ramp jumps halfway up at t0, which wrecks the slow-drive
(quasi-adiabatic) behavior this waveform exists to provide.

Discretization chops [t_start, t_end) into segments of length dt (last
one may be shorter) holding the field at its midpoint value.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, replace

import numpy as np
from scipy.integrate import quad

KINDS = ("step", "exp", "tanh", "sin", "const")

_KIND_ALIASES = {
    "step": "step",
    "exp": "exp",
    "exponential": "exp",
    "tanh": "tanh",
    "hyperbolic": "tanh",
    "sin": "sin",
    "sine": "sin",
    "sinusoidal": "sin",
    "const": "const",
    "constant": "const",
}

# tanh ramp midpoint sits this many 1/omega units after t0
TANH_CENTER = 3.0


class UnsupportedScheduleError(ValueError):
    """Operation not defined for this schedule kind."""


def parse_angle(x) -> float:
    """Angle from a float or a 'pi' fraction string like 'pi/2' or '3*pi/4'."""
    if isinstance(x, (int, float)):
        return float(x)
    s = str(x).strip().lower().replace(" ", "")
    m = re.fullmatch(r"([+-]?\d*\.?\d*)\*?pi(?:/([+-]?\d*\.?\d+))?", s)
    if m:
        num = m.group(1)
        coeff = {"": 1.0, "+": 1.0, "-": -1.0}.get(num, None)
        if coeff is None:
            coeff = float(num)
        den = float(m.group(2)) if m.group(2) else 1.0
        return coeff * math.pi / den
    return float(s)


@dataclass(frozen=True)
class FieldSchedule:
    """Immutable waveform description; see the module docstring for formulas."""

    kind: str
    a: float
    b: float = 0.0
    omega: float = 0.0
    phi: float = 0.0
    t0: float = 0.0

    def __post_init__(self):
        kind = _KIND_ALIASES.get(str(self.kind).lower())
        if kind is None:
            raise UnsupportedScheduleError("unknown schedule kind %r" % (self.kind,))
        object.__setattr__(self, "kind", kind)
        for name in ("a", "b", "omega", "phi", "t0"):
            val = float(getattr(self, name))
            if not math.isfinite(val):
                raise ValueError("%s must be finite" % name)
            object.__setattr__(self, name, val)
        if kind in ("exp", "tanh", "sin") and self.omega <= 0.0:
            raise ValueError("%s schedule needs omega > 0" % kind)

    @classmethod
    def step(cls, a, b, t0=0.0):
        return cls("step", a, b, 0.0, 0.0, t0)

    @classmethod
    def exponential(cls, a, b, omega, t0=0.0):
        return cls("exp", a, b, omega, 0.0, t0)

    @classmethod
    def hyperbolic(cls, a, b, omega, t0=0.0):
        return cls("tanh", a, b, omega, 0.0, t0)

    @classmethod
    def sinusoidal(cls, a, omega, phi=0.0, t0=0.0):
        return cls("sin", a, 0.0, omega, parse_angle(phi), t0)

    @classmethod
    def constant(cls, a):
        return cls("const", a, float(a))


def field_at(s: FieldSchedule, t):
    """Waveform value at time t (scalar or array); a for t <= t0."""
    t_arr = np.asarray(t, dtype=float)
    u = t_arr - s.t0
    on = u > 0.0
    out = np.full(t_arr.shape, s.a)
    if s.kind == "step":
        out = np.where(on, s.b, out)
    elif s.kind == "exp":
        out = np.where(on, s.b + (s.a - s.b) * np.exp(-s.omega * np.where(on, u, 0.0)), out)
    elif s.kind == "tanh":
        ramp = (s.b - s.a) / 2 * (np.tanh(s.omega * u - TANH_CENTER) + 1) + s.a
        out = np.where(on, ramp, out)
    elif s.kind == "sin":
        out = np.where(on, s.a - s.a * np.sin(s.omega * np.where(on, u, 0.0) + s.phi), out)
    if np.isscalar(t) or t_arr.ndim == 0:
        return float(out)
    return out


@dataclass(eq=False)
class PiecewiseConstantField:
    """Field held constant on consecutive segments.

    times[k] is the start of segment k; all segments span dt except the
    last, which is truncated at t_end.  initial_field records the exact
    waveform value at the window start (before any switching), used to
    match thermal ensembles against the schedule that produced it.
    """

    times: np.ndarray
    values: np.ndarray
    dt: float
    t_end: float
    initial_field: float | None = None

    def __post_init__(self):
        self.times = np.ascontiguousarray(self.times, dtype=float)
        self.values = np.ascontiguousarray(self.values, dtype=float)
        if len(self.times) != len(self.values):
            raise ValueError("times and values length mismatch")
        if len(self.times) == 0:
            raise ValueError("empty discretization")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("segment start times must be strictly increasing")

    @property
    def n_segments(self) -> int:
        return len(self.values)

    @property
    def t_start(self) -> float:
        return float(self.times[0])

    @property
    def durations(self) -> np.ndarray:
        ends = np.append(self.times[1:], self.t_end)
        return ends - self.times


def discretize(s: FieldSchedule, t_start: float, t_end: float, dt: float) -> PiecewiseConstantField:
    """Piecewise-constant approximation with midpoint sampling."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    if t_end <= t_start:
        raise ValueError("t_end must exceed t_start")
    n = max(1, int(math.ceil((t_end - t_start) / dt - 1e-9)))
    times = t_start + dt * np.arange(n)
    ends = np.minimum(times + dt, t_end)
    values = field_at(s, (times + ends) / 2)
    return PiecewiseConstantField(times, np.atleast_1d(values), float(dt), float(t_end),
                                  initial_field=field_at(s, t_start))


def _windowed_density(g, window: float, omega_prime: float) -> float:
    """|integral_0^window g(u) e^{i w' u} du|^2 by oscillatory quadrature."""
    re, _ = quad(g, 0.0, window, weight="cos", wvar=omega_prime, epsabs=1e-8, limit=400)
    im, _ = quad(g, 0.0, window, weight="sin", wvar=omega_prime, epsabs=1e-8, limit=400)
    return re * re + im * im


def spectral_density(s: FieldSchedule, omega_prime: float) -> float:
    """|h(w')|^2 of the switched (time-varying) part of the field.

    The exponential kind has the closed form (a-b)^2 / (w'^2 + omega^2).
    tanh integrates h(t) - b over 20 transition times; sin integrates
    h(t) - a over 20 drive periods (its line spectrum grows with the
    window, so compare sin values only at a fixed window).  The step
    kind has a divergent flat spectrum and is rejected.
    """
    if omega_prime < 0:
        raise ValueError("omega_prime must be >= 0")
    if s.kind == "exp":
        return (s.a - s.b) ** 2 / (omega_prime ** 2 + s.omega ** 2)
    if s.kind == "tanh":
        amp = (s.b - s.a) / 2

        def g(u):
            return amp * (math.tanh(s.omega * u - TANH_CENTER) - 1.0)

        return _windowed_density(g, 20.0 / s.omega, omega_prime)
    if s.kind == "sin":

        def g(u):
            return -s.a * math.sin(s.omega * u + s.phi)

        return _windowed_density(g, 20.0 * 2.0 * math.pi / s.omega, omega_prime)
    raise UnsupportedScheduleError(
        "spectral density undefined for %r schedule (flat or empty spectrum)" % s.kind)


def parse_schedule(doc) -> FieldSchedule:
    """Schedule from its config JSON form {"kind": ..., "a": ..., ...}."""
    if isinstance(doc, FieldSchedule):
        return doc
    if not isinstance(doc, dict):
        raise ValueError("schedule must be an object, got %r" % (doc,))
    kind = _KIND_ALIASES.get(str(doc.get("kind", "")).lower())
    if kind is None:
        raise UnsupportedScheduleError("unknown schedule kind %r" % (doc.get("kind"),))
    if "a" not in doc:
        raise ValueError("schedule needs field 'a'")
    known = {"kind", "a", "b", "omega", "phi", "t0"}
    extra = set(doc) - known
    if extra:
        raise ValueError("unknown schedule keys %s" % sorted(extra))
    if kind in ("step", "exp", "tanh") and "b" not in doc:
        raise ValueError("%s schedule needs field 'b'" % kind)
    return FieldSchedule(
        kind=kind,
        a=float(doc["a"]),
        b=float(doc.get("b", 0.0)),
        omega=float(doc.get("omega", 0.0)),
        phi=parse_angle(doc.get("phi", 0.0)),
        t0=float(doc.get("t0", 0.0)),
    )


def schedule_normal_form(s: FieldSchedule) -> dict:
    """Canonical JSON form: unused parameters pinned to fixed values."""
    if s.kind == "const":
        s = replace(s, b=s.a, omega=0.0, phi=0.0)
    elif s.kind == "step":
        s = replace(s, omega=0.0, phi=0.0)
    elif s.kind in ("exp", "tanh"):
        s = replace(s, phi=0.0)
    elif s.kind == "sin":
        s = replace(s, b=0.0)
    return {"kind": s.kind, "a": s.a, "b": s.b, "omega": s.omega, "phi": s.phi, "t0": s.t0}
