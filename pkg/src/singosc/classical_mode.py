"""Classical mode function of the time-dependent oscillator.

Every quantum state of the singular oscillator inherits its time dependence
from one complex solution eps(t) of

    eps'' + omega^2(t) eps = 0,      eps' conj(eps) - conj(eps') eps = 2i.

This module integrates that equation for a few frequency histories, measures
how well the Wronskian is preserved, and reads off the Bogoliubov pair
(xi, eta) once the frequency has settled.  Time is dimensionless throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from . import _io
from ._accel import njit
from .specfun import DomainError

__all__ = [
    "FrequencyProfile",
    "Constant",
    "Tabulated",
    "ParametricResonance",
    "tanh_ramp",
    "ModeState",
    "Trajectory",
    "BogoliubovPair",
    "IntegrationError",
    "initial_mode",
    "integrate_mode",
    "resonance_mode",
    "bogoliubov",
    "reflection_coefficient",
    "reflection_for_profile",
]

_KIND_CONSTANT = 0
_KIND_TABULATED = 1
_KIND_RESONANCE = 2


class IntegrationError(RuntimeError):
    """The adaptive integrator could not make progress."""


# ---------------------------------------------------------------------------
# Frequency profiles
# ---------------------------------------------------------------------------


class FrequencyProfile:
    """omega^2(t) together with the asymptotic frequencies omega_i, omega_f."""

    omega_i: float
    omega_f: float

    def omega_sq(self, t):
        raise NotImplementedError

    def omega_max(self) -> float:
        """Upper bound on omega(t), used to size the integrator tolerance."""
        raise NotImplementedError

    def _kernel_args(self):
        raise NotImplementedError

    def describe(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Constant(FrequencyProfile):
    omega: float

    def __post_init__(self):
        if not self.omega > 0:
            raise DomainError("constant frequency must be positive")

    @property
    def omega_i(self):
        return self.omega

    @property
    def omega_f(self):
        return self.omega

    def omega_sq(self, t):
        return np.full_like(np.asarray(t, dtype=float), self.omega**2)

    def omega_max(self):
        return self.omega

    def _kernel_args(self):
        par = np.array([self.omega**2, self.omega**2])
        return _KIND_CONSTANT, par, np.zeros(2), np.zeros((4, 1))

    def describe(self):
        return {"kind": "constant", "omega": self.omega}


@dataclass(frozen=True)
class Tabulated(FrequencyProfile):
    """Cubic spline through tabulated omega^2 values.

    Outside the table omega^2 is held at its first and last values, which
    define omega_i and omega_f.  The spline is clamped (zero slope at both
    ends) so the joins to the constant tails are C1.
    """

    times: np.ndarray
    omega_sq_values: np.ndarray
    _spline: CubicSpline = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        w2 = np.asarray(self.omega_sq_values, dtype=float)
        if t.ndim != 1 or t.shape != w2.shape or t.size < 2:
            raise DomainError("times and omega_sq must be 1-d arrays of equal length >= 2")
        if np.any(np.diff(t) <= 0):
            raise DomainError("tabulated times must be strictly increasing")
        if np.any(w2 <= 0):
            raise DomainError("tabulated omega^2 must be positive")
        spline = CubicSpline(t, w2, bc_type="clamped")
        fine = np.linspace(t[0], t[-1], 8 * t.size + 1)
        if np.any(spline(fine) <= 0):
            raise DomainError("interpolated omega^2 goes nonpositive")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "omega_sq_values", w2)
        object.__setattr__(self, "_spline", spline)

    @property
    def omega_i(self):
        return math.sqrt(self.omega_sq_values[0])

    @property
    def omega_f(self):
        return math.sqrt(self.omega_sq_values[-1])

    def omega_sq(self, t):
        t = np.asarray(t, dtype=float)
        out = self._spline(np.clip(t, self.times[0], self.times[-1]))
        out = np.where(t <= self.times[0], self.omega_sq_values[0], out)
        return np.where(t >= self.times[-1], self.omega_sq_values[-1], out)

    def omega_max(self):
        fine = np.linspace(self.times[0], self.times[-1], 8 * self.times.size + 1)
        return math.sqrt(max(float(self._spline(fine).max()), float(self.omega_sq_values.max())))

    def _kernel_args(self):
        par = np.array([self.omega_sq_values[0], self.omega_sq_values[-1]])
        return _KIND_TABULATED, par, self.times, np.ascontiguousarray(self._spline.c)

    def describe(self):
        return {
            "kind": "tabulated",
            "t_min": float(self.times[0]),
            "t_max": float(self.times[-1]),
            "points": int(self.times.size),
            "omega_i": self.omega_i,
            "omega_f": self.omega_f,
        }


@dataclass(frozen=True)
class ParametricResonance(FrequencyProfile):
    """omega^2(t) = 1 + k cos 2t, driven at twice the unit frequency.

    With ``normalized=True`` the whole expression is divided by (1 + k) so
    that omega(0) = 1.  That rescaling shifts the natural frequency to
    1/sqrt(1+k) and takes the drive off exact resonance, so the analytic
    mode of :func:`resonance_mode` no longer tracks the solution.
    omega_i and omega_f are the unperturbed unit frequency.
    """

    k: float
    normalized: bool = False

    def __post_init__(self):
        if not abs(self.k) < 1:
            raise DomainError("resonance depth must satisfy |k| < 1")

    omega_i = 1.0
    omega_f = 1.0

    def omega_sq(self, t):
        w2 = 1.0 + self.k * np.cos(2.0 * np.asarray(t, dtype=float))
        return w2 / (1.0 + self.k) if self.normalized else w2

    def omega_max(self):
        w2 = 1.0 + abs(self.k)
        return math.sqrt(w2 / (1.0 + self.k) if self.normalized else w2)

    def _kernel_args(self):
        norm = 1.0 + self.k if self.normalized else 1.0
        return _KIND_RESONANCE, np.array([self.k, norm]), np.zeros(2), np.zeros((4, 1))

    def describe(self):
        return {"kind": "resonance", "k": self.k, "normalized": self.normalized}


def tanh_ramp(omega_i: float, omega_f: float, width: float, span: float | None = None, points: int | None = None) -> Tabulated:
    """Tabulated smooth step omega^2 = wi^2 + (wf^2 - wi^2) (1 + tanh(t/width)) / 2.

    The table covers [-span, span] (default 10 widths on each side, where
    the step has settled to ~1e-9 of its height).
    """
    if span is None:
        span = 10.0 * width
    if points is None:
        points = max(2001, int(200 * span / width) + 1)
    t = np.linspace(-span, span, points)
    w2 = omega_i**2 + (omega_f**2 - omega_i**2) * 0.5 * (1.0 + np.tanh(t / width))
    w2[0] = omega_i**2
    w2[-1] = omega_f**2
    return Tabulated(t, w2)


# ---------------------------------------------------------------------------
# Mode states
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ModeState:
    t: float
    eps: complex
    eps_dot: complex

    @property
    def wronskian(self) -> complex:
        return self.eps_dot * self.eps.conjugate() - self.eps_dot.conjugate() * self.eps

    @property
    def wronskian_drift(self) -> float:
        return abs(self.wronskian - 2j)

    @property
    def abs_eps_sq(self) -> float:
        return abs(self.eps) ** 2


class Trajectory(Sequence):
    """Accepted integrator steps, endpoints included, as a sequence of ModeState."""

    def __init__(self, t, eps, eps_dot, rel_tol):
        self.t = np.asarray(t, dtype=float)
        self.eps = np.asarray(eps, dtype=complex)
        self.eps_dot = np.asarray(eps_dot, dtype=complex)
        self.rel_tol = rel_tol

    def __len__(self):
        return self.t.size

    def __getitem__(self, i):
        if isinstance(i, slice):
            return Trajectory(self.t[i], self.eps[i], self.eps_dot[i], self.rel_tol)
        return ModeState(float(self.t[i]), complex(self.eps[i]), complex(self.eps_dot[i]))

    def __iter__(self) -> Iterator[ModeState]:
        for i in range(len(self)):
            yield self[i]

    @property
    def final(self) -> ModeState:
        return self[-1]

    @property
    def wronskian_drift(self) -> np.ndarray:
        w = 2.0 * (self.eps_dot * self.eps.conj()).imag
        return np.abs(w - 2.0)

    @property
    def max_wronskian_drift(self) -> float:
        return float(self.wronskian_drift.max())

    def to_csv(self, path_or_file):
        _io.write_csv(
            path_or_file,
            ["t", "re_eps", "im_eps", "re_eps_dot", "im_eps_dot", "abs_eps_sq", "wronskian_drift"],
            [
                self.t,
                self.eps.real,
                self.eps.imag,
                self.eps_dot.real,
                self.eps_dot.imag,
                np.abs(self.eps) ** 2,
                self.wronskian_drift,
            ],
        )


def initial_mode(omega_i: float, t0: float) -> ModeState:
    """Positive-frequency mode omega^-1/2 exp(i omega t) at t0."""
    if not omega_i > 0:
        raise DomainError("omega_i must be positive")
    phase = complex(math.cos(omega_i * t0), math.sin(omega_i * t0))
    return ModeState(float(t0), phase / math.sqrt(omega_i), 1j * math.sqrt(omega_i) * phase)


def resonance_mode(k: float, t: float) -> ModeState:
    """Approximate mode cosh(kt/4) e^{it} - i sinh(kt/4) e^{-it} and its derivative."""
    if abs(k) > 0.1:
        raise DomainError("analytic resonance mode is only used for |k| <= 0.1")
    eps, eps_dot = _resonance_arrays(k, np.asarray(t, dtype=float))
    return ModeState(float(t), complex(eps), complex(eps_dot))


def _resonance_arrays(k, t):
    c = np.cosh(0.25 * k * t)
    s = np.sinh(0.25 * k * t)
    ep = np.exp(1j * t)
    em = np.exp(-1j * t)
    eps = c * ep - 1j * s * em
    eps_dot = (0.25 * k * s + 1j * c) * ep - (0.25j * k * c + s) * em
    return eps, eps_dot


# ---------------------------------------------------------------------------
# Dormand-Prince 5(4) kernel on (Re eps, Im eps, Re eps', Im eps')
# ---------------------------------------------------------------------------

_A21 = 1 / 5
_A31, _A32 = 3 / 40, 9 / 40
_A41, _A42, _A43 = 44 / 45, -56 / 15, 32 / 9
_A51, _A52, _A53, _A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
_A61, _A62, _A63, _A64, _A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
_B1, _B3, _B4, _B5, _B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
_E1, _E3, _E4, _E5, _E6, _E7 = (
    71 / 57600,
    -71 / 16695,
    71 / 1920,
    -17253 / 339200,
    22 / 525,
    -1 / 40,
)
_C2, _C3, _C4, _C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9


@njit
def _omega_sq_kernel(kind, t, par, knots, coef):
    if kind == 0:
        return par[0]
    if kind == 1:
        if t <= knots[0]:
            return par[0]
        if t >= knots[-1]:
            return par[1]
        i = np.searchsorted(knots, t, side="right") - 1
        dt = t - knots[i]
        return ((coef[0, i] * dt + coef[1, i]) * dt + coef[2, i]) * dt + coef[3, i]
    return (1.0 + par[0] * math.cos(2.0 * t)) / par[1]


@njit
def _rhs(kind, t, y, par, knots, coef, out):
    w2 = _omega_sq_kernel(kind, t, par, knots, coef)
    out[0] = y[2]
    out[1] = y[3]
    out[2] = -w2 * y[0]
    out[3] = -w2 * y[1]


@njit
def _dopri5(kind, par, knots, coef, y0, t0, t1, rtol, atol, max_steps):
    direction = 1.0 if t1 > t0 else -1.0
    cap = 1024
    ts = np.empty(cap)
    ys = np.empty((cap, 4))
    ts[0] = t0
    ys[0, :] = y0
    n = 1

    y = y0.copy()
    t = t0
    k1 = np.empty(4)
    k2 = np.empty(4)
    k3 = np.empty(4)
    k4 = np.empty(4)
    k5 = np.empty(4)
    k6 = np.empty(4)
    k7 = np.empty(4)
    tmp = np.empty(4)
    ynew = np.empty(4)
    _rhs(kind, t, y, par, knots, coef, k1)

    w0 = math.sqrt(abs(_omega_sq_kernel(kind, t, par, knots, coef))) + 1e-300
    h = direction * min(abs(t1 - t0), 0.2 * rtol**0.2 / w0)
    status = 0
    steps = 0
    while direction * (t1 - t) > 0.0:
        if steps >= max_steps:
            status = 2
            break
        steps += 1
        last = False
        if direction * (t + h - t1) >= 0.0:
            h = t1 - t
            last = True

        for j in range(4):
            tmp[j] = y[j] + h * _A21 * k1[j]
        _rhs(kind, t + _C2 * h, tmp, par, knots, coef, k2)
        for j in range(4):
            tmp[j] = y[j] + h * (_A31 * k1[j] + _A32 * k2[j])
        _rhs(kind, t + _C3 * h, tmp, par, knots, coef, k3)
        for j in range(4):
            tmp[j] = y[j] + h * (_A41 * k1[j] + _A42 * k2[j] + _A43 * k3[j])
        _rhs(kind, t + _C4 * h, tmp, par, knots, coef, k4)
        for j in range(4):
            tmp[j] = y[j] + h * (_A51 * k1[j] + _A52 * k2[j] + _A53 * k3[j] + _A54 * k4[j])
        _rhs(kind, t + _C5 * h, tmp, par, knots, coef, k5)
        for j in range(4):
            tmp[j] = y[j] + h * (
                _A61 * k1[j] + _A62 * k2[j] + _A63 * k3[j] + _A64 * k4[j] + _A65 * k5[j]
            )
        _rhs(kind, t + h, tmp, par, knots, coef, k6)
        for j in range(4):
            ynew[j] = y[j] + h * (
                _B1 * k1[j] + _B3 * k3[j] + _B4 * k4[j] + _B5 * k5[j] + _B6 * k6[j]
            )
        t_new = t1 if last else t + h
        _rhs(kind, t_new, ynew, par, knots, coef, k7)

        err = 0.0
        for j in range(4):
            e = h * (
                _E1 * k1[j] + _E3 * k3[j] + _E4 * k4[j] + _E5 * k5[j] + _E6 * k6[j] + _E7 * k7[j]
            )
            sc = atol + rtol * max(abs(y[j]), abs(ynew[j]))
            err += (e / sc) ** 2
        err = math.sqrt(err / 4.0)

        if err <= 1.0:
            t = t_new
            for j in range(4):
                y[j] = ynew[j]
                k1[j] = k7[j]
            if n == cap:
                cap *= 2
                ts2 = np.empty(cap)
                ys2 = np.empty((cap, 4))
                ts2[:n] = ts[:n]
                ys2[:n, :] = ys[:n, :]
                ts = ts2
                ys = ys2
            ts[n] = t
            ys[n, :] = y
            n += 1
            fac = 5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * err**-0.2))
        else:
            fac = max(0.2, 0.9 * err**-0.2)
        h *= fac
        if abs(h) < 1e-14 * max(1.0, abs(t)):
            status = 1
            break
    return ts[:n], ys[:n, :], status


def _local_tolerance(rel_tol, omega_max, span):
    phase = omega_max * span
    return max(rel_tol * min(1.0, 10.0 / phase) if phase > 0 else rel_tol, 2e-15)


def integrate_mode(
    profile: FrequencyProfile,
    t0: float,
    t1: float,
    rel_tol: float = 1e-10,
    *,
    initial: ModeState | None = None,
    max_steps: int = 10_000_000,
) -> Trajectory:
    """Integrate the mode equation from t0 to t1 with adaptive DOPRI5.

    Starts from ``initial_mode(profile.omega_i, t0)`` unless ``initial`` is
    given (which also allows t1 < t0).  The Wronskian is never renormalized;
    its drift is available on the returned trajectory.

    ``rel_tol`` is a target for the whole run.  Per-step errors accumulate
    roughly in proportion to the phase swept, so the local tolerance handed
    to the stepper is rel_tol scaled down by omega_max * |t1 - t0| / 10
    (never below 2e-15).  This keeps the Wronskian drift under
    100 * rel_tol for runs of any length until the floor is reached.
    """
    if not 1e-13 <= rel_tol <= 1e-6:
        raise DomainError("rel_tol must lie in [1e-13, 1e-6]")
    if initial is None:
        if not t1 > t0:
            raise DomainError("t1 must exceed t0")
        initial = initial_mode(profile.omega_i, t0)
    elif t1 == t0:
        raise DomainError("empty integration interval")
    local_tol = _local_tolerance(rel_tol, profile.omega_max(), abs(t1 - t0))
    kind, par, knots, coef = profile._kernel_args()
    y0 = np.array([initial.eps.real, initial.eps.imag, initial.eps_dot.real, initial.eps_dot.imag])
    ts, ys, status = _dopri5(
        kind, par, knots, coef, y0, float(t0), float(t1), local_tol, local_tol, int(max_steps)
    )
    if status == 1:
        raise IntegrationError(f"step size underflow near t={ts[-1]:.6g}; check the frequency profile")
    if status == 2:
        raise IntegrationError("maximum number of steps exceeded")
    return Trajectory(ts, ys[:, 0] + 1j * ys[:, 1], ys[:, 2] + 1j * ys[:, 3], rel_tol)


# ---------------------------------------------------------------------------
# Bogoliubov coefficients
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BogoliubovPair:
    xi: complex
    eta: complex

    @property
    def norm_defect(self) -> float:
        return abs(self.xi) ** 2 - abs(self.eta) ** 2 - 1.0

    @property
    def reflection(self) -> float:
        return reflection_coefficient(self)


def bogoliubov(final: ModeState, omega_f: float) -> BogoliubovPair:
    """Match eps = omega_f^-1/2 (xi e^{i omega_f t} - eta e^{-i omega_f t}) at ``final``."""
    if not omega_f > 0:
        raise DomainError("omega_f must be positive")
    sq = math.sqrt(omega_f)
    ph = complex(math.cos(omega_f * final.t), math.sin(omega_f * final.t))
    a = sq * final.eps
    b = -1j * final.eps_dot / sq
    xi = 0.5 * (a + b) / ph
    eta = -0.5 * (a - b) * ph
    pair = BogoliubovPair(xi, eta)
    if abs(pair.norm_defect) > 1e-6:
        raise DomainError(
            f"|xi|^2 - |eta|^2 - 1 = {pair.norm_defect:.3g}; mode not normalized or frequency not settled"
        )
    return pair


def reflection_coefficient(pair: BogoliubovPair) -> float:
    """r = |eta / xi|^2."""
    if abs(pair.xi) == 0:
        raise DomainError("xi must be nonzero")
    return abs(pair.eta) ** 2 / abs(pair.xi) ** 2


def reflection_for_profile(profile: FrequencyProfile, t0: float, t1: float, rel_tol: float = 1e-10) -> BogoliubovPair:
    """Integrate through the profile and read the Bogoliubov pair at t1."""
    w2_end = float(profile.omega_sq(t1))
    if abs(w2_end - profile.omega_f**2) > 1e-9 * profile.omega_f**2:
        raise DomainError("frequency has not settled to omega_f at t1")
    traj = integrate_mode(profile, t0, t1, rel_tol)
    return bogoliubov(traj.final, profile.omega_f)
