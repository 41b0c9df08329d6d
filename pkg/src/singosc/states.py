"""Probability densities of number, Barut-Girardello and power-Gaussian states.

Units hbar = mu = 1.  Densities live on the half-line x > 0 and are
normalized there.  Every density depends on time only through the mode
function, so each function takes a :class:`ModeState`.

Number states.  With s = |eps|^2 and u = x^2 / s,

    |Psi_n|^2 = (2x/s) * u^d e^-u / Gamma(d+1) * n! / (d+1)_n * [L_n^d(u)]^2,

i.e. a Gamma(d+1) density in u dressed by a Laguerre polynomial.  The
Gamma factor is evaluated as a Poisson log-pmf in its saddle-point form so
that d ~ 1e5 costs nothing in accuracy.

Large d.  The Gamma density becomes a Gaussian in x^2 of width s sqrt(d)
centred at s(d+1), and the Laguerre polynomials become Hermite functions
of y = x^2 - s(d+1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.integrate import trapezoid

from .classical_mode import ModeState
from .specfun import (
    DomainError,
    _bessel_i_sums,
    bessel_i_log_derivative_ratio,
    hermite_log_grid,
    laguerre_log_grid,
    log_factorial,
    log_pochhammer,
    log_poisson_pmf_grid,
)

__all__ = [
    "NumberState",
    "AlphaState",
    "ZState",
    "StateSpec",
    "DensityGrid",
    "EXACT_ALPHA_MAX_D",
    "ASYMPTOTIC_MIN_D",
    "psi_n",
    "psi_n_density",
    "psi_n_density_asymptotic",
    "gaussian_x2_density",
    "alpha_state_density",
    "z_state_density",
    "z_state_width",
    "moments",
    "mean_B_alpha",
    "mean_x2_alpha",
    "mean_x2_z",
    "evaluate_density",
    "x_grid",
]

EXACT_ALPHA_MAX_D = 50.0
ASYMPTOTIC_MIN_D = 1.0e3
_SERIES_TOL = 1e-16
_SERIES_MAX_TERMS = 5000


@dataclass(frozen=True)
class NumberState:
    n: int

    def __post_init__(self):
        if self.n < 0 or self.n > 10_000 or int(self.n) != self.n:
            raise DomainError("n must be an integer in [0, 10000]")


@dataclass(frozen=True)
class AlphaState:
    alpha: complex


@dataclass(frozen=True)
class ZState:
    z: complex

    def __post_init__(self):
        if not abs(self.z) < 1:
            raise DomainError("z-state needs |z| < 1")


@dataclass(frozen=True)
class StateSpec:
    kind: Union[NumberState, AlphaState, ZState]
    d: float

    def __post_init__(self):
        if not self.d > 0.5:
            raise DomainError("d must exceed 1/2")


@dataclass(frozen=True)
class DensityGrid:
    x: np.ndarray
    density: np.ndarray
    regime: str  # "exact" or "asymptotic"
    mode_time: float

    def integral(self) -> float:
        return float(trapezoid(self.density, self.x))


def _as_x(x):
    arr = np.asarray(x, dtype=float)
    if np.any(~(arr > 0)):
        raise DomainError("densities are defined for x > 0 only")
    return arr


def _ret(arr, like):
    return float(arr) if np.ndim(like) == 0 else arr


def _check_d(d):
    if not d > 0.5:
        raise DomainError("d must exceed 1/2")


def _log_number_density(n, d, s, x):
    # ln |Psi_n|^2 on an array of x > 0
    u = x * x / s
    lg = math.log(2.0) + np.log(x) - math.log(s) + log_poisson_pmf_grid(d, u)
    if n > 0:
        sgn, llag = laguerre_log_grid(n, d, u)
        lg = lg + log_factorial(n) - log_pochhammer(d + 1.0, n) + 2.0 * llag
        lg = np.where(sgn == 0, -np.inf, lg)
    return lg


def psi_n_density(n: int, d: float, mode: ModeState, x):
    """|Psi_n(x, t)|^2 for the exact number state n."""
    _check_d(d)
    NumberState(n)
    xa = _as_x(x)
    s = mode.abs_eps_sq
    return _ret(np.exp(_log_number_density(int(n), float(d), s, np.atleast_1d(xa))).reshape(xa.shape), x)


def psi_n(n: int, d: float, mode: ModeState, x):
    """Complex number-state wavefunction

        Psi_n = sqrt(2 n! / Gamma(n+d+1)) conj(eps)^n / eps^(n+d+1)
                * x^(d+1/2) exp(i eps' x^2 / (2 eps)) L_n^d(x^2 / |eps|^2),

    with the principal branch for the non-integer power.  Only the relative
    phases between different n matter (orthogonality checks).
    """
    _check_d(d)
    NumberState(n)
    xa = np.atleast_1d(_as_x(x))
    eps, eps_dot = mode.eps, mode.eps_dot
    s = abs(eps) ** 2
    mod = np.sqrt(np.exp(_log_number_density(int(n), float(d), s, xa)))
    if n > 0:
        sgn, _ = laguerre_log_grid(n, d, xa * xa / s)
    else:
        sgn = 1.0
    # phase of conj(eps)^n / eps^(n+d+1) times the Gaussian chirp
    arg_eps = math.atan2(eps.imag, eps.real)
    phase = -n * arg_eps - (n + d + 1) * arg_eps + (eps_dot / eps).real * 0.5 * xa * xa
    out = sgn * mod * np.exp(1j * phase)
    return complex(out[0]) if np.ndim(x) == 0 else out.reshape(np.shape(x))


def _asymptotic_n_ok(n, d):
    if d < ASYMPTOTIC_MIN_D:
        raise DomainError(f"asymptotic densities need d >= {ASYMPTOTIC_MIN_D:g}")
    if n > 3.0 * d ** (1.0 / 3.0):
        raise DomainError("asymptotic number-state density needs n <= 3 d^(1/3)")


def psi_n_density_asymptotic(n: int, d: float, mode: ModeState, x):
    """Large-d Hermite form of |Psi_n|^2."""
    NumberState(n)
    _asymptotic_n_ok(n, d)
    xa = np.atleast_1d(_as_x(x))
    s = mode.abs_eps_sq
    y = xa * xa - s * (d + 1.0)
    lg = (
        -0.5 * math.log(2.0 * math.pi * d)
        + np.log(2.0 * xa / s)
        - y * y / (2.0 * s * s * d)
        - n * math.log(2.0)
        - log_factorial(n)
    )
    if n > 0:
        sgn, lh = hermite_log_grid(n, -y / (math.sqrt(2.0 * d) * s))
        lg = np.where(sgn == 0, -np.inf, lg + 2.0 * lh)
    return _ret(np.exp(lg).reshape(np.shape(x)), x)


def gaussian_x2_density(mean_x2: float, s: float, d: float, x):
    """(2 pi d)^-1/2 (2x/s) exp(-(x^2 - <x^2>)^2 / (2 s^2 d)).

    Common large-d shape of coherent-like states: a Gaussian in x^2 with
    width s sqrt(d), here normalized on the whole x^2 axis.
    """
    xa = np.atleast_1d(_as_x(x))
    v = xa * xa - mean_x2
    out = 2.0 * xa / (s * math.sqrt(2.0 * math.pi * d)) * np.exp(-v * v / (2.0 * s * s * d))
    return _ret(out.reshape(np.shape(x)), x)


# ---------------------------------------------------------------------------
# Barut-Girardello (alpha) states
# ---------------------------------------------------------------------------


def _alpha_branch(d):
    _check_d(d)
    if d <= EXACT_ALPHA_MAX_D:
        return "exact"
    if d >= ASYMPTOTIC_MIN_D:
        return "asymptotic"
    raise DomainError(
        f"alpha states are not available for {EXACT_ALPHA_MAX_D:g} < d < {ASYMPTOTIC_MIN_D:g}"
    )


def _bessel_weight_sum(d, z):
    # G = sum_k (z^2/4)^k / (k! (d+1)_k), the alpha-state normalization,
    # and H = sum_k (2k + d) (z^2/4)^k / (k! (d+1)_k)
    return _bessel_i_sums(float(d), float(z))


def _alpha_series(alpha, d, eps, u):
    """S(u) = sum_n w^n L_n^d(u) / (d+1)_n with w = alpha^2 conj(eps) / (2 eps)."""
    w = alpha * alpha * eps.conjugate() / (2.0 * eps)
    l0 = np.ones_like(u)
    total = l0.astype(complex)
    if w == 0:
        return total
    l1 = 1.0 + d - u
    coeff = w / (d + 1.0)
    total = total + coeff * l1
    # compare against the largest partial sum seen so that points where the
    # series cancels to ~0 (nodes of the density) do not stall the loop
    scale = np.maximum(1.0, np.abs(total))
    quiet = 0
    for k in range(1, _SERIES_MAX_TERMS):
        l0, l1 = l1, ((2.0 * k + 1.0 + d - u) * l1 - (k + d) * l0) / (k + 1.0)
        coeff = coeff * w / (d + k + 1.0)
        term = coeff * l1
        total = total + term
        scale = np.maximum(scale, np.abs(total))
        if np.all(np.abs(term) <= _SERIES_TOL * scale):
            quiet += 1
            if quiet >= 3:
                return total
        else:
            quiet = 0
    raise DomainError("alpha-state series did not converge; |alpha| too large")


def alpha_state_density(alpha: complex, d: float, mode: ModeState, x):
    """|<x|alpha>|^2 for the eigenstate of the quadratic lowering invariant.

    d <= 50: exact expansion over number states, summed until the terms
    drop below 1e-16 of the running sum.  d >= 1e3: Gaussian in x^2 with
    the mean from :func:`mean_x2_alpha`.  Anything in between is refused.
    """
    alpha = complex(alpha)
    branch = _alpha_branch(d)
    xa = np.atleast_1d(_as_x(x))
    s = mode.abs_eps_sq
    if branch == "asymptotic":
        return gaussian_x2_density(mean_x2_alpha(alpha, d, mode), s, d, x)
    u = xa * xa / s
    z = abs(alpha) ** 2
    g, _ = _bessel_weight_sum(d, z)
    ser = _alpha_series(alpha, d, mode.eps, u)
    with np.errstate(divide="ignore"):
        lg = math.log(2.0) + np.log(xa / s) + log_poisson_pmf_grid(d, u) + 2.0 * np.log(np.abs(ser)) - math.log(g)
    return _ret(np.exp(lg).reshape(np.shape(x)), x)


def mean_B_alpha(alpha: complex, d: float) -> float:
    """<B> in an alpha state: 1 + z I_d'(z) / I_d(z) with z = |alpha|^2,
    or 1 + d + |alpha|^4 / (2d) for d >= 1e3."""
    branch = _alpha_branch(d)
    z = abs(complex(alpha)) ** 2
    if branch == "asymptotic":
        return 1.0 + d + z * z / (2.0 * d)
    return 1.0 + bessel_i_log_derivative_ratio(d, z)


def mean_x2_alpha(alpha: complex, d: float, mode: ModeState) -> float:
    alpha = complex(alpha)
    return moments(mean_B_alpha(alpha, d), alpha.conjugate() ** 2, mode)[0]


# ---------------------------------------------------------------------------
# Power-Gaussian (z) states
# ---------------------------------------------------------------------------


def z_state_width(z: complex, mode: ModeState) -> float:
    """s_z = |eps - z conj(eps)|^2 / (1 - |z|^2); the z-state is the ground
    state density with |eps|^2 replaced by s_z."""
    z = complex(ZState(z).z)
    return abs(mode.eps - z * mode.eps.conjugate()) ** 2 / (1.0 - abs(z) ** 2)


def z_state_density(z: complex, d: float, mode: ModeState, x):
    _check_d(d)
    sz = z_state_width(z, mode)
    xa = np.atleast_1d(_as_x(x))
    lg = math.log(2.0) + np.log(xa / sz) + log_poisson_pmf_grid(d, xa * xa / sz)
    return _ret(np.exp(lg).reshape(np.shape(x)), x)


def mean_x2_z(z: complex, d: float, mode: ModeState) -> float:
    """Exact <x^2> = (d+1) s_z in a z-state."""
    _check_d(d)
    return (d + 1.0) * z_state_width(z, mode)


# ---------------------------------------------------------------------------
# Moments
# ---------------------------------------------------------------------------


def moments(B_mean: float, A_mean: complex, mode: ModeState):
    """(<x^2>, <p^2/2 + g/x^2>, <xp + px>) from <B> and <A^dagger>."""
    eps, ed = mode.eps, mode.eps_dot
    a = complex(A_mean)
    x2 = abs(eps) ** 2 * B_mean - (eps * eps * a).real
    energy = 0.5 * (abs(ed) ** 2 * B_mean - (ed * ed * a).real)
    xp = 2.0 * ((ed * eps.conjugate()).real * B_mean - (ed * eps * a).real)
    return x2, energy, xp


# ---------------------------------------------------------------------------
# Grids
# ---------------------------------------------------------------------------


def x_grid(d: float, s: float, points: int = 801, width: float = 6.0, mean_x2: float | None = None) -> np.ndarray:
    """x values covering x^2 within +-width standard deviations of <x^2>."""
    if points < 2:
        raise DomainError("grid needs at least two points")
    if mean_x2 is None:
        mean_x2 = s * (d + 1.0)
    sd = s * math.sqrt(d + 1.0)
    lo = max(mean_x2 - width * sd, 0.0)
    hi = mean_x2 + width * sd
    x = np.sqrt(np.linspace(lo, hi, points))
    if x[0] == 0.0:
        x[0] = 0.5 * x[1] * 1e-3
    return x


def evaluate_density(spec: StateSpec, mode: ModeState, x, asymptotic: bool = False) -> DensityGrid:
    x = np.asarray(x, dtype=float)
    if np.any(np.diff(x) <= 0):
        raise DomainError("x grid must be strictly increasing")
    kind = spec.kind
    if isinstance(kind, NumberState):
        if asymptotic:
            dens = psi_n_density_asymptotic(kind.n, spec.d, mode, x)
        else:
            dens = psi_n_density(kind.n, spec.d, mode, x)
        regime = "asymptotic" if asymptotic else "exact"
    elif isinstance(kind, AlphaState):
        regime = _alpha_branch(spec.d)
        if asymptotic and regime != "asymptotic":
            raise DomainError("asymptotic alpha-state density needs d >= 1e3")
        dens = alpha_state_density(kind.alpha, spec.d, mode, x)
    elif isinstance(kind, ZState):
        if asymptotic:
            _asymptotic_n_ok(0, spec.d)
            dens = gaussian_x2_density(mean_x2_z(kind.z, spec.d, mode), mode.abs_eps_sq, spec.d, x)
            regime = "asymptotic"
        else:
            dens = z_state_density(kind.z, spec.d, mode, x)
            regime = "exact"
    else:  # pragma: no cover
        raise DomainError("unknown state kind")
    return DensityGrid(x, np.asarray(dens, dtype=float), regime, mode.t)
