"""Special functions evaluated with attention to huge parameters.

The physics modules need Laguerre and Jacobi polynomials whose parameter is
of order 1e5 while the degree stays small, Gamma-function ratios at such
arguments, and a few Bessel-type quantities.  Anything whose magnitude can
leave the double range is carried as a log magnitude plus a sign.

Polynomial recurrences run on a mantissa with a power-of-two rescale so that
degrees up to 1e4 never overflow; the scale is returned as a natural log.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.special import zeta as _zeta

from ._accel import JIT_ENABLED, njit

__all__ = [
    "DomainError",
    "LogValue",
    "log_gamma",
    "log_factorial",
    "log_pochhammer",
    "log_poisson_pmf",
    "log_poisson_pmf_grid",
    "assoc_laguerre",
    "assoc_laguerre_log",
    "jacobi",
    "jacobi_log",
    "hermite",
    "hermite_log",
    "hypergeom_terminating",
    "hypergeom_terminating_log",
    "confluent_terminating",
    "bessel_i_large_order",
    "bessel_i_log",
    "bessel_i_log_derivative_ratio",
    "laguerre_log_grid",
    "hermite_log_grid",
]


class DomainError(ValueError):
    """Argument outside the domain where a routine is defined or validated."""


@dataclass(frozen=True)
class LogValue:
    """A real number stored as ``sign * exp(log_magnitude)``."""

    log_magnitude: float
    sign: int

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError("sign must be -1, 0 or +1")
        if self.sign != 0 and not math.isfinite(self.log_magnitude):
            raise ValueError("nonzero LogValue needs a finite log magnitude")

    @classmethod
    def zero(cls) -> "LogValue":
        return cls(-math.inf, 0)

    @classmethod
    def from_float(cls, x: float) -> "LogValue":
        if x == 0.0:
            return cls.zero()
        return cls(math.log(abs(x)), 1 if x > 0 else -1)

    @classmethod
    def from_scaled(cls, mantissa: float, log_scale: float) -> "LogValue":
        if mantissa == 0.0:
            return cls.zero()
        return cls(math.log(abs(mantissa)) + log_scale, 1 if mantissa > 0 else -1)

    @property
    def value(self) -> float:
        """Linear-domain value; may be 0.0 or inf if out of range."""
        if self.sign == 0:
            return 0.0
        if self.log_magnitude > 709.78:
            return self.sign * math.inf
        return self.sign * math.exp(self.log_magnitude)

    def __float__(self) -> float:
        return self.value

    def __mul__(self, other: "LogValue") -> "LogValue":
        if self.sign == 0 or other.sign == 0:
            return LogValue.zero()
        return LogValue(self.log_magnitude + other.log_magnitude, self.sign * other.sign)


# ---------------------------------------------------------------------------
# log Gamma
# ---------------------------------------------------------------------------

_EULER_GAMMA = 0.57721566490153286060651209008240243
_HALF_LOG_2PI = 0.91893853320467274178032973640561764

# lnGamma(1+z) = -gamma*z + sum_{k>=2} (-1)^k zeta(k) z^k / k, |z| < 1
_NSER = 64
_LG1_COEF = np.array(
    [0.0, -_EULER_GAMMA]
    + [(-1.0) ** k * float(_zeta(k, 1)) / k for k in range(2, _NSER)]
)

_STIRLING = np.array(
    [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360360.0,
        1.0 / 156.0,
        -3617.0 / 122400.0,
    ]
)

_BIG = 2.0**500
_INV_BIG = 2.0**-500
_LOG_BIG = 500.0 * math.log(2.0)


@njit
def _lgamma1p_small(z):
    # ln Gamma(1+z) for |z| <= 0.5
    acc = 0.0
    for k in range(_NSER - 1, 0, -1):
        acc = acc * z + _LG1_COEF[k]
    return acc * z


@njit
def _stirling_tail(x):
    inv = 1.0 / x
    inv2 = inv * inv
    acc = 0.0
    for k in range(_STIRLING.shape[0] - 1, -1, -1):
        acc = acc * inv2 + _STIRLING[k]
    return acc * inv


@njit
def _lgamma_stirling(x):
    return (x - 0.5) * math.log(x) - x + _HALF_LOG_2PI + _stirling_tail(x)


@njit
def _lgamma(x):
    if x < 0.5:
        # x + 1 lands in [1, 1.5)
        return _lgamma1p_small(x) - math.log(x)
    if x < 1.5:
        return _lgamma1p_small(x - 1.0)
    if x < 2.5:
        z = x - 2.0
        return math.log1p(z) + _lgamma1p_small(z)
    if x < 15.0:
        prod = 1.0
        y = x
        while y < 15.0:
            prod *= y
            y += 1.0
        return _lgamma_stirling(y) - math.log(prod)
    return _lgamma_stirling(x)


@njit
def _log_poch(a, k):
    # ln (a)_k for integer k >= 0 and a > 0
    acc = 0.0
    for j in range(k):
        acc += math.log(a + j)
    return acc


@njit
def _stirlerr(x):
    # ln Gamma(x+1) - (x+1/2) ln x + x - ln sqrt(2 pi)
    if x >= 15.0:
        return _stirling_tail(x)
    return _lgamma(x + 1.0) - (x + 0.5) * math.log(x) + x - _HALF_LOG_2PI


@njit
def _bd0(x, m):
    # x ln(x/m) + m - x without cancellation
    if abs(x - m) < 0.1 * (x + m):
        v = (x - m) / (x + m)
        s = (x - m) * v
        ej = 2.0 * x * v
        v2 = v * v
        for j in range(1, 1000):
            ej *= v2
            s1 = s + ej / (2 * j + 1)
            if s1 == s:
                return s1
            s = s1
        return s
    return x * math.log(x / m) + m - x


@njit
def _log_poisson(x, mean):
    # ln( mean^x e^-mean / Gamma(x+1) ), real x >= 0
    if mean == 0.0:
        return 0.0 if x == 0.0 else -math.inf
    if x == 0.0:
        return -mean
    if x < 10.0:
        return x * math.log(mean) - mean - _lgamma(x + 1.0)
    return -_stirlerr(x) - _bd0(x, mean) - 0.5 * math.log(2.0 * math.pi * x)


def log_gamma(x: float) -> float:
    """Natural log of Gamma(x) for x > 0."""
    if not x > 0:
        raise DomainError(f"log_gamma needs x > 0, got {x!r}")
    return float(_lgamma(float(x)))


def log_factorial(n: int) -> float:
    if n < 0:
        raise DomainError("factorial of a negative integer")
    return float(_lgamma(n + 1.0))


def log_pochhammer(a: float, k: int) -> float:
    """ln of the rising factorial (a)_k for a > 0 and integer k >= 0.

    Computed as a sum of k logarithms, so ratios such as
    Gamma(d + nu + 1) / Gamma(d + mu + 1) keep full relative accuracy even
    for d ~ 1e5, where the difference of two log-Gamma values would not.
    """
    if k < 0 or a <= 0:
        raise DomainError("log_pochhammer needs a > 0 and k >= 0")
    return float(_log_poch(float(a), int(k)))


def log_poisson_pmf(x: float, mean: float) -> float:
    """ln(mean**x exp(-mean) / Gamma(x+1)) for real x >= 0, mean >= 0.

    Uses the saddle-point split (Stirling error plus deviance) so that both
    arguments may be ~1e5 without losing relative accuracy.
    """
    if x < 0 or mean < 0:
        raise DomainError("log_poisson_pmf needs x >= 0 and mean >= 0")
    return float(_log_poisson(float(x), float(mean)))


def _bd0_grid(x, m):
    m = np.asarray(m, dtype=float)
    out = np.empty_like(m)
    near = np.abs(x - m) < 0.1 * (x + m)
    mn = m[near]
    v = (x - mn) / (x + mn)
    s = (x - mn) * v
    ej = 2.0 * x * v
    v2 = v * v
    for j in range(1, 16):  # |v| < 0.1, so 16 terms reach 1e-32
        ej = ej * v2
        s = s + ej / (2 * j + 1)
    out[near] = s
    mf = m[~near]
    with np.errstate(divide="ignore"):
        out[~near] = x * np.log(x / mf) + mf - x
    return out


def log_poisson_pmf_grid(x: float, means) -> np.ndarray:
    """Vectorized :func:`log_poisson_pmf` over an array of means.

    Viewed as a function of the mean this is the log of the Gamma(x+1)
    density, which is how the number-state densities use it.
    """
    if x < 0:
        raise DomainError("log_poisson_pmf_grid needs x >= 0")
    means = np.asarray(means, dtype=float)
    if np.any(means < 0):
        raise DomainError("means must be nonnegative")
    x = float(x)
    if x == 0.0:
        return -means
    if x < 10.0:
        with np.errstate(divide="ignore"):
            return x * np.log(means) - means - _lgamma(x + 1.0)
    return -_stirlerr(x) - _bd0_grid(x, means) - 0.5 * math.log(2.0 * math.pi * x)


# ---------------------------------------------------------------------------
# Orthogonal polynomials via rescaled upward recurrences
# ---------------------------------------------------------------------------


@njit
def _laguerre_scaled(n, a, x):
    if n == 0:
        return 1.0, 0.0
    scale = 0.0
    p0 = 1.0
    p1 = 1.0 + a - x
    for k in range(1, n):
        p2 = ((2.0 * k + 1.0 + a - x) * p1 - (k + a) * p0) / (k + 1.0)
        p0 = p1
        p1 = p2
        if abs(p1) > _BIG:
            p0 *= _INV_BIG
            p1 *= _INV_BIG
            scale += _LOG_BIG
    return p1, scale


@njit
def _jacobi_scaled(n, a, b, y):
    # P_n^{(a,b)}(1 - y); coefficients rearranged so that no a^2 - b^2
    # cancellation occurs when b is huge and y is tiny
    if n == 0:
        return 1.0, 0.0
    s = a + b
    scale = 0.0
    p0 = 1.0
    p1 = (a + 1.0) - 0.5 * (s + 2.0) * y
    for k in range(2, n + 1):
        c = 2.0 * k + s
        lin = 4.0 * k * (k + s - 1.0) + 2.0 * s * (a - 1.0) - c * (c - 2.0) * y
        num = (c - 1.0) * lin * p1 - 2.0 * (k + a - 1.0) * (k + b - 1.0) * c * p0
        p2 = num / (2.0 * k * (k + s) * (c - 2.0))
        p0 = p1
        p1 = p2
        if abs(p1) > _BIG:
            p0 *= _INV_BIG
            p1 *= _INV_BIG
            scale += _LOG_BIG
    return p1, scale


@njit
def _hermite_scaled(n, x):
    if n == 0:
        return 1.0, 0.0
    scale = 0.0
    p0 = 1.0
    p1 = 2.0 * x
    for k in range(1, n):
        p2 = 2.0 * x * p1 - 2.0 * k * p0
        p0 = p1
        p1 = p2
        if abs(p1) > _BIG:
            p0 *= _INV_BIG
            p1 *= _INV_BIG
            scale += _LOG_BIG
    return p1, scale


@njit
def _log_abs_scaled(m, scale):
    if m == 0.0:
        return -math.inf
    return math.log(abs(m)) + scale


def _check_degree(n):
    if n < 0 or int(n) != n:
        raise DomainError(f"degree must be a nonnegative integer, got {n!r}")
    return int(n)


def assoc_laguerre(n: int, a: float, x: float) -> float:
    """Generalized Laguerre polynomial L_n^a(x) by the three-term recurrence."""
    return assoc_laguerre_log(n, a, x).value


def assoc_laguerre_log(n: int, a: float, x: float) -> LogValue:
    n = _check_degree(n)
    if not a > -1:
        raise DomainError("Laguerre parameter must exceed -1")
    return LogValue.from_scaled(*_laguerre_scaled(n, float(a), float(x)))


def jacobi(n: int, a: float, b: float, x: float) -> float:
    """Jacobi polynomial P_n^{(a,b)}(x), stable when b is very large."""
    return jacobi_log(n, a, b, x).value


def jacobi_log(n: int, a: float, b: float, x: float | None = None, *, one_minus_x: float | None = None) -> LogValue:
    """Jacobi polynomial as a LogValue.

    Pass ``one_minus_x`` instead of ``x`` when the argument is 1 - 2r with a
    tiny r; forming 1 - 2r first would throw away the digits of r.
    """
    n = _check_degree(n)
    if not (a > -1 and b > -1):
        raise DomainError("Jacobi parameters must exceed -1")
    if (x is None) == (one_minus_x is None):
        raise TypeError("give exactly one of x or one_minus_x")
    y = 1.0 - float(x) if one_minus_x is None else float(one_minus_x)
    if not -1e-15 <= y <= 2.0 + 1e-15:
        raise DomainError("Jacobi argument outside [-1, 1]")
    return LogValue.from_scaled(*_jacobi_scaled(n, float(a), float(b), y))


def hermite(n: int, x: float) -> float:
    """Physicists' Hermite polynomial H_n(x)."""
    return hermite_log(n, x).value


def hermite_log(n: int, x: float) -> LogValue:
    n = _check_degree(n)
    return LogValue.from_scaled(*_hermite_scaled(n, float(x)))


# grid versions: (sign, log|value|) arrays


@njit
def _laguerre_log_grid_jit(n, a, x):
    sgn = np.empty(x.shape[0])
    lg = np.empty(x.shape[0])
    for i in range(x.shape[0]):
        m, s = _laguerre_scaled(n, a, x[i])
        sgn[i] = np.sign(m)
        lg[i] = _log_abs_scaled(m, s)
    return sgn, lg


@njit
def _hermite_log_grid_jit(n, x):
    sgn = np.empty(x.shape[0])
    lg = np.empty(x.shape[0])
    for i in range(x.shape[0]):
        m, s = _hermite_scaled(n, x[i])
        sgn[i] = np.sign(m)
        lg[i] = _log_abs_scaled(m, s)
    return sgn, lg


def _rescale(p0, p1, scale):
    big = np.abs(p1) > _BIG
    if big.any():
        p0 = np.where(big, p0 * _INV_BIG, p0)
        p1 = np.where(big, p1 * _INV_BIG, p1)
        scale = scale + np.where(big, _LOG_BIG, 0.0)
    return p0, p1, scale


def _finish(p1, scale):
    with np.errstate(divide="ignore"):
        return np.sign(p1), np.log(np.abs(p1)) + scale


def _laguerre_log_grid_numpy(n, a, x):
    p0 = np.ones_like(x)
    scale = np.zeros_like(x)
    if n == 0:
        return _finish(p0, scale)
    p1 = 1.0 + a - x
    for k in range(1, n):
        p0, p1 = p1, ((2.0 * k + 1.0 + a - x) * p1 - (k + a) * p0) / (k + 1.0)
        p0, p1, scale = _rescale(p0, p1, scale)
    return _finish(p1, scale)


def _hermite_log_grid_numpy(n, x):
    p0 = np.ones_like(x)
    scale = np.zeros_like(x)
    if n == 0:
        return _finish(p0, scale)
    p1 = 2.0 * x
    for k in range(1, n):
        p0, p1 = p1, 2.0 * x * p1 - 2.0 * k * p0
        p0, p1, scale = _rescale(p0, p1, scale)
    return _finish(p1, scale)


def laguerre_log_grid(n, a, x, *, use_jit=None):
    """Sign and log|L_n^a| over an array of arguments."""
    x = np.ascontiguousarray(x, dtype=float)
    if use_jit is None:
        use_jit = JIT_ENABLED
    if use_jit:
        return _laguerre_log_grid_jit(int(n), float(a), x)
    return _laguerre_log_grid_numpy(int(n), float(a), x)


def hermite_log_grid(n, x, *, use_jit=None):
    """Sign and log|H_n| over an array of arguments."""
    x = np.ascontiguousarray(x, dtype=float)
    if use_jit is None:
        use_jit = JIT_ENABLED
    if use_jit:
        return _hermite_log_grid_jit(int(n), x)
    return _hermite_log_grid_numpy(int(n), x)


# ---------------------------------------------------------------------------
# Terminating hypergeometric series (exact rational summation)
# ---------------------------------------------------------------------------


def _check_terminating(neg_n, c):
    if neg_n > 0 or int(neg_n) != neg_n:
        raise DomainError("first parameter must be a nonpositive integer")
    if float(c) == int(c) and c <= 0 and c >= neg_n:
        raise DomainError("c is a nonpositive integer not below the first parameter")
    return -int(neg_n)


def _series_exact(n, b, c, z):
    # float inputs are exact dyadic rationals, so the sum has no rounding
    bq = None if b is None else Fraction(b)
    cq = Fraction(c)
    zq = Fraction(z)
    term = Fraction(1)
    total = Fraction(1)
    for k in range(n):
        num = (k - n) * zq
        if bq is not None:
            num *= bq + k
        term = term * num / ((cq + k) * (k + 1))
        total += term
    return total


def _fraction_log(q: Fraction) -> LogValue:
    if q == 0:
        return LogValue.zero()
    shift = abs(q.numerator).bit_length() - q.denominator.bit_length()
    mant = abs(q) / Fraction(2) ** shift
    return LogValue(math.log(float(mant)) + shift * math.log(2.0), 1 if q > 0 else -1)


def _fraction_float(q: Fraction) -> float:
    try:
        return float(q)
    except OverflowError:
        return math.copysign(math.inf, q)


def hypergeom_terminating(neg_n: int, b: float, c: float, z: float) -> float:
    """Gauss series F(-n, b; c; z), summed exactly over k = 0..n.

    The inputs are converted to exact rationals and the n + 1 terms are added
    without rounding, so the only error is the final conversion to float.
    """
    n = _check_terminating(neg_n, c)
    return _fraction_float(_series_exact(n, b, c, z))


def hypergeom_terminating_log(neg_n: int, b: float, c: float, z: float) -> LogValue:
    n = _check_terminating(neg_n, c)
    return _fraction_log(_series_exact(n, b, c, z))


def confluent_terminating(neg_n: int, c: float, z: float) -> float:
    """Kummer series Phi(-n; c; z) = sum (-n)_k z^k / ((c)_k k!), exact."""
    n = _check_terminating(neg_n, c)
    return _fraction_float(_series_exact(n, None, c, z))


# ---------------------------------------------------------------------------
# Modified Bessel I
# ---------------------------------------------------------------------------


def bessel_i_large_order(d: float, z: float) -> LogValue:
    """Leading large-order asymptotic of I_d(z), valid for d >> 1 and z < d."""
    if d < 100:
        raise DomainError("large-order asymptotic requires d >= 100")
    if z < 0 or z >= d:
        raise DomainError("large-order asymptotic requires 0 <= z < d")
    if z == 0:
        return LogValue.zero()
    root = math.hypot(d, z)
    # uniform (Debye) form; the log argument is z / (d + sqrt(d^2 + z^2))
    lg = -_HALF_LOG_2PI - 0.5 * math.log(root) + root + d * math.log(z / (d + root))
    return LogValue(lg, 1)


@njit
def _bessel_i_sums(d, z):
    # sums of q_k = (z^2/4)^k Gamma(d+1) / (k! Gamma(k+d+1)) and (2k+d) q_k
    q = 1.0
    g = 1.0
    h = d
    quarter = 0.25 * z * z
    k = 0
    while True:
        k += 1
        q *= quarter / (k * (k + d))
        g += q
        h += (2.0 * k + d) * q
        if q < 1e-17 * g and k > 0.5 * z:
            break
        if k > 100000:
            break
    return g, h


def bessel_i_log(d: float, z: float) -> LogValue:
    """ln I_d(z) from the ascending series (moderate z, d > -1)."""
    if d <= -1 or z < 0:
        raise DomainError("bessel_i_log needs d > -1 and z >= 0")
    if z > 600:
        raise DomainError("ascending series limited to z <= 600")
    if z == 0:
        return LogValue(0.0, 1) if d == 0 else LogValue.zero()
    g, _ = _bessel_i_sums(float(d), float(z))
    return LogValue(d * math.log(0.5 * z) - _lgamma(d + 1.0) + math.log(g), 1)


def bessel_i_log_derivative_ratio(d: float, z: float) -> float:
    """z I_d'(z) / I_d(z) from the ascending series; equals d at z = 0."""
    if d <= -1 or z < 0:
        raise DomainError("bessel_i_log_derivative_ratio needs d > -1 and z >= 0")
    if z > 600:
        raise DomainError("ascending series limited to z <= 600")
    if z == 0:
        return float(d)
    g, h = _bessel_i_sums(float(d), float(z))
    return h / g
