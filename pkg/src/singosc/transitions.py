"""Transition probabilities between number states after a frequency change.

A frequency history enters only through its reflection coefficient r.  For
levels n, m write mu = min(n, m), nu = max(n, m), k = nu - mu.  Then

    W_n^m = mu!/nu! (mu+d+1)_k r^k (1-r)^(d+1) [P_mu^(k,d)(1-2r)]^2.

For d ~ 1e5 the Gamma ratio and (1-r)^(d+1) are astronomically large or
small, so every probability is built as exp(sum of logs) times a squared
polynomial kept in linear scale.  The polynomial recurrences work with
y = 2r directly so that r down to 1e-12 keeps its digits.

Regimes (always chosen by the caller, never switched automatically):

    ExactJacobi     the formula above
    ExactHypergeom  same value from a terminating Gauss series (cross-check)
    Oscillator      harmonic-oscillator levels, via the parity map for d = +-1/2
    LargeD          mu!/nu! x^k e^-x [L_mu^k(x)]^2 with x = rd
    LargeDPoisson   as LargeD with e^-x replaced by (1-r)^(d+1)
    Adiabatic       first order in r
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from ._accel import njit
from .specfun import (
    DomainError,
    LogValue,
    _jacobi_scaled,
    _laguerre_scaled,
    _lgamma,
    _log_abs_scaled,
    _log_poch,
    hypergeom_terminating_log,
)

__all__ = [
    "Regime",
    "TransitionMatrix",
    "w_exact",
    "log_w_exact",
    "w_exact_hypergeom",
    "log_w_exact_hypergeom",
    "w_oscillator",
    "oscillator_levels",
    "w_large_d",
    "w_rd_dominant",
    "w_adiabatic",
    "adiabatic_parameter",
    "leakage",
    "transition_matrix",
]

LARGE_D_MIN = 1.0e3
MAX_LEVEL = 10_000


class Regime(str, enum.Enum):
    EXACT_JACOBI = "ExactJacobi"
    EXACT_HYPERGEOM = "ExactHypergeom"
    OSCILLATOR = "Oscillator"
    LARGE_D = "LargeD"
    LARGE_D_POISSON = "LargeDPoisson"
    ADIABATIC = "Adiabatic"

    @classmethod
    def parse(cls, name) -> "Regime":
        if isinstance(name, cls):
            return name
        key = str(name).replace("-", "").replace("_", "").lower()
        for member in cls:
            if member.value.lower() == key:
                return member
        raise DomainError(f"unknown regime {name!r}")


# ---------------------------------------------------------------------------
# argument checks
# ---------------------------------------------------------------------------


def _levels(n, m):
    for v in (n, m):
        if int(v) != v or v < 0 or v > MAX_LEVEL:
            raise DomainError("levels must be integers in [0, 10000]")
    return int(n), int(m)


def _check_r(r):
    if not 0.0 <= r < 1.0:
        raise DomainError("r must lie in [0, 1)")
    return float(r)


def _check_d(d):
    if not (d > 0.5 or d == 0.5 or d == -0.5):
        raise DomainError("d must exceed 1/2 or equal +-1/2")
    return float(d)


# ---------------------------------------------------------------------------
# scalar kernels (log W), shared by scalar API and matrix fills
# ---------------------------------------------------------------------------


@njit
def _log_w_jacobi(n, m, d, r):
    mu = min(n, m)
    k = max(n, m) - mu
    if r == 0.0:
        return 0.0 if k == 0 else -math.inf
    lg = -_log_poch(mu + 1.0, k) + _log_poch(mu + d + 1.0, k) + (d + 1.0) * math.log1p(-r)
    if k > 0:
        lg += k * math.log(r)
    mant, sc = _jacobi_scaled(mu, float(k), d, 2.0 * r)
    return lg + 2.0 * _log_abs_scaled(mant, sc)


@njit
def _log_w_laguerre(n, m, x, log_base):
    # mu!/nu! x^k [L_mu^k(x)]^2 times exp(log_base)
    mu = min(n, m)
    k = max(n, m) - mu
    if x == 0.0:
        return 0.0 if k == 0 else -math.inf
    lg = -_log_poch(mu + 1.0, k) + log_base
    if k > 0:
        lg += k * math.log(x)
    mant, sc = _laguerre_scaled(mu, float(k), x)
    return lg + 2.0 * _log_abs_scaled(mant, sc)


@njit
def _log_w_oscillator(k, j, r):
    if (k - j) % 2 != 0:
        return -math.inf
    diff = abs(k - j)
    if r == 0.0:
        return 0.0 if diff == 0 else -math.inf
    a = 0.5 * diff
    lg = (
        _lgamma(k + 1.0)
        + _lgamma(j + 1.0)
        + a * math.log(r)
        + 0.5 * math.log1p(-r)
        - diff * math.log(2.0)
        - 2.0 * _lgamma(0.5 * (k + j) + 1.0)
    )
    # argument sqrt(1 - r), passed as 1 - sqrt(1 - r) = r / (1 + sqrt(1 - r))
    y = r / (1.0 + math.sqrt(1.0 - r))
    mant, sc = _jacobi_scaled(min(k, j), a, a, y)
    return lg + 2.0 * _log_abs_scaled(mant, sc)


@njit
def _fill_jacobi(d, r, rows, cols):
    out = np.empty((rows, cols))
    for n in range(rows):
        for m in range(cols):
            out[n, m] = _log_w_jacobi(n, m, d, r)
    return out


@njit
def _fill_laguerre(x, log_base, rows, cols):
    out = np.empty((rows, cols))
    for n in range(rows):
        for m in range(cols):
            out[n, m] = _log_w_laguerre(n, m, x, log_base)
    return out


@njit
def _fill_oscillator(offset, r, rows, cols):
    out = np.empty((rows, cols))
    for n in range(rows):
        for m in range(cols):
            out[n, m] = _log_w_oscillator(2 * n + offset, 2 * m + offset, r)
    return out


def _exp(lg):
    return 0.0 if lg == -math.inf else math.exp(lg)


# ---------------------------------------------------------------------------
# scalar API
# ---------------------------------------------------------------------------


def log_w_exact(n: int, m: int, d: float, r: float) -> float:
    """ln W_n^m from the Jacobi form (-inf for an exact zero)."""
    n, m = _levels(n, m)
    return float(_log_w_jacobi(n, m, _check_d(d), _check_r(r)))


def w_exact(n: int, m: int, d: float, r: float) -> float:
    return _exp(log_w_exact(n, m, d, r))


def log_w_exact_hypergeom(n: int, m: int, d: float, r: float) -> float:
    """ln W_n^m from nu! (mu+d+1)_k r^k (1-r)^(d+1) / (mu! k!^2) F(-mu, nu+d+1; k+1; r)^2.

    The Gauss series is summed in exact rational arithmetic.  In floating
    point its alternating terms cancel catastrophically once mu r d is of
    order one, which would defeat the purpose of an independent check.
    """
    n, m = _levels(n, m)
    d = _check_d(d)
    r = _check_r(r)
    mu, nu = min(n, m), max(n, m)
    k = nu - mu
    if r == 0.0:
        return 0.0 if k == 0 else -math.inf
    f = hypergeom_terminating_log(-mu, nu + d + 1.0, k + 1.0, r)
    if f.sign == 0:
        return -math.inf
    lg = _log_poch(mu + 1.0, k) + _log_poch(mu + d + 1.0, k) - 2.0 * _lgamma(k + 1.0)
    lg += (d + 1.0) * math.log1p(-r) + 2.0 * f.log_magnitude
    if k > 0:
        lg += k * math.log(r)
    return float(lg)


def w_exact_hypergeom(n: int, m: int, d: float, r: float) -> float:
    return _exp(log_w_exact_hypergeom(n, m, d, r))


def w_oscillator(k: int, j: int, r: float) -> float:
    """Harmonic-oscillator W_k^j; exactly 0 when k and j differ in parity."""
    k, j = _levels(k, j)
    return _exp(float(_log_w_oscillator(k, j, _check_r(r))))


def oscillator_levels(n: int, m: int, d: float) -> tuple[int, int]:
    """Oscillator levels matching (n, m) at d = +1/2 (odd) or d = -1/2 (even)."""
    if d == 0.5:
        return 2 * n + 1, 2 * m + 1
    if d == -0.5:
        return 2 * n, 2 * m
    raise DomainError("the oscillator level map exists only for d = +-1/2")


def w_large_d(n: int, m: int, rd: float, d: float | None = None) -> float:
    """Large-d form mu!/nu! x^k e^-x [L_mu^k(x)]^2 with x = rd.

    With ``d`` given, r = rd/d and e^-x is replaced by (1-r)^(d+1), the
    variant that keeps the exact ground-state factor.
    """
    n, m = _levels(n, m)
    if not rd >= 0:
        raise DomainError("rd must be nonnegative")
    if d is None:
        base = -float(rd)
    else:
        if not d >= LARGE_D_MIN:
            raise DomainError(f"large-d forms need d >= {LARGE_D_MIN:g}")
        base = (d + 1.0) * math.log1p(-_check_r(rd / d))
    return _exp(float(_log_w_laguerre(n, m, float(rd), base)))


def w_rd_dominant(n: int, m: int, rd: float) -> float:
    """Leading behaviour (rd)^(n+m) e^-rd / (n! m!) once rd >> n, m."""
    n, m = _levels(n, m)
    if not rd > 0:
        raise DomainError("rd must be positive")
    return math.exp((n + m) * math.log(rd) - rd - _lgamma(n + 1.0) - _lgamma(m + 1.0))


def adiabatic_parameter(n: int, m: int, d: float, r: float) -> float:
    """r (2mn + (d+1)(m+n+1)), which must be small for the adiabatic form."""
    return r * (2.0 * m * n + (d + 1.0) * (m + n + 1.0))


def w_adiabatic(n: int, m: int, d: float, r: float) -> float:
    """First-order small-r form

        nu! Gamma(nu+d+1) / (mu! Gamma(mu+d+1)) r^k / k!^2
            * [1 - (2mn + (d+1)(m+n+1)) r / (k+1)].

    The prefactor uses factorials, which stays finite at mu = 0.
    """
    n, m = _levels(n, m)
    d = _check_d(d)
    r = _check_r(r)
    if not adiabatic_parameter(n, m, d, r) < 0.1:
        raise DomainError("adiabatic expansion needs r (2mn + (d+1)(m+n+1)) < 0.1")
    mu, nu = min(n, m), max(n, m)
    k = nu - mu
    if r == 0.0:
        return 1.0 if k == 0 else 0.0
    lg = _log_poch(mu + 1.0, k) + _log_poch(mu + d + 1.0, k) - 2.0 * _lgamma(k + 1.0)
    if k > 0:
        lg += k * math.log(r)
    bracket = 1.0 - (2.0 * m * n + (d + 1.0) * (m + n + 1.0)) * r / (k + 1.0)
    return math.exp(lg) * bracket


def leakage(n: int, d: float, r: float) -> float:
    """1 - W_n^n without the cancellation of forming W first."""
    return -math.expm1(log_w_exact(n, n, d, r))


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TransitionMatrix:
    """W[n, m] for n < rows, m < cols with truncation accounting.

    ``row_tail_bounds[n]`` bounds the probability lost to m >= cols, and
    ``row_defects[n]`` is the known normalization shortfall of an
    approximate regime (zero for the exact ones).  For every row
    1 - row_sum <= row_tail_bound + row_defect, up to rounding.
    """

    entries: np.ndarray
    regime: Regime
    d: float
    r: float
    row_sums: np.ndarray
    row_tail_bounds: np.ndarray
    row_defects: np.ndarray
    onset: np.ndarray  # first column of the certified geometric decay, -1 if none
    tail_method: str
    meta: dict = field(default_factory=dict)

    @property
    def n_max_rows(self) -> int:
        return self.entries.shape[0]

    @property
    def m_max_cols(self) -> int:
        return self.entries.shape[1]

    @property
    def tail_bound(self) -> float:
        return float(np.max(self.row_tail_bounds + self.row_defects))

    def unitarity_residuals(self) -> np.ndarray:
        return 1.0 - self.row_sums

    def sidecar(self) -> dict:
        return {
            "regime": self.regime.value,
            "d": self.d,
            "r": self.r,
            "rows": self.n_max_rows,
            "cols": self.m_max_cols,
            "row_sums": self.row_sums.tolist(),
            "row_tail_bounds": self.row_tail_bounds.tolist(),
            "row_defects": self.row_defects.tolist(),
            "tail_bound": self.tail_bound,
            "tail_method": self.tail_method,
            "onset": self.onset.tolist(),
            **self.meta,
        }


def _chernoff_tail(n, cols, x):
    # W_n^m <= 2^n (2x)^k / k! for m = n + k, from |L_mu^k(x)| <= C(mu+k, mu) e^(x/2);
    # summing k >= K0 gives at most 2^n (2ex/K0)^K0 when K0 > 2x.
    k0 = cols - n
    if k0 <= 0 or not k0 > 2.0 * x:
        return 1.0
    if x == 0.0:
        return 0.0
    lg = n * math.log(2.0) + k0 * (math.log(2.0 * math.e * x) - math.log(k0))
    return min(1.0, math.exp(lg))


def _geometric_tail(log_row):
    """Bound sum_{m >= cols} W from the observed decay of the last entries.

    Looks for the earliest column j from which the successive ratios
    W_{m+1}/W_m are below 1 and non-increasing up to the last column, then
    bounds the remainder by W_last q / (1 - q) with q the last ratio.
    Returns (bound, j); bound is 1 and j is -1 when no such run exists.
    """
    cols = log_row.size
    if cols < 3 or not np.all(np.isfinite(log_row[-3:])):
        if np.all(log_row[-3:] == -np.inf):
            return 0.0, cols
        return 1.0, -1
    lr = np.diff(log_row)  # log ratios
    if lr[-1] >= 0.0:
        return 1.0, -1
    j = lr.size - 1
    while j > 0 and np.isfinite(lr[j - 1]) and lr[j - 1] < 0.0 and lr[j - 1] >= lr[j]:
        j -= 1
    if j > lr.size - 2:  # need at least two ratios to see a trend
        return 1.0, -1
    q = math.exp(lr[-1])
    bound = math.exp(log_row[-1]) * q / (1.0 - q)
    return min(1.0, bound), int(j)


def transition_matrix(d: float, r: float, rows: int, cols: int, regime="ExactJacobi") -> TransitionMatrix:
    """Fill W_n^m for n < rows, m < cols in the requested regime.

    For the LargeD regimes ``r`` is the reflection coefficient and the
    argument is x = r d.  For Oscillator, d must be +1/2 or -1/2 and row n
    stands for oscillator level 2n+1 or 2n respectively.
    """
    regime = Regime.parse(regime)
    if not (1 <= rows <= 200 and 1 <= cols <= 200):
        raise DomainError("rows and cols must lie in [1, 200]")
    r = _check_r(r)
    d = float(d)
    meta = {}
    defects = np.zeros(rows)
    x = r * d

    if regime is Regime.EXACT_JACOBI:
        _check_d(d)
        logw = _fill_jacobi(d, r, rows, cols)
    elif regime is Regime.EXACT_HYPERGEOM:
        _check_d(d)
        logw = np.array([[log_w_exact_hypergeom(n, m, d, r) for m in range(cols)] for n in range(rows)])
    elif regime is Regime.OSCILLATOR:
        offset = oscillator_levels(0, 0, d)[0]
        logw = _fill_oscillator(offset, r, rows, cols)
        meta["levels"] = "2n+1" if offset == 1 else "2n"
    elif regime in (Regime.LARGE_D, Regime.LARGE_D_POISSON):
        if not d >= LARGE_D_MIN:
            raise DomainError(f"large-d regimes need d >= {LARGE_D_MIN:g}")
        if regime is Regime.LARGE_D:
            base = -x
        else:
            base = (d + 1.0) * math.log1p(-r)
            # rows of this variant sum to (1-r)^(d+1) e^(rd), not to 1
            defects[:] = -math.expm1(base + x)
        logw = _fill_laguerre(x, base, rows, cols)
        meta["rd"] = x
    else:  # ADIABATIC
        _check_d(d)
        worst = adiabatic_parameter(rows - 1, cols - 1, d, r)
        if not worst < 0.1:
            raise DomainError("adiabatic expansion needs r (2mn + (d+1)(m+n+1)) < 0.1 over the grid")
        w = np.array([[w_adiabatic(n, m, d, r) for m in range(cols)] for n in range(rows)])
        with np.errstate(divide="ignore"):
            logw = np.log(w)
        # dropped second-order terms; estimate of their size per row
        defects = np.array([adiabatic_parameter(n, n, d, r) ** 2 for n in range(rows)])
        meta["defect_kind"] = "second-order estimate"

    entries = np.exp(logw)
    row_sums = entries.sum(axis=1)
    bounds = np.empty(rows)
    onset = np.full(rows, -1, dtype=int)
    if r == 0.0:
        # W is the identity: nothing beyond the diagonal
        method = "exact"
        bounds[:] = np.where(np.arange(rows) < cols, 0.0, 1.0)
        onset[:] = np.minimum(np.arange(rows) + 1, cols)
    elif regime in (Regime.LARGE_D, Regime.LARGE_D_POISSON):
        method = "chernoff"
        for n in range(rows):
            bounds[n] = _chernoff_tail(n, cols, x)
            onset[n] = cols if bounds[n] < 1.0 else -1
    else:
        method = "geometric"
        for n in range(rows):
            if regime is Regime.OSCILLATOR:
                row = logw[n]
            else:
                row = logw[n, n:] if n < cols else logw[n, -3:]
            bounds[n], j = _geometric_tail(row)
            if j >= 0:
                onset[n] = j + (n if n < cols else cols - 3)
    return TransitionMatrix(
        entries=entries,
        regime=regime,
        d=d,
        r=r,
        row_sums=row_sums,
        row_tail_bounds=bounds,
        row_defects=defects,
        onset=onset,
        tail_method=method,
        meta=meta,
    )
