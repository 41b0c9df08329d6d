import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose
from scipy.integrate import quad

from singosc.classical_mode import ModeState, initial_mode, resonance_mode
from singosc.specfun import DomainError
from singosc.states import (
    AlphaState,
    NumberState,
    StateSpec,
    ZState,
    alpha_state_density,
    evaluate_density,
    gaussian_x2_density,
    mean_B_alpha,
    mean_x2_alpha,
    mean_x2_z,
    moments,
    psi_n,
    psi_n_density,
    psi_n_density_asymptotic,
    x_grid,
    z_state_density,
    z_state_width,
)

UNIT = ModeState(0.0, 1.0 + 0j, 1j)
RES = resonance_mode(0.02, 13.7)


def mode_with_s(s):
    # a mode with |eps|^2 = s and exact Wronskian
    return ModeState(0.0, complex(math.sqrt(s)), 1j / math.sqrt(s))


def normalization(fn, centre_x2, sd_x2):
    lo = math.sqrt(max(centre_x2 - 16 * sd_x2, 0.0)) or 1e-12
    hi = math.sqrt(centre_x2 + 16 * sd_x2)
    pts = np.sqrt(np.linspace(lo**2, hi**2, 40))[1:-1]
    val, _ = quad(fn, lo, hi, points=pts, limit=500, epsabs=1e-13, epsrel=1e-12)
    return val


# -- number states ----------------------------------------------------------


def test_ground_state_example():
    assert_allclose(psi_n_density(0, 2.0, UNIT, 1.0), math.exp(-1.0), rtol=1e-14)


def test_number_density_oracle(oracle):
    for n, d, s, x, want in oracle["number_density"]:
        assert_allclose(psi_n_density(n, d, mode_with_s(s), x), want, rtol=1e-9, err_msg=str((n, d, s, x)))


def test_density_vanishes_at_origin():
    for n in (0, 3):
        for d in (0.75, 4.0, 1e5):
            assert psi_n_density(n, d, RES, 1e-8) < 1e-12


def test_ground_state_peak_large_d():
    d = 1e5
    x = np.sqrt(np.linspace(d - 2000, d + 2000, 40001))
    peak = x[np.argmax(psi_n_density(0, d, UNIT, x))]
    assert abs(peak - math.sqrt(d + 0.5)) < 0.01


@pytest.mark.parametrize("d", [2.0, 10.0, 1e3, 1e5])
@pytest.mark.parametrize("n", [0, 1, 2, 5])
def test_number_state_normalization(n, d):
    s = RES.abs_eps_sq
    val = normalization(lambda x: psi_n_density(n, d, RES, x), s * (d + 1 + 2 * n), s * math.sqrt(d + 1 + 2 * n) * (1 + n))
    assert abs(val - 1) <= 1e-6


@pytest.mark.parametrize("d", [1e3, 1e5])
@pytest.mark.parametrize("n", [0, 1, 2, 5])
def test_asymptotic_normalization(n, d):
    s = RES.abs_eps_sq
    val = normalization(lambda x: psi_n_density_asymptotic(n, d, RES, x), s * (d + 1), s * math.sqrt(d) * (1 + n))
    assert abs(val - 1) <= 1e-6


@pytest.mark.parametrize("pair", [(0, 1), (1, 3), (2, 5), (0, 4)])
@pytest.mark.parametrize("d", [1.5, 4.0, 10.0])
def test_orthogonality(pair, d):
    a, b = pair
    def part(fn):
        return quad(lambda x: fn(psi_n(a, d, RES, x) * np.conj(psi_n(b, d, RES, x))), 1e-12, 40, limit=400)[0]
    assert abs(part(np.real)) <= 1e-6 and abs(part(np.imag)) <= 1e-6
    assert_allclose(quad(lambda x: abs(psi_n(a, d, RES, x)) ** 2, 1e-12, 40, limit=400)[0], 1.0, atol=1e-6)


def _near_peak(exact, threshold):
    return exact > threshold * exact.max()


def _x_support(d, s, n):
    return np.sqrt(np.linspace(max(s * (d + 1) - 8 * s * math.sqrt(d) * (1 + n), 1.0), s * (d + 1) + 8 * s * math.sqrt(d) * (1 + n), 20001))


@pytest.mark.parametrize("n", range(6))
def test_asymptotic_matches_exact_in_bulk(n):
    # pointwise error, measured against the peak, is O((1+n)^2 / sqrt(d)):
    # the Gaussian misses the Gamma skewness and the 2n shift of the centre
    d = 1e5
    x = _x_support(d, RES.abs_eps_sq, n)
    ex = psi_n_density(n, d, RES, x)
    asy = psi_n_density_asymptotic(n, d, RES, x)
    assert np.max(np.abs(asy - ex)) / ex.max() <= (1 + n) ** 2 / math.sqrt(d)


@pytest.mark.xfail(strict=True, reason="Gamma-vs-Gaussian skewness: >= 7% at 1e-4 of the peak for d=1e5, more near nodes for n > 0")
@pytest.mark.parametrize("n", range(6))
def test_asymptotic_matches_exact_to_1e4_of_peak(n):
    d = 1e5
    x = _x_support(d, RES.abs_eps_sq, n)
    ex = psi_n_density(n, d, RES, x)
    asy = psi_n_density_asymptotic(n, d, RES, x)
    mask = _near_peak(ex, 1e-4)
    assert np.max(np.abs(asy[mask] / ex[mask] - 1)) <= 0.01


def test_asymptotic_ground_state_centre():
    d = 1e5
    s = RES.abs_eps_sq
    x = np.sqrt(s * np.linspace(d - 3000, d + 3000, 60001))
    dens = psi_n_density_asymptotic(0, d, RES, x)
    # peak of (2x/s) exp(-y^2/(2 s^2 d)) sits where y = s^2 d / (2 x^2) ~ s/2
    assert abs(x[np.argmax(dens)] ** 2 - s * (d + 1) - s / 2) < 0.01 * s


def test_asymptotic_preconditions():
    with pytest.raises(DomainError):
        psi_n_density_asymptotic(0, 500.0, UNIT, 1.0)
    with pytest.raises(DomainError):
        psi_n_density_asymptotic(40, 1e3, UNIT, 30.0)


def test_domain_errors():
    with pytest.raises(DomainError):
        psi_n_density(0, 2.0, UNIT, 0.0)
    with pytest.raises(DomainError):
        psi_n_density(0, 0.4, UNIT, 1.0)
    with pytest.raises(DomainError):
        psi_n_density(-1, 2.0, UNIT, 1.0)


# -- alpha states -----------------------------------------------------------


@pytest.mark.parametrize("d", [0.75, 10.0, 1e5])
def test_alpha_zero_is_ground_state(d):
    x = x_grid(d, RES.abs_eps_sq, 31)
    if d < 1e3:
        assert_allclose(alpha_state_density(0j, d, RES, x), psi_n_density(0, d, RES, x), rtol=1e-13)
    else:
        # Gaussian branch centred at 1 + d with width sqrt(d) for |eps| = 1
        dens = alpha_state_density(0j, d, UNIT, x)
        v = x * x - (1 + d)
        assert_allclose(dens, 2 * x / math.sqrt(2 * math.pi * d) * np.exp(-v * v / (2 * d)), rtol=1e-12)


def test_alpha_density_oracle(oracle):
    for ar, ai, d, t, x, want in oracle["alpha_density"]:
        mode = initial_mode(1.0, t)
        assert_allclose(alpha_state_density(complex(ar, ai), d, mode, x), want, rtol=1e-10)


@pytest.mark.parametrize("alpha", [1.0, 0.8 + 0.9j, 2.0 - 1.0j])
def test_alpha_normalization_and_mean(alpha):
    d = 10.0
    val = quad(lambda x: alpha_state_density(alpha, d, UNIT, x), 1e-12, 12.0, limit=400)[0]
    assert abs(val - 1) <= 1e-6
    m2 = quad(lambda x: x * x * alpha_state_density(alpha, d, RES, x), 1e-12, 30.0, limit=400)[0]
    assert_allclose(m2, mean_x2_alpha(alpha, d, RES), rtol=1e-9)


def test_alpha_gap_rejected():
    for d in (50.5, 200.0, 999.0):
        with pytest.raises(DomainError):
            alpha_state_density(1.0, d, UNIT, 10.0)
        with pytest.raises(DomainError):
            mean_B_alpha(1.0, d)


def test_mean_B_alpha(oracle):
    assert_allclose(mean_B_alpha(0j, 7.0), 8.0, rtol=1e-15)
    assert_allclose(mean_B_alpha(1e-5, 7.0), 8.0, rtol=1e-9)
    d = 1e5
    assert_allclose(mean_B_alpha((2 * d) ** 0.25, d), 2 + d, rtol=1e-15)
    for d, z, want in oracle["mean_B_alpha"]:
        assert_allclose(mean_B_alpha(math.sqrt(z), d), want, rtol=1e-12)


@pytest.mark.parametrize("d", [1e3, 1e4, 1e5])
def test_relative_width(d):
    mean = mean_x2_alpha(0.5, d, RES)
    sd = RES.abs_eps_sq * math.sqrt(d)
    assert abs((sd / mean) * math.sqrt(d) - 1) <= 0.1


# -- z states ---------------------------------------------------------------


def test_z_zero_is_ground_state():
    x = x_grid(7.0, RES.abs_eps_sq, 41)
    assert_allclose(z_state_density(0j, 7.0, RES, x), psi_n_density(0, 7.0, RES, x), rtol=1e-13)


def test_z_density_oracle(oracle):
    for zr, zi, d, k, t, x, mode_parts, want in oracle["z_density"]:
        er, ei, dr, di = mode_parts
        mode = ModeState(t, complex(er, ei), complex(dr, di))
        assert_allclose(z_state_density(complex(zr, zi), d, mode, x), want, rtol=1e-9)


@settings(max_examples=40, deadline=None)
@given(
    st.floats(min_value=0.0, max_value=0.9),
    st.floats(min_value=0, max_value=2 * math.pi),
    st.sampled_from([0.75, 3.0, 40.0, 1e3, 1e5]),
)
def test_z_state_normalization(rad, phase, d):
    z = rad * complex(math.cos(phase), math.sin(phase))
    sz = z_state_width(z, RES)
    val = normalization(lambda x: z_state_density(z, d, RES, x), sz * (d + 1), sz * math.sqrt(d + 1))
    assert abs(val - 1) <= 1e-6


def test_z_state_mean_x2():
    z, d = 0.4 - 0.3j, 6.0
    m2 = quad(lambda x: x * x * z_state_density(z, d, RES, x), 1e-12, 40, limit=400)[0]
    assert_allclose(m2, mean_x2_z(z, d, RES), rtol=1e-10)


def test_z_state_rejects_unit_modulus():
    with pytest.raises(DomainError):
        z_state_density(1.0, 3.0, UNIT, 1.0)


def test_z_state_gaussian_in_bulk():
    d, z = 1e5, 0.05 + 0.02j
    x = np.sqrt(np.linspace(0.8 * d, 1.2 * d, 20001))
    ex = z_state_density(z, d, RES, x)
    gauss = gaussian_x2_density(mean_x2_z(z, d, RES), z_state_width(z, RES), d, x)
    mask = ex > 0.1 * ex.max()
    assert np.max(np.abs(gauss[mask] / ex[mask] - 1)) <= 0.02


@pytest.mark.xfail(strict=True, reason="same Gamma skewness as the number states: ~7% at 1e-4 of the peak")
def test_z_state_gaussian_to_1e4_of_peak():
    d, z = 1e5, 0.05 + 0.02j
    x = np.sqrt(np.linspace(0.8 * d, 1.2 * d, 20001))
    ex = z_state_density(z, d, RES, x)
    gauss = gaussian_x2_density(mean_x2_z(z, d, RES), z_state_width(z, RES), d, x)
    mask = ex > 1e-4 * ex.max()
    assert np.max(np.abs(gauss[mask] / ex[mask] - 1)) <= 0.01


# -- moments ----------------------------------------------------------------


def test_moments_constant_mode():
    for omega in (1.0, 2.5):
        for t in (0.0, 1.3):
            m = initial_mode(omega, t)
            x2, _, _ = moments(7.0, 0j, m)
            assert_allclose(x2, 7.0 / omega, rtol=1e-14)
    n, d, omega = 3, 4.5, 2.0
    x2, energy, xp = moments(2 * n + d + 1, 0j, initial_mode(omega, 0.7))
    assert_allclose(x2, (2 * n + d + 1) / omega, rtol=1e-14)
    assert_allclose(energy, 0.5 * (2 * n + d + 1) * omega, rtol=1e-14)
    assert abs(xp) < 1e-13


def test_moments_alpha_large_d():
    d, alpha = 1e5, 3.0 + 1.0j
    B = 1 + d + abs(alpha) ** 4 / (2 * d)
    x2, _, _ = moments(B, alpha.conjugate() ** 2, RES)
    assert_allclose(x2, mean_x2_alpha(alpha, d, RES), rtol=1e-15)


# -- grids ------------------------------------------------------------------


def test_density_grid_integral():
    d = 1e3
    spec = StateSpec(NumberState(2), d)
    x = x_grid(d, RES.abs_eps_sq, 4001, width=8.0)
    grid = evaluate_density(spec, RES, x)
    assert grid.regime == "exact"
    assert 0.99 <= grid.integral() <= 1.01
    assert np.all(grid.density >= 0)
    assert evaluate_density(StateSpec(ZState(0.3), d), RES, x).regime == "exact"
    assert evaluate_density(StateSpec(AlphaState(1.0), 1e3), RES, x).regime == "asymptotic"


def test_state_spec_validation():
    with pytest.raises(DomainError):
        StateSpec(NumberState(1), 0.5)
    with pytest.raises(DomainError):
        ZState(1.5j)
    with pytest.raises(DomainError):
        evaluate_density(StateSpec(NumberState(0), 3.0), UNIT, np.array([2.0, 1.0]))
