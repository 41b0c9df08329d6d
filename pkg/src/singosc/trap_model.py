"""Map a two-ion trap onto the singular-oscillator surrogate.

The relative coordinate of two ions in a linear trap feels

    V(x)   = mu omega^2 x^2 / 2 + kc / x          (true Coulomb repulsion)
    V_g(x) = mu omega_g^2 x^2 / 2 + g / x^2       (solvable surrogate)

with kc = q^2 / (4 pi eps0).  The surrogate parameters are fixed by putting
both minima at the same place with the same curvature, which gives
omega_g = (sqrt 3 / 2) omega, g = (3/8) (kc^4 / (mu omega^2))^(1/3) and a
surrogate minimum exactly half as deep as the true one.

Inputs are SI-flavoured (volts, metres, electron masses).  Everything is
converted with CODATA constants from :mod:`scipy.constants`.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from scipy import constants as C

from .specfun import DomainError

__all__ = ["TrapParameters", "ModelParameters", "effective_params", "potentials"]


@dataclass(frozen=True)
class TrapParameters:
    reduced_mass_ratio: float  # mu / m_e
    voltage_V: float
    half_spacing_m: float
    charge: float = 1.0  # in units of e

    def __post_init__(self):
        for name in ("reduced_mass_ratio", "voltage_V", "half_spacing_m", "charge"):
            v = getattr(self, name)
            if not (v > 0 and math.isfinite(v)):
                raise DomainError(f"{name} must be positive and finite")

    @property
    def mu(self) -> float:
        return self.reduced_mass_ratio * C.m_e

    @property
    def q(self) -> float:
        return self.charge * C.e

    @property
    def coulomb_k(self) -> float:
        return self.q**2 / (4.0 * math.pi * C.epsilon_0)


@dataclass(frozen=True)
class ModelParameters:
    omega: float  # rad/s
    omega_g: float  # rad/s
    g_SI: float  # J m^2
    g_star: float
    d: float
    n_max: float
    x_e: float  # m
    x_g: float  # m
    Omega_e: float  # rad/s
    Omega_g: float  # rad/s
    V_min: float  # J
    Vg_min: float  # J
    mu: float  # kg
    coulomb_k: float  # J m
    g_star_rydberg: float  # same g* via Rydberg / Bohr radius, cross-check
    n_max_alt: float  # 3 (mu kc^2 / (hbar^3 omega))^(1/9)
    n_max_order_of_magnitude: bool = True

    def to_dict(self) -> dict:
        return asdict(self)


def effective_params(trap: TrapParameters) -> ModelParameters:
    mu = trap.mu
    kc = trap.coulomb_k
    hbar = C.hbar

    omega_sq = trap.q * trap.voltage_V / (2.0 * mu * trap.half_spacing_m**2)
    omega = math.sqrt(omega_sq)
    x_e = (kc / (mu * omega_sq)) ** (1.0 / 3.0)
    omega_g = 0.5 * math.sqrt(3.0) * omega
    g = 0.375 * (kc**4 / (mu * omega_sq)) ** (1.0 / 3.0)
    g_star = 0.75 * (mu**2 * kc**4 / (hbar**6 * omega_sq)) ** (1.0 / 3.0)
    x_g = (2.0 * g / (mu * omega_g**2)) ** 0.25

    # g* = (3 mu / 4 m) [4 Ry / (e U) (L / a_B)^2]^(1/3) for unit charge,
    # and g* scales as Z^(7/3) with the ion charge.
    ry = C.physical_constants["Rydberg constant times hc in J"][0]
    a_b = C.physical_constants["Bohr radius"][0]
    g_star_ry = (
        0.75
        * trap.reduced_mass_ratio
        * (4.0 * ry / (C.e * trap.voltage_V) * (trap.half_spacing_m / a_b) ** 2) ** (1.0 / 3.0)
        * trap.charge ** (7.0 / 3.0)
    )

    v_min = 1.5 * mu * omega_sq * x_e**2
    vg_min = 0.5 * mu * omega_g**2 * x_g**2 + g / x_g**2
    return ModelParameters(
        omega=omega,
        omega_g=omega_g,
        g_SI=g,
        g_star=g_star,
        d=0.5 * math.sqrt(1.0 + 4.0 * g_star),
        n_max=3.0 * g_star ** (1.0 / 6.0),
        x_e=x_e,
        x_g=x_g,
        Omega_e=math.sqrt(3.0) * omega,
        Omega_g=2.0 * omega_g,
        V_min=v_min,
        Vg_min=vg_min,
        mu=mu,
        coulomb_k=kc,
        g_star_rydberg=g_star_ry,
        n_max_alt=3.0 * (mu * kc**2 / (hbar**3 * omega)) ** (1.0 / 9.0),
    )


def potentials(params: ModelParameters, x: float) -> tuple[float, float]:
    """(V(x), V_g(x)) in joules for separation x in metres."""
    if not x > 0:
        raise DomainError("separation must be positive")
    mu = params.mu
    v = 0.5 * mu * params.omega**2 * x**2 + params.coulomb_k / x
    vg = 0.5 * mu * params.omega_g**2 * x**2 + params.g_SI / x**2
    return v, vg
