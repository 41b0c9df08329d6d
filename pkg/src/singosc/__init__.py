"""Time-dependent singular oscillator: mode functions, state densities and
transition probabilities for the relative motion of two trapped ions."""

__version__ = "0.1.0"

from ._accel import JIT_ENABLED
from .classical_mode import (
    BogoliubovPair,
    Constant,
    FrequencyProfile,
    IntegrationError,
    ModeState,
    ParametricResonance,
    Tabulated,
    Trajectory,
    bogoliubov,
    initial_mode,
    integrate_mode,
    reflection_coefficient,
    reflection_for_profile,
    resonance_mode,
    tanh_ramp,
)
from .specfun import DomainError, LogValue
from .states import (
    AlphaState,
    DensityGrid,
    NumberState,
    StateSpec,
    ZState,
    alpha_state_density,
    evaluate_density,
    mean_B_alpha,
    mean_x2_alpha,
    mean_x2_z,
    moments,
    psi_n,
    psi_n_density,
    psi_n_density_asymptotic,
    z_state_density,
)
from .transitions import (
    Regime,
    TransitionMatrix,
    leakage,
    transition_matrix,
    w_adiabatic,
    w_exact,
    w_exact_hypergeom,
    w_large_d,
    w_oscillator,
    w_rd_dominant,
)
from .trap_model import ModelParameters, TrapParameters, effective_params, potentials

__all__ = [name for name in dir() if not name.startswith("_")]
