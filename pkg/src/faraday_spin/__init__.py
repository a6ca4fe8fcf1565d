"""Quantum model of Faraday rotation by a single electron spin.

Closed-form rotation angle and noise for mixed spin states, an exact
truncated-space oracle, classical polarization geometry and a spin-purity
estimator.
"""

from .analytic import (
    crossover_photons,
    faraday_angle,
    faraday_fluctuation,
    faraday_from_stokes,
    fluctuation_curve,
    noise_terms,
    solution_coefficients,
    theta_plus,
)
from .config import ConfigError, RunConfig, load_config, parse_config
from .estimator import (
    NoiseBudget,
    PurityEstimate,
    estimate_from_records,
    purity_from_noise,
    read_record,
    simulate_background,
    simulate_record,
    write_record,
)
from .model import (
    REFERENCE_PARAMS,
    REFERENCE_PHOTONS,
    REFERENCE_TIME,
    CoherentAmplitudes,
    PhysicalParams,
    SpinMixture,
    build_hamiltonian,
    excitation_number,
    initial_components,
    initial_density_matrix,
    stokes_operators,
)
from .operators import (
    CompositeBasis,
    ElectronLevel,
    FockTruncation,
    OperatorMatrix,
    anticommutator,
    build_annihilation,
    build_creation,
    build_number,
    build_sigma,
    commutator,
    expectation,
)
from .oracle import SpectralDecomposition, evolve_density, faraday_exact, heisenberg_residual
from .polarization import (
    JonesVector,
    PolarizationEllipse,
    StokesVector,
    circular_to_jones,
    classify,
    ellipse_to_stokes,
    jones_to_circular,
    jones_to_stokes,
    rotation_in_s1_s2,
    stokes_to_ellipse,
)
from .sweeps import run_sweep

__version__ = "0.1.0"
