import numpy as np
import pytest

from faraday_spin.model import (
    REFERENCE_PARAMS,
    REFERENCE_TIME,
    CoherentAmplitudes,
    PhysicalParams,
    SpinMixture,
    build_hamiltonian,
    excitation_number,
    initial_density_matrix,
    stokes_operators,
)
from faraday_spin.operators import CompositeBasis, expectation
from faraday_spin.oracle import (
    OracleReport,
    SpectralDecomposition,
    evolve_density,
    faraday_exact,
    heisenberg_residual,
)

AMPS = CoherentAmplitudes.linear_45(1.0)


@pytest.fixture(scope="module")
def basis():
    return CompositeBasis.symmetric(14)


@pytest.fixture(scope="module")
def spectral(basis):
    return SpectralDecomposition.of(build_hamiltonian("total", REFERENCE_PARAMS, basis))


@pytest.fixture(scope="module")
def rho_mixed(basis):
    return initial_density_matrix(AMPS, SpinMixture(0.3), basis)


def test_decomposition_quality(spectral):
    assert spectral.reconstruction_error() < 1e-9
    assert spectral.unitarity_error() < 1e-10


def test_non_hermitian_hamiltonian_rejected(small_basis):
    H = np.triu(np.ones((small_basis.dim, small_basis.dim)))
    with pytest.raises(ValueError, match="Hermitian"):
        SpectralDecomposition.of(H)


def test_evolve_at_zero_time(spectral, rho_mixed):
    assert np.array_equal(evolve_density(rho_mixed, spectral, 0.0), rho_mixed)


def test_diagonal_commuting_case():
    rng = np.random.default_rng(5)
    H = np.diag(rng.normal(size=6))
    p = rng.uniform(size=6)
    rho = np.diag(p / p.sum())
    out = evolve_density(rho, H, 3.7)
    assert np.allclose(out, rho, atol=1e-15)


def test_evolution_preserves_trace_and_spectrum(spectral, rho_mixed):
    rho_t = evolve_density(rho_mixed, spectral, REFERENCE_TIME)
    assert abs(np.trace(rho_t) - 1) < 1e-10
    assert np.max(np.abs(rho_t - rho_t.conj().T)) < 1e-12
    before = np.linalg.eigvalsh(rho_mixed)
    after = np.linalg.eigvalsh(rho_t)
    assert np.max(np.abs(before - after)) < 1e-8


def test_free_evolution_keeps_stokes(basis):
    params = PhysicalParams(lam=1e-3, omega_p=REFERENCE_PARAMS.omega_p, omega_e=REFERENCE_PARAMS.omega_e)
    sd = SpectralDecomposition.of(build_hamiltonian("total", params, basis))
    rho = initial_density_matrix(AMPS, SpinMixture(1.0), basis)
    S = stokes_operators(basis)
    for t in (REFERENCE_TIME, 3 * REFERENCE_TIME):
        rho_t = sd.evolve_density(rho, t)
        for Si in S:
            assert expectation(Si, rho_t, check=False) == pytest.approx(expectation(Si, rho, check=False), abs=1e-9)


def test_excitation_number_conserved(basis, spectral, rho_mixed):
    N = excitation_number(basis)
    n0 = expectation(N, rho_mixed)
    for t in (REFERENCE_TIME / 3, REFERENCE_TIME, 5 * REFERENCE_TIME):
        nt = expectation(N, spectral.evolve_density(rho_mixed, t), check=False)
        assert abs(nt - n0) <= 1e-9 * abs(n0)


def test_schroedinger_heisenberg_equivalence(basis, spectral, rho_mixed):
    S1 = stokes_operators(basis)[1]
    schr = expectation(S1, spectral.evolve_density(rho_mixed, REFERENCE_TIME), check=False)
    heis = np.einsum("ij,ji->", spectral.heisenberg(S1, REFERENCE_TIME), rho_mixed).real
    assert heis == pytest.approx(schr, rel=1e-9)


def test_exact_angle_zero_at_t0(basis, spectral):
    r = faraday_exact(REFERENCE_PARAMS, AMPS, SpinMixture(1.0), basis, 0.0, spectral=spectral, residual=False)
    assert abs(r.theta_exact) < 1e-15
    assert r.s2 == pytest.approx(r.s0)


def test_exact_angle_cancels_when_fully_mixed(basis, spectral):
    r = faraday_exact(REFERENCE_PARAMS, AMPS, SpinMixture(0.5), basis, REFERENCE_TIME, spectral=spectral, residual=False)
    assert abs(r.theta_exact) <= 1e-9
    assert r.theta_analytic == 0.0


def test_exact_angle_tracks_operator_solution(basis, spectral):
    up = faraday_exact(REFERENCE_PARAMS, AMPS, SpinMixture(1.0), basis, REFERENCE_TIME, spectral=spectral, residual=False)
    down = faraday_exact(REFERENCE_PARAMS, AMPS, SpinMixture(0.0), basis, REFERENCE_TIME, spectral=spectral, residual=False)
    assert up.relative_heisenberg_error < 0.01
    assert down.theta_exact == pytest.approx(-up.theta_exact, rel=1e-9)
    # the trace formula gives half the closed-form angle (one mode is phase shifted, not two)
    assert up.theta_exact / up.theta_analytic == pytest.approx(0.5, abs=0.005)


def test_mixture_linearity_in_oracle(basis, spectral):
    kw = dict(spectral=spectral, residual=False)
    up = faraday_exact(REFERENCE_PARAMS, AMPS, SpinMixture(1.0), basis, REFERENCE_TIME, **kw).theta_exact
    down = faraday_exact(REFERENCE_PARAMS, AMPS, SpinMixture(0.0), basis, REFERENCE_TIME, **kw).theta_exact
    mid = faraday_exact(REFERENCE_PARAMS, AMPS, SpinMixture(0.8), basis, REFERENCE_TIME, **kw).theta_exact
    assert mid == pytest.approx(0.8 * up + 0.2 * down, rel=1e-9)


def test_intrinsic_noise_in_oracle(basis, spectral):
    # variance of a two-component mixture: shot part plus tau(1-tau)(spread)^2
    kw = dict(spectral=spectral, residual=False)
    up = faraday_exact(REFERENCE_PARAMS, AMPS, SpinMixture(1.0), basis, REFERENCE_TIME, **kw)
    mixed = faraday_exact(REFERENCE_PARAMS, AMPS, SpinMixture(0.5), basis, REFERENCE_TIME, **kw)
    intrinsic2 = mixed.fluctuation_exact**2 - up.fluctuation_exact**2
    assert np.sqrt(intrinsic2) == pytest.approx(abs(up.theta_exact), rel=0.02)


def test_denominator_guard(basis, spectral):
    flat = CoherentAmplitudes(1.0, 1.0, 0.0, 0.0)  # horizontal light: <S2> = 0
    with pytest.raises(ValueError, match="too small"):
        faraday_exact(REFERENCE_PARAMS, flat, SpinMixture(1.0), basis, 0.0, spectral=spectral, residual=False)


def test_residual_vanishes_at_t0(basis, spectral):
    assert heisenberg_residual(REFERENCE_PARAMS, basis, 0.0, spectral=spectral) < 1e-12


def test_residual_vanishes_without_coupling():
    b = CompositeBasis.symmetric(6)
    p = PhysicalParams(lam=1.0, omega_p=REFERENCE_PARAMS.omega_p, omega_e=REFERENCE_PARAMS.omega_e)
    assert heisenberg_residual(p, b, REFERENCE_TIME) < 1e-9


def test_residual_converges_when_coupling_halves(basis, spectral):
    r1 = heisenberg_residual(REFERENCE_PARAMS, basis, REFERENCE_TIME, spectral=spectral)
    r2 = heisenberg_residual(REFERENCE_PARAMS.scaled(0.5), basis, REFERENCE_TIME)
    assert r2 <= r1 / 2
    assert heisenberg_residual(REFERENCE_PARAMS, basis, REFERENCE_TIME, spectral=spectral, mode="R") == pytest.approx(r1, rel=1e-6)


def test_doubled_splitting_breaks_the_dispersive_solution(basis):
    sd = SpectralDecomposition.of(build_hamiltonian("total", REFERENCE_PARAMS, basis, splitting="doubled"))
    r = faraday_exact(REFERENCE_PARAMS, AMPS, SpinMixture(1.0), basis, REFERENCE_TIME, spectral=sd, residual=False)
    assert abs(r.theta_exact) < 0.01 * abs(r.theta_heisenberg)


def test_lab_and_rotating_frames_agree(basis, spectral):
    from faraday_spin.model import excitation_number

    H = build_hamiltonian("total", REFERENCE_PARAMS, basis).data - REFERENCE_PARAMS.omega_p * excitation_number(basis).data
    rot = SpectralDecomposition.of(H)
    kw = dict(residual=False)
    a = faraday_exact(REFERENCE_PARAMS, AMPS, SpinMixture(1.0), basis, REFERENCE_TIME, spectral=spectral, **kw)
    b = faraday_exact(REFERENCE_PARAMS, AMPS, SpinMixture(1.0), basis, REFERENCE_TIME, spectral=rot, **kw)
    # lab-frame eigenphases reach omega_p * t ~ 5e4 rad, costing ~1e-11 absolute per phase
    assert b.theta_exact == pytest.approx(a.theta_exact, rel=1e-7)


def test_report_rejects_non_finite():
    with pytest.raises(ValueError):
        OracleReport(float("nan"), 0, 0, 0, 0, 0, 1, 0, 1, REFERENCE_PARAMS, 0.0, 1.0, 4, 2.0)
    with pytest.raises(ValueError):
        OracleReport(0, 1, 0, 0, 0, -1.0, 1, 0, 1, REFERENCE_PARAMS, 0.0, 1.0, 4, 2.0)
