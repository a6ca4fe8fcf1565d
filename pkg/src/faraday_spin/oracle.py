"""Exact evolution on the truncated space, used to check the closed forms.

The time-independent Hamiltonian is diagonalized once; ``exp(-iHt)`` for any
``t`` then follows from the spectrum.  Operator-level comparisons with the
weak-coupling solution are made in the frame rotating at the probe frequency,
i.e. after removing the scalar free phase ``exp(i omega_p t)`` from
``a^dagger(t)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import tolerances as tol
from .analytic import faraday_angle, faraday_fluctuation, solution_coefficients
from .model import (
    CoherentAmplitudes,
    PhysicalParams,
    SpinMixture,
    build_hamiltonian,
    initial_components,
    stokes_operators,
)
from .operators import (
    CompositeBasis,
    OperatorMatrix,
    build_annihilation,
    build_sigma,
    is_hermitian,
    validate_density_matrix,
)

__all__ = [
    "SpectralDecomposition",
    "OracleReport",
    "evolve_density",
    "faraday_exact",
    "heisenberg_residual",
    "approximate_creation_operators",
]


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenpairs of a Hermitian Hamiltonian, ``H = V diag(E) V^dagger``."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    source: np.ndarray

    @classmethod
    def of(cls, H) -> SpectralDecomposition:
        h = H.data if isinstance(H, OperatorMatrix) else np.asarray(H, dtype=complex)
        if not is_hermitian(h):
            raise ValueError("Hamiltonian is not Hermitian")
        E, V = np.linalg.eigh(h)
        return cls(E, V, h)

    def reconstruction_error(self) -> float:
        V, E = self.eigenvectors, self.eigenvalues
        err = np.max(np.abs((V * E) @ V.conj().T - self.source))
        return float(err / np.max(np.abs(self.source)))

    def unitarity_error(self) -> float:
        V = self.eigenvectors
        return float(np.max(np.abs(V.conj().T @ V - np.eye(V.shape[0]))))

    def propagator(self, t: float) -> np.ndarray:
        V = self.eigenvectors
        return (V * np.exp(-1j * self.eigenvalues * t)) @ V.conj().T

    def evolve_ket(self, psi: np.ndarray, t: float) -> np.ndarray:
        V = self.eigenvectors
        return V @ (np.exp(-1j * self.eigenvalues * t) * (V.conj().T @ psi))

    def evolve_density(self, rho: np.ndarray, t: float) -> np.ndarray:
        if t == 0:
            return np.array(rho, dtype=complex)
        U = self.propagator(t)
        return U @ rho @ U.conj().T

    def heisenberg(self, A, t: float) -> np.ndarray:
        """``U^dagger A U``."""
        a = A.data if isinstance(A, OperatorMatrix) else np.asarray(A)
        U = self.propagator(t)
        return U.conj().T @ a @ U


def _spectral(H) -> SpectralDecomposition:
    return H if isinstance(H, SpectralDecomposition) else SpectralDecomposition.of(H)


def evolve_density(rho0, H, t: float) -> np.ndarray:
    """``U rho0 U^dagger`` with ``U = exp(-iHt)``; ``H`` may be pre-decomposed."""
    rho0 = validate_density_matrix(rho0)
    sd = _spectral(H)
    if sd.source.shape != rho0.shape:
        raise ValueError(f"dimension mismatch: H {sd.source.shape} vs rho {rho0.shape}")
    return sd.evolve_density(rho0, t)


@dataclass(frozen=True)
class OracleReport:
    """Exact versus closed-form rotation angle and fluctuation at one point.

    ``theta_heisenberg`` is the trace formula evaluated with the weak-coupling
    photon operators instead of the exact ones, which separates errors of the
    operator solution from errors of the final closed form.
    """

    theta_exact: float
    theta_analytic: float
    theta_heisenberg: float
    fluctuation_exact: float
    fluctuation_analytic: float
    operator_residual: float
    s0: float
    s1: float
    s2: float
    params: PhysicalParams
    t: float
    tau: float
    cutoff: int
    mean_photons: float

    def __post_init__(self):
        for name in ("theta_exact", "theta_analytic", "fluctuation_exact", "fluctuation_analytic", "operator_residual"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} is not finite")
        if self.operator_residual < 0:
            raise ValueError("operator_residual must be nonnegative")

    @property
    def alpha(self) -> float:
        return self.params.lam / self.params.detuning

    @property
    def relative_theta_error(self) -> float:
        """``|theta_exact - theta_analytic| / |theta_analytic|``."""
        return abs(self.theta_exact - self.theta_analytic) / abs(self.theta_analytic)

    @property
    def relative_heisenberg_error(self) -> float:
        return abs(self.theta_exact - self.theta_heisenberg) / abs(self.theta_heisenberg)


def approximate_creation_operators(params: PhysicalParams, basis: CompositeBasis, t: float):
    """Weak-coupling ``a_L^dagger(t)`` and ``a_R^dagger(t)`` in the rotating frame.

    ``a^dagger(t) = exp(-i t Omega sigma_z) a^dagger + g(t) (sigma_+ + alpha sigma_z a^dagger)``
    for each channel.
    """
    c = solution_coefficients(params, t)
    g = c.g
    out = []
    for mode, ch in (("L", "u"), ("R", "d")):
        ad = build_annihilation(mode, basis).dag().data
        sz = build_sigma(ch + "z", basis).data
        sp = build_sigma(ch + "+", basis).data
        zdiag = np.real(np.diag(sz))  # sigma_z is diagonal
        phase = np.exp(-1j * t * c.omega_shift * zdiag)
        out.append(phase[:, None] * ad + g * (sp + c.alpha * zdiag[:, None] * ad))
    return tuple(out)


def _trace_angle(adL: np.ndarray, adR: np.ndarray, components) -> tuple[float, float]:
    # <a_L^dag a_R> = <a_L k | a_R k>, with a = (a^dag)^dag
    s1 = s2 = 0.0
    for p, k in components:
        lr = np.vdot(adL.conj().T @ k, adR.conj().T @ k)
        s1 += p * 2 * lr.real
        s2 += p * -2 * lr.imag
    return s1, s2


def faraday_exact(
    params: PhysicalParams,
    amps: CoherentAmplitudes,
    mix: SpinMixture,
    basis: CompositeBasis,
    t: float,
    *,
    spectral: SpectralDecomposition | None = None,
    tail_tol: float = tol.FOCK_TAIL_TOL,
    residual: bool = True,
) -> OracleReport:
    """Exact rotation angle and fluctuation after interaction time ``t``.

    The initial state is evolved in the Schroedinger picture and
    ``theta = <S1> / (2 <S2>)``, ``dtheta = sqrt(<S1^2> - <S1>^2) / (2 <S2>)``.
    Pass ``spectral`` to reuse one decomposition across times and mixtures.
    """
    if spectral is None:
        spectral = SpectralDecomposition.of(build_hamiltonian("total", params, basis))
    components = initial_components(amps, mix, basis, tail_tol)
    S0, S1, S2, _ = stokes_operators(basis)

    s0 = s1 = s2 = s11 = 0.0
    for p, ket in components:
        psi = spectral.evolve_ket(ket, t)
        s0 += p * np.vdot(psi, S0.data @ psi).real
        v1 = S1.data @ psi
        s1 += p * np.vdot(psi, v1).real
        s11 += p * np.vdot(v1, v1).real
        s2 += p * np.vdot(psi, S2.data @ psi).real

    if not abs(s2) > 1e-9 * s0:
        raise ValueError(f"<S2> = {s2:.3e} is too small relative to <S0> = {s0:.3e}")

    theta = s1 / (2 * s2)
    fluct = math.sqrt(max(s11 - s1**2, 0.0)) / (2 * s2)

    adL, adR = approximate_creation_operators(params, basis, t)
    h1, h2 = _trace_angle(adL, adR, components)

    res = heisenberg_residual(params, basis, t, spectral=spectral) if residual else 0.0
    return OracleReport(
        theta_exact=theta,
        theta_analytic=faraday_angle(params, t, mix).theta,
        theta_heisenberg=h1 / (2 * h2),
        fluctuation_exact=fluct,
        fluctuation_analytic=faraday_fluctuation(params, t, mix, amps.mean_photons),
        operator_residual=res,
        s0=s0,
        s1=s1,
        s2=s2,
        params=params,
        t=t,
        tau=mix.tau,
        cutoff=basis.fock_L.cutoff_per_mode,
        mean_photons=amps.mean_photons,
    )


def heisenberg_residual(
    params: PhysicalParams,
    basis: CompositeBasis,
    t: float,
    *,
    spectral: SpectralDecomposition | None = None,
    mode: str = "L",
) -> float:
    """Max-entry mismatch between exact and weak-coupling ``a^dagger(t)``.

    The exact operator is ``exp(-i omega_p t) U^dagger a^dagger U``; both sides are
    restricted to basis states with every occupation at most ``cutoff // 2``.
    """
    if spectral is None:
        spectral = SpectralDecomposition.of(build_hamiltonian("total", params, basis))
    ad = build_annihilation(mode, basis).dag().data
    keep = basis.protected_mask(min(basis.fock_L.cutoff_per_mode, basis.fock_R.cutoff_per_mode) // 2)
    # only the kept columns of U are needed: U[:, keep] = V exp(-iEt) V^dag[:, keep]
    V = spectral.eigenvectors
    U_keep = V @ (np.exp(-1j * spectral.eigenvalues * t)[:, None] * V.conj().T[:, keep])
    exact = np.exp(-1j * params.omega_p * t) * (U_keep.conj().T @ (ad @ U_keep))
    approx = approximate_creation_operators(params, basis, t)[0 if mode.upper() == "L" else 1]
    return float(np.max(np.abs(exact - approx[np.ix_(keep, keep)])))
