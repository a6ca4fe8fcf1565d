"""Physical parameters, Hamiltonians, initial states and Stokes operators.

Units: hbar = 1, so every energy is an angular frequency in rad/s and times
are in seconds.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from . import tolerances as tol
from .operators import (
    CompositeBasis,
    ElectronLevel,
    FockTruncation,
    OperatorMatrix,
    build_number,
    build_sigma,
    electron_block,
    single_mode_annihilation,
)

__all__ = [
    "PhysicalParams",
    "CoherentAmplitudes",
    "SpinMixture",
    "REFERENCE_PARAMS",
    "REFERENCE_TIME",
    "REFERENCE_PHOTONS",
    "build_hamiltonian",
    "excitation_number",
    "coherent_vector",
    "initial_components",
    "initial_density_matrix",
    "stokes_operators",
]


class WeakCouplingWarning(UserWarning):
    """The coupling is not small compared with the detuning."""


@dataclass(frozen=True)
class PhysicalParams:
    """Coupling ``lam``, probe frequency ``omega_p`` and transition frequency ``omega_e`` (rad/s)."""

    lam: float
    omega_p: float
    omega_e: float

    def __post_init__(self):
        for name in ("lam", "omega_p", "omega_e"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be finite and strictly positive, got {v!r}")
        if self.detuning == 0:
            raise ValueError("detuning omega_p - omega_e must be nonzero")
        if not self.weak_coupling:
            warnings.warn(
                f"|lambda/delta| = {self.coupling_ratio:.3g} exceeds {tol.WEAK_COUPLING_LIMIT}; "
                "the approximate Heisenberg solution is not reliable here",
                WeakCouplingWarning,
                stacklevel=3,
            )

    @property
    def detuning(self) -> float:
        return self.omega_p - self.omega_e

    @property
    def coupling_ratio(self) -> float:
        return abs(self.lam / self.detuning)

    @property
    def weak_coupling(self) -> bool:
        return self.coupling_ratio <= tol.WEAK_COUPLING_LIMIT

    def scaled(self, factor: float) -> PhysicalParams:
        """Same frequencies with the coupling multiplied by ``factor``."""
        return PhysicalParams(self.lam * factor, self.omega_p, self.omega_e)


# Operating point: lambda = 98 GHz taken as rad/s, omega_e from the 1.633 eV
# exciton line, omega_p from a 760 nm probe; 20 ps interaction, 5e5 photons.
REFERENCE_PARAMS = PhysicalParams(lam=9.8e10, omega_p=2.47e15, omega_e=2.48e15)
REFERENCE_TIME = 20e-12
REFERENCE_PHOTONS = 5e5


@dataclass(frozen=True)
class CoherentAmplitudes:
    """Two-mode coherent amplitudes ``nu = N exp(i theta)`` for L and R."""

    n_L: float
    n_R: float
    theta_L: float = 0.0
    theta_R: float = 0.0

    def __post_init__(self):
        if self.n_L < 0 or self.n_R < 0:
            raise ValueError("amplitude magnitudes must be nonnegative")

    @classmethod
    def linear_45(cls, n0: float) -> CoherentAmplitudes:
        """+45 degree linear polarization: equal magnitudes, L leading R by pi/2."""
        return cls(n_L=n0, n_R=n0, theta_L=math.pi / 2, theta_R=0.0)

    @classmethod
    def from_total_photons(cls, total: float) -> CoherentAmplitudes:
        """+45 degree light carrying ``total`` mean photons split evenly between modes."""
        if total < 0:
            raise ValueError("photon number must be nonnegative")
        return cls.linear_45(math.sqrt(total / 2.0))

    @property
    def nu_L(self) -> complex:
        return self.n_L * np.exp(1j * self.theta_L)

    @property
    def nu_R(self) -> complex:
        return self.n_R * np.exp(1j * self.theta_R)

    @property
    def mean_photons(self) -> float:
        return self.n_L**2 + self.n_R**2

    def stokes(self) -> tuple[float, float, float, float]:
        """Closed-form coherent-state Stokes expectations."""
        dth = self.theta_L - self.theta_R
        return (
            self.n_L**2 + self.n_R**2,
            2 * self.n_L * self.n_R * math.cos(dth),
            2 * self.n_L * self.n_R * math.sin(dth),
            self.n_R**2 - self.n_L**2,
        )


@dataclass(frozen=True)
class SpinMixture:
    """Spin-up probability ``tau`` of the diagonal electron state."""

    tau: float

    def __post_init__(self):
        if not (0.0 <= self.tau <= 1.0):
            raise ValueError(f"tau must lie in [0, 1], got {self.tau!r}")

    @property
    def is_pure(self) -> bool:
        return self.tau in (0.0, 1.0)

    @property
    def purity(self) -> float:
        return self.tau**2 + (1 - self.tau) ** 2


_PARTS = ("photon", "electron", "interaction", "total")
_SPLITTINGS = {"transition": 0.5, "doubled": 1.0}


def build_hamiltonian(
    part: str,
    params: PhysicalParams,
    basis: CompositeBasis,
    splitting: str = "transition",
) -> OperatorMatrix:
    """Photon, electron, interaction or total Hamiltonian.

    ``splitting`` fixes the electron term.  ``"transition"`` uses
    ``(omega_e / 2)(sigma_uz + sigma_dz)`` so the CU-VU and CD-VD gaps equal
    ``omega_e`` and the detuning entering the dispersive solution is
    ``omega_p - omega_e``.  ``"doubled"`` uses ``omega_e (sigma_uz + sigma_dz)``,
    whose gap is ``2 omega_e``.
    """
    if part not in _PARTS:
        raise ValueError(f"part must be one of {_PARTS}, got {part!r}")
    if splitting not in _SPLITTINGS:
        raise ValueError(f"splitting must be one of {tuple(_SPLITTINGS)}, got {splitting!r}")
    if not isinstance(params, PhysicalParams):
        raise TypeError("params must be a PhysicalParams instance")

    def photon():
        return params.omega_p * (build_number("L", basis) + build_number("R", basis))

    def electron():
        pre = _SPLITTINGS[splitting] * params.omega_e
        return pre * (build_sigma("uz", basis) + build_sigma("dz", basis))

    def interaction():
        # products of operators on different factors, formed factor-wise
        aL = single_mode_annihilation(basis.fock_L.dim)
        aR = single_mode_annihilation(basis.fock_R.dim)
        up = basis.embed(photon_L=aL, electron=electron_block("u+"))
        down = basis.embed(photon_R=aR, electron=electron_block("d+"))
        return params.lam * OperatorMatrix(up + up.conj().T + down + down.conj().T)

    if part == "photon":
        h = photon()
    elif part == "electron":
        h = electron()
    elif part == "interaction":
        h = interaction()
    else:
        h = photon() + electron() + interaction()
    return h.as_hermitian(name=f"H_{part}")


def excitation_number(basis: CompositeBasis) -> OperatorMatrix:
    """``n_L + n_R + (sigma_uz + sigma_dz) / 2``, conserved by the total Hamiltonian."""
    n = build_number("L", basis) + build_number("R", basis)
    return (n + 0.5 * (build_sigma("uz", basis) + build_sigma("dz", basis))).as_hermitian(name="N_exc")


def coherent_vector(
    nu: complex,
    trunc: FockTruncation,
    tail_tol: float = tol.FOCK_TAIL_TOL,
) -> np.ndarray:
    """Single-mode coherent state in the truncated number basis, renormalized."""
    trunc.check_amplitude(nu, tail_tol)
    n = np.arange(trunc.dim)
    mean = abs(nu) ** 2
    if mean == 0.0:
        v = np.zeros(trunc.dim, dtype=complex)
        v[0] = 1.0
        return v
    # magnitude in log space avoids overflow of nu^n / sqrt(n!)
    log_mag = n * math.log(abs(nu)) - 0.5 * gammaln(n + 1) - mean / 2
    v = np.exp(log_mag) * np.exp(1j * n * np.angle(nu))
    return v / np.linalg.norm(v)


def initial_components(
    amps: CoherentAmplitudes,
    mix: SpinMixture,
    basis: CompositeBasis,
    tail_tol: float = tol.FOCK_TAIL_TOL,
) -> list[tuple[float, np.ndarray]]:
    """Pure-state decomposition ``[(p, ket), ...]`` of the initial density matrix."""
    photons = np.kron(
        coherent_vector(amps.nu_L, basis.fock_L, tail_tol),
        coherent_vector(amps.nu_R, basis.fock_R, tail_tol),
    )
    out = []
    for p, level in ((mix.tau, ElectronLevel.CU), (1.0 - mix.tau, ElectronLevel.CD)):
        if p == 0.0:
            continue
        e = np.zeros(basis.electron_dim, dtype=complex)
        e[level] = 1.0
        out.append((p, np.kron(photons, e)))
    return out


def initial_density_matrix(
    amps: CoherentAmplitudes,
    mix: SpinMixture,
    basis: CompositeBasis,
    tail_tol: float = tol.FOCK_TAIL_TOL,
) -> np.ndarray:
    """``|nu_L, nu_R><nu_L, nu_R|`` times ``tau |CU><CU| + (1 - tau) |CD><CD|``."""
    rho = np.zeros((basis.dim, basis.dim), dtype=complex)
    for p, ket in initial_components(amps, mix, basis, tail_tol):
        rho += p * np.outer(ket, ket.conj())
    return rho


def stokes_operators(basis: CompositeBasis) -> tuple[OperatorMatrix, OperatorMatrix, OperatorMatrix, OperatorMatrix]:
    """Quantum Stokes operators ``(S0, S1, S2, S3)`` in the circular basis."""
    aL = single_mode_annihilation(basis.fock_L.dim)
    aR = single_mode_annihilation(basis.fock_R.dim)
    LR = OperatorMatrix(basis.embed(photon_L=aL.T, photon_R=aR))
    RL = LR.dag()
    nL = build_number("L", basis)
    nR = build_number("R", basis)
    return (
        (nL + nR).as_hermitian("S0"),
        (LR + RL).as_hermitian("S1"),
        (1j * (LR - RL)).as_hermitian("S2"),
        (nR - nL).as_hermitian("S3"),
    )


def electron_reduced(rho: np.ndarray, basis: CompositeBasis) -> np.ndarray:
    """Partial trace over both photon modes."""
    d = basis.electron_dim
    n = basis.dim // d
    r = np.asarray(rho).reshape(n, d, n, d)
    return np.einsum("iaib->ab", r)


def photon_reduced(rho: np.ndarray, basis: CompositeBasis) -> np.ndarray:
    """Partial trace over the electron factor."""
    d = basis.electron_dim
    n = basis.dim // d
    r = np.asarray(rho).reshape(n, d, n, d)
    return np.einsum("iaja->ij", r)
