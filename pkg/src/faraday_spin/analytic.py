"""Closed-form rotation angle and fluctuation for a mixed electron spin.

All functions accept scalar times; ``theta_plus`` and ``fluctuation_curve``
also broadcast over numpy arrays for sweeps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .model import PhysicalParams, SpinMixture

__all__ = [
    "SolutionCoefficients",
    "FaradayResult",
    "StokesAngle",
    "solution_coefficients",
    "theta_plus",
    "faraday_angle",
    "faraday_fluctuation",
    "noise_terms",
    "faraday_from_stokes",
    "crossover_photons",
]


@dataclass(frozen=True)
class SolutionCoefficients:
    """Coefficients of the weak-coupling photon-operator solution.

    ``alpha = lam / delta``, ``omega_shift = lam * alpha`` and
    ``g = alpha (1 - exp(-i delta t))`` evaluated at ``time``.
    """

    alpha: float
    omega_shift: float
    detuning: float
    time: float

    @property
    def g(self) -> complex:
        return self.g_at(self.time)

    def g_at(self, t) -> complex:
        return self.alpha * (1.0 - np.exp(-1j * self.detuning * t))


def _require_detuned(params: PhysicalParams) -> float:
    delta = params.detuning
    if delta == 0:
        raise ValueError("resonant case (omega_p == omega_e) is outside the dispersive solution")
    return delta


def solution_coefficients(params: PhysicalParams, t: float) -> SolutionCoefficients:
    delta = _require_detuned(params)
    alpha = params.lam / delta
    return SolutionCoefficients(alpha=alpha, omega_shift=params.lam * alpha, detuning=delta, time=t)


def theta_plus(params: PhysicalParams, t):
    """Rotation angle for a pure spin-up electron (radians).

    ``(lam/delta)^2 sin(delta t) - sin(lam^2 t / delta)``
    """
    delta = _require_detuned(params)
    lam2 = params.lam**2
    return lam2 / delta**2 * np.sin(delta * t) - np.sin(lam2 / delta * t)


@dataclass(frozen=True)
class FaradayResult:
    theta: float
    time: float
    tau: float
    params: PhysicalParams


def faraday_angle(params: PhysicalParams, t: float, mix: SpinMixture) -> FaradayResult:
    """Rotation angle ``(2 tau - 1) theta_plus(t)`` for the mixed state."""
    if t < 0:
        raise ValueError("time must be nonnegative")
    theta = (2.0 * mix.tau - 1.0) * float(theta_plus(params, t))
    return FaradayResult(theta=theta, time=t, tau=mix.tau, params=params)


class NoiseTerms(NamedTuple):
    shot: float
    intrinsic: float
    total: float


def noise_terms(params: PhysicalParams, t: float, mix: SpinMixture, total_photons: float) -> NoiseTerms:
    """Shot, intrinsic and combined fluctuation (radians).

    ``shot = 1 / (2 sqrt(N))`` and ``intrinsic = sqrt(tau (1 - tau)) |theta_+ - theta_-|``
    add in quadrature.  ``N`` is the total mean photon number ``<S0>``.
    """
    if not total_photons > 0:
        raise ValueError(f"photon number must be positive, got {total_photons!r}")
    th = float(theta_plus(params, t))
    spread = th - (-th)
    shot_var = 0.25 / total_photons
    intrinsic_var = mix.tau * (1.0 - mix.tau) * spread**2
    return NoiseTerms(
        shot=math.sqrt(shot_var),
        intrinsic=math.sqrt(intrinsic_var),
        total=math.sqrt(shot_var + intrinsic_var),
    )


def faraday_fluctuation(params: PhysicalParams, t: float, mix: SpinMixture, total_photons: float) -> float:
    """Standard deviation of the rotation angle (radians)."""
    return noise_terms(params, t, mix, total_photons).total


def fluctuation_curve(params: PhysicalParams, t: float, tau: float, photons) -> np.ndarray:
    """Vectorized fluctuation over an array of photon numbers."""
    photons = np.asarray(photons, dtype=float)
    if np.any(photons <= 0):
        raise ValueError("photon numbers must be positive")
    th = float(theta_plus(params, t))
    return np.sqrt(0.25 / photons + tau * (1 - tau) * (2 * th) ** 2)


def crossover_photons(params: PhysicalParams, t: float) -> float:
    """Photon number where the shot term equals the saturated intrinsic term at tau = 1/2."""
    th = float(theta_plus(params, t))
    return 1.0 / (4.0 * th**2)


class StokesAngle(NamedTuple):
    exact: float
    small_angle: float
    in_small_angle_regime: bool


# atan(r) / r - 1 ~ -r^2 / 3, so 1e-6 relative agreement needs |r| < sqrt(3e-6).
SMALL_ANGLE_RATIO = math.sqrt(3e-6)


def faraday_from_stokes(s1: float, s2: float) -> StokesAngle:
    """Rotation angle from ``<S1>`` and ``<S2>``.

    ``exact = atan(s1 / s2) / 2`` and ``small_angle = s1 / (2 s2)``; the flag is
    set when ``|s1 / s2| < sqrt(3e-6)`` (about 1.7e-3), where the two agree to
    better than 1e-6 relative.
    """
    if s2 == 0:
        raise ValueError("<S2> = 0: polarization rotated out of the small-angle regime")
    ratio = s1 / s2
    return StokesAngle(
        exact=0.5 * math.atan(ratio),
        small_angle=0.5 * ratio,
        in_small_angle_regime=abs(ratio) < SMALL_ANGLE_RATIO,
    )
