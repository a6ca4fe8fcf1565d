"""Classical polarization geometry: Jones vectors, Stokes vectors, ellipse angles.

Sign conventions are chosen to agree with the quantum Stokes operators of
:func:`faraday_spin.model.stokes_operators`: circular amplitudes map to
Cartesian ones through ``E_L = (E_x + i E_y)/sqrt(2)``,
``E_R = (E_x - i E_y)/sqrt(2)``, and ``s3 = |E_R|^2 - |E_L|^2 = 2 Im(E_x^* E_y)``,
so right-circular light sits at the north pole.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "JonesVector",
    "StokesVector",
    "PolarizationEllipse",
    "jones_to_stokes",
    "stokes_to_ellipse",
    "ellipse_to_stokes",
    "rotation_in_s1_s2",
    "classify",
    "circular_to_jones",
    "jones_to_circular",
]

_POLARIZED_TOL = 1e-6
_CLASSIFY_TOL = 1e-9


@dataclass(frozen=True)
class JonesVector:
    e_x: complex
    e_y: complex


@dataclass(frozen=True)
class StokesVector:
    s0: float
    s1: float
    s2: float
    s3: float

    def __post_init__(self):
        if self.s0 < 0:
            raise ValueError("s0 must be nonnegative")

    @property
    def polarized_norm(self) -> float:
        return math.sqrt(self.s1**2 + self.s2**2 + self.s3**2)

    @property
    def degree_of_polarization(self) -> float:
        return self.polarized_norm / self.s0 if self.s0 else 0.0

    def as_array(self) -> np.ndarray:
        return np.array([self.s0, self.s1, self.s2, self.s3])


@dataclass(frozen=True)
class PolarizationEllipse:
    """Orientation ``phi`` in (-pi/2, pi/2], ellipticity ``chi`` in [-pi/4, pi/4]."""

    phi: float
    chi: float
    intensity: float = 1.0


def jones_to_stokes(j: JonesVector) -> StokesVector:
    ex, ey = complex(j.e_x), complex(j.e_y)
    cross = ex.conjugate() * ey
    return StokesVector(
        s0=abs(ex) ** 2 + abs(ey) ** 2,
        s1=abs(ex) ** 2 - abs(ey) ** 2,
        s2=2.0 * cross.real,
        s3=2.0 * cross.imag,
    )


def circular_to_jones(e_L: complex, e_R: complex) -> JonesVector:
    r2 = math.sqrt(2.0)
    return JonesVector((e_L + e_R) / r2, -1j * (e_L - e_R) / r2)


def jones_to_circular(j: JonesVector) -> tuple[complex, complex]:
    r2 = math.sqrt(2.0)
    return (j.e_x + 1j * j.e_y) / r2, (j.e_x - 1j * j.e_y) / r2


def stokes_to_ellipse(s: StokesVector) -> PolarizationEllipse:
    if s.s0 == 0 or abs(s.degree_of_polarization - 1.0) > _POLARIZED_TOL:
        raise ValueError(
            f"ellipse angles need fully polarized light; degree of polarization is {s.degree_of_polarization:.6g}"
        )
    lin = math.hypot(s.s1, s.s2)
    chi = 0.5 * math.atan2(s.s3, lin)
    if lin == 0.0:
        return PolarizationEllipse(0.0, chi, s.s0)
    phi = 0.5 * math.atan2(s.s2, s.s1)
    if phi == -math.pi / 2:
        phi = math.pi / 2
    return PolarizationEllipse(phi, chi, s.s0)


def ellipse_to_stokes(e: PolarizationEllipse) -> StokesVector:
    c2 = math.cos(2 * e.chi)
    return StokesVector(
        e.intensity,
        e.intensity * c2 * math.cos(2 * e.phi),
        e.intensity * c2 * math.sin(2 * e.phi),
        e.intensity * math.sin(2 * e.chi),
    )


def rotation_in_s1_s2(s: StokesVector, theta_f: float) -> StokesVector:
    """Rotate the polarization by ``theta_f``, i.e. the Stokes vector by ``2 theta_f``.

    A small positive ``theta_f`` applied to +45 degree light yields ``s1 > 0``, so
    ``s1 / (2 s2)`` recovers ``theta_f`` to first order.
    """
    c, sn = math.cos(2 * theta_f), math.sin(2 * theta_f)
    return StokesVector(s.s0, c * s.s1 + sn * s.s2, -sn * s.s1 + c * s.s2, s.s3)


def classify(s: StokesVector) -> str:
    """'linear', 'circular' or 'elliptical' from the ellipticity angle."""
    chi = stokes_to_ellipse(s).chi
    if abs(chi) < _CLASSIFY_TOL:
        return "linear"
    if abs(abs(chi) - math.pi / 4) < _CLASSIFY_TOL:
        return "circular"
    return "elliptical"
