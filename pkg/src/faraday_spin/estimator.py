"""Spin-purity estimation from rotation-angle noise.

The scheme compares the fluctuation of the rotation angle at an extremum
(``dtheta_M``) with the fluctuation at the zero crossing where the spin is
fully mixed (``dtheta_M0``), after removing an uncorrelated white background
(``dtheta_B``) in quadrature.  It yields two mirror-image candidates
``tau = (1 -/+ sqrt(r)) / 2``; the sign of the mean rotation at the extremum
selects one.  With ``theta_+ > 0`` (true near the reference operating point) a
positive mean selects the ``tau > 1/2`` branch.

Measurement records are modeled as Gaussian with mean and spread taken from
the closed forms; that completion is a modeling choice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import tolerances as tol
from .analytic import faraday_angle, faraday_fluctuation
from .model import PhysicalParams, SpinMixture

__all__ = [
    "NoiseBudget",
    "PurityEstimate",
    "purity_from_noise",
    "simulate_record",
    "simulate_background",
    "estimate_from_records",
    "read_record",
    "write_record",
]

MODES = ("finite_n", "large_n", "background_subtracted")


@dataclass(frozen=True)
class NoiseBudget:
    """Fluctuations at the extremum, at the zero crossing, and of the background (radians).

    Without a background (``delta_theta_B = 0``) the first two are the quantum
    fluctuations themselves.  ``n_photons`` only enters the finite-N formula.
    """

    delta_theta_M: float
    delta_theta_M0: float
    delta_theta_B: float = 0.0
    n_photons: float = math.inf

    def __post_init__(self):
        m, m0, b = self.delta_theta_M, self.delta_theta_M0, self.delta_theta_B
        if min(m, m0, b) < 0 or not all(map(math.isfinite, (m, m0, b))):
            raise ValueError("noise levels must be finite and nonnegative")
        if not self.n_photons > 0:
            raise ValueError("n_photons must be positive")
        if m < b:
            raise ValueError(
                f"extremum noise {m:.4g} is below the background {b:.4g}; "
                "the intrinsic contribution would be negative"
            )
        if m0 < m:
            raise ValueError(
                f"zero-crossing noise {m0:.4g} is below the extremum noise {m:.4g}; "
                "the purity radicand would be negative"
            )


@dataclass(frozen=True)
class PurityEstimate:
    tau_low: float
    tau_high: float
    selected: float | None = None
    standard_error: float | None = None

    def __post_init__(self):
        if abs(self.tau_low + self.tau_high - 1.0) > 1e-15:
            raise ValueError("branches must sum to one")


def _radicand(budget: NoiseBudget, mode: str) -> float:
    f2, f02 = budget.delta_theta_M**2, budget.delta_theta_M0**2
    if mode == "finite_n":
        shot2 = 0.25 / budget.n_photons
        if not f02 > shot2:
            raise ValueError("zero-crossing noise must exceed the shot-noise level 1/(2 sqrt(N))")
        return (f02 - f2) / (f02 - shot2)
    if mode == "large_n":
        if f02 == 0:
            raise ValueError("zero-crossing noise is zero")
        return 1.0 - f2 / f02
    if mode == "background_subtracted":
        b2 = budget.delta_theta_B**2
        if not f02 > b2:
            raise ValueError("zero-crossing noise does not exceed the background")
        return 1.0 - (f2 - b2) / (f02 - b2)
    raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


def _clip_radicand(r: float) -> float:
    if -tol.RADICAND_SLOP <= r < 0.0:
        return 0.0
    if 1.0 < r <= 1.0 + tol.RADICAND_SLOP:
        return 1.0
    if not 0.0 <= r <= 1.0:
        raise ValueError(f"purity radicand {r:.6g} lies outside [0, 1]; inputs are inconsistent")
    return r


def _branches(r: float) -> tuple[float, float]:
    root = math.sqrt(r)
    low = 0.5 * (1.0 - root)
    return low, 1.0 - low


def _select(low: float, high: float, sign: float | None) -> float | None:
    if sign is None or sign == 0:
        return None
    return high if sign > 0 else low


def purity_from_noise(budget: NoiseBudget, mode: str = "background_subtracted", sign: float | None = None) -> PurityEstimate:
    """Both purity branches; ``sign`` (of the extremum rotation) picks one."""
    low, high = _branches(_clip_radicand(_radicand(budget, mode)))
    return PurityEstimate(low, high, _select(low, high, sign))


def simulate_record(
    params: PhysicalParams,
    mix: SpinMixture,
    t: float,
    n_photons: float,
    n_shots: int,
    background_sigma: float = 0.0,
    seed=None,
) -> np.ndarray:
    """Gaussian rotation-angle record: closed-form mean, fluctuation plus background in quadrature."""
    if int(n_shots) != n_shots or n_shots < 2:
        raise ValueError(f"n_shots must be an integer >= 2, got {n_shots!r}")
    if background_sigma < 0:
        raise ValueError("background_sigma must be nonnegative")
    mean = faraday_angle(params, t, mix).theta
    sigma = math.hypot(faraday_fluctuation(params, t, mix, n_photons), background_sigma)
    rng = np.random.default_rng(seed)
    return rng.normal(mean, sigma, size=int(n_shots))


def simulate_background(n_shots: int, background_sigma: float, seed=None) -> np.ndarray:
    """White device noise alone, as seen with the probe detuned far from the transition."""
    if int(n_shots) != n_shots or n_shots < 2:
        raise ValueError(f"n_shots must be an integer >= 2, got {n_shots!r}")
    rng = np.random.default_rng(seed)
    return rng.normal(0.0, background_sigma, size=int(n_shots))


def _budget_from_records(ext, zero, bg) -> NoiseBudget:
    return NoiseBudget(
        delta_theta_M=float(np.std(ext, ddof=1)),
        delta_theta_M0=float(np.std(zero, ddof=1)),
        delta_theta_B=float(np.std(bg, ddof=1)),
    )


def _bootstrap_tau(ext, zero, bg, sign, n_boot, rng) -> np.ndarray:
    # Replicates whose radicand leaves [0, 1] are clipped to the boundary
    # instead of erroring; near tau = 1/2 roughly half of them do.
    sd = []
    for rec in (ext, zero, bg):
        idx = rng.integers(0, len(rec), size=(n_boot, len(rec)))
        sd.append(np.std(rec[idx], axis=1, ddof=1))
    m2, m02, b2 = sd[0] ** 2, sd[1] ** 2, sd[2] ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        r = 1.0 - (m2 - b2) / (m02 - b2)
    r = np.clip(np.nan_to_num(r, nan=0.0), 0.0, 1.0)
    root = np.sqrt(r)
    return 0.5 * (1.0 + root) if sign >= 0 else 0.5 * (1.0 - root)


def estimate_from_records(
    record_extremum,
    record_zero_crossing,
    background_record,
    *,
    n_boot: int = 1000,
    seed=0,
) -> PurityEstimate:
    """Purity from three measurement records with a bootstrap standard error.

    Spreads use the unbiased (``ddof=1``) estimator.  ``n_boot < 2`` skips the
    bootstrap and leaves ``standard_error`` unset.  The branch is chosen from
    the sign of the extremum record's mean, and the bootstrap error refers to
    that branch (the high one if the mean is exactly zero).
    """
    ext, zero, bg = (np.asarray(r, dtype=float) for r in (record_extremum, record_zero_crossing, background_record))
    for name, rec in (("extremum", ext), ("zero-crossing", zero), ("background", bg)):
        if rec.ndim != 1 or rec.size < 2:
            raise ValueError(f"{name} record needs at least two samples")
    if np.ptp(zero) == 0:
        raise ValueError("zero-crossing record has zero variance")
    sign = float(np.sign(ext.mean()))
    est = purity_from_noise(_budget_from_records(ext, zero, bg), "background_subtracted", sign)
    if n_boot < 2:
        return est
    reps = _bootstrap_tau(ext, zero, bg, sign, n_boot, np.random.default_rng(seed))
    return PurityEstimate(est.tau_low, est.tau_high, est.selected, float(np.std(reps, ddof=1)))


def write_record(path, values, header: str | None = None) -> None:
    """One radian value per line; header lines are prefixed with ``#``."""
    lines = [f"# {h}" for h in header.splitlines()] if header else []
    lines += [repr(float(v)) for v in values]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_record(path) -> np.ndarray:
    """Inverse of :func:`write_record`; blank and ``#`` lines are skipped."""
    values = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            values.append(float(line))
        except ValueError:
            raise ValueError(f"{path}:{lineno}: not a number: {line!r}") from None
    return np.array(values)
