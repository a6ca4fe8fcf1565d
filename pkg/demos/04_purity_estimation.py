# %% [markdown]
# # Estimating the spin purity from noise
#
# Three records are taken: the rotation at the extremum of the angle, at the
# zero crossing where the spin is fully mixed, and the bare device background.
# Subtracting the background in quadrature and comparing the two noise levels
# gives tau up to a mirror ambiguity; the sign of the mean rotation resolves it.

# %%
import numpy as np

from faraday_spin import (
    REFERENCE_PARAMS,
    REFERENCE_PHOTONS,
    REFERENCE_TIME,
    SpinMixture,
    estimate_from_records,
    simulate_background,
    simulate_record,
)

sigma_b, shots = 5e-4, 10_000
seeds = np.random.SeedSequence(42).spawn(3)
zero = simulate_record(REFERENCE_PARAMS, SpinMixture(0.5), REFERENCE_TIME, REFERENCE_PHOTONS, shots, sigma_b, seeds[0])
bg = simulate_background(shots, sigma_b, seeds[1])

# %%
for tau in (0.1, 0.3, 0.7, 0.9, 1.0):
    ext = simulate_record(REFERENCE_PARAMS, SpinMixture(tau), REFERENCE_TIME, REFERENCE_PHOTONS, shots, sigma_b, seeds[2])
    est = estimate_from_records(ext, zero, bg, n_boot=300)
    print(f"true {tau:3.1f}  branches ({est.tau_low:.3f}, {est.tau_high:.3f})  selected {est.selected:.3f} +- {est.standard_error:.3f}")

# %% [markdown]
# Near tau = 1/2 the method loses resolution: the radicand is a difference of
# two nearly equal sample variances, and its sampling spread at 1e4 shots is
# about 0.02, so sqrt(r) is uncertain by ~0.15.  Many draws even give
# extremum noise above zero-crossing noise, which the estimator rejects.

# %%
hits = rejected = 0
for seed in range(50):
    s = np.random.SeedSequence([seed, 5]).spawn(3)
    ext = simulate_record(REFERENCE_PARAMS, SpinMixture(0.5), REFERENCE_TIME, REFERENCE_PHOTONS, shots, sigma_b, s[0])
    z = simulate_record(REFERENCE_PARAMS, SpinMixture(0.5), REFERENCE_TIME, REFERENCE_PHOTONS, shots, sigma_b, s[1])
    b = simulate_background(shots, sigma_b, s[2])
    try:
        hits += abs(estimate_from_records(ext, z, b, n_boot=0).selected - 0.5) <= 0.05
    except ValueError:
        rejected += 1
print(f"tau = 0.5: {hits}/50 within 0.05, {rejected} rejected")
