# %% [markdown]
# # Shot noise and intrinsic noise
#
# The angle fluctuation is the quadrature sum of photon shot noise,
# 1/(2 sqrt(N)), and an N-independent term set by how mixed the spin is.  For a
# pure spin only the shot term survives; for a fully mixed spin the noise
# saturates at |theta_+| once N passes the crossover.

# %%
import numpy as np

from faraday_spin import REFERENCE_PARAMS, REFERENCE_TIME, SpinMixture, crossover_photons, noise_terms, theta_plus

th = abs(float(theta_plus(REFERENCE_PARAMS, REFERENCE_TIME)))
n_x = crossover_photons(REFERENCE_PARAMS, REFERENCE_TIME)
print(f"|theta_+| = {th:.5g} rad, crossover at N = {n_x:.1f}")

# %%
print(f"{'N':>10} " + " ".join(f"tau={tau:<5}" for tau in (1.0, 0.9, 0.5)))
for n in np.logspace(2, 10, 9):
    vals = [noise_terms(REFERENCE_PARAMS, REFERENCE_TIME, SpinMixture(tau), n).total for tau in (1.0, 0.9, 0.5)]
    print(f"{n:10.3g} " + " ".join(f"{v:9.3g}" for v in vals))

# %%
# at the reference photon number the intrinsic term dominates unless the spin is nearly pure
nt = noise_terms(REFERENCE_PARAMS, REFERENCE_TIME, SpinMixture(0.99), 5e5)
print(f"tau=0.99, N=5e5: shot {nt.shot:.3g}, intrinsic {nt.intrinsic:.3g}, total {nt.total:.3g} rad")
