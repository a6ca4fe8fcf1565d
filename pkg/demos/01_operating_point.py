# %% [markdown]
# # Rotation angle at the reference operating point
#
# A probe detuned 1e13 rad/s below the electron transition, coupling
# 9.8e10 rad/s, interaction time 20 ps.  The closed form gives the angle for a
# pure spin; a mixture interpolates linearly between the two pure angles.

# %%
import numpy as np

from faraday_spin import REFERENCE_PARAMS, REFERENCE_TIME, SpinMixture, faraday_angle, solution_coefficients, theta_plus

c = solution_coefficients(REFERENCE_PARAMS, REFERENCE_TIME)
print(f"detuning       {REFERENCE_PARAMS.detuning:.4g} rad/s")
print(f"alpha          {c.alpha:.4g}")
print(f"lambda^2 t / d {REFERENCE_PARAMS.lam**2 * REFERENCE_TIME / REFERENCE_PARAMS.detuning:.4g}")
print(f"theta_+        {float(theta_plus(REFERENCE_PARAMS, REFERENCE_TIME)):.6g} rad")

# %%
# time dependence for a few mixtures: the fast (lambda/delta)^2 wiggle rides on
# the slow dispersive phase
times = np.linspace(0, 40e-12, 9)
for tau in (1.0, 0.75, 0.5, 0.0):
    row = [faraday_angle(REFERENCE_PARAMS, float(t), SpinMixture(tau)).theta * 1e3 for t in times]
    print(f"tau={tau:4.2f} " + " ".join(f"{v:7.2f}" for v in row) + "  mrad")

# %%
# the (lambda/delta)^2 sin(delta t) term is a small correction at this point
t = REFERENCE_TIME
fast = (REFERENCE_PARAMS.lam / REFERENCE_PARAMS.detuning) ** 2 * np.sin(REFERENCE_PARAMS.detuning * t)
print(f"fast term {fast:.3g} rad vs total {float(theta_plus(REFERENCE_PARAMS, t)):.3g} rad")
