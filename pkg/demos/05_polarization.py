# %% [markdown]
# # Polarization geometry
#
# Right-circular light sits at the north pole of the Poincare sphere.  The
# probe starts at +45 degrees (the +s2 axis) and a Faraday rotation by theta
# turns the Stokes vector by 2 theta in the s1-s2 plane, so for small angles
# theta = s1 / (2 s2).

# %%
import math

from faraday_spin import (
    CoherentAmplitudes,
    JonesVector,
    circular_to_jones,
    classify,
    faraday_from_stokes,
    jones_to_stokes,
    rotation_in_s1_s2,
    stokes_to_ellipse,
)

for name, j in [
    ("horizontal", JonesVector(1, 0)),
    ("+45", JonesVector(1 / math.sqrt(2), 1 / math.sqrt(2))),
    ("right circular", circular_to_jones(0, 1)),
    ("elliptical", JonesVector(0.9, 0.3j)),
]:
    s = jones_to_stokes(j)
    e = stokes_to_ellipse(s)
    print(f"{name:15s} s = ({s.s0:.3f}, {s.s1:+.3f}, {s.s2:+.3f}, {s.s3:+.3f})  phi {e.phi:+.3f}  chi {e.chi:+.3f}  {classify(s)}")

# %%
# the coherent probe: 5e5 photons split evenly, relative phase pi/2
probe = CoherentAmplitudes.from_total_photons(5e5)
s0, s1, s2, s3 = probe.stokes()
print(f"probe Stokes ({s0:.4g}, {s1:.3g}, {s2:.4g}, {s3:.3g})")

# %%
# rotate and read the angle back
s = jones_to_stokes(JonesVector(1 / math.sqrt(2), 1 / math.sqrt(2)))
for theta in (1e-3, 1.9e-2, 0.3):
    r = rotation_in_s1_s2(s, theta)
    est = faraday_from_stokes(r.s1, r.s2)
    print(f"theta {theta:7.4f}: small-angle {est.small_angle:.6f}, exact {est.exact:.6f}, small-angle regime {est.in_small_angle_regime}")
