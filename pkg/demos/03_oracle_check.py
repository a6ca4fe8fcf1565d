# %% [markdown]
# # Checking the closed forms against exact evolution
#
# Two coherent modes with four photons each and the four-level electron are
# diagonalized exactly in a truncated Fock space (cutoff 20, dimension 1764).
# The rotation is read off the evolved state through <a_L^dag a_R>.
#
# The exact angle tracks the approximate operator solution to a fraction of a
# percent, and the operator residual shrinks as the coupling is halved.  The
# closed-form angle is about twice the exact one, and that ratio does not move
# with the coupling (see the README).  Takes roughly ten seconds.

# %%
from faraday_spin import (
    REFERENCE_PARAMS,
    REFERENCE_TIME,
    CoherentAmplitudes,
    CompositeBasis,
    SpectralDecomposition,
    SpinMixture,
    build_hamiltonian,
    faraday_exact,
    heisenberg_residual,
)

basis = CompositeBasis.symmetric(20)
amps = CoherentAmplitudes.linear_45(2.0)

# %%
for k in range(2):
    p = REFERENCE_PARAMS.scaled(0.5**k)
    sd = SpectralDecomposition.of(build_hamiltonian("total", p, basis))
    res = heisenberg_residual(p, basis, REFERENCE_TIME, spectral=sd)
    print(f"lambda = {p.lam:.3g} rad/s, operator residual {res:.3g}")
    for tau in (1.0, 0.5):
        r = faraday_exact(p, amps, SpinMixture(tau), basis, REFERENCE_TIME, spectral=sd, tail_tol=1e-8, residual=False)
        print(
            f"  tau={tau:3.1f}  exact {r.theta_exact:+.5e}  operator solution {r.theta_heisenberg:+.5e}"
            f"  closed form {r.theta_analytic:+.5e}  fluctuation {r.fluctuation_exact:.4f}"
        )
