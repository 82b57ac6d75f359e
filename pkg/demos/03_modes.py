"""Wavenumbers, growth rate and Alfven speed of a single mode.

Each relation is complex; squaring moduli leaves two real roots. The roots
are substituted back at sampled phases to confirm the phase factor drops out.
"""

import numpy as np

from filastab import (
    PerturbationMode,
    alfven_frequency,
    alfven_velocity,
    complex_backsubstitution,
    continuity_sign_roots,
    growth_rate,
    omega_residual_scan,
    solve_kparallel,
    solve_kperp,
)

kappa0, B1, J1, mu0 = 2.0, 1.0, 3.0, 1.0
kperp = solve_kperp(kappa0, B1, J1, mu0)
kpar = solve_kparallel(theta_ns=1.0, theta_bs=2.0)
print("k_perp roots:", kperp, "  k_par roots:", kpar)

for v1 in (-1.0, 0.0, 2.0):
    g = growth_rate(v1, rho0=1.0, rho1_0=4.0)
    print(f"v1 = {v1:+.1f}: Im omega = {g.im_omega:+.3f}  {g.stability.value:8s} {g.note}")

mode = PerturbationMode(B1_0=B1, J1_0=J1, v1_0=2.0, rho1_0=4.0,
                        k_perp=kperp[0], k_par=kpar[0], omega=growth_rate(2.0, 1.0, 4.0).omega)
r = complex_backsubstitution(mode, "eq31", 128, kappa0=kappa0, mu0=mu0)
# i k B1 and the real right side are a quarter turn apart, so the unsquared
# residual stays finite; only the squared moduli agree.
print("\nperpendicular relation, residuals per branch:")
for label, b in r.branches.items():
    print(f"  {label}: k = {b.value:+.1f}  complex {b.complex_residual:.2e}  squared {b.squared_relative:.2e}")

# The two signs of the growth rate against the squared continuity relation.
print("\nsign candidates:")
for row in continuity_sign_roots(2.0, 1.0, 4.0):
    print("  ", row)

# A blind scan of the residual recovers the magnitude without the formula.
scan = omega_residual_scan(rho1_0=4.0, v1_0=2.0, rho0=1.0)
print("\nscan minimum at Im omega =", scan.im_omega, "+-", scan.refined_cell)

L, B0 = np.pi, 1.0
for branch in "+-":
    va = alfven_velocity(L, B0, kappa0=1.0, div_n=0.0, B1_0=1.0, branch=branch)
    w0 = alfven_frequency(kpar[0], L, B0, 1.0, 0.0, 1.0, branch)
    print(f"branch {branch}: Va = {va:+.5f}  omega0 = {w0:+.5f}  omega0 - k_par Va = {w0 - kpar[0] * va:.1e}")
