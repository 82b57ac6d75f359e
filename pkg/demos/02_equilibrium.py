"""Equilibrium field along a loop and the bundle geometry around it.

The coefficient profiles describe how the frame turns across the filament
bundle. With them we integrate B0 along the loop in both available forms,
check the geometric constraints and measure the current that the frame
derivatives leave behind.
"""

import numpy as np

from filastab import (
    CongruenceCoefficients,
    EquilibriumState,
    build_curve,
    compare_B0_forms,
    compute_frame,
    equilibrium_current_residual,
    filament_length,
    solve_B0,
    transverse_frame_derivatives,
    validate_equilibrium,
)

loop = build_curve({"family": "circle", "radius": 1.0}, 2000)
frame = compute_frame(loop)
print("full length:", filament_length(loop), " half loop above the surface:",
      filament_length(loop, "solar_half_loop"))

coeffs = CongruenceCoefficients.from_profiles(
    frame.arc_length,
    {"theta_ns": 0.2, "theta_bs": 0.1, "omega_b": frame.kappa, "div_b": 1.0},
)

# One of the six transverse derivatives at the first sample.
d = transverse_frame_derivatives(coeffs, frame, sample_index=0)
print("\nd_n t at s=0:", d.dn_t, " (theta_ns n + (omega_b + tau) b)")

B34 = solve_B0(coeffs, c0=-1.0, form="printed_34")
B33 = solve_B0(coeffs, c0=-1.0, form="divergence_33")
print("\nB0 grows along the loop in one form and decays in the other:")
for k in (0, 500, 1000, 1999):
    print(f"  s = {frame.arc_length[k]:.3f}   {B34[k]:10.5f}   {B33[k]:10.5f}")
print("comparison:", compare_B0_forms(coeffs, -1.0))

state = EquilibriumState(B34, rho0=1.0, p0=1.0, mu0=1.0)
report = validate_equilibrium(state, coeffs, frame)
print("\nvalidation, all passed:", report.all_passed)
for item in report.items:
    print(f"  {item.name:18s} {item.status:5s} {item.value}")

# The residual is B0 (omega_b + omega_n + 2 tau) t, so it tracks B0 * kappa here.
res = equilibrium_current_residual(coeffs, frame, B34)
ratio = np.linalg.norm(res, axis=1) / (B34 * frame.kappa)
print("\n|current residual| / (B0 kappa):", ratio.min(), ratio.max())
