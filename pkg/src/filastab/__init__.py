"""Linear stability of thin planar plasma filaments on a Frenet frame."""

from .analysis import run_analysis, run_sweep, run_verification
from .config import AnalysisConfig, default_config, load_config, parse_config
from .curve_geometry import (
    DiscreteCurve,
    FrameField,
    build_curve,
    compute_frame,
    filament_length,
    frame_rotation_matrix,
    frame_time_derivative,
    frenet_residual,
    is_planar,
)
from .equilibrium import (
    EquilibriumState,
    adiabatic_relation,
    compare_B0_forms,
    solve_B0,
    validate_equilibrium,
)
from .frame_fields import (
    CongruenceCoefficients,
    check_equilibrium_constraints,
    equilibrium_current_residual,
    frame_gradient,
    phase_gradient,
    transverse_frame_derivatives,
)
from .oracle import analytic_frame_oracle, complex_backsubstitution, omega_residual_scan
from .perturbation_modes import (
    PerturbationMode,
    Stability,
    alfven_frequency,
    alfven_velocity,
    continuity_sign_roots,
    growth_rate,
    mass_conservation_residual,
    moivre_expand,
    solve_kparallel,
    solve_kperp,
)

__version__ = "0.1.0"
