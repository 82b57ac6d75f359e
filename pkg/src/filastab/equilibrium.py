"""Equilibrium field along the filament and the linear pressure relation.

The background has no flow and no current; the field is ``B0(s) t``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray
from scipy.integrate import cumulative_trapezoid

from ._fd import derivative
from .curve_geometry import FrameField
from .errors import InvalidDensityError, InvalidInputError
from .frame_fields import (
    DEFAULT_TOL,
    CongruenceCoefficients,
    check_equilibrium_constraints,
    equilibrium_current_residual,
)

MU0_SI = 4e-7 * np.pi

B0_FORMS = ("printed_34", "divergence_33")


@dataclass(frozen=True, eq=False)
class EquilibriumState:
    """Background state. Values are stored as given; see :func:`validate_equilibrium`."""

    B0_profile: NDArray[np.float64]
    rho0: float
    p0: float
    gamma: float = 5.0 / 3.0
    mu0: float = MU0_SI
    c0: float = -1.0

    def __post_init__(self):
        b = np.array(self.B0_profile, dtype=float)
        b.setflags(write=False)
        object.__setattr__(self, "B0_profile", b)


def b0_integrand(coeffs: CongruenceCoefficients, form: str = "printed_34") -> NDArray:
    """Logarithmic derivative of ``B0`` for the selected form."""
    if form == "printed_34":
        return coeffs.theta_bs + coeffs.theta_ns
    if form == "divergence_33":
        return -(coeffs.theta_bs + coeffs.div_b)
    raise InvalidInputError(f"unknown B0 form {form!r}; expected one of {B0_FORMS}")


def solve_B0(coeffs: CongruenceCoefficients, c0: float, form: str = "printed_34") -> NDArray:
    """Equilibrium field profile ``B0(s) = -c0 exp(int_0^s g ds')``.

    ``g = theta_bs + theta_ns`` for ``"printed_34"``; ``g = -(theta_bs + div_b)``
    for ``"divergence_33"``, which solves ``B0' + (theta_bs + div_b) B0 = 0``
    directly. The integral uses the trapezoidal rule on the coefficient grid.
    """
    c0 = float(c0)
    if not np.isfinite(c0):
        raise InvalidInputError("c0 must be finite")
    g = b0_integrand(coeffs, form)
    return -c0 * np.exp(cumulative_trapezoid(g, coeffs.s, initial=0.0))


def log_derivative_residual(B0: NDArray, s: NDArray, integrand: NDArray) -> float:
    """Max ``|d ln|B0| / ds - integrand|`` with second-order differences."""
    s = np.asarray(s, dtype=float)
    h = (s[-1] - s[0]) / (len(s) - 1)
    dlog = derivative(np.log(np.abs(B0)), h, 1, 2, periodic=False)
    return float(np.abs(dlog - integrand).max())


def compare_B0_forms(coeffs: CongruenceCoefficients, c0: float) -> dict:
    """Difference between the two B0 forms on the same grid."""
    a = solve_B0(coeffs, c0, "printed_34")
    b = solve_B0(coeffs, c0, "divergence_33")
    diff = np.abs(a - b)
    scale = np.maximum(np.abs(a), np.abs(b))
    with np.errstate(divide="ignore", invalid="ignore"):
        rel = np.where(scale > 0, diff / scale, 0.0)
    return {
        "max_abs_difference": float(diff.max()),
        "max_rel_difference": float(rel.max()),
        "integrand_gap_max": float(
            np.abs(b0_integrand(coeffs, "printed_34") - b0_integrand(coeffs, "divergence_33")).max()
        ),
        "forms_agree": bool(diff.max() <= 1e-12 * max(1.0, float(scale.max()))),
    }


def adiabatic_relation(rho1_0: float, rho0: float, p0: float) -> float:
    """Pressure amplitude ``p1 = (rho1 / rho0) p0``.

    No adiabatic index appears; multiply by ``gamma`` externally for the
    textbook linearization of ``p rho**-gamma = const``.
    """
    if not rho0 > 0:
        raise InvalidDensityError(f"rho0 must be positive, got {rho0}")
    return (rho1_0 / rho0) * p0


@dataclass
class ValidationItem:
    name: str
    status: str  # "pass", "fail" or "info"
    value: float | None = None
    detail: str = ""


@dataclass
class ValidationReport:
    items: list[ValidationItem] = field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return all(item.status != "fail" for item in self.items)

    def __getitem__(self, name: str) -> ValidationItem:
        for item in self.items:
            if item.name == name:
                return item
        raise KeyError(name)

    def failures(self) -> list[str]:
        return [i.name for i in self.items if i.status == "fail"]


def validate_equilibrium(
    state: EquilibriumState,
    coeffs: CongruenceCoefficients,
    frame: FrameField,
    tol: float = DEFAULT_TOL,
    reading: str = "consistent",
) -> ValidationReport:
    """Collect equilibrium checks into a report; nothing here raises.

    The current residual ``B0 [n x d_n t + b x d_b t]`` is recorded with
    status ``"info"``: it is a measured quantity, not a gate, because the
    geometric constraints do not make it vanish.
    """
    report = ValidationReport()
    add = lambda *a, **k: report.items.append(ValidationItem(*a, **k))

    c = check_equilibrium_constraints(coeffs, frame, tol)
    add("planar", "pass" if c.planar_ok else "fail", c.max_abs_tau, "max |tau| < tol")
    add("omega_n_zero", "pass" if c.omega_n_ok else "fail", c.max_abs_omega_n, "max |omega_n| < tol")
    add(
        "kappa_eq_omega_b",
        "pass" if c.kappa_eq_omega_b_ok else "fail",
        c.max_abs_kappa_minus_omega_b,
        "max |kappa - omega_b| < tol",
    )
    add("geodesic", "info", c.max_abs_omega_s, "true" if c.geodesic else "false")

    B0 = state.B0_profile
    if B0.shape != (frame.n_samples,):
        add("B0_aligned", "fail", None, f"B0 has shape {B0.shape}")
    else:
        res = equilibrium_current_residual(coeffs, frame, B0, reading)
        add(
            "current_residual",
            "info",
            float(np.linalg.norm(res, axis=1).max()),
            "max |B0 (n x d_n t + b x d_b t)|",
        )
        min_b = float(np.abs(B0).min())
        if state.c0 != 0:
            add("B0_nonvanishing", "pass" if min_b > 0 else "fail", min_b, "min |B0| > 0")

    add("rho0_positive", "pass" if state.rho0 > 0 else "fail", float(state.rho0))
    add("p0_nonnegative", "pass" if state.p0 >= 0 else "fail", float(state.p0))
    add("gamma_positive", "pass" if state.gamma > 0 else "fail", float(state.gamma))
    add("mu0_positive", "pass" if state.mu0 > 0 else "fail", float(state.mu0))
    return report
