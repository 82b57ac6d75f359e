"""Single-mode perturbation relations.

Every perturbed quantity is ``Q1 = Q1_0 exp[-i(omega t - (k_par s + k_perp n))]``
with real amplitude ``Q1_0`` and complex ``omega = Re omega + i Im omega``.
Each complex relation below is reduced to a real one by equating squared
moduli; both roots of the resulting quadratic are returned.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateAmplitudeError, InvalidDensityError, InvalidInputError

CONTINUITY_FORMS = ("printed_41", "with_div_b")


class Stability(str, enum.Enum):
    STABLE = "STABLE"
    MARGINAL = "MARGINAL"
    UNSTABLE = "UNSTABLE"


STABILITY_NOTES = {
    Stability.STABLE: "negative growth rate: perturbation decays and the magnetic field is damped",
    Stability.MARGINAL: "zero growth rate: neutral mode",
    Stability.UNSTABLE: "positive growth rate: exponential instability, field amplification possible",
}


def parse_branch(branch) -> int:
    if branch in (1, "+", "+1", "plus"):
        return 1
    if branch in (-1, "-", "-1", "minus"):
        return -1
    raise InvalidInputError(f"branch must be '+' or '-', got {branch!r}")


@dataclass(frozen=True)
class ModePhase:
    theta: float

    def __post_init__(self):
        if not np.isfinite(self.theta):
            raise InvalidInputError("phase must be finite")

    @classmethod
    def at(cls, t: float, s: float, n: float, omega_re: float, k_par: float, k_perp: float):
        return cls(omega_re * t - (k_par * s + k_perp * n))


@dataclass(frozen=True)
class PerturbationMode:
    """Amplitudes, wavenumbers and complex frequency of one mode."""

    B1_0: float = 0.0
    J1_0: float = 0.0
    v1_0: float = 0.0
    rho1_0: float = 0.0
    p1_0: float = 0.0
    k_par: float = 0.0
    k_perp: float = 0.0
    omega: complex = 0j
    branch: int = 1

    def __post_init__(self):
        for name in ("B1_0", "J1_0", "v1_0", "rho1_0", "p1_0", "k_par", "k_perp"):
            value = getattr(self, name)
            if isinstance(value, complex) or not np.isfinite(value):
                raise InvalidInputError(f"{name} must be a finite real number")
        object.__setattr__(self, "branch", parse_branch(self.branch))
        object.__setattr__(self, "omega", complex(self.omega))


def moivre_expand(theta) -> tuple[float, float]:
    """Real and imaginary parts of ``exp(-i theta)``: ``(cos theta, -sin theta)``."""
    th = theta.theta if isinstance(theta, ModePhase) else theta
    return np.cos(th), -np.sin(th)


def solve_kperp(kappa0: float, B1_0: float, J1_0: float, mu0: float) -> tuple[float, float]:
    """Roots of ``(k_perp B1)^2 = (kappa0 B1 + mu0 J1)^2``, positive-branch first."""
    if B1_0 == 0:
        raise DegenerateAmplitudeError("B1_0 must be nonzero to solve for k_perp")
    k = (kappa0 * B1_0 + mu0 * J1_0) / B1_0
    return k, -k


def solve_kparallel(theta_ns: float, theta_bs: float) -> tuple[float, float]:
    """``k_par = +-(theta_ns + theta_bs)``."""
    if not (np.isfinite(theta_ns) and np.isfinite(theta_bs)):
        raise InvalidInputError("theta_ns and theta_bs must be finite")
    k = theta_ns + theta_bs
    return k, -k


def continuity_source(v1_0: float, rho0: float, div_b: float = 1.0, interpretation="printed_41"):
    """Right-hand side amplitude of the linearized continuity relation."""
    if interpretation == "printed_41":
        return v1_0 * rho0
    if interpretation == "with_div_b":
        return v1_0 * rho0 * div_b
    raise InvalidInputError(
        f"unknown continuity interpretation {interpretation!r}; expected one of {CONTINUITY_FORMS}"
    )


def classify(im_omega: float) -> Stability:
    if im_omega > 0:
        return Stability.UNSTABLE
    if im_omega < 0:
        return Stability.STABLE
    return Stability.MARGINAL


@dataclass(frozen=True)
class GrowthRate:
    im_omega: float
    re_omega: float
    stability: Stability

    @property
    def omega(self) -> complex:
        return complex(self.re_omega, self.im_omega)

    @property
    def note(self) -> str:
        return STABILITY_NOTES[self.stability]


def growth_rate(
    v1_0: float,
    rho0: float,
    rho1_0: float,
    div_b: float = 1.0,
    interpretation: str = "printed_41",
) -> GrowthRate:
    """Growth rate on the ``Re omega = 0`` branch, ``Im omega = v1 rho0 / rho1``.

    With ``interpretation="with_div_b"`` the source keeps the ``div_b`` factor.
    Positive ``Im omega`` is unstable, negative is stable (damped).
    """
    if not rho0 > 0:
        raise InvalidDensityError(f"rho0 must be positive, got {rho0}")
    if rho1_0 == 0:
        raise DegenerateAmplitudeError("rho1_0 must be nonzero to attach a growth rate")
    im = continuity_source(v1_0, rho0, div_b, interpretation) / rho1_0
    return GrowthRate(im_omega=im, re_omega=0.0, stability=classify(im))


def mass_conservation_residual(
    omega,
    rho1_0: float,
    v1_0: float,
    rho0: float,
    div_b: float = 1.0,
    interpretation: str = "printed_41",
):
    """``|(Re omega rho1)^2 - (Im omega rho1 + S)^2|`` with ``S`` from :func:`continuity_source`.

    ``omega`` may be an array; the result then has the same shape.
    """
    if not rho0 > 0:
        raise InvalidDensityError(f"rho0 must be positive, got {rho0}")
    w = np.asarray(omega, dtype=complex)
    src = continuity_source(v1_0, rho0, div_b, interpretation)
    res = np.abs((w.real * rho1_0) ** 2 - (w.imag * rho1_0 + src) ** 2)
    return float(res) if res.ndim == 0 else res


def continuity_sign_roots(
    v1_0: float,
    rho0: float,
    rho1_0: float,
    div_b: float = 1.0,
    interpretation: str = "printed_41",
) -> list[dict]:
    """Both sign candidates ``omega = +-i S / rho1`` against the squared relation.

    Each entry records the residual of the squared continuity relation and
    whether the candidate is the closed-form growth rate (``+`` sign).
    """
    g = growth_rate(v1_0, rho0, rho1_0, div_b, interpretation).im_omega
    scale = continuity_source(v1_0, rho0, div_b, interpretation) ** 2
    rows = []
    for sign in (1, -1):
        im = sign * g
        res = mass_conservation_residual(1j * im, rho1_0, v1_0, rho0, div_b, interpretation)
        rows.append(
            {
                "sign": "+" if sign > 0 else "-",
                "im_omega": im,
                "squared_residual": res,
                "zeroes_squared_relation": bool(res <= 1e-12 * max(scale, 1e-300)),
                "is_closed_form_growth_rate": sign > 0,
            }
        )
    return rows


def _check_b1(B1_0):
    if B1_0 == 0:
        raise DegenerateAmplitudeError("B1_0 must be nonzero for the Alfven relations")


def alfven_velocity(
    L: float, B0: float, kappa0: float, div_n: float, B1_0: float, branch=1
) -> float:
    """``Va = +-L B0 (kappa0 + div_n) / B1``."""
    _check_b1(B1_0)
    if not L > 0:
        raise InvalidInputError(f"filament length must be positive, got {L}")
    return parse_branch(branch) * (L * B0 * (kappa0 + div_n) / B1_0)


def alfven_frequency(
    k_par: float, L: float, B0: float, kappa0: float, div_n: float, B1_0: float, branch=1
) -> float:
    """``omega0 = +-k_par L B0 (kappa0 + div_n) / B1``."""
    _check_b1(B1_0)
    if not L > 0:
        raise InvalidInputError(f"filament length must be positive, got {L}")
    return parse_branch(branch) * k_par * L * B0 * (kappa0 + div_n) / B1_0
