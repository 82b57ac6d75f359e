"""Filament-bundle coefficients and transverse frame derivatives.

The bundle is described by scalar profiles along the centerline: the
transverse expansion coefficients ``theta_ns``, ``theta_bs``, the
abnormalities ``omega_s``, ``omega_n``, ``omega_b`` and the divergences of the
normal and binormal fields. They are inputs, not derived from a 3-D field.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, NamedTuple

import numpy as np
from numpy.typing import NDArray

from .curve_geometry import FrameField
from .errors import InvalidInputError

COEFFICIENT_NAMES = ("theta_ns", "theta_bs", "omega_s", "omega_n", "omega_b", "div_n", "div_b")

# "consistent" keeps every transverse derivative a rotation generator;
# "printed" takes the (n, b) and (b, n) signs literally, see transverse_frame_derivatives
READINGS = ("consistent", "printed")

DEFAULT_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class CongruenceCoefficients:
    """Bundle coefficient profiles sampled on the curve grid ``s``."""

    s: NDArray[np.float64]
    theta_ns: NDArray[np.float64]
    theta_bs: NDArray[np.float64]
    omega_s: NDArray[np.float64]
    omega_n: NDArray[np.float64]
    omega_b: NDArray[np.float64]
    div_n: NDArray[np.float64]
    div_b: NDArray[np.float64]

    def __post_init__(self):
        s = np.array(self.s, dtype=float)
        s.setflags(write=False)
        object.__setattr__(self, "s", s)
        for name in COEFFICIENT_NAMES:
            arr = np.array(np.broadcast_to(np.asarray(getattr(self, name), dtype=float), s.shape))
            if not np.all(np.isfinite(arr)):
                raise InvalidInputError(f"{name} profile has non-finite values")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @classmethod
    def constant(cls, s, **values: float) -> "CongruenceCoefficients":
        """Constant profiles; unspecified coefficients are zero."""
        unknown = set(values) - set(COEFFICIENT_NAMES)
        if unknown:
            raise InvalidInputError(f"unknown coefficients {sorted(unknown)}")
        s = np.asarray(s, dtype=float)
        return cls(s, **{k: np.full(s.shape, float(values.get(k, 0.0))) for k in COEFFICIENT_NAMES})

    @classmethod
    def from_profiles(cls, s, profiles: Mapping[str, object]) -> "CongruenceCoefficients":
        """Mix of constants, full arrays and ``(s_table, value_table)`` pairs.

        Tables are linearly interpolated onto ``s``.
        """
        s = np.asarray(s, dtype=float)
        unknown = set(profiles) - set(COEFFICIENT_NAMES)
        if unknown:
            raise InvalidInputError(f"unknown coefficients {sorted(unknown)}")
        out = {}
        for name in COEFFICIENT_NAMES:
            entry = profiles.get(name, 0.0)
            if isinstance(entry, tuple) and len(entry) == 2:
                grid, vals = (np.asarray(v, dtype=float) for v in entry)
                if grid.ndim != 1 or grid.shape != vals.shape or np.any(np.diff(grid) <= 0):
                    raise InvalidInputError(f"{name} table must have increasing s and matching values")
                out[name] = np.interp(s, grid, vals)
            else:
                arr = np.asarray(entry, dtype=float)
                if arr.ndim not in (0, 1) or (arr.ndim == 1 and arr.shape != s.shape):
                    raise InvalidInputError(f"{name} profile length does not match the curve grid")
                out[name] = np.broadcast_to(arr, s.shape)
        return cls(s, **out)

    @property
    def n_samples(self) -> int:
        return self.s.shape[0]

    def at(self, index: int) -> dict[str, float]:
        return {k: float(getattr(self, k)[index]) for k in COEFFICIENT_NAMES}

    def replace(self, **values) -> "CongruenceCoefficients":
        current = {k: getattr(self, k) for k in COEFFICIENT_NAMES}
        current.update(values)
        return CongruenceCoefficients(self.s, **current)


def check_aligned(coeffs: CongruenceCoefficients, frame: FrameField) -> None:
    if coeffs.n_samples != frame.n_samples:
        raise InvalidInputError(
            f"coefficient profiles have {coeffs.n_samples} samples, frame has {frame.n_samples}"
        )
    if not np.allclose(coeffs.s, frame.arc_length, rtol=1e-12, atol=1e-12):
        raise InvalidInputError("coefficient grid does not match the frame arc length")


class TransverseDerivatives(NamedTuple):
    """Derivatives of the triad along the normal (``dn_*``) and binormal (``db_*``)."""

    dn_t: NDArray
    dn_n: NDArray
    dn_b: NDArray
    db_t: NDArray
    db_n: NDArray
    db_b: NDArray


def _transverse_matrices(coeffs, frame, reading):
    """Coefficient matrices ``A`` with ``d_a e_i = sum_j A[i, j] e_j`` for e = (t, n, b).

    Shapes are ``(N, 3, 3)`` for the normal and binormal directions.
    """
    if reading not in READINGS:
        raise InvalidInputError(f"unknown reading {reading!r}; expected one of {READINGS}")
    N = frame.n_samples
    tau, kappa = frame.tau, frame.kappa
    c = coeffs
    A_n = np.zeros((N, 3, 3))
    A_b = np.zeros((N, 3, 3))

    twist_b = c.omega_b + tau
    twist_n = c.omega_n + tau
    A_n[:, 0, 1] = c.theta_ns
    A_n[:, 0, 2] = twist_b
    A_n[:, 1, 0] = -c.theta_ns
    A_n[:, 1, 2] = -c.div_b
    A_n[:, 2, 0] = -twist_b

    A_b[:, 0, 1] = -twist_n
    A_b[:, 0, 2] = c.theta_bs
    A_b[:, 1, 0] = twist_n
    A_b[:, 2, 0] = -c.theta_bs

    if reading == "consistent":
        A_n[:, 2, 1] = c.div_b
        A_b[:, 1, 2] = -(kappa + c.div_n)
        A_b[:, 2, 1] = kappa + c.div_n
    else:
        A_n[:, 2, 1] = -c.div_b
        # the stray scalar "-kappa" is attached to the binormal term
        A_b[:, 1, 2] = c.div_n - kappa
        A_b[:, 2, 1] = -(kappa + c.div_n)
    return A_n, A_b


def transverse_frame_derivatives(
    coeffs: CongruenceCoefficients,
    frame: FrameField,
    sample_index: int | None = None,
    reading: str = "consistent",
) -> TransverseDerivatives:
    """Normal and binormal derivatives of ``t, n, b``.

    With ``reading="consistent"`` (default)::

        d_n t =  theta_ns n + (omega_b + tau) b
        d_n n = -theta_ns t - div_b b
        d_n b = -(omega_b + tau) t + div_b n
        d_b t =  theta_bs b - (omega_n + tau) n
        d_b n =  (omega_n + tau) t - (kappa + div_n) b
        d_b b = -theta_bs t + (kappa + div_n) n

    so that each transverse derivative preserves orthonormality. The
    ``"printed"`` reading flips the ``div_b n`` term in ``d_n b`` and the
    ``(kappa + div_n) n`` term in ``d_b b`` and uses ``(div_n - kappa) b`` in
    ``d_b n``.

    Returns vectors of shape ``(3,)`` for a single ``sample_index`` or
    ``(N, 3)`` for the whole curve.
    """
    check_aligned(coeffs, frame)
    A_n, A_b = _transverse_matrices(coeffs, frame, reading)
    basis = np.stack([frame.t, frame.n, frame.b], axis=1)  # (N, 3 vectors, 3 comps)
    dn = np.einsum("nij,njk->nik", A_n, basis)
    db = np.einsum("nij,njk->nik", A_b, basis)
    if sample_index is not None:
        if not -frame.n_samples <= sample_index < frame.n_samples:
            raise InvalidInputError(f"sample index {sample_index} out of range")
        dn, db = dn[sample_index], db[sample_index]
        return TransverseDerivatives(dn[0], dn[1], dn[2], db[0], db[1], db[2])
    return TransverseDerivatives(dn[:, 0], dn[:, 1], dn[:, 2], db[:, 0], db[:, 1], db[:, 2])


def transverse_coefficient_matrices(coeffs, frame, reading="consistent"):
    """The ``(N, 3, 3)`` matrices behind :func:`transverse_frame_derivatives`."""
    check_aligned(coeffs, frame)
    return _transverse_matrices(coeffs, frame, reading)


@dataclass(frozen=True)
class FrameGradient:
    """Gradient of a scalar resolved on the (t, n, b) frame."""

    d_s: float
    d_n: float
    d_b: float

    @property
    def norm2(self) -> float:
        return self.d_s**2 + self.d_n**2 + self.d_b**2

    def to_cartesian(self, t, n, b) -> NDArray:
        return self.d_s * np.asarray(t) + self.d_n * np.asarray(n) + self.d_b * np.asarray(b)


def frame_gradient(d_s: float, d_n: float, d_b: float) -> FrameGradient:
    values = (float(d_s), float(d_n), float(d_b))
    if not all(np.isfinite(values)):
        raise InvalidInputError("gradient components must be finite")
    return FrameGradient(*values)


def phase_gradient(k_par: float, k_perp: float) -> FrameGradient:
    """Spatial gradient of the mode phase ``omega t - (k_par s + k_perp n)``."""
    return frame_gradient(-k_par, -k_perp, 0.0)


def equilibrium_current_residual(
    coeffs: CongruenceCoefficients,
    frame: FrameField,
    B0,
    reading: str = "consistent",
) -> NDArray:
    """``B0 [n x d_n t + b x d_b t]`` per sample, shape ``(N, 3)``.

    For the transverse derivatives above this equals
    ``B0 (omega_b + omega_n + 2 tau) t``, which does not vanish under
    ``omega_n = tau = 0`` alone.
    """
    B0 = np.broadcast_to(np.asarray(B0, dtype=float), (frame.n_samples,))
    d = transverse_frame_derivatives(coeffs, frame, reading=reading)
    inner = np.cross(frame.n, d.dn_t) + np.cross(frame.b, d.db_t)
    return B0[:, None] * inner


@dataclass(frozen=True)
class ConstraintReport:
    planar_ok: bool
    omega_n_ok: bool
    kappa_eq_omega_b_ok: bool
    geodesic: bool
    max_abs_tau: float
    max_abs_omega_n: float
    max_abs_kappa_minus_omega_b: float
    max_abs_omega_s: float
    tol: float

    @property
    def all_ok(self) -> bool:
        return self.planar_ok and self.omega_n_ok and self.kappa_eq_omega_b_ok


def check_equilibrium_constraints(
    coeffs: CongruenceCoefficients, frame: FrameField, tol: float = DEFAULT_TOL
) -> ConstraintReport:
    """Planarity, vanishing ``omega_n``, ``kappa = omega_b`` and the geodesic flag."""
    check_aligned(coeffs, frame)
    m_tau = float(np.abs(frame.tau).max())
    m_on = float(np.abs(coeffs.omega_n).max())
    m_kb = float(np.abs(frame.kappa - coeffs.omega_b).max())
    m_os = float(np.abs(coeffs.omega_s).max())
    return ConstraintReport(
        planar_ok=m_tau < tol,
        omega_n_ok=m_on < tol,
        kappa_eq_omega_b_ok=m_kb < tol,
        geodesic=m_os < tol,
        max_abs_tau=m_tau,
        max_abs_omega_n=m_on,
        max_abs_kappa_minus_omega_b=m_kb,
        max_abs_omega_s=m_os,
        tol=tol,
    )
