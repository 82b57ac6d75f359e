"""Discrete filament centerlines and their Frenet frames.

Curves are stored at uniform arc-length spacing ``h = L / (N - 1)``. Closed
curves repeat the first sample as the last one so that ``arc_length[-1]`` is
the full length; periodic stencils act on the ``N - 1`` unique nodes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping, NamedTuple, Sequence

import numpy as np
from numpy.typing import NDArray
from scipy.interpolate import CubicSpline

from ._fd import derivative
from .errors import (
    DegenerateCurveError,
    DegenerateNormalError,
    InvalidConventionError,
    InvalidInputError,
)

__all__ = [
    "DiscreteCurve",
    "FrameField",
    "FrenetResidual",
    "build_curve",
    "compute_frame",
    "frenet_residual",
    "is_planar",
    "filament_length",
    "frame_time_derivative",
    "frame_rotation_matrix",
    "curve_table",
    "ANALYTIC_FAMILIES",
]

ANALYTIC_FAMILIES = ("line", "circle", "helix", "polyline")

MIN_SAMPLES = 4
COINCIDENT_TOL = 1e-12
ORTHONORMAL_TOL = 1e-8
DEFAULT_DEGENERACY = 1e-10
# positional derivatives feed the frame; fourth order keeps one-sided end
# stencils from leaking O(h) errors into the second-order residual checks
FRAME_ACCURACY = 4
COPLANAR_TOL = 1e-12  # relative singular value below which samples count as coplanar


def _frozen(a: Any, dtype=float) -> NDArray:
    arr = np.array(a, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class DiscreteCurve:
    """Arc-length sampled space curve.

    Attributes
    ----------
    samples : ndarray, shape (N, 3)
        Positions.
    arc_length : ndarray, shape (N,)
        Cumulative arc length, starting at 0.
    closed : bool
        Whether ``samples[-1]`` is identified with ``samples[0]``.
    family : str or None
        Analytic family the curve was built from, if any.
    params : dict
        Normalized family parameters (empty for raw point lists).
    """

    samples: NDArray[np.float64]
    arc_length: NDArray[np.float64]
    closed: bool = False
    family: str | None = None
    params: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        x = _frozen(self.samples)
        s = _frozen(self.arc_length)
        object.__setattr__(self, "samples", x)
        object.__setattr__(self, "arc_length", s)
        if x.ndim != 2 or x.shape[1] != 3:
            raise InvalidInputError("samples must have shape (N, 3)")
        if x.shape[0] < MIN_SAMPLES:
            raise InvalidInputError(f"need at least {MIN_SAMPLES} samples, got {x.shape[0]}")
        if s.shape != (x.shape[0],):
            raise InvalidInputError("arc_length must have one entry per sample")
        if s[0] != 0.0 or np.any(np.diff(s) <= 0):
            raise InvalidInputError("arc_length must start at 0 and increase strictly")
        seg = np.linalg.norm(np.diff(x, axis=0), axis=1)
        tol = COINCIDENT_TOL * max(1.0, float(np.ptp(x, axis=0).max()))
        if np.any(seg <= tol):
            idx = int(np.argmax(seg <= tol))
            raise DegenerateCurveError(f"samples {idx} and {idx + 1} coincide")

    @property
    def n_samples(self) -> int:
        return self.samples.shape[0]

    @property
    def length(self) -> float:
        return float(self.arc_length[-1])

    @property
    def spacing(self) -> float:
        return self.length / (self.n_samples - 1)


@dataclass(frozen=True, eq=False)
class FrameField:
    """Frenet triads and curvature/torsion profiles along a curve."""

    t: NDArray[np.float64]
    n: NDArray[np.float64]
    b: NDArray[np.float64]
    kappa: NDArray[np.float64]
    tau: NDArray[np.float64]
    arc_length: NDArray[np.float64]
    closed: bool = False

    def __post_init__(self):
        for name in ("t", "n", "b", "kappa", "tau", "arc_length"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))
        N = self.arc_length.shape[0]
        for name in ("t", "n", "b"):
            if getattr(self, name).shape != (N, 3):
                raise InvalidInputError(f"{name} must have shape ({N}, 3)")
        for name in ("kappa", "tau"):
            if getattr(self, name).shape != (N,):
                raise InvalidInputError(f"{name} must have shape ({N},)")
        if np.any(self.kappa < 0):
            raise InvalidInputError("kappa must be non-negative")
        dots = orthonormality_defect(self.t, self.n, self.b)
        if dots > ORTHONORMAL_TOL:
            raise InvalidInputError(f"triads not orthonormal (defect {dots:.2e})")

    @property
    def n_samples(self) -> int:
        return self.arc_length.shape[0]

    @property
    def spacing(self) -> float:
        return float(self.arc_length[-1]) / (self.n_samples - 1)

    def kappa_prime(self) -> NDArray[np.float64]:
        """Arc-length derivative of curvature, centered second order."""
        return derivative(self.kappa, self.spacing, 1, 2, self.closed)


def orthonormality_defect(t, n, b) -> float:
    rowdot = lambda u, v: np.einsum("ij,ij->i", u, v)
    checks = [
        rowdot(t, t) - 1.0,
        rowdot(n, n) - 1.0,
        rowdot(b, b) - 1.0,
        rowdot(t, n),
        rowdot(t, b),
        rowdot(n, b),
    ]
    defect = max(float(np.abs(c).max()) for c in checks)
    return max(defect, float(np.abs(b - np.cross(t, n)).max()))


class FrenetResidual(NamedTuple):
    """Max-norm residuals of the three Frenet-Serret equations."""

    tangent: float
    normal: float
    binormal: float


# -- construction ---------------------------------------------------------


def _vec3(v, name) -> NDArray:
    arr = np.asarray(v, dtype=float).reshape(-1)
    if arr.shape == (2,):
        arr = np.append(arr, 0.0)
    if arr.shape != (3,) or not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} must be a finite 3-vector")
    return arr


def _positive(params, key, default=None) -> float:
    value = params.get(key, default)
    if value is None:
        raise InvalidInputError(f"missing parameter {key!r}")
    value = float(value)
    if not np.isfinite(value) or value <= 0:
        raise InvalidInputError(f"{key} must be positive, got {value}")
    return value


def _is_whole(turns: float) -> bool:
    return abs(turns - round(turns)) < 1e-12 and round(turns) >= 1


def _circle(params, n):
    radius = _positive(params, "radius")
    turns = _positive(params, "turns", 1.0)
    center = _vec3(params.get("center", (0.0, 0.0, 0.0)), "center")
    phi = np.linspace(0.0, 2 * np.pi * turns, n)
    x = np.column_stack([radius * np.cos(phi), radius * np.sin(phi), np.zeros(n)]) + center
    closed = _is_whole(turns)
    if closed:
        x[-1] = x[0]
    length = 2 * np.pi * turns * radius
    norm = {"radius": radius, "turns": turns, "center": center.tolist()}
    return x, np.linspace(0.0, length, n), closed, norm


def _helix(params, n):
    a = _positive(params, "a")
    b = float(params.get("b", 0.0))
    turns = _positive(params, "turns", 1.0)
    phi = np.linspace(0.0, 2 * np.pi * turns, n)
    x = np.column_stack([a * np.cos(phi), a * np.sin(phi), b * phi])
    length = 2 * np.pi * turns * np.hypot(a, b)
    closed = b == 0.0 and _is_whole(turns)
    if closed:
        x[-1] = x[0]
    return x, np.linspace(0.0, length, n), closed, {"a": a, "b": b, "turns": turns}


def _line(params, n):
    start = _vec3(params.get("from", (0.0, 0.0, 0.0)), "from")
    stop = _vec3(params.get("to", (1.0, 0.0, 0.0)), "to")
    length = float(np.linalg.norm(stop - start))
    if length <= COINCIDENT_TOL:
        raise DegenerateCurveError("line endpoints coincide")
    frac = np.linspace(0.0, 1.0, n)
    x = start + frac[:, None] * (stop - start)
    return x, frac * length, False, {"from": start.tolist(), "to": stop.tolist()}


def _checked_points(points, closed) -> tuple[NDArray, bool]:
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] not in (2, 3):
        raise InvalidInputError("points must be an (M, 3) array")
    if pts.shape[1] == 2:
        pts = np.column_stack([pts, np.zeros(len(pts))])
    if not np.all(np.isfinite(pts)):
        raise InvalidInputError("points must be finite")
    scale = max(1.0, float(np.ptp(pts, axis=0).max())) if len(pts) else 1.0
    if closed and len(pts) > 1 and np.linalg.norm(pts[-1] - pts[0]) <= COINCIDENT_TOL * scale:
        pts = pts[:-1]
    if len(pts) < MIN_SAMPLES:
        raise InvalidInputError(f"need at least {MIN_SAMPLES} distinct points, got {len(pts)}")
    seg = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    if np.any(seg <= COINCIDENT_TOL * scale):
        idx = int(np.argmax(seg <= COINCIDENT_TOL * scale))
        raise DegenerateCurveError(f"points {idx} and {idx + 1} coincide")
    if closed:
        pts = np.vstack([pts, pts[:1]])
    return pts, closed


def _polyline(params, n):
    closed = bool(params.get("closed", False))
    pts, closed = _checked_points(params.get("points", ()), closed)
    chord = np.concatenate([[0.0], np.cumsum(np.linalg.norm(np.diff(pts, axis=0), axis=1))])
    s = np.linspace(0.0, chord[-1], n)
    x = np.column_stack([np.interp(s, chord, pts[:, k]) for k in range(3)])
    if closed:
        x[-1] = x[0]
    return x, s, closed, {"points": pts.tolist(), "closed": closed}


_GAUSS_X, _GAUSS_W = np.polynomial.legendre.leggauss(6)


def _spline_resample(pts: NDArray, n: int, closed: bool) -> tuple[NDArray, NDArray]:
    """Resample points to uniform arc length of their interpolating cubic spline."""
    chord = np.concatenate([[0.0], np.cumsum(np.linalg.norm(np.diff(pts, axis=0), axis=1))])
    spline = CubicSpline(chord, pts, bc_type="periodic" if closed else "not-a-knot")
    dspline = spline.derivative()
    speed = lambda u: np.linalg.norm(dspline(u), axis=-1)

    sub = 16
    fine = np.concatenate(
        [np.linspace(a, b, sub, endpoint=False) for a, b in zip(chord[:-1], chord[1:])]
        + [chord[-1:]]
    )

    def panel_integral(lo, hi):
        mid, half = 0.5 * (hi + lo), 0.5 * (hi - lo)
        nodes = mid[:, None] + half[:, None] * _GAUSS_X
        return half * (speed(nodes.ravel()).reshape(nodes.shape) @ _GAUSS_W)

    table = np.concatenate([[0.0], np.cumsum(panel_integral(fine[:-1], fine[1:]))])
    target = np.linspace(0.0, table[-1], n)
    u = np.interp(target, table, fine)
    for _ in range(4):
        k = np.clip(np.searchsorted(fine, u, side="right") - 1, 0, len(fine) - 2)
        s_u = table[k] + panel_integral(fine[k], u)
        u = np.clip(u - (s_u - target) / speed(u), 0.0, chord[-1])
    u[0], u[-1] = 0.0, chord[-1]
    x = spline(u)
    if closed:
        x[-1] = x[0]
    return x, target


_BUILDERS = {"line": _line, "circle": _circle, "helix": _helix, "polyline": _polyline}


def build_curve(
    source: Mapping[str, Any] | Sequence | NDArray,
    target_resolution: int = 1000,
    closed: bool = False,
) -> DiscreteCurve:
    """Build a uniformly arc-length sampled curve.

    Parameters
    ----------
    source : mapping or array-like
        Either an analytic-family descriptor such as
        ``{"family": "circle", "radius": 2, "turns": 1}`` or an ``(M, 3)``
        point list. Point lists are interpolated by a cubic spline in chord
        length and resampled along the spline's arc length.
    target_resolution : int
        Number of output samples (at least 4).
    closed : bool
        Treat a point list as a closed loop. Ignored for descriptors, which
        decide closure themselves (whole-turn circles are closed).
    """
    n = int(target_resolution)
    if n < MIN_SAMPLES:
        raise InvalidInputError(f"target_resolution must be >= {MIN_SAMPLES}")
    if isinstance(source, Mapping):
        family = source.get("family")
        if family not in _BUILDERS:
            raise InvalidInputError(
                f"unknown curve family {family!r}; expected one of {ANALYTIC_FAMILIES}"
            )
        x, s, is_closed, params = _BUILDERS[family](source, n)
        return DiscreteCurve(x, s, is_closed, family, params)
    pts, closed = _checked_points(source, bool(closed))
    x, s = _spline_resample(pts, n, closed)
    return DiscreteCurve(x, s, closed, None, {})


# -- frames ---------------------------------------------------------------


def _sample_plane(x: NDArray) -> NDArray | None:
    """Unit normal of the plane holding every sample, if they are coplanar to roundoff."""
    _, sv, vt = np.linalg.svd(x - x.mean(axis=0), full_matrices=False)
    if sv[1] > COPLANAR_TOL * sv[0] and sv[2] <= COPLANAR_TOL * sv[0]:
        return vt[2]
    return None


def compute_frame(
    curve: DiscreteCurve,
    fallback_normal: Sequence[float] | None = None,
    degeneracy: float = DEFAULT_DEGENERACY,
) -> FrameField:
    """Frenet frame, curvature and torsion of a discrete curve.

    The tangent is the normalized first derivative of position, ``kappa n``
    is the arc-length derivative of that unit tangent, ``b = t x n``, and the
    torsion is the projection ``-b' . n`` of the differentiated binormal.
    Accuracy is limited by roundoff in the differenced fields once
    ``h`` drops below roughly ``1e-3`` of the curve scale.

    When all samples lie in one plane to within roundoff, the derivatives are
    projected onto that plane first so the torsion is not polluted by
    out-of-plane noise.

    Samples with ``kappa < degeneracy / h`` have no principal normal. On
    interior samples this raises :class:`DegenerateNormalError` unless
    ``fallback_normal`` is given, in which case its component orthogonal to
    ``t`` is used and ``kappa = tau = 0`` there.
    """
    h = curve.spacing
    x = curve.samples
    d1 = derivative(x, h, 1, FRAME_ACCURACY, curve.closed)
    d2 = derivative(x, h, 2, FRAME_ACCURACY, curve.closed)
    plane = _sample_plane(x)
    if plane is not None:
        # out-of-plane roundoff in d2 is amplified by 1/h**2 and would show up as torsion
        d1 -= np.outer(d1 @ plane, plane)
        d2 -= np.outer(d2 @ plane, plane)

    speed = np.linalg.norm(d1, axis=1)
    t = d1 / speed[:, None]
    # d t / d s for a parameter that is only approximately arc length
    kn = (d2 - np.einsum("ij,ij->i", d2, t)[:, None] * t) / speed[:, None] ** 2
    kappa = np.linalg.norm(kn, axis=1)

    threshold = degeneracy / h
    degenerate = kappa < threshold
    n = np.zeros_like(t)
    ok = ~degenerate
    n[ok] = kn[ok] / kappa[ok, None]

    if degenerate.any():
        N = curve.n_samples
        interior = degenerate.copy()
        if not curve.closed:
            interior[[0, N - 1]] = False
        if fallback_normal is None:
            if interior.any():
                idx = int(np.argmax(interior))
                raise DegenerateNormalError(idx, float(kappa[idx]), threshold)
            for end, nb in ((0, 1), (N - 1, N - 2)):
                if degenerate[end]:
                    n[end] = n[nb]
        else:
            fb = _vec3(fallback_normal, "fallback_normal")
            n[degenerate] = fb
        kappa = np.where(degenerate, 0.0, kappa)

    n -= np.einsum("ij,ij->i", n, t)[:, None] * t
    norm_n = np.linalg.norm(n, axis=1)
    if np.any(norm_n < 1e-12):
        # only reachable through a fallback direction along t
        raise InvalidInputError("fallback_normal is parallel to the tangent")
    n /= norm_n[:, None]
    b = np.cross(t, n)

    db = derivative(b, h, 1, FRAME_ACCURACY, curve.closed) / speed[:, None]
    tau = -np.einsum("ij,ij->i", db, n)
    tau = np.where(degenerate, 0.0, tau)

    return FrameField(t, n, b, kappa, tau, curve.arc_length, curve.closed)


def frenet_residual(frame: FrameField, curve: DiscreteCurve) -> FrenetResidual:
    """Max-norm residuals of ``t' = kappa n``, ``n' = -kappa t + tau b``, ``b' = -tau n``.

    Derivatives are centered second-order differences (one-sided at the ends
    of open curves), so each residual is O(h**2) for a smooth curve.
    """
    if frame.n_samples != curve.n_samples or frame.closed != curve.closed:
        raise InvalidInputError("frame and curve have mismatched samples")
    h = curve.spacing
    dt, dn, db = (derivative(v, h, 1, 2, curve.closed) for v in (frame.t, frame.n, frame.b))
    k = frame.kappa[:, None]
    tau = frame.tau[:, None]
    norm = lambda v: float(np.linalg.norm(v, axis=1).max())
    return FrenetResidual(
        norm(dt - k * frame.n),
        norm(dn + k * frame.t - tau * frame.b),
        norm(db + tau * frame.n),
    )


def is_planar(frame: FrameField, tol: float = 1e-6) -> bool:
    return bool(np.abs(frame.tau).max() < tol)


def filament_length(
    curve: DiscreteCurve,
    convention: str = "full",
    frame: FrameField | None = None,
) -> float:
    """Filament length ``L``.

    ``"full"`` integrates ``ds`` over the whole curve. ``"solar_half_loop"``
    returns ``pi R`` with ``R = 1 / mean(kappa)``, the visible half of a loop
    whose other half lies below the photosphere; it requires a circle.
    """
    if convention == "full":
        return curve.length
    if convention != "solar_half_loop":
        raise InvalidConventionError(f"unknown length convention {convention!r}")
    if curve.family not in (None, "circle"):
        raise InvalidConventionError("solar_half_loop requires a circle-family curve")
    if frame is None:
        frame = compute_frame(curve)
    mean_k = float(frame.kappa.mean())
    if mean_k <= 0 or float(frame.kappa.std()) > 1e-6 * mean_k:
        raise InvalidConventionError("solar_half_loop requires constant curvature")
    return np.pi / mean_k


def frame_time_derivative(frame: FrameField) -> tuple[NDArray, NDArray, NDArray]:
    """Kinematic frame rates ``(t_dot, n_dot, b_dot)`` per sample.

    ``t_dot = -tau kappa n + kappa' b``, ``n_dot = -kappa tau t``,
    ``b_dot = -kappa' t`` with ``kappa' = d kappa / d s``.
    """
    kp = frame.kappa_prime()[:, None]
    kt = (frame.kappa * frame.tau)[:, None]
    tdot = -kt * frame.n + kp * frame.b
    ndot = -kt * frame.t
    bdot = -kp * frame.t
    return tdot, ndot, bdot


def frame_rotation_matrix(frame: FrameField) -> NDArray:
    """Per-sample matrix whose rows are ``t_dot, n_dot, b_dot`` in the (t, n, b) basis.

    A rigid rotation of the triad makes this antisymmetric. With the rates
    above that holds exactly when ``kappa tau = 0``; otherwise the (t, n)
    entries sum to ``-2 kappa tau``.
    """
    basis = np.stack([frame.t, frame.n, frame.b], axis=1)
    rates = np.stack(frame_time_derivative(frame), axis=1)
    return np.einsum("nik,njk->nij", rates, basis)


def curve_table(curve: DiscreteCurve, frame: FrameField) -> tuple[list[str], NDArray]:
    """Columnar dump ``s, x, y, z, t*, n*, b*, kappa, tau`` for plotting."""
    header = ["s", "x", "y", "z"]
    for v in "tnb":
        header += [f"{v}{c}" for c in "xyz"]
    header += ["kappa", "tau"]
    table = np.column_stack(
        [curve.arc_length, curve.samples, frame.t, frame.n, frame.b, frame.kappa, frame.tau]
    )
    return header, table
