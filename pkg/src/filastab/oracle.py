"""Independent checks for the solvers.

None of these routines call the closed-form root expressions they verify:
frames are compared with textbook curve formulas, roots are substituted back
into the complex relations at sampled phases, and the growth rate is located
by a brute-force residual scan.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError, NoRootInBracketError
from .perturbation_modes import (
    PerturbationMode,
    continuity_source,
    growth_rate,
    mass_conservation_residual,
    moivre_expand,
    solve_kparallel,
    solve_kperp,
)

EQUATIONS = ("eq31", "eq37", "eq40")
SATISFIED_TOL = 1e-10
REFINE_ROUNDS = 3
DEFAULT_SCAN = (-2.0, 2.0, 401)


@dataclass(frozen=True)
class FrameOracle:
    kappa: float
    tau: float
    length: float


def analytic_frame_oracle(family: str, params: dict | None = None) -> FrameOracle:
    """Closed-form curvature, torsion and length of a line, circle or helix."""
    p = dict(params or {})

    def positive(key, default=None):
        v = p.get(key, default)
        if v is None or not float(v) > 0:
            raise InvalidInputError(f"{family} needs positive {key!r}")
        return float(v)

    if family == "line":
        start = np.asarray(p.get("from", (0.0, 0.0, 0.0)), dtype=float)
        stop = np.asarray(p.get("to", (1.0, 0.0, 0.0)), dtype=float)
        length = float(np.linalg.norm(stop - start))
        if length == 0:
            raise InvalidInputError("line endpoints coincide")
        return FrameOracle(0.0, 0.0, length)
    if family == "circle":
        R = positive("radius")
        return FrameOracle(1.0 / R, 0.0, 2 * np.pi * R * positive("turns", 1.0))
    if family == "helix":
        a = positive("a")
        b = float(p.get("b", 0.0))
        c2 = a * a + b * b
        return FrameOracle(a / c2, b / c2, 2 * np.pi * positive("turns", 1.0) * np.sqrt(c2))
    raise InvalidInputError(f"no analytic oracle for family {family!r}")


def convergence_order(coarse: float, fine: float, ratio: float = 2.0) -> float:
    """Observed order ``log(coarse / fine) / log(ratio)``."""
    return float(np.log(coarse / fine) / np.log(ratio))


# -- complex back-substitution -------------------------------------------


@dataclass
class BranchResidual:
    value: complex
    complex_residual: float
    squared_residual: float
    squared_relative: float
    squared_spread: float


@dataclass
class BacksubResult:
    equation: str
    theta_samples: int
    branches: dict[str, BranchResidual] = field(default_factory=dict)
    satisfied_branch: str | None = None

    @property
    def max_squared_relative(self) -> float:
        return max(b.squared_relative for b in self.branches.values())

    @property
    def max_squared_spread(self) -> float:
        return max(b.squared_spread for b in self.branches.values())


def _need(name, value):
    if value is None:
        raise InvalidInputError(f"complex_backsubstitution needs {name!r}")
    return float(value)


def complex_backsubstitution(
    mode: PerturbationMode,
    equation: str,
    theta_samples: int = 128,
    *,
    kappa0: float | None = None,
    mu0: float | None = None,
    theta_ns: float | None = None,
    theta_bs: float | None = None,
    rho0: float | None = None,
    div_b: float = 1.0,
    interpretation: str = "printed_41",
) -> BacksubResult:
    """Evaluate a pre-squared complex mode relation at sampled phases.

    ``equation`` selects the relation; each side carries the phase factor
    ``cos theta - i sin theta``:

    * ``"eq31"``: ``i k_perp B1`` vs ``kappa0 B1 + mu0 J1``
    * ``"eq37"``: ``i k_par B1`` vs ``-(theta_ns + theta_bs) B1``
    * ``"eq40"``: ``-i omega rho1`` vs the continuity source ``v1 rho0 [div_b]``

    The mode's solved value and its sign flip (the conjugate for ``omega``)
    are both checked. For each, ``complex_residual`` is ``max |LHS - RHS|``
    and ``squared_residual`` is ``max ||LHS|^2 - |RHS|^2|`` over the phases;
    ``squared_relative`` divides by the larger squared modulus and
    ``squared_spread`` is the max-min spread of the relative value.
    """
    if equation not in EQUATIONS:
        raise InvalidInputError(f"unknown equation {equation!r}; expected one of {EQUATIONS}")
    if theta_samples < 1:
        raise InvalidInputError("theta_samples must be positive")
    theta = 2 * np.pi * np.arange(theta_samples) / theta_samples
    re, im = moivre_expand(theta)
    phase = re + 1j * im

    if equation == "eq31":
        rhs0 = _need("kappa0", kappa0) * mode.B1_0 + _need("mu0", mu0) * mode.J1_0
        candidates = {"+": mode.k_perp, "-": -mode.k_perp}
        lhs_of = lambda v: 1j * v * mode.B1_0
    elif equation == "eq37":
        rhs0 = -(_need("theta_ns", theta_ns) + _need("theta_bs", theta_bs)) * mode.B1_0
        candidates = {"+": mode.k_par, "-": -mode.k_par}
        lhs_of = lambda v: 1j * v * mode.B1_0
    else:
        rhs0 = continuity_source(mode.v1_0, _need("rho0", rho0), div_b, interpretation)
        candidates = {"+": mode.omega, "-": mode.omega.conjugate()}
        lhs_of = lambda v: -1j * v * mode.rho1_0

    result = BacksubResult(equation, theta_samples)
    rhs = rhs0 * phase
    for label, value in candidates.items():
        lhs = lhs_of(value) * phase
        sq = np.abs(lhs) ** 2 - np.abs(rhs) ** 2
        scale = max(float(np.max(np.abs(lhs) ** 2)), float(np.max(np.abs(rhs) ** 2)))
        rel = sq / scale if scale > 0 else np.zeros_like(sq)
        result.branches[label] = BranchResidual(
            value=value,
            complex_residual=float(np.max(np.abs(lhs - rhs))),
            squared_residual=float(np.max(np.abs(sq))),
            squared_relative=float(np.max(np.abs(rel))),
            squared_spread=float(np.ptp(rel)),
        )
        if result.satisfied_branch is None and result.branches[label].complex_residual < SATISFIED_TOL:
            result.satisfied_branch = label
    return result


# -- growth-rate scan -----------------------------------------------------


@dataclass(frozen=True)
class ScanResult:
    im_omega: float
    residual: float
    cell: float
    refined_cell: float
    bracket: tuple[float, float]
    steps: int
    expansions: int


def _pick(values: np.ndarray, points: np.ndarray) -> int:
    # minimum residual, ties broken toward the smaller |Im omega|
    return int(np.lexsort((np.abs(points), values))[0])


def omega_residual_scan(
    rho1_0: float,
    v1_0: float,
    rho0: float,
    div_b: float = 1.0,
    interpretation: str = "printed_41",
    grid: tuple[float, float, int] = DEFAULT_SCAN,
    max_expansions: int = 0,
) -> ScanResult:
    """Locate the ``Im omega`` minimizing the squared continuity residual at ``Re omega = 0``.

    The grid ``(im_min, im_max, steps)`` is scanned, then the winning cell
    pair is narrowed by three rounds of bisection. If the minimum sits on the
    bracket edge the bracket is widened toward it (cell size unchanged) up to
    ``max_expansions`` times before giving up.
    """
    lo, hi, steps = float(grid[0]), float(grid[1]), int(grid[2])
    if steps < 3 or not hi > lo:
        raise InvalidInputError("scan grid needs im_max > im_min and at least 3 steps")
    cell = (hi - lo) / (steps - 1)
    res = lambda y: mass_conservation_residual(1j * np.asarray(y), rho1_0, v1_0, rho0, div_b, interpretation)

    for expansions in range(max_expansions + 1):
        y = lo + cell * np.arange(steps)
        r = res(y)
        k = _pick(r, y)
        if 0 < k < steps - 1:
            break
        if expansions == max_expansions:
            raise NoRootInBracketError(
                f"residual minimum on the bracket edge at Im omega = {y[k]:.6g}"
            )
        width = hi - lo
        if k == 0:
            lo -= width
        else:
            hi += width
        steps = int(round((hi - lo) / cell)) + 1

    a, b = y[k] - cell, y[k] + cell
    for _ in range(REFINE_ROUNDS):
        q = a + (b - a) * np.array([0.25, 0.5, 0.75])
        j = _pick(res(q), q)
        half = 0.25 * (b - a)
        a, b = q[j] - half, q[j] + half
    best = 0.5 * (a + b)
    return ScanResult(
        im_omega=float(best),
        residual=float(res(best)),
        cell=cell,
        refined_cell=float(b - a),
        bracket=(lo, hi),
        steps=steps,
        expansions=expansions,
    )


# -- randomized property sweep -------------------------------------------


def randomized_mode_checks(seed: int = 20240101, draws: int = 100, theta_samples: int = 128) -> dict:
    """Back-substitute solver roots for random parameter draws.

    Returns the worst relative squared residual and the worst phase spread for
    each relation, plus the seed so the run can be repeated.
    """
    rng = np.random.default_rng(seed)
    worst = {eq: {"squared_relative": 0.0, "squared_spread": 0.0} for eq in EQUATIONS}
    for _ in range(draws):
        kappa0, J1, theta_ns, theta_bs, v1 = rng.uniform(-3, 3, 5)
        B1 = rng.choice([-1, 1]) * rng.uniform(0.1, 3)
        rho1 = rng.choice([-1, 1]) * rng.uniform(0.1, 10)
        rho0, mu0 = rng.uniform(0.1, 10, 2)
        kp = solve_kperp(kappa0, B1, J1, mu0)[0]
        kq = solve_kparallel(theta_ns, theta_bs)[0]
        g = growth_rate(v1, rho0, rho1)
        mode = PerturbationMode(B1_0=B1, J1_0=J1, v1_0=v1, rho1_0=rho1, k_par=kq, k_perp=kp, omega=g.omega)
        checks = {
            "eq31": complex_backsubstitution(mode, "eq31", theta_samples, kappa0=kappa0, mu0=mu0),
            "eq37": complex_backsubstitution(
                mode, "eq37", theta_samples, theta_ns=theta_ns, theta_bs=theta_bs
            ),
            "eq40": complex_backsubstitution(mode, "eq40", theta_samples, rho0=rho0),
        }
        for eq, r in checks.items():
            worst[eq]["squared_relative"] = max(worst[eq]["squared_relative"], r.max_squared_relative)
            worst[eq]["squared_spread"] = max(worst[eq]["squared_spread"], r.max_squared_spread)
    return {"seed": int(seed), "draws": int(draws), "theta_samples": int(theta_samples), "worst": worst}
