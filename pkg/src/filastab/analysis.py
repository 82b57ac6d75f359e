"""End-to-end filament stability analysis, sweeps and verification runs."""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import oracle
from .config import AnalysisConfig
from .curve_geometry import (
    DiscreteCurve,
    FrameField,
    build_curve,
    compute_frame,
    filament_length,
    frame_rotation_matrix,
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
from .errors import SweepTooLargeError
from .frame_fields import CongruenceCoefficients, transverse_coefficient_matrices
from .perturbation_modes import (
    PerturbationMode,
    alfven_frequency,
    alfven_velocity,
    continuity_sign_roots,
    growth_rate,
    solve_kparallel,
    solve_kperp,
)

SCHEMA_VERSION = 1

PROVENANCE = {
    "b0_form": {
        "printed_34": "B0 = -c0 exp(int (theta_bs + theta_ns) ds), the stated closed-form solution",
        "divergence_33": "B0 = -c0 exp(-int (theta_bs + div_b) ds), integrating the divergence condition",
    },
    "continuity": {
        "printed_41": "continuity source v1_0 rho0; the div_b factor of the unsquared relation is dropped",
        "with_div_b": "continuity source v1_0 rho0 div_b, keeping the factor of the unsquared relation",
    },
    "frame_reading": {
        "consistent": "transverse derivatives chosen antisymmetric so the triad stays orthonormal",
        "printed": "transverse derivative signs taken literally; the stray -kappa scalar joins the b term",
    },
    "theta_sb": {"theta_bs": "symbol theta_sb in the k_par root is read as theta_bs"},
    "theta_nb": {"theta_ns": "symbol theta_nb in the perturbed Ampere relation is read as theta_ns"},
}

FIXED_NOTES = {
    "pressure_relation": "p1_0 = (rho1_0 / rho0) p0 carries no adiabatic index; gamma is echoed "
    "so the textbook factor can be applied externally",
    "induction_curl_relation": "the relation curl B = dB/dt is not used by any solver and is not checked",
}


@dataclass
class Geometry:
    curve: DiscreteCurve
    frame: FrameField
    L: float
    residual: tuple

    def summary(self, tol: float) -> dict[str, Any]:
        k = self.frame.kappa
        return {
            "family": self.curve.family,
            "closed": self.curve.closed,
            "samples": self.curve.n_samples,
            "spacing": self.curve.spacing,
            "total_length": self.curve.length,
            "L": self.L,
            "mean_kappa": float(k.mean()),
            "min_kappa": float(k.min()),
            "max_kappa": float(k.max()),
            "max_abs_tau": float(np.abs(self.frame.tau).max()),
            "planar": is_planar(self.frame, tol),
            "frenet_residual": dict(self.residual._asdict()),
        }


def _curve_source(cfg: AnalysisConfig):
    c = cfg["curve"]
    if c.get("family"):
        return {k: v for k, v in c.items()
                if k not in ("resolution", "length_convention", "fallback_normal")}
    if c.get("points") is not None:
        return np.asarray(c["points"], dtype=float)
    return np.loadtxt(cfg.base_dir / c["points_file"], ndmin=2)


def prepare_geometry(cfg: AnalysisConfig, resolution: int | None = None) -> Geometry:
    c = cfg["curve"]
    curve = build_curve(_curve_source(cfg), resolution or c["resolution"], closed=c["closed"])
    frame = compute_frame(curve, c["fallback_normal"], cfg["tolerances"]["degeneracy"])
    L = filament_length(curve, c["length_convention"], frame)
    return Geometry(curve, frame, L, frenet_residual(frame, curve))


def build_coefficients(cfg: AnalysisConfig, frame: FrameField) -> CongruenceCoefficients:
    profiles = {}
    for name, entry in cfg["coefficients"].items():
        if entry == "kappa":
            profiles[name] = frame.kappa
        elif isinstance(entry, dict):
            profiles[name] = (entry["s"], entry["value"])
        else:
            profiles[name] = entry
    return CongruenceCoefficients.from_profiles(frame.arc_length, profiles)


@dataclass
class StabilityReport:
    """Structured result of one analysis point."""

    config: dict[str, Any]
    geometry: dict[str, Any]
    equilibrium: dict[str, Any]
    modes: dict[str, Any]
    stability: dict[str, Any]
    verification: dict[str, Any]
    provenance: dict[str, Any]
    command: str = "analyze"
    extra: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        out = {
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "config": self.config,
            "geometry": self.geometry,
            "equilibrium": self.equilibrium,
            "modes": self.modes,
            "stability": self.stability,
            "verification": self.verification,
            "provenance": self.provenance,
        }
        out.update(self.extra)
        return out


def _backsub_dict(r: oracle.BacksubResult) -> dict[str, Any]:
    return {
        "theta_samples": r.theta_samples,
        "satisfied_branch": r.satisfied_branch,
        "max_squared_relative": r.max_squared_relative,
        "max_squared_spread": r.max_squared_spread,
        "branches": {
            label: {
                "value": b.value,
                "complex_residual": b.complex_residual,
                "squared_residual": b.squared_residual,
                "squared_relative": b.squared_relative,
            }
            for label, b in r.branches.items()
        },
    }


def _station(cfg, n):
    return int(round(cfg["perturbation"]["station"] * (n - 1)))


def evaluate(cfg: AnalysisConfig, geom: Geometry) -> StabilityReport:
    """Solve every relation for one configuration on prepared geometry."""
    frame = geom.frame
    eqc, pert, interp = cfg["equilibrium"], cfg["perturbation"], cfg["interpretation"]
    tol = cfg["tolerances"]["constraint"]
    coeffs = build_coefficients(cfg, frame)

    B0 = solve_B0(coeffs, eqc["c0"], eqc["b0_form"])
    state = EquilibriumState(B0, eqc["rho0"], eqc["p0"], eqc["gamma"], eqc["mu0"], eqc["c0"])
    validation = validate_equilibrium(state, coeffs, frame, tol, interp["frame_reading"])

    i = _station(cfg, frame.n_samples)
    local = coeffs.at(i)
    kappa0 = pert["kappa0"] if pert["kappa0"] is not None else float(frame.kappa[i])
    B0_s = float(B0[i])
    mu0 = eqc["mu0"]
    B1, J1, v1, rho1 = pert["B1_0"], pert["J1_0"], pert["v1_0"], pert["rho1_0"]
    cont = interp["continuity"]
    div_b = local["div_b"]

    kperp = solve_kperp(kappa0, B1, J1, mu0)
    kpar = solve_kparallel(local["theta_ns"], local["theta_bs"])
    growth = growth_rate(v1, eqc["rho0"], rho1, div_b, cont)
    p1 = adiabatic_relation(rho1, eqc["rho0"], eqc["p0"])

    mode = PerturbationMode(
        B1_0=B1, J1_0=J1, v1_0=v1, rho1_0=rho1, p1_0=p1,
        k_par=kpar[0], k_perp=kperp[0], omega=growth.omega, branch=pert["branch"],
    )
    ts = cfg["oracle"]["theta_samples"]
    bs31 = oracle.complex_backsubstitution(mode, "eq31", ts, kappa0=kappa0, mu0=mu0)
    bs37 = oracle.complex_backsubstitution(
        mode, "eq37", ts, theta_ns=local["theta_ns"], theta_bs=local["theta_bs"]
    )
    bs40 = oracle.complex_backsubstitution(
        mode, "eq40", ts, rho0=eqc["rho0"], div_b=div_b, interpretation=cont
    )

    alfven = {}
    for label in ("+", "-"):
        va = alfven_velocity(geom.L, B0_s, kappa0, local["div_n"], B1, label)
        w0 = alfven_frequency(kpar[0], geom.L, B0_s, kappa0, local["div_n"], B1, label)
        ident = abs(w0**2 - (kpar[0] * va) ** 2) / max(w0**2, (kpar[0] * va) ** 2, 1e-300)
        alfven[label] = {"omega0": w0, "Va": va, "identity_relative_residual": ident}

    geometry = geom.summary(tol)
    geometry["station_index"] = i
    geometry["station_s"] = float(frame.arc_length[i])

    equilibrium = {
        "B0_at_station": B0_s,
        "B0_min": float(B0.min()),
        "B0_max": float(B0.max()),
        "p1_0": p1,
        "gamma": eqc["gamma"],
        "validation": {
            "all_passed": validation.all_passed,
            "items": [vars(item) for item in validation.items],
        },
    }
    modes = {
        "kappa0": kappa0,
        "local_coefficients": local,
        "k_perp": {"roots": list(kperp), "backsubstitution": _backsub_dict(bs31)},
        "k_par": {"roots": list(kpar), "backsubstitution": _backsub_dict(bs37)},
        "growth": {
            "re_omega": growth.re_omega,
            "im_omega": growth.im_omega,
            "backsubstitution": _backsub_dict(bs40),
            "sign_candidates": continuity_sign_roots(v1, eqc["rho0"], rho1, div_b, cont),
        },
        "alfven": alfven,
        "selected_branch": pert["branch"],
        "selected": {"omega0": alfven[pert["branch"]]["omega0"], "Va": alfven[pert["branch"]]["Va"]},
    }
    stability = {"class": growth.stability.value, "im_omega": growth.im_omega, "note": growth.note}
    verification = {
        "k_perp_squared_relative": bs31.max_squared_relative,
        "k_par_squared_relative": bs37.max_squared_relative,
        "growth_squared_relative": bs40.max_squared_relative,
        "phase_spread_max": max(bs31.max_squared_spread, bs37.max_squared_spread, bs40.max_squared_spread),
        "alfven_identity_max": max(a["identity_relative_residual"] for a in alfven.values()),
    }
    provenance = {key: PROVENANCE[key][interp_value] for key, interp_value in (
        ("b0_form", eqc["b0_form"]),
        ("continuity", cont),
        ("frame_reading", interp["frame_reading"]),
        ("theta_sb", interp["theta_sb"]),
        ("theta_nb", interp["theta_nb"]),
    )}
    provenance.update(FIXED_NOTES)
    return StabilityReport(cfg.to_dict(), geometry, equilibrium, modes, stability,
                           verification, provenance)


def run_analysis(cfg: AnalysisConfig) -> StabilityReport:
    return evaluate(cfg, prepare_geometry(cfg))


# -- sweeps ---------------------------------------------------------------


SUMMARY_COLUMNS = ("im_omega", "class", "Va")


@dataclass
class SweepResult:
    parameters: list[str]
    points: list[dict[str, float]]
    reports: list[StabilityReport]

    def rows(self) -> list[list[Any]]:
        return [
            [p[name] for name in self.parameters]
            + [r.stability["im_omega"], r.stability["class"], r.modes["selected"]["Va"]]
            for p, r in zip(self.points, self.reports)
        ]

    @property
    def header(self) -> list[str]:
        return [*self.parameters, *SUMMARY_COLUMNS]

    def to_dict(self, base_config: dict[str, Any]) -> dict[str, Any]:
        return {
            "schema_version": SCHEMA_VERSION,
            "command": "sweep",
            "config": base_config,
            "parameters": self.parameters,
            "rows": [dict(zip(self.header, row)) for row in self.rows()],
            "points": [
                {"values": p, "stability": r.stability, "modes": r.modes,
                 "verification": r.verification}
                for p, r in zip(self.points, self.reports)
            ],
        }


def run_sweep(cfg: AnalysisConfig) -> SweepResult:
    """Evaluate the Cartesian product of the configured sweep ranges.

    Rows are ordered lexicographically: parameters sorted by name, values
    ascending, the first parameter varying slowest.
    """
    ranges = cfg.sweep_ranges()
    if not ranges:
        raise SweepTooLargeError("no sweep parameters configured")
    count = math.prod(len(v) for v in ranges.values())
    if count > cfg["run"]["sweep_cap"]:
        raise SweepTooLargeError(f"sweep has {count} points, cap is {cfg['run']['sweep_cap']}")
    names = list(ranges)
    points = [dict(zip(names, combo)) for combo in itertools.product(*ranges.values())]
    geom = prepare_geometry(cfg)
    job = lambda values: evaluate(cfg.with_values(values), geom)
    workers = cfg["run"]["workers"]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(job, points))
    else:
        reports = [job(p) for p in points]
    return SweepResult(names, points, reports)


# -- verification ---------------------------------------------------------


def _antisymmetry_defect(A: np.ndarray) -> float:
    return float(np.abs(A + np.swapaxes(A, -1, -2)).max())


def run_verification(cfg: AnalysisConfig) -> dict[str, Any]:
    """Oracle checks plus every place where alternative readings disagree."""
    base = run_analysis(cfg)
    geom = prepare_geometry(cfg)
    frame, curve = geom.frame, geom.curve
    eqc, pert, orc = cfg["equilibrium"], cfg["perturbation"], cfg["oracle"]
    coeffs = build_coefficients(cfg, frame)

    geometry_checks: dict[str, Any] = {}
    if curve.family in ("circle", "helix", "line"):
        exact = oracle.analytic_frame_oracle(curve.family, dict(curve.params))
        geometry_checks["analytic"] = {
            "family": curve.family,
            "kappa_exact": exact.kappa,
            "tau_exact": exact.tau,
            "length_exact": exact.length,
            "max_kappa_error": float(np.abs(frame.kappa - exact.kappa).max()),
            "max_tau_error": float(np.abs(frame.tau - exact.tau).max()),
            "length_relative_error": abs(curve.length - exact.length) / exact.length,
        }
    half = max(4, (cfg["curve"]["resolution"] + 1) // 2)
    coarse = prepare_geometry(cfg, half)
    fine_r, coarse_r = geom.residual, coarse.residual
    ratio = (curve.n_samples - 1) / (coarse.curve.n_samples - 1)
    geometry_checks["frenet_residual_order"] = {
        name: (oracle.convergence_order(c, f, ratio) if c > 1e-12 and f > 0 else None)
        for name, c, f in zip(fine_r._fields, coarse_r, fine_r)
    }
    M = frame_rotation_matrix(frame)
    geometry_checks["frame_rate_antisymmetry_defect"] = _antisymmetry_defect(M)
    geometry_checks["frame_rate_2_kappa_tau_max"] = float(np.abs(2 * frame.kappa * frame.tau).max())
    for reading in ("consistent", "printed"):
        A_n, A_b = transverse_coefficient_matrices(coeffs, frame, reading)
        geometry_checks[f"transverse_antisymmetry_defect_{reading}"] = max(
            _antisymmetry_defect(A_n), _antisymmetry_defect(A_b)
        )

    i = _station(cfg, frame.n_samples)
    div_b = float(coeffs.div_b[i])
    cont = cfg["interpretation"]["continuity"]
    sign_rows = continuity_sign_roots(pert["v1_0"], eqc["rho0"], pert["rho1_0"], div_b, cont)
    scan_cfg = orc["scan"]
    scan = oracle.omega_residual_scan(
        pert["rho1_0"], pert["v1_0"], eqc["rho0"], div_b, cont,
        (scan_cfg["im_min"], scan_cfg["im_max"], scan_cfg["steps"]),
        max_expansions=orc["scan_expansions"],
    )
    closed = base.stability["im_omega"]
    current = next(
        it for it in base.equilibrium["validation"]["items"] if it["name"] == "current_residual"
    )

    discrepancies = {
        "b0_forms": {
            "label": "printed_34 vs divergence_33 equilibrium field profiles",
            **compare_B0_forms(coeffs, eqc["c0"]),
        },
        "continuity_sign": {
            "label": "which sign of Im omega zeroes the squared continuity relation",
            "closed_form_growth_rate": closed,
            "candidates": sign_rows,
            "root_satisfying_growth_formula": "+",
            "root_zeroing_squared_relation": next(
                (r["sign"] for r in sign_rows if r["zeroes_squared_relation"]), None
            ),
        },
        "equilibrium_current_residual": {
            "label": "max |B0 (n x d_n t + b x d_b t)| under the stated constraints",
            "magnitude": current["value"],
            "expected_form": "B0 (omega_b + omega_n + 2 tau) t",
        },
    }
    verification = {
        "geometry": geometry_checks,
        "randomized_modes": oracle.randomized_mode_checks(orc["seed"], orc["draws"], orc["theta_samples"]),
        "growth_scan": {
            "im_omega": scan.im_omega,
            "residual": scan.residual,
            "refined_cell": scan.refined_cell,
            "bracket": list(scan.bracket),
            "expansions": scan.expansions,
            "closed_form_abs": abs(closed),
            "abs_difference": abs(abs(scan.im_omega) - abs(closed)),
            "agrees": abs(abs(scan.im_omega) - abs(closed)) <= scan.refined_cell,
        },
        "point": base.verification,
    }
    return {
        "schema_version": SCHEMA_VERSION,
        "command": "verify",
        "config": cfg.to_dict(),
        "geometry": base.geometry,
        "stability": base.stability,
        "verification": verification,
        "discrepancies": discrepancies,
        "provenance": base.provenance,
    }
