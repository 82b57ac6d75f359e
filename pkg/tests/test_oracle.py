import numpy as np
import pytest

from filastab.curve_geometry import build_curve, compute_frame
from filastab.errors import InvalidInputError, NoRootInBracketError
from filastab.oracle import (
    analytic_frame_oracle,
    complex_backsubstitution,
    convergence_order,
    omega_residual_scan,
    randomized_mode_checks,
)
from filastab.perturbation_modes import (
    PerturbationMode,
    growth_rate,
    solve_kparallel,
    solve_kperp,
)


class TestFrameOracle:
    def test_circle(self):
        o = analytic_frame_oracle("circle", {"radius": 2})
        assert (o.kappa, o.tau) == (0.5, 0.0) and o.length == pytest.approx(4 * np.pi)

    def test_line(self):
        o = analytic_frame_oracle("line")
        assert (o.kappa, o.tau, o.length) == (0.0, 0.0, 1.0)

    def test_helix(self):
        o = analytic_frame_oracle("helix", {"a": 1, "b": 1})
        assert (o.kappa, o.tau) == (0.5, 0.5)
        assert o.length == pytest.approx(2 * np.pi * np.sqrt(2), rel=1e-15)

    def test_invalid(self):
        with pytest.raises(InvalidInputError):
            analytic_frame_oracle("circle", {"radius": 0})
        with pytest.raises(InvalidInputError):
            analytic_frame_oracle("torus", {})

    @pytest.mark.parametrize("params", [{"family": "circle", "radius": 2}, {"family": "helix", "a": 1, "b": 1}])
    def test_agrees_with_computed_frame(self, params):
        o = analytic_frame_oracle(params["family"], params)
        c = build_curve(params, 2000)
        f = compute_frame(c)
        assert np.abs(f.kappa - o.kappa).max() < 1e-5
        assert np.abs(f.tau - o.tau).max() < 1e-5
        assert abs(c.length - o.length) < 1e-6 * o.length

    def test_convergence_order(self):
        assert convergence_order(4.0, 1.0) == 2.0


def _mode(kappa0=2.0, B1=1.0, J1=3.0, mu0=1.0, v1=2.0, rho0=1.0, rho1=4.0, tns=1.0, tbs=2.0):
    return PerturbationMode(
        B1_0=B1, J1_0=J1, v1_0=v1, rho1_0=rho1,
        k_perp=solve_kperp(kappa0, B1, J1, mu0)[0],
        k_par=solve_kparallel(tns, tbs)[0],
        omega=growth_rate(v1, rho0, rho1).omega,
    )


class TestBacksubstitution:
    def test_eq31_squared_residual(self):
        r = complex_backsubstitution(_mode(), "eq31", 128, kappa0=2.0, mu0=1.0)
        assert r.max_squared_relative < 1e-12 and r.max_squared_spread < 1e-12
        assert r.branches["+"].squared_residual < 1e-12

    def test_eq37(self):
        r = complex_backsubstitution(_mode(), "eq37", theta_ns=1.0, theta_bs=2.0)
        assert r.max_squared_relative < 1e-12

    def test_eq40_squared_residual_vanishes(self):
        r = complex_backsubstitution(_mode(), "eq40", rho0=1.0)
        assert r.max_squared_relative < 1e-12

    def test_zero_mode(self):
        m = PerturbationMode()
        r = complex_backsubstitution(m, "eq31", kappa0=0.0, mu0=1.0)
        assert r.branches["+"].complex_residual == 0.0
        assert r.branches["+"].squared_residual == 0.0
        assert r.satisfied_branch == "+"

    def test_perturbed_root_bounded_away(self):
        m = _mode()
        shifted = PerturbationMode(B1_0=m.B1_0, J1_0=m.J1_0, k_perp=m.k_perp + 0.1)
        r = complex_backsubstitution(shifted, "eq31", kappa0=2.0, mu0=1.0)
        for b in r.branches.values():
            assert b.complex_residual > 0.05 and b.squared_residual > 0.5
        assert r.satisfied_branch is None

    def test_residuals_non_negative(self, rng):
        for _ in range(20):
            m = PerturbationMode(B1_0=rng.normal(), J1_0=rng.normal(), k_perp=rng.normal())
            r = complex_backsubstitution(m, "eq31", kappa0=rng.normal(), mu0=1.0)
            for b in r.branches.values():
                assert b.complex_residual >= 0 and b.squared_residual >= 0

    def test_missing_field(self):
        with pytest.raises(InvalidInputError, match="kappa0"):
            complex_backsubstitution(_mode(), "eq31", mu0=1.0)

    def test_unknown_equation(self):
        with pytest.raises(InvalidInputError):
            complex_backsubstitution(_mode(), "eq99")

    def test_randomized_checks_reproducible(self):
        a = randomized_mode_checks(seed=7, draws=20)
        assert a == randomized_mode_checks(seed=7, draws=20)
        for eq in a["worst"].values():
            assert eq["squared_relative"] < 1e-12 and eq["squared_spread"] < 1e-12


class TestScan:
    def test_worked_value(self):
        r = omega_residual_scan(4.0, 2.0, 1.0)
        assert abs(abs(r.im_omega) - 0.5) < 0.01
        assert abs(abs(r.im_omega) - 0.5) <= r.refined_cell
        assert isinstance(r.refined_cell, float)

    def test_zero_velocity(self):
        assert omega_residual_scan(1.0, 0.0, 1.0).im_omega == 0.0

    def test_div_b_doubles(self):
        a = omega_residual_scan(4.0, 2.0, 1.0)
        b = omega_residual_scan(4.0, 2.0, 1.0, div_b=2.0, interpretation="with_div_b")
        assert abs(abs(b.im_omega) - 2 * abs(a.im_omega)) < 0.01

    def test_randomized_agreement(self, rng):
        for _ in range(50):
            rho0 = rng.uniform(0.1, 10)
            rho1 = rng.choice([-1, 1]) * rng.uniform(0.1, 10)
            v1 = rng.uniform(-5, 5)
            exact = abs(v1 * rho0 / rho1)
            r = omega_residual_scan(rho1, v1, rho0, max_expansions=40)
            assert abs(abs(r.im_omega) - exact) <= r.refined_cell

    def test_root_outside_bracket(self):
        with pytest.raises(NoRootInBracketError):
            omega_residual_scan(0.01, 5.0, 1.0)

    def test_bracket_expansion(self):
        r = omega_residual_scan(0.01, 5.0, 1.0, max_expansions=200)
        assert abs(abs(r.im_omega) - 500.0) <= r.refined_cell and r.expansions > 0

    def test_bad_grid(self):
        with pytest.raises(InvalidInputError):
            omega_residual_scan(1.0, 1.0, 1.0, grid=(1.0, -1.0, 10))
