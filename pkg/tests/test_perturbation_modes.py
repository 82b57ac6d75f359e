import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from filastab.errors import DegenerateAmplitudeError, InvalidDensityError, InvalidInputError
from filastab.perturbation_modes import (
    STABILITY_NOTES,
    ModePhase,
    PerturbationMode,
    Stability,
    alfven_frequency,
    alfven_velocity,
    classify,
    continuity_sign_roots,
    growth_rate,
    mass_conservation_residual,
    moivre_expand,
    solve_kparallel,
    solve_kperp,
)

finite = st.floats(-10, 10)
nonzero = st.floats(0.1, 10).flatmap(lambda v: st.sampled_from([v, -v]))


class TestMoivre:
    def test_zero(self):
        assert moivre_expand(ModePhase(0.0)) == (1.0, -0.0)

    def test_quarter_period(self):
        re, im = moivre_expand(ModePhase(np.pi / 2))
        assert abs(re) < 1e-16 and im == -1.0

    def test_unit_modulus(self, rng):
        re, im = moivre_expand(rng.uniform(-100, 100, 128))
        assert np.abs(re**2 + im**2 - 1).max() < 1e-14

    def test_phase_from_coordinates(self):
        p = ModePhase.at(t=2.0, s=1.0, n=0.5, omega_re=3.0, k_par=1.0, k_perp=2.0)
        assert p.theta == 3.0 * 2.0 - (1.0 + 1.0)

    def test_non_finite_phase(self):
        with pytest.raises(InvalidInputError):
            ModePhase(np.nan)


class TestWavenumbers:
    def test_kperp_zero_double_root(self):
        assert solve_kperp(0.0, 1.0, 0.0, 1.0) == (0.0, -0.0)

    def test_kperp_worked_value(self):
        k = solve_kperp(2.0, 1.0, 3.0, 1.0)
        assert k == (5.0, -5.0)
        assert all((kk * 1.0) ** 2 == (2.0 * 1.0 + 3.0) ** 2 for kk in k)

    def test_kperp_degenerate(self):
        with pytest.raises(DegenerateAmplitudeError):
            solve_kperp(1.0, 0.0, 1.0, 1.0)

    def test_kpar_values(self):
        assert solve_kparallel(0.0, 0.0) == (0.0, -0.0)
        assert solve_kparallel(1.0, 2.0) == (3.0, -3.0)
        assert solve_kparallel(1.5, -1.5)[0] == 0.0

    @settings(max_examples=100)
    @given(kappa0=finite, B1=nonzero, J1=finite, mu0=st.floats(0.1, 10))
    def test_kperp_roots_zero_squared_relation(self, kappa0, B1, J1, mu0):
        rhs = (kappa0 * B1 + mu0 * J1) ** 2
        for k in solve_kperp(kappa0, B1, J1, mu0):
            lhs = (k * B1) ** 2
            assert abs(lhs - rhs) <= 1e-12 * max(lhs, rhs, 1e-300)

    @settings(max_examples=50)
    @given(a=finite, b=finite)
    def test_kpar_closed_under_negation(self, a, b):
        r = solve_kparallel(a, b)
        assert r[1] == -r[0]


class TestGrowthRate:
    def test_marginal(self):
        g = growth_rate(0.0, 1.0, 1.0)
        assert g.im_omega == 0.0 and g.stability is Stability.MARGINAL

    def test_unstable_worked_value(self):
        g = growth_rate(2.0, 1.0, 4.0)
        assert g.im_omega == 0.5 and g.re_omega == 0.0 and g.stability is Stability.UNSTABLE

    def test_stable_worked_value(self):
        g = growth_rate(-1.0, 1.0, 1.0)
        assert g.im_omega == -1.0 and g.stability is Stability.STABLE
        assert "magnetic field is damped" in g.note

    def test_div_b_interpretation(self):
        assert growth_rate(2.0, 1.0, 4.0, div_b=2.0, interpretation="with_div_b").im_omega == 1.0
        assert growth_rate(2.0, 1.0, 4.0, div_b=2.0).im_omega == 0.5

    def test_errors(self):
        with pytest.raises(DegenerateAmplitudeError):
            growth_rate(1.0, 1.0, 0.0)
        with pytest.raises(InvalidDensityError):
            growth_rate(1.0, 0.0, 1.0)
        with pytest.raises(InvalidInputError):
            growth_rate(1.0, 1.0, 1.0, interpretation="eq99")

    @settings(max_examples=100)
    @given(v1=finite, rho0=st.floats(0.1, 10), rho1=st.floats(0.1, 10))
    def test_trichotomy_sign_rule(self, v1, rho0, rho1):
        g = growth_rate(v1, rho0, rho1)
        assert (g.stability is Stability.UNSTABLE) == (v1 > 0)
        assert (g.stability is Stability.STABLE) == (v1 < 0)
        assert sum(g.stability is s for s in Stability) == 1
        assert set(STABILITY_NOTES) == set(Stability)

    def test_classify(self):
        assert [classify(x) for x in (-1, 0, 1)] == list(Stability)


class TestMassConservationResidual:
    def test_closed_form_root_leaves_residual(self):
        v1, rho0, rho1 = 1.5, 2.0, 3.0
        w = 1j * v1 * rho0 / rho1
        assert mass_conservation_residual(w, rho1, v1, rho0) == pytest.approx(4 * (v1 * rho0) ** 2)

    def test_companion_root_zeroes(self):
        v1, rho0, rho1 = 1.5, 2.0, 3.0
        w = -1j * v1 * rho0 / rho1
        assert mass_conservation_residual(w, rho1, v1, rho0) == 0.0

    def test_trivial(self):
        assert mass_conservation_residual(0j, 1.0, 0.0, 1.0) == 0.0

    def test_array_input(self):
        r = mass_conservation_residual(np.array([0j, 1j]), 1.0, 1.0, 1.0)
        np.testing.assert_allclose(r, [1.0, 4.0])

    def test_with_div_b(self):
        assert mass_conservation_residual(-2j, 1.0, 1.0, 1.0, div_b=2.0, interpretation="with_div_b") == 0.0

    def test_sign_roots_labelled(self):
        rows = continuity_sign_roots(2.0, 1.0, 4.0)
        plus, minus = rows
        assert plus["sign"] == "+" and plus["is_closed_form_growth_rate"]
        assert not plus["zeroes_squared_relation"]
        assert minus["zeroes_squared_relation"] and minus["im_omega"] == -0.5


class TestAlfven:
    def test_straight_geodesic(self):
        assert alfven_frequency(1.0, 2.0, 3.0, 0.0, 0.0, 1.0) == 0.0
        assert alfven_velocity(2.0, 3.0, 0.0, 0.0, 1.0) == 0.0

    def test_worked_values(self):
        w0 = alfven_frequency(1.0, 2.0, 3.0, 0.5, 0.0, 1.0, "+")
        va = alfven_velocity(2.0, 3.0, 0.5, 0.0, 1.0, "+")
        assert w0 == 3.0 and va == 3.0 and w0 == 1.0 * va

    def test_branch_flip(self):
        args = (0.7, 2.0, 3.0, 0.5, 0.2, 1.3)
        assert alfven_frequency(*args, "-") == -alfven_frequency(*args, "+")
        assert alfven_velocity(*args[1:], "-") == -alfven_velocity(*args[1:], "+")

    def test_errors(self):
        with pytest.raises(DegenerateAmplitudeError):
            alfven_velocity(1.0, 1.0, 1.0, 0.0, 0.0)
        with pytest.raises(DegenerateAmplitudeError):
            alfven_frequency(1.0, 1.0, 1.0, 1.0, 0.0, 0.0)
        with pytest.raises(InvalidInputError):
            alfven_velocity(0.0, 1.0, 1.0, 0.0, 1.0)
        with pytest.raises(InvalidInputError):
            alfven_velocity(1.0, 1.0, 1.0, 0.0, 1.0, branch="up")

    @settings(max_examples=100)
    @given(
        k=finite, L=st.floats(0.1, 10), B0=finite, kappa0=finite, dn=finite,
        B1=nonzero, branch=st.sampled_from("+-"),
    )
    def test_frequency_velocity_identity(self, k, L, B0, kappa0, dn, B1, branch):
        w0 = alfven_frequency(k, L, B0, kappa0, dn, B1, branch)
        va = alfven_velocity(L, B0, kappa0, dn, B1, branch)
        assert abs(w0**2 - (k * va) ** 2) <= 1e-12 * max(w0**2, 1e-300)

    @settings(max_examples=50)
    @given(L=st.floats(0.1, 10), B0=st.floats(0.1, 10), kappa0=finite, B1=st.floats(0.1, 10))
    def test_velocity_follows_curvature_sign(self, L, B0, kappa0, B1):
        assert np.sign(alfven_velocity(L, B0, kappa0, 0.0, B1, "+")) == np.sign(kappa0)


class TestModeObject:
    def test_branch_normalized(self):
        assert PerturbationMode(branch="-").branch == -1

    def test_rejects_non_finite(self):
        with pytest.raises(InvalidInputError):
            PerturbationMode(B1_0=np.inf)

    def test_frozen(self):
        m = PerturbationMode()
        with pytest.raises(AttributeError):
            m.k_par = 1.0
