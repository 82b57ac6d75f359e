import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from filastab.curve_geometry import build_curve, compute_frame
from filastab.errors import InvalidInputError
from filastab.frame_fields import (
    COEFFICIENT_NAMES,
    CongruenceCoefficients,
    check_equilibrium_constraints,
    equilibrium_current_residual,
    frame_gradient,
    phase_gradient,
    transverse_coefficient_matrices,
    transverse_frame_derivatives,
)


def coeffs_for(frame, **values):
    return CongruenceCoefficients.constant(frame.arc_length, **values)


def test_zero_coefficients_on_planar_curve(circle2):
    f = circle2[1]
    c = coeffs_for(f)
    # kappa still enters d_b n and d_b b; remove it by checking the first four
    d = transverse_frame_derivatives(c, f)
    for v in (d.dn_t, d.dn_n, d.dn_b, d.db_t):
        assert np.abs(v).max() < 1e-6


def test_zero_coefficients_zero_curvature():
    c = build_curve({"family": "line"}, 10)
    f = compute_frame(c, fallback_normal=(0, 1, 0))
    d = transverse_frame_derivatives(coeffs_for(f), f, sample_index=3)
    for v in d:
        np.testing.assert_array_equal(v, 0.0)


def test_theta_ns_rotates_tangent_into_normal(circle2):
    f = circle2[1]
    d = transverse_frame_derivatives(coeffs_for(f, theta_ns=1.0), f, sample_index=100)
    assert np.abs(d.dn_t - f.n[100]).max() < 1e-6  # tau is numerically ~1e-11
    assert np.abs(d.dn_n + f.t[100]).max() < 1e-12
    assert abs(2 * f.t[100] @ d.dn_t) < 1e-12


def test_omega_b_equal_kappa(circle2):
    f = circle2[1]
    c = CongruenceCoefficients.from_profiles(f.arc_length, {"omega_b": f.kappa})
    d = transverse_frame_derivatives(c, f)
    np.testing.assert_allclose(np.einsum("ij,ij->i", d.dn_t, f.b), f.kappa, atol=1e-6)


def test_documented_right_hand_sides(helix11):
    f = helix11[1]
    vals = dict(zip(COEFFICIENT_NAMES, [0.3, -0.7, 0.2, 1.1, -0.4, 0.9, 0.6]))
    k = 500
    d = transverse_frame_derivatives(coeffs_for(f, **vals), f, sample_index=k)
    t, n, b, kap, tau = f.t[k], f.n[k], f.b[k], f.kappa[k], f.tau[k]
    np.testing.assert_allclose(d.dn_t, vals["theta_ns"] * n + (vals["omega_b"] + tau) * b, atol=1e-14)
    np.testing.assert_allclose(d.db_t, vals["theta_bs"] * b - (vals["omega_n"] + tau) * n, atol=1e-14)
    np.testing.assert_allclose(
        d.db_n, (vals["omega_n"] + tau) * t - (kap + vals["div_n"]) * b, atol=1e-14
    )


@settings(max_examples=30, deadline=None)
@given(
    values=st.lists(st.floats(-5, 5), min_size=7, max_size=7),
    k=st.integers(0, 1999),
)
def test_unit_length_and_antisymmetry(helix11, values, k):
    f = helix11[1]
    c = coeffs_for(f, **dict(zip(COEFFICIENT_NAMES, values)))
    A_n, A_b = transverse_coefficient_matrices(c, f)
    for A in (A_n[k], A_b[k]):
        assert np.abs(A + A.T).max() < 1e-12
    d = transverse_frame_derivatives(c, f, sample_index=k)
    t, n, b = f.t[k], f.n[k], f.b[k]
    for e, de in ((t, d.dn_t), (n, d.dn_n), (b, d.dn_b), (t, d.db_t), (n, d.db_n), (b, d.db_b)):
        assert abs(e @ de) < 1e-12
    assert abs(d.dn_t @ n + t @ d.dn_n) < 1e-12
    assert abs(d.db_n @ b + n @ d.db_b) < 1e-12


def test_printed_reading_is_not_antisymmetric(circle2):
    f = circle2[1]
    c = coeffs_for(f, div_b=1.0, div_n=0.5)
    A_n, A_b = transverse_coefficient_matrices(c, f, reading="printed")
    assert np.abs(A_n + np.swapaxes(A_n, 1, 2)).max() > 1.0
    assert np.abs(A_b + np.swapaxes(A_b, 1, 2)).max() > 1.0


def test_unknown_reading(circle2):
    with pytest.raises(InvalidInputError):
        transverse_frame_derivatives(coeffs_for(circle2[1]), circle2[1], reading="literal")


def test_misaligned_profiles(circle2):
    c = CongruenceCoefficients.constant(np.linspace(0, 1, 10))
    with pytest.raises(InvalidInputError):
        transverse_frame_derivatives(c, circle2[1])


def test_index_out_of_range(circle2):
    with pytest.raises(InvalidInputError):
        transverse_frame_derivatives(coeffs_for(circle2[1]), circle2[1], sample_index=5000)


def test_non_finite_profile():
    with pytest.raises(InvalidInputError):
        CongruenceCoefficients.constant([0.0, 1.0], theta_ns=np.nan)


def test_table_profiles_interpolate():
    s = np.linspace(0, 2, 5)
    c = CongruenceCoefficients.from_profiles(s, {"div_b": ([0.0, 2.0], [1.0, 3.0])})
    np.testing.assert_allclose(c.div_b, 1.0 + s)


class TestGradient:
    def test_zero(self):
        assert frame_gradient(0, 0, 0).norm2 == 0.0

    def test_components(self):
        g = frame_gradient(1, 2, 3)
        assert (g.d_s, g.d_n, g.d_b) == (1.0, 2.0, 3.0) and g.norm2 == 14.0

    def test_cartesian_norm_matches(self, helix11):
        f = helix11[1]
        v = frame_gradient(1, 2, 3).to_cartesian(f.t[7], f.n[7], f.b[7])
        assert abs(v @ v - 14.0) < 1e-12

    def test_non_finite(self):
        with pytest.raises(InvalidInputError):
            frame_gradient(1, np.inf, 0)

    def test_phase_gradient_by_finite_difference(self):
        k_par, k_perp, omega, t = 0.7, -1.3, 2.0, 0.4
        phase = lambda s, n: omega * t - (k_par * s + k_perp * n)
        h = 1e-6
        ds = (phase(1 + h, 0.5) - phase(1 - h, 0.5)) / (2 * h)
        dn = (phase(1, 0.5 + h) - phase(1, 0.5 - h)) / (2 * h)
        g = phase_gradient(k_par, k_perp)
        assert abs(g.d_s - ds) < 1e-8 and abs(g.d_n - dn) < 1e-8 and g.d_b == 0.0


class TestCurrentResidual:
    def test_equilibrium_constraints_leave_kappa(self, circle2):
        f = circle2[1]
        c = CongruenceCoefficients.from_profiles(f.arc_length, {"omega_b": f.kappa})
        r = equilibrium_current_residual(c, f, 2.0)
        # the residual points along t with magnitude B0 * (omega_b + omega_n + 2 tau)
        np.testing.assert_allclose(np.linalg.norm(r, axis=1), 2.0 * 0.5, atol=1e-6)
        np.testing.assert_allclose(r, 2.0 * f.kappa[:, None] * f.t, atol=1e-6)

    def test_zero_field(self, circle2):
        f = circle2[1]
        c = coeffs_for(f, omega_b=0.5, theta_ns=1.0)
        assert np.abs(equilibrium_current_residual(c, f, 0.0)).max() == 0.0

    def test_helix_torsion_nonzero(self, helix11):
        f = helix11[1]
        r = equilibrium_current_residual(coeffs_for(f), f, 1.0)
        np.testing.assert_allclose(np.linalg.norm(r, axis=1), 2 * 0.5, atol=1e-5)


class TestConstraints:
    def test_circle_all_flags(self, circle2):
        f = circle2[1]
        r = check_equilibrium_constraints(coeffs_for(f, omega_b=0.5), f)
        assert r.planar_ok and r.omega_n_ok and r.kappa_eq_omega_b_ok and r.geodesic and r.all_ok

    def test_helix_not_planar(self, helix11):
        f = helix11[1]
        assert not check_equilibrium_constraints(coeffs_for(f, omega_b=0.5), f).planar_ok

    def test_nonzero_omega_s(self, circle2):
        f = circle2[1]
        assert not check_equilibrium_constraints(coeffs_for(f, omega_s=1.0), f).geodesic

    @settings(max_examples=25, deadline=None)
    @given(
        ob=st.floats(0, 1), on=st.floats(-1e-3, 1e-3), os_=st.floats(-1e-3, 1e-3),
        tol=st.floats(1e-9, 1e-2), factor=st.floats(1, 1e3),
    )
    def test_monotone_in_tolerance(self, circle2, ob, on, os_, tol, factor):
        f = circle2[1]
        c = coeffs_for(f, omega_b=ob, omega_n=on, omega_s=os_)
        lo = check_equilibrium_constraints(c, f, tol)
        hi = check_equilibrium_constraints(c, f, tol * factor)
        for name in ("planar_ok", "omega_n_ok", "kappa_eq_omega_b_ok", "geodesic"):
            assert getattr(hi, name) or not getattr(lo, name)
