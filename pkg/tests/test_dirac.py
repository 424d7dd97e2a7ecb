"""Residuals of the equation forms, their translations, gauge and frame laws."""

import numpy as np
import pytest

from sta.algebra import E, E0, E21, Multivector, exp_bivector, gp_batch, GRADES
from sta.dirac import (
    ColumnSpinorField,
    DiracParams,
    GaugeFn,
    bilinear_covariants,
    gauge_transform_left_form,
    gauge_transform_representative,
    lorentz_covariance_check,
    make_plane_wave,
    residual_complex_ideal,
    residual_covariant,
    residual_left_form,
    residual_representative,
    scalar_gradient,
)
from sta.errors import KindMismatch, NotEven, NotInIdeal, NotRotor
from sta.fields import (
    CliffordField,
    Constant,
    LeftSpinorField,
    ScalarLinear,
    ScalarSine,
    evaluate,
    f_product,
)
from sta.geometry import Chart, SpacetimeSetup
from sta.spinors import IDEMPOTENT_F, build_gamma_rep, columns_from_coeffs
from sta.suites import random_connection, random_field_expr, random_potential

CHART = Chart([0, 0, 0, 0], [1, 1, 1, 1])
FLAT = SpacetimeSetup(CHART)
XS = CHART.grid(5)
RNG = np.random.default_rng(99)
REP = build_gamma_rep()


def rc_setup(seed):
    return SpacetimeSetup(CHART, random_connection(np.random.default_rng(seed)))


def rc_params(seed):
    rng = np.random.default_rng(seed)
    return DiracParams(float(rng.uniform(0.3, 1.4)), float(rng.uniform(-1, 1)),
                       random_potential(rng))


# -- plane waves ---------------------------------------------------------------


def test_rest_plane_wave_solves_every_form():
    m = 1.3
    params = DiracParams(m, 0.0)
    psi = make_plane_wave(m)
    assert residual_representative(psi, params, FLAT, XS).sup < 1e-10
    Psi = LeftSpinorField(psi.expr)
    assert residual_left_form(Psi, params, FLAT, XS).sup < 1e-10
    Pc = LeftSpinorField(f_product(psi.expr, Constant(IDEMPOTENT_F)))
    assert residual_complex_ideal(Pc, params, FLAT, XS).sup < 1e-10
    assert residual_covariant(ColumnSpinorField(Pc, REP), params, FLAT, XS).sup < 1e-9


def test_boosted_plane_wave_solves_dhe():
    m = 0.9
    boost = exp_bivector(0.45 * (E(1) * E(0)))
    psi = make_plane_wave(m, boost)
    assert residual_representative(psi, DiracParams(m, 0.0), FLAT, XS).sup < 1e-9
    bil = bilinear_covariants(make_plane_wave(m), FLAT)
    sig = evaluate(bil["sigma"], XS)[:, 0]
    om = evaluate(bil["omega"], XS)[:, 0]
    assert np.max(np.abs(sig - 1.0)) < 1e-12 and np.max(np.abs(om)) < 1e-12


def test_make_plane_wave_rejects_non_rotor():
    with pytest.raises(NotRotor):
        make_plane_wave(1.0, E(1))


def test_constant_unknown_residual_is_exactly_the_mass_term():
    params = DiracParams(1.0, 0.0)
    one = CliffordField(Constant(Multivector.scalar(1.0)))
    r = residual_representative(one, params, FLAT, XS)
    want = (-1.0 * E0).coeffs
    assert np.max(np.abs(r.values - want)) == 0.0
    assert r.sup == 1.0


def test_residual_linearity():
    params = rc_params(5)
    setup = rc_setup(5)
    e1 = random_field_expr(RNG, even=True)
    e2 = random_field_expr(RNG, even=True)
    r1 = residual_representative(CliffordField(e1), params, setup, XS)
    r2 = residual_representative(CliffordField(e2), params, setup, XS)
    r12 = residual_representative(CliffordField(e1) + CliffordField(e2), params, setup, XS)
    assert np.max(np.abs(r12.values - r1.values - r2.values)) < 1e-12


def test_residual_parity_and_kind_guards():
    params = DiracParams(1.0, 0.0)
    with pytest.raises(NotEven):
        residual_representative(CliffordField(Constant(E(1))), params, FLAT, XS)
    with pytest.raises(KindMismatch):
        residual_left_form(CliffordField(Constant(Multivector.scalar(1.0))), params, FLAT, XS)
    with pytest.raises(NotInIdeal):
        residual_complex_ideal(LeftSpinorField(Constant(Multivector.scalar(1.0))),
                               params, FLAT, XS)


# -- the triad of translations ---------------------------------------------------


def test_left_and_representative_forms_agree_componentwise():
    for seed in (21, 22):
        setup = rc_setup(seed)
        params = rc_params(seed)
        for _ in range(3):
            ex = random_field_expr(RNG, even=True)
            ra = residual_representative(CliffordField(ex), params, setup, XS, check_even=False)
            rb = residual_left_form(LeftSpinorField(ex), params, setup, XS, check_even=False)
            assert np.max(np.abs(ra.values - rb.values)) < 1e-12


def test_idempotent_projection_maps_left_form_to_ideal_form():
    setup = rc_setup(23)
    params = rc_params(23)
    for _ in range(3):
        ex = random_field_expr(RNG, even=True)
        rdecl = residual_left_form(LeftSpinorField(ex), params, setup, XS, check_even=False)
        projected = evaluate(f_product(rdecl.field.expr, Constant(IDEMPOTENT_F)), XS)
        pc = LeftSpinorField(f_product(ex, Constant(IDEMPOTENT_F)))
        rci = residual_complex_ideal(pc, params, setup, XS, check_ideal=False)
        assert np.max(np.abs(projected - rci.values)) < 1e-12


def test_column_bijection_intertwines_residuals():
    setup = rc_setup(29)
    params = rc_params(29)
    for _ in range(3):
        ex = random_field_expr(RNG, even=True)
        pc = LeftSpinorField(f_product(ex, Constant(IDEMPOTENT_F)))
        rci = residual_complex_ideal(pc, params, setup, XS, check_ideal=False)
        cols = columns_from_coeffs(rci.values, REP)
        rcv = residual_covariant(ColumnSpinorField(pc, REP), params, setup, XS)
        assert np.max(np.abs(cols - rcv.values)) < 1e-11


# -- gauge transformations --------------------------------------------------------


@pytest.mark.parametrize("chi_expr", [
    Constant(Multivector.scalar(0.4)),
    ScalarLinear([0.3, -0.2, 0.1, 0.4], 0.1),
    ScalarSine(0.5, [1.0, 0.7, -0.3, 0.2], 0.3),
], ids=["constant", "linear", "sine"])
def test_gauge_covariance_both_forms(chi_expr):
    setup = rc_setup(31)
    params = rc_params(31)
    chi = GaugeFn(chi_expr)
    ex = random_field_expr(RNG, even=True)

    Psi = LeftSpinorField(ex)
    P2, params2, G = gauge_transform_left_form(Psi, params, chi, setup)
    r1 = residual_left_form(Psi, params, setup, XS, check_even=False)
    r2 = residual_left_form(P2, params2, setup, XS, check_even=False)
    want = evaluate(f_product(r1.field.expr, G.expr), XS)
    assert np.max(np.abs(r2.values - want)) < 1e-11

    psi = CliffordField(ex)
    p2, params2b, G2 = gauge_transform_representative(psi, params, chi, setup)
    r1b = residual_representative(psi, params, setup, XS, check_even=False)
    r2b = residual_representative(p2, params2b, setup, XS, check_even=False)
    wantb = evaluate(f_product(r1b.field.expr, G2.expr), XS)
    assert np.max(np.abs(r2b.values - wantb)) < 1e-11


def test_constant_gauge_function_is_a_constant_rotor():
    setup = rc_setup(37)
    params = DiracParams(1.0, 0.8, random_potential(np.random.default_rng(37)))
    chi = GaugeFn(Constant(Multivector.scalar(0.25)))
    Psi = LeftSpinorField(random_field_expr(RNG, even=True))
    P2, params2, G = gauge_transform_left_form(Psi, params, chi, setup)
    assert np.max(np.abs(evaluate(params2.potential.expr, XS)
                         - evaluate(params.potential.expr, XS))) < 1e-15
    gvals = evaluate(G.expr, XS)
    assert np.max(np.abs(gvals - gvals[0])) < 1e-15
    want = exp_bivector(-params.charge * 0.25 * E21)
    assert np.allclose(gvals[0], want.coeffs, atol=1e-14)


def test_gauge_gradient_is_the_frame_gradient():
    chi = ScalarLinear([0.3, -0.2, 0.1, 0.4], 0.0)
    grad = scalar_gradient(chi, FLAT)
    got = grad.eval(XS)[0]
    want = (0.3 * E(0) - 0.2 * E(1) + 0.1 * E(2) + 0.4 * E(3)).coeffs
    assert np.allclose(got, want, atol=1e-14)


def test_gauge_rotor_leg_rotation_closed_forms():
    q, theta = 0.7, 0.83
    G = exp_bivector(-q * theta / 2 * E21)
    Gi = exp_bivector(q * theta / 2 * E21)
    cq, sq = np.cos(q * theta), np.sin(q * theta)
    assert (G * E(0) * Gi).approx_eq(E(0), 1e-12)
    assert (G * E(1) * Gi).approx_eq(cq * E(1) + sq * E(2), 1e-12)
    assert (G * E(2) * Gi).approx_eq(-sq * E(1) + cq * E(2), 1e-12)
    assert (G * E(3) * Gi).approx_eq(E(3), 1e-12)


# -- Lorentz covariance -------------------------------------------------------------


def test_lorentz_identity_rotor():
    params = rc_params(41)
    psi = CliffordField(random_field_expr(RNG, even=True))
    rep = lorentz_covariance_check(psi, params, rc_setup(41),
                                   Constant(Multivector.scalar(1.0)), XS)
    assert rep.defect < 1e-13
    assert np.max(np.abs(rep.residual_after.values - rep.residual_before.values)) < 1e-13


def test_lorentz_constant_boost():
    params = rc_params(43)
    psi = CliffordField(random_field_expr(RNG, even=True))
    u = Constant(exp_bivector(0.35 * (E(1) * E(0))))
    rep = lorentz_covariance_check(psi, params, rc_setup(43), u, XS)
    assert rep.defect < 1e-9


def test_lorentz_local_rotor():
    from sta.suites import random_rotor_expr

    params = rc_params(47)
    psi = CliffordField(random_field_expr(RNG, even=True))
    u = random_rotor_expr(np.random.default_rng(47))
    rep = lorentz_covariance_check(psi, params, rc_setup(47), u, XS)
    assert rep.defect < 1e-8


def test_lorentz_rejects_non_rotor():
    with pytest.raises(NotRotor):
        lorentz_covariance_check(CliffordField(Constant(Multivector.scalar(1.0))),
                                 DiracParams(1.0, 0.0), FLAT, Constant(E(1)), XS)


# -- bilinears ------------------------------------------------------------------------


def test_bilinears_of_unity():
    bil = bilinear_covariants(CliffordField(Constant(Multivector.scalar(1.0))), FLAT)
    x0 = XS[:1]
    assert np.allclose(evaluate(bil["S"].expr, x0)[0], Multivector.scalar(1.0).coeffs)
    assert np.allclose(evaluate(bil["J"].expr, x0)[0], E(0).coeffs)          # e_0
    assert np.allclose(evaluate(bil["K"].expr, x0)[0], (-1.0 * E(3)).coeffs)  # e_3
    assert np.allclose(evaluate(bil["M"].expr, x0)[0], (E(1) * E(2)).coeffs)  # e_1 e_2
    assert evaluate(bil["sigma"], x0)[0, 0] == 1.0
    assert evaluate(bil["omega"], x0)[0, 0] == 0.0


def test_bilinears_spin_plane_rotor_keeps_current():
    rot = CliffordField(Constant(exp_bivector(0.77 * E21)))
    bil = bilinear_covariants(rot, FLAT)
    assert np.allclose(evaluate(bil["J"].expr, XS[:1])[0], E(0).coeffs, atol=1e-14)


def test_bilinear_grade_purity_and_quadratic_relations():
    for _ in range(30):
        m = Multivector(RNG.normal(size=16)).even()
        bil = bilinear_covariants(CliffordField(Constant(m)), FLAT, check_even=False)
        x0 = XS[:1]
        memo = {}
        S = evaluate(bil["S"].expr, x0, memo)[0]
        J = evaluate(bil["J"].expr, x0, memo)[0]
        K = evaluate(bil["K"].expr, x0, memo)[0]
        M = evaluate(bil["M"].expr, x0, memo)[0]
        assert np.max(np.abs(S[(GRADES != 0) & (GRADES != 4)])) < 1e-12
        assert np.max(np.abs(J[GRADES != 1])) < 1e-12
        assert np.max(np.abs(K[GRADES != 1])) < 1e-12
        assert np.max(np.abs(M[GRADES != 2])) < 1e-12
        sig = evaluate(bil["sigma"], x0, memo)[0, 0]
        om = evaluate(bil["omega"], x0, memo)[0, 0]
        assert abs(gp_batch(J, J)[0] - (sig**2 + om**2)) < 1e-10
        assert abs(gp_batch(K, K)[0] + (sig**2 + om**2)) < 1e-10
        assert abs(0.5 * (gp_batch(J, K) + gp_batch(K, J))[0]) < 1e-10


def test_bilinears_reject_odd_input():
    with pytest.raises(NotEven):
        bilinear_covariants(CliffordField(Constant(E(1))), FLAT)
