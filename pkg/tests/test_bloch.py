"""Correlator equations of motion: closed forms, both steady-state routes."""

from __future__ import annotations

import dataclasses

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import rabiprobe as rp
from rabiprobe import bloch


def state_vec(result):
    return result.state.to_vector()


def test_ground_state_is_dark_fixed_point(params):
    drive = rp.drive_for_detunings(params, 0.0, 0.0, xi=0.0, omega_rabi=0.0)
    g = rp.ground_state(params)
    deriv = rp.rhs(params, drive, g)
    np.testing.assert_allclose(deriv.to_vector(), np.zeros(12), atol=1e-14)


def test_state_vector_round_trip():
    vals = np.linspace(-0.7, 0.4, 12)
    state = rp.SystemState.from_vector(vals)
    np.testing.assert_array_equal(state.to_vector(), vals)
    assert state.a == complex(vals[3], vals[4])
    assert state.asz == complex(vals[10], vals[11])


@given(st.lists(st.floats(min_value=-2.0, max_value=2.0), min_size=12,
                max_size=12),
       st.floats(min_value=-50.0, max_value=50.0),
       st.floats(min_value=0.0, max_value=30.0))
@settings(max_examples=50, deadline=None)
def test_batched_derivative_matches_flat(y_list, d_r, omega_rabi):
    params = rp.default_params()
    drive = rp.drive_for_detunings(params, d_r, -params.chi, 0.3, omega_rabi)
    c = bloch._coeffs(params, drive)
    y = np.asarray(y_list)
    flat = np.asarray(bloch._rhs_flat(0.0, y, c))
    batched = bloch._rhs_batch(y[None, :], c)[0]
    np.testing.assert_allclose(batched, flat, rtol=1e-13, atol=1e-13)


def test_undriven_field_closed_form(params, weak_xi):
    # Without a qubit drive the probe sees a single pulled Lorentzian:
    # |a| = xi / sqrt(kappa^2 + (d_omega_r - chi*z0)^2), and with an
    # empty bath the photon number is purely coherent.
    for d_r in np.linspace(-2.0 * params.chi, 2.0 * params.chi, 9):
        drive = rp.drive_for_detunings(params, d_r, 0.0, weak_xi, 0.0)
        res = rp.steady_state(params, drive, rp.Strategy.NEWTON)
        expect = weak_xi / np.hypot(params.kappa,
                                    d_r - params.chi * params.z0)
        assert abs(res.state.a) == pytest.approx(expect, rel=1e-9)
        assert res.state.n_ph == pytest.approx(abs(res.state.a) ** 2,
                                               rel=1e-8, abs=1e-12)


def test_undriven_field_linear_in_probe(params):
    drive1 = rp.drive_for_detunings(params, 0.4 * params.chi, 0.0, 0.1, 0.0)
    drive2 = rp.drive_for_detunings(params, 0.4 * params.chi, 0.0, 0.2, 0.0)
    a1 = rp.steady_state(params, drive1).state.a
    a2 = rp.steady_state(params, drive2).state.a
    assert a2 == pytest.approx(2.0 * a1, rel=1e-9)


def test_inversion_free_decay(params):
    # sz relaxes exponentially at Gamma_1/z0 toward -z0 when nothing
    # drives the system.
    drive = rp.drive_for_detunings(params, 0.0, 0.0, xi=0.0, omega_rabi=0.0)
    excited = dataclasses.replace(rp.ground_state(params), sz=0.6)
    t_eval = np.linspace(0.0, 3.0, 7)
    traj = rp.evolve(params, drive, excited, 3.0, t_eval=t_eval)
    sz = traj.y[:, 2]
    z0 = params.z0
    expect = -z0 + (0.6 + z0) * np.exp(-params.gamma1 * t_eval / z0)
    np.testing.assert_allclose(sz, expect, rtol=1e-8, atol=1e-10)


def test_steady_photon_balance(params, omega1, weak_xi):
    # Stationarity of the photon-number equation ties n to the field
    # quadrature the probe feeds: n = n_th - (xi/kappa) Im<a>.
    for om, d_r in [(0.0, params.chi), (omega1, 0.0),
                    (10.0 * omega1, -0.5 * params.chi)]:
        drive = rp.drive_for_detunings(params, d_r, -params.chi, weak_xi, om)
        s = rp.steady_state(params, drive).state
        assert s.n_ph == pytest.approx(
            params.n_th - weak_xi * s.a.imag / params.kappa,
            rel=1e-8, abs=1e-12,
        )


def test_thermal_bath_fills_cavity():
    params = dataclasses.replace(rp.default_params(), n_th=0.15)
    drive = rp.drive_for_detunings(params, 0.0, 0.0, xi=0.0, omega_rabi=0.0)
    s = rp.steady_state(params, drive).state
    assert s.n_ph == pytest.approx(0.15, rel=1e-9)
    assert s.sz == pytest.approx(-params.z0, rel=1e-9)


def test_dark_qubit_saturation_curve(params, omega1):
    # With the probe off, the driven qubit settles on the familiar
    # saturation curve; the occupation written in terms of the pumped
    # inversion matches it.
    d_q = -params.chi          # cancels the static frequency pull at n=0
    delta = d_q + params.chi
    for om in (0.3 * omega1, omega1, 5.0 * omega1):
        drive = rp.drive_for_detunings(params, 0.0, d_q, 0.0, om)
        s = rp.steady_state(params, drive).state
        occupation = 0.5 * (1.0 + s.sz / params.z0)
        expect = 0.5 * om**2 / (
            om**2
            + params.gamma1 * params.gamma2
            + (params.gamma1 / params.gamma2) * delta**2
        )
        assert occupation == pytest.approx(expect, rel=1e-8, abs=1e-12)


def test_evolution_reaches_newton_fixed_point(params, omega1, weak_xi):
    drive = rp.drive_for_detunings(params, 0.5 * params.chi, -params.chi,
                                   weak_xi, 2.0 * omega1)
    newton = rp.steady_state(params, drive, rp.Strategy.NEWTON)
    traj = rp.evolve(params, drive, rp.ground_state(params), 60.0,
                     rtol=1e-10, atol=1e-13)
    np.testing.assert_allclose(traj.y[-1], state_vec(newton),
                               rtol=1e-6, atol=1e-9)


def test_both_strategies_agree_on_small_grid(params, omega1, weak_xi):
    drives = [
        rp.drive_for_detunings(params, d_r, -params.chi, weak_xi, om)
        for om in (0.3 * omega1, 3.0 * omega1)
        for d_r in (-params.chi, 0.0, params.chi)
    ]
    newton = rp.steady_states(params, drives, rp.Strategy.NEWTON)
    timedom = rp.steady_states(params, drives, rp.Strategy.TIME_EVOLUTION)
    for res_n, res_t in zip(newton, timedom):
        scale = max(1.0, np.max(np.abs(state_vec(res_n))))
        np.testing.assert_allclose(state_vec(res_n), state_vec(res_t),
                                   atol=1e-6 * scale)
        assert res_n.strategy is rp.Strategy.NEWTON
        assert res_t.strategy is rp.Strategy.TIME_EVOLUTION


def test_steady_row_matches_single_solves(params, omega1, weak_xi):
    d_r = np.linspace(-1.5 * params.chi, 1.5 * params.chi, 11)
    Y, ok = bloch.steady_row(params, d_r, -params.chi, weak_xi, omega1)
    assert ok.all()
    assert np.isfinite(Y).all()
    for i in (0, 5, 10):
        drive = rp.drive_for_detunings(params, d_r[i], -params.chi,
                                       weak_xi, omega1)
        single = rp.steady_state(params, drive)
        np.testing.assert_allclose(Y[i], state_vec(single),
                                   rtol=1e-7, atol=1e-10)


def test_steady_states_preserve_input_order(params, omega1, weak_xi):
    drives = [
        rp.drive_for_detunings(params, d_r, -params.chi, weak_xi, omega1)
        for d_r in (params.chi, -params.chi, 0.0)
    ]
    results = rp.steady_states(params, drives)
    amps = [abs(r.state.a) for r in results]
    # ground-state peak first, weak satellite second, valley last
    assert amps[0] > amps[2] > amps[1] * 0.0
    assert amps[0] == max(amps)


def test_residuals_reported_small(params, omega1, weak_xi):
    drive = rp.drive_for_detunings(params, 0.2 * params.chi, -params.chi,
                                   weak_xi, omega1)
    res = rp.steady_state(params, drive)
    assert res.residual < 1e-9
