"""Acceptance gate: ten externally stated checks, one test each, in order.

Each test prints one measured-verdict line; the pytest PASSED/FAILED
status is the authoritative pass/fail signal.  Tolerances and runtime
budgets are stated inline and are not adjustable.
"""

from __future__ import annotations

import time

import numpy as np
import pytest

import rabiprobe as rp
from rabiprobe import bloch
from rabiprobe import semiclassical as sc
from rabiprobe import spectroscopy as spec


PARAMS = rp.default_params()
OMEGA1 = rp.omega1_zero_detuning(PARAMS)
WEAK_XI = 0.05 * PARAMS.kappa
PROBE = rp.default_probe_axis(PARAMS)
GRID_STEP = PROBE[1] - PROBE[0]


def verdict(name: str, ok: bool, detail: str) -> None:
    print(f"ACCEPTANCE {name}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, f"{name}: {detail}"


@pytest.fixture(scope="module")
def strategy_grid():
    """Shared 10x10 steady-state grid solved with both strategies."""
    oms = np.geomspace(0.1, 30.0, 10) * OMEGA1
    drs = np.linspace(-1.5 * PARAMS.chi, 1.5 * PARAMS.chi, 10)
    drives = [
        rp.drive_for_detunings(PARAMS, d_r, -PARAMS.chi, WEAK_XI, om)
        for om in oms
        for d_r in drs
    ]
    t0 = time.perf_counter()
    newton = rp.steady_states(PARAMS, drives, rp.Strategy.NEWTON)
    timedom = rp.steady_states(PARAMS, drives, rp.Strategy.TIME_EVOLUTION)
    elapsed = time.perf_counter() - t0
    y_newton = np.array([r.state.to_vector() for r in newton])
    y_timedom = np.array([r.state.to_vector() for r in timedom])
    return y_newton, y_timedom, elapsed


def test_saturation_quarter_occupation():
    # occupation at the threshold amplitude is exactly 1/4
    om1_sq = sc.omega1_squared(PARAMS, 0.0, 0.0)
    sc.p_plus(np.sqrt(om1_sq), om1_sq)      # warm the code path
    t0 = time.perf_counter()
    p = sc.p_plus(np.sqrt(om1_sq), om1_sq)
    elapsed = time.perf_counter() - t0
    ok = abs(p - 0.25) <= 1e-9 and elapsed < 1e-3
    verdict("saturation-quarter-occupation", ok,
            f"p_plus(omega1) = {p:.12f}, runtime {elapsed * 1e6:.1f} us")


def test_threshold_amplitude_value():
    expect = 2.0 / np.sqrt(PARAMS.t1 * PARAMS.t2)
    rel = abs(OMEGA1 - expect) / expect
    ok = rel <= 1e-12
    verdict("threshold-amplitude-value", ok,
            f"omega1 = {OMEGA1:.13f} rad/us, relative error {rel:.2e}")


def test_zero_drive_cross_model():
    # with the drive off, the correlator steady state must reproduce the
    # dark-qubit cavity line of the self-consistent model
    axis = np.linspace(-2.0 * PARAMS.chi, 2.0 * PARAMS.chi, 50)
    t0 = time.perf_counter()
    drives = [
        rp.drive_for_detunings(PARAMS, d_r, 0.0, WEAK_XI, 0.0)
        for d_r in axis
    ]
    results = rp.steady_states(PARAMS, drives, rp.Strategy.NEWTON)
    measured = np.array([abs(r.state.a) for r in results])
    elapsed = time.perf_counter() - t0
    expect = np.sqrt(sc.cavity_intensity(PARAMS, axis, 0.0, WEAK_XI))
    rel = np.max(np.abs(measured - expect) / expect)
    ok = rel <= 1e-6 and elapsed < 10.0
    verdict("zero-drive-cross-model", ok,
            f"max relative deviation {rel:.2e} over 50 points, "
            f"runtime {elapsed:.2f} s")


def test_newton_matches_integration(strategy_grid):
    y_newton, y_timedom, elapsed = strategy_grid
    scale = np.maximum(1.0, np.max(np.abs(y_newton), axis=1))
    err = float(np.max(np.abs(y_newton - y_timedom) / scale[:, None]))
    ok = err <= 1e-6 and elapsed < 120.0
    verdict("newton-matches-integration", ok,
            f"max scaled component deviation {err:.2e} on 10x10 grid, "
            f"runtime {elapsed:.1f} s")


def test_weak_drive_peak_positions():
    # a tenth of the threshold amplitude: resolved lines at -chi and
    # +chi, ground-state line higher
    y, ok_mask = bloch.steady_row(PARAMS, PROBE, -PARAMS.chi, WEAK_XI,
                                  0.1 * OMEGA1)
    cut = np.hypot(y[:, 3], y[:, 4]) / (WEAK_XI / PARAMS.kappa)
    rep = rp.find_peaks(PROBE, cut)
    detail = (
        f"classified {rep.classification.value}, positions/chi "
        f"{[f'{p / PARAMS.chi:+.3f}' for p in rep.positions]}, heights "
        f"{[f'{h:.3f}' for h in rep.heights]}, grid step {GRID_STEP:.3f}"
    )
    ok = (
        ok_mask.all()
        and rep.classification is rp.Classification.TWO_PEAKS
        and abs(rep.positions[0] + PARAMS.chi) <= GRID_STEP * (1 + 1e-9)
        and abs(rep.positions[1] - PARAMS.chi) <= GRID_STEP * (1 + 1e-9)
        and rep.heights[1] > rep.heights[0]
    )
    verdict("weak-drive-peak-positions", ok, detail)


def test_strong_drive_single_line():
    # thirty times the threshold amplitude: the averaged response
    # collapses onto the bare-resonator line
    cut, n_failed = spec._row_amplitudes(
        PARAMS, rp.Model.ANALYTICAL, PROBE, 0.0, WEAK_XI, 30.0 * OMEGA1)
    rep = rp.find_peaks(PROBE, cut)
    ok = (
        n_failed == 0
        and rep.classification is rp.Classification.ONE_PEAK
        and abs(rep.positions[0]) < 0.5 * PARAMS.kappa
        and rep.heights[0] >= 0.95
    )
    verdict(
        "strong-drive-single-line", ok,
        f"classified {rep.classification.value}, positions "
        f"{[f'{p:.3f}' for p in rep.positions]} rad/us, heights "
        f"{[f'{h:.3f}' for h in rep.heights]}",
    )


def test_equal_height_crossover():
    # somewhere between the threshold and the collapse amplitude the two
    # lines should carry equal weight to within 5%
    omega2 = rp.omega2_vs_photon_number(
        PARAMS, [WEAK_XI], model=rp.Model.ANALYTICAL)[0][1]
    candidates = []
    for om in rp.default_amplitude_axis(PARAMS):
        y, _ = bloch.steady_row(PARAMS, PROBE, -PARAMS.chi, WEAK_XI, om)
        cut = np.hypot(y[:, 3], y[:, 4]) / (WEAK_XI / PARAMS.kappa)
        rep = rp.find_peaks(PROBE, cut)
        if rep.classification is rp.Classification.TWO_PEAKS:
            gap = abs(rep.heights[0] - rep.heights[1]) / max(rep.heights)
            if gap < 0.05:
                candidates.append((om, gap))
    hits = [om for om, _ in candidates if OMEGA1 < om < omega2]
    detail = (
        f"near-equal heights at omega/omega1 = "
        f"{[f'{om / OMEGA1:.2f}' for om, _ in candidates]}, window "
        f"(omega1, omega2) = ({OMEGA1:.3f}, {omega2:.3f}) rad/us"
    )
    verdict("equal-height-crossover", bool(hits), detail)


def test_collapse_amplitude_monotone():
    xi_values = np.array([0.01, 0.05, 0.2, 0.5, 1.0, 2.0]) * PARAMS.kappa
    t0 = time.perf_counter()
    pairs = rp.omega2_vs_photon_number(PARAMS, xi_values,
                                       model=rp.Model.ANALYTICAL)
    elapsed = time.perf_counter() - t0
    n_refs = np.array([n for n, _ in pairs])
    om2s = np.array([o for _, o in pairs])
    oracle = OMEGA1 * np.sqrt(PARAMS.chi / PARAMS.kappa - 1.0)
    ratio = om2s[0] / oracle
    ok = (
        np.all(np.diff(n_refs) > 0.0)
        and np.all(np.diff(om2s) >= 0.0)
        and 0.5 <= ratio <= 2.0
        and elapsed < 600.0
    )
    verdict(
        "collapse-amplitude-monotone", ok,
        f"omega2 = {[f'{o:.3f}' for o in om2s]} rad/us over n_ref = "
        f"{[f'{n:.4g}' for n in n_refs]}, weakest-probe ratio to oracle "
        f"{ratio:.3f}, runtime {elapsed:.1f} s",
    )


def test_average_identities():
    axis = np.linspace(-2.0 * PARAMS.chi, 2.0 * PARAMS.chi, 201)
    half = rp.shifted_partial_amplitude(PARAMS, axis, WEAK_XI, 0.5)
    merged = rp.merged_amplitude(PARAMS, axis, WEAK_XI)
    exact_half = np.array_equal(half, merged)

    dark = rp.probabilistic_average(
        0.0,
        rp.shifted_partial_amplitude(PARAMS, axis, WEAK_XI, 1.0),
        rp.shifted_partial_amplitude(PARAMS, axis, WEAK_XI, 0.0),
    )
    ground = rp.partial_amplitude(PARAMS, axis, WEAK_XI, -1)
    exact_dark = np.array_equal(dark, ground)

    convex = True
    for p in np.linspace(0.0, 1.0, 21):
        lo = rp.shifted_partial_amplitude(PARAMS, axis, WEAK_XI, 1.0 - p)
        hi = rp.shifted_partial_amplitude(PARAMS, axis, WEAK_XI, p)
        avg = rp.probabilistic_average(p, lo, hi)
        convex &= bool(
            np.all(avg >= np.minimum(lo, hi) - 1e-15)
            and np.all(avg <= np.maximum(lo, hi) + 1e-15)
        )
    ok = exact_half and exact_dark and convex
    verdict(
        "average-identities", ok,
        f"equal-weights collapse exact: {exact_half}, dark-qubit line "
        f"exact: {exact_dark}, convexity on 21 weights: {convex}",
    )


def test_bloch_vector_bound(strategy_grid):
    y_newton, _, _ = strategy_grid
    norm_sq = np.sum(y_newton[:, :3] ** 2, axis=1)
    worst = float(np.max(norm_sq))
    ok = worst <= 1.0 + 1e-6
    verdict("bloch-vector-bound", ok,
            f"max Bloch-vector norm^2 = {worst:.9f} over the shared grid")
