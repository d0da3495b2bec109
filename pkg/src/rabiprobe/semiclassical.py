"""Semiclassical cavity response and probabilistic line averaging.

Treating the resonator field classically, the steady-state photon number
obeys a self-consistency condition: the qubit excitation probability
P_plus depends on the intracavity photon number n through the ac-Stark
shifted saturation width Omega_1(n), and n in turn depends on P_plus
through the state-dependent pull of the resonator line,

    n = xi^2 / ([chi*(2 P_plus - 1) + d_omega_r]^2 + kappa^2),
    P_plus = (1/2) Omega^2 / (Omega^2 + Omega_1^2(n)),
    Omega_1^2(n) = 4 Gamma_1 Gamma_2 + 4 (Gamma_1/Gamma_2) (d_omega_q + 2 chi n)^2.

The fixed point is found by damped iteration, backed by a root scan that
also counts coexisting branches (the condition can be bistable at large
probe power).  On top of the self-consistent solution the module gives
the probabilistically averaged transmission amplitude: a weighted sum of
two Lorentzian-type lines pulled toward each other by the occupations of
the two qubit states.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import Detunings, DriveConfig, SystemParams, detunings

# Damped fixed-point iteration controls.
_DAMPING = 0.5
_MAX_ITER = 10_000
_TOL = 1.0e-12

# Root-scan controls.
_SCAN_POINTS = 1000
_BISECT_ITER = 100


def omega1_squared(
    params: SystemParams, d_omega_q: float, n_ph: float
) -> float:
    """Square of the saturation drive amplitude at photon number n_ph.

    ``4*Gamma_1*Gamma_2`` on resonance, growing quadratically with the
    Stark-shifted drive detuning ``d_omega_q + 2*chi*n_ph``.
    """
    det = d_omega_q + 2.0 * params.chi * n_ph
    return (
        4.0 * params.gamma1 * params.gamma2
        + 4.0 * (params.gamma1 / params.gamma2) * det * det
    )


def p_plus(omega_rabi: float, omega1_sq: float):
    """Upper-level occupation of the driven qubit, in [0, 1/2)."""
    om_sq = np.square(omega_rabi)
    return 0.5 * om_sq / (om_sq + omega1_sq)


def cavity_intensity(
    params: SystemParams, d_omega_r: float, p_plus_val: float, xi: float
):
    """Photon number of a resonator pulled by the mean qubit inversion.

    The resonance sits at ``d_omega_r = -chi*(2*p_plus - 1)``, i.e. at
    ``+chi`` for a ground-state qubit and ``-chi`` for an inverted one.
    """
    pull = params.chi * (2.0 * p_plus_val - 1.0) + d_omega_r
    return xi * xi / (pull * pull + params.kappa * params.kappa)


@dataclass(frozen=True)
class SemiclassicalSolution:
    """Self-consistent steady state of the semiclassical model."""

    n_ph: float          # photon number at the selected fixed point
    p_plus: float        # upper-level occupation at that photon number
    omega1: float        # saturation amplitude Omega_1(n_ph) [rad/us]
    residual: float      # |n - F(n)| at the selected fixed point
    iterations: int      # damped-iteration count until convergence
    converged: bool      # damped iteration met tolerance
    branch_count: int    # number of coexisting fixed points found by the scan

    @property
    def amplitude(self) -> float:
        """Field amplitude |<a>| = sqrt(n_ph) at the fixed point."""
        return float(np.sqrt(self.n_ph))


def _intensity_map(params, d_omega_r, d_omega_q, xi, omega_rabi, n):
    """One application n -> F(n) of the self-consistency map, vectorized."""
    occ = p_plus(omega_rabi, omega1_squared(params, d_omega_q, n))
    return cavity_intensity(params, d_omega_r, occ, xi)


def solve_row(
    params: SystemParams,
    d_omega_r: np.ndarray,
    d_omega_q: float,
    xi: float,
    omega_rabi: float,
) -> dict:
    """Solve the self-consistency condition on a whole probe-detuning row.

    Vectorized over ``d_omega_r``.  Every point is handled independently
    (the damped iteration for one point is frozen the moment it meets
    tolerance), so the result for a point does not depend on which other
    points share the batch.

    Parameters
    ----------
    params : SystemParams
    d_omega_r : ndarray
        Probe detunings, rad/us.
    d_omega_q : float
        Drive detuning from the bare qubit, rad/us.
    xi, omega_rabi : float
        Probe and drive amplitudes, rad/us.

    Returns
    -------
    dict with arrays ``n_ph``, ``p_plus``, ``omega1``, ``residual``,
    ``iterations``, ``converged`` and the integer array ``branch_count``.
    """
    d_omega_r = np.atleast_1d(np.asarray(d_omega_r, dtype=float))
    npts = d_omega_r.size

    if xi == 0.0:
        n = np.zeros(npts)
        occ = np.broadcast_to(
            p_plus(omega_rabi, omega1_squared(params, d_omega_q, 0.0)), (npts,)
        ).copy()
        om1 = np.sqrt(omega1_squared(params, d_omega_q, 0.0))
        return {
            "n_ph": n,
            "p_plus": occ,
            "omega1": np.full(npts, om1),
            "residual": np.zeros(npts),
            "iterations": np.zeros(npts, dtype=int),
            "converged": np.ones(npts, dtype=bool),
            "branch_count": np.ones(npts, dtype=int),
        }

    # Damped iteration from the empty resonator.  Converged points are
    # frozen so their value (and iteration count) is batch-independent.
    n = np.zeros(npts)
    converged = np.zeros(npts, dtype=bool)
    iterations = np.zeros(npts, dtype=int)
    for k in range(1, _MAX_ITER + 1):
        fn = _intensity_map(params, d_omega_r, d_omega_q, xi, omega_rabi, n)
        ok = np.abs(n - fn) < _TOL * np.maximum(1.0, n)
        newly = ok & ~converged
        iterations[newly] = k
        converged |= ok
        if converged.all():
            break
        n = np.where(converged, n, n + _DAMPING * (fn - n))
    iterations[~converged] = _MAX_ITER

    roots_lo, branch_count = _scan_roots(
        params, d_omega_r, d_omega_q, xi, omega_rabi
    )
    # Unconverged points fall back to the lowest scanned branch, which is
    # the one a resonator ramped up from vacuum settles on.
    n = np.where(converged, n, roots_lo)

    fn = _intensity_map(params, d_omega_r, d_omega_q, xi, omega_rabi, n)
    residual = np.abs(n - fn)
    om1_sq = omega1_squared(params, d_omega_q, n)
    occ = p_plus(omega_rabi, om1_sq)
    return {
        "n_ph": n,
        "p_plus": occ,
        "omega1": np.sqrt(om1_sq),
        "residual": residual,
        "iterations": iterations,
        "converged": converged,
        "branch_count": branch_count,
    }


def _scan_roots(params, d_omega_r, d_omega_q, xi, omega_rabi):
    """Bracket-and-bisect all fixed points of n -> F(n) along a row.

    Scans a log-spaced grid up to four times the free-resonator photon
    number (F never exceeds xi^2/kappa^2, so every fixed point lies
    below that) and bisects every down-crossing of F(n) - n.  Returns
    the smallest root per point and the number of roots found.
    """
    npts = d_omega_r.size
    hi = 4.0 * xi * xi / (params.kappa * params.kappa)
    grid = np.concatenate(
        ([0.0], np.geomspace(hi * 1.0e-12, hi, _SCAN_POINTS - 1))
    )
    # g has shape (npts, scan); g(0) = F(0) >= 0 and g(hi) < 0.
    g = (
        _intensity_map(
            params, d_omega_r[:, None], d_omega_q, xi, omega_rabi, grid[None, :]
        )
        - grid[None, :]
    )
    down = (g[:, :-1] > 0.0) & (g[:, 1:] <= 0.0)
    ipt, iseg = np.nonzero(down)
    lo = grid[:-1][iseg].copy()
    up = grid[1:][iseg].copy()
    dr = d_omega_r[ipt]
    for _ in range(_BISECT_ITER):
        mid = 0.5 * (lo + up)
        done = (mid <= lo) | (mid >= up)
        if done.all():
            break
        gm = (
            _intensity_map(params, dr, d_omega_q, xi, omega_rabi, mid) - mid
        )
        take_lo = gm > 0.0
        lo = np.where(take_lo & ~done, mid, lo)
        up = np.where(~take_lo & ~done, mid, up)
    root = 0.5 * (lo + up)

    branch_count = np.zeros(npts, dtype=int)
    np.add.at(branch_count, ipt, 1)
    roots_lo = np.full(npts, np.nan)
    # First bracket per point is the smallest root (grid is ascending).
    first = np.full(npts, -1)
    for j in range(ipt.size - 1, -1, -1):
        first[ipt[j]] = j
    has = first >= 0
    roots_lo[has] = root[first[has]]
    # No sign change can only happen if F - n stayed pinned at 0 or the
    # row is degenerate; fall back to the direct map from n = 0.
    if not has.all():
        miss = ~has
        roots_lo[miss] = _intensity_map(
            params, d_omega_r[miss], d_omega_q, xi, omega_rabi, 0.0
        )
        branch_count[miss] = 1
    return roots_lo, branch_count


def solve_self_consistent(
    params: SystemParams, drive: DriveConfig
) -> SemiclassicalSolution:
    """Self-consistent semiclassical steady state for a single drive point.

    Damped iteration (damping 0.5 from n = 0) determines the physical
    branch; an exhaustive root scan counts coexisting branches.  When the
    iteration fails to settle, the smallest scanned root is returned and
    ``converged`` is False.
    """
    det = detunings(params, drive)
    row = solve_row(
        params,
        np.array([det.d_omega_r]),
        det.d_omega_q,
        drive.xi,
        drive.omega_rabi,
    )
    return SemiclassicalSolution(
        n_ph=float(row["n_ph"][0]),
        p_plus=float(row["p_plus"][0]),
        omega1=float(row["omega1"][0]),
        residual=float(row["residual"][0]),
        iterations=int(row["iterations"][0]),
        converged=bool(row["converged"][0]),
        branch_count=int(row["branch_count"][0]),
    )


def partial_amplitude(
    params: SystemParams, d_omega_r, xi: float, shift_sign: int
):
    """Transmission amplitude of one frozen qubit state.

    ``shift_sign = -1`` is the ground-state line (peak at d_omega_r =
    +chi), ``shift_sign = +1`` the excited-state line (peak at -chi).
    """
    if shift_sign not in (-1, 1):
        raise ValueError(f"shift_sign must be +1 or -1, got {shift_sign}")
    pull = shift_sign * params.chi + d_omega_r
    return xi / np.sqrt(pull * pull + params.kappa * params.kappa)


def merged_amplitude(params: SystemParams, d_omega_r, xi: float):
    """Transmission amplitude in the fast-averaging limit: a single
    unshifted line at the bare resonator frequency."""
    return xi / np.sqrt(
        np.square(d_omega_r) + params.kappa * params.kappa
    )


def shifted_partial_amplitude(
    params: SystemParams, d_omega_r, xi: float, p
):
    """Partial line whose pull is reduced by the occupation of the other
    qubit state.

    At ``p = 0`` this is the bare ground-state line (``shift_sign = +1``
    convention of :func:`partial_amplitude` with the opposite label); at
    ``p = 1/2`` both partial lines coincide with the merged line.
    """
    pull = params.chi * (1.0 - 2.0 * np.asarray(p)) + d_omega_r
    out = xi / np.sqrt(pull * pull + params.kappa * params.kappa)
    if np.ndim(out) == 0:
        return float(out)
    return out


def probabilistic_average(p_plus_val, a_minus, a_plus):
    """Occupation-weighted mean of the two partial amplitudes."""
    p = np.asarray(p_plus_val)
    if np.any(p < 0.0) or np.any(p > 1.0):
        raise ValueError("p_plus must lie in [0, 1]")
    out = (1.0 - p) * np.asarray(a_minus) + p * np.asarray(a_plus)
    if np.ndim(out) == 0:
        return float(out)
    return out


def averaged_row(
    params: SystemParams,
    d_omega_r: np.ndarray,
    d_omega_q: float,
    xi: float,
    omega_rabi: float,
) -> np.ndarray:
    """Probabilistically averaged transmission along a probe-detuning row.

    Each partial line is pulled by the self-consistent occupation of the
    opposite qubit state, then the two are weighted by the occupations
    themselves.
    """
    row = solve_row(params, d_omega_r, d_omega_q, xi, omega_rabi)
    occ = row["p_plus"]
    a_minus = shifted_partial_amplitude(params, d_omega_r, xi, 1.0 - occ)
    a_plus = shifted_partial_amplitude(params, d_omega_r, xi, occ)
    return probabilistic_average(occ, a_minus, a_plus)
