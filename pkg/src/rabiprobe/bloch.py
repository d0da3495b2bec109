"""Correlator equations of motion for the driven qubit-resonator system.

The model keeps, besides the Bloch vector <sigma_i> and the field <a>,
the photon number <a+a> and the mixed second-order correlators
<a sigma_i>.  Factorizing those correlators would give back the
semiclassical model; keeping them captures the qubit-state-dependent
splitting of the resonator line and its collapse under strong driving.

The state is packed into 12 reals in the fixed order

    (sx, sy, sz, Re a, Im a, n_ph,
     Re asx, Im asx, Re asy, Im asy, Re asz, Im asz)

and all solvers below operate on that packing.  Two independent routes
to the steady state are provided: direct time evolution until the
right-hand side stays below tolerance over a trailing window, and a
damped Newton iteration on the right-hand side with a finite-difference
Jacobian.  They are implemented separately on purpose, so one can be
used to validate the other.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from . import semiclassical
from .errors import NoConvergence, StepSizeUnderflow
from .params import DriveConfig, SystemParams, detunings

STATE_LABELS = (
    "sx", "sy", "sz", "a_re", "a_im", "n_ph",
    "asx_re", "asx_im", "asy_re", "asy_im", "asz_re", "asz_im",
)

_SQRT_EPS = math.sqrt(np.finfo(float).eps)

# Steady-state detection: rhs max-norm below 1e-8 * max(kappa, Gamma_1)
# over a trailing 1 us window; evolution capped at 200 slow periods.
_STEADY_RTOL = 1.0e-8
_STEADY_WINDOW = 1.0  # us

_NEWTON_MAX_ITER = 60
_NEWTON_TOL = 1.0e-11


@dataclass(frozen=True)
class SystemState:
    """First- and second-order correlators of the qubit-resonator system.

    All fields are dimensionless.  ``n_ph`` is <a+a>, not |<a>|^2; the
    difference is what distinguishes this model from the semiclassical
    one.
    """

    sx: float = 0.0
    sy: float = 0.0
    sz: float = -1.0
    a_re: float = 0.0
    a_im: float = 0.0
    n_ph: float = 0.0
    asx_re: float = 0.0
    asx_im: float = 0.0
    asy_re: float = 0.0
    asy_im: float = 0.0
    asz_re: float = 0.0
    asz_im: float = 0.0

    @property
    def a(self) -> complex:
        """Field amplitude <a>."""
        return complex(self.a_re, self.a_im)

    @property
    def asx(self) -> complex:
        return complex(self.asx_re, self.asx_im)

    @property
    def asy(self) -> complex:
        return complex(self.asy_re, self.asy_im)

    @property
    def asz(self) -> complex:
        return complex(self.asz_re, self.asz_im)

    @property
    def bloch_norm_sq(self) -> float:
        """sx^2 + sy^2 + sz^2; at most 1 (plus rounding) for physical states."""
        return self.sx * self.sx + self.sy * self.sy + self.sz * self.sz

    def to_vector(self) -> np.ndarray:
        """Pack into the canonical 12-component real vector."""
        return np.array([
            self.sx, self.sy, self.sz, self.a_re, self.a_im, self.n_ph,
            self.asx_re, self.asx_im, self.asy_re, self.asy_im,
            self.asz_re, self.asz_im,
        ])

    @classmethod
    def from_vector(cls, y: np.ndarray) -> "SystemState":
        y = np.asarray(y, dtype=float)
        if y.shape != (12,):
            raise ValueError(f"state vector must have shape (12,), got {y.shape}")
        return cls(*(float(v) for v in y))


def ground_state(params: SystemParams) -> SystemState:
    """Qubit in the ground state, resonator in thermal equilibrium."""
    return SystemState(sz=-params.z0, n_ph=params.n_th)


@dataclass(frozen=True)
class _Coeffs:
    """Scalar or per-point-array coefficients entering the equations."""

    d_r: object     # probe detuning omega_r - omega_p [rad/us]
    d_q: object     # drive detuning omega_q - omega_d [rad/us]
    xi: object      # probe amplitude [rad/us]
    om: object      # Rabi drive amplitude [rad/us]
    chi: float
    kappa: float
    g1: float
    g2: float
    z0: float
    nth: float


def _coeffs(params: SystemParams, drive: DriveConfig) -> _Coeffs:
    det = detunings(params, drive)
    return _Coeffs(
        d_r=det.d_omega_r, d_q=det.d_omega_q, xi=drive.xi,
        om=drive.omega_rabi, chi=params.chi, kappa=params.kappa,
        g1=params.gamma1, g2=params.gamma2, z0=params.z0, nth=params.n_th,
    )


def _batch_coeffs(params: SystemParams, d_r, d_q, xi, om) -> _Coeffs:
    return _Coeffs(
        d_r=np.asarray(d_r, dtype=float), d_q=d_q, xi=xi, om=om,
        chi=params.chi, kappa=params.kappa, g1=params.gamma1,
        g2=params.gamma2, z0=params.z0, nth=params.n_th,
    )


def _rhs_flat(t: float, y, c: _Coeffs) -> np.ndarray:
    """Right-hand side for a single 12-component state (scalar math)."""
    sx, sy, sz, ar, ai, n, xr, xim, yr, yi, zr, zi = y
    w0 = c.d_q + c.chi * (1.0 + 2.0 * n)
    w1 = c.d_q + 2.0 * c.chi * (n + 1.0)
    gt = c.g2 / c.z0 + c.kappa
    gl = c.g1 / c.z0 + c.kappa
    return np.array([
        -w0 * sy - c.g2 * sx / c.z0,
        w0 * sx - c.g2 * sy / c.z0 - c.om * sz,
        c.om * sy - c.g1 * (1.0 + sz / c.z0),
        c.d_r * ai + c.chi * zi - c.kappa * ar,
        -c.d_r * ar - c.chi * zr - c.xi - c.kappa * ai,
        -2.0 * c.xi * ai + 2.0 * c.kappa * (c.nth - n),
        c.d_r * xim - gt * xr - w1 * yr,
        -c.d_r * xr - gt * xim - w1 * yi - c.xi * sx,
        c.d_r * yi - gt * yr - c.om * zr + w1 * xr,
        -c.d_r * yr - gt * yi - c.om * zi - c.xi * sy + w1 * xim,
        c.d_r * zi + c.chi * ai - c.g1 * ar - gl * zr + c.om * yr,
        -c.d_r * zr - c.chi * ar - c.xi * sz + c.om * yi - c.g1 * ai - gl * zi,
    ])


def _rhs_batch(Y: np.ndarray, c: _Coeffs) -> np.ndarray:
    """Right-hand side for a stack of states, shape (..., 12)."""
    sx = Y[..., 0]; sy = Y[..., 1]; sz = Y[..., 2]
    ar = Y[..., 3]; ai = Y[..., 4]; n = Y[..., 5]
    xr = Y[..., 6]; xim = Y[..., 7]; yr = Y[..., 8]; yi = Y[..., 9]
    zr = Y[..., 10]; zi = Y[..., 11]
    w0 = c.d_q + c.chi * (1.0 + 2.0 * n)
    w1 = c.d_q + 2.0 * c.chi * (n + 1.0)
    gt = c.g2 / c.z0 + c.kappa
    gl = c.g1 / c.z0 + c.kappa
    out = np.empty_like(Y)
    out[..., 0] = -w0 * sy - c.g2 * sx / c.z0
    out[..., 1] = w0 * sx - c.g2 * sy / c.z0 - c.om * sz
    out[..., 2] = c.om * sy - c.g1 * (1.0 + sz / c.z0)
    out[..., 3] = c.d_r * ai + c.chi * zi - c.kappa * ar
    out[..., 4] = -c.d_r * ar - c.chi * zr - c.xi - c.kappa * ai
    out[..., 5] = -2.0 * c.xi * ai + 2.0 * c.kappa * (c.nth - n)
    out[..., 6] = c.d_r * xim - gt * xr - w1 * yr
    out[..., 7] = -c.d_r * xr - gt * xim - w1 * yi - c.xi * sx
    out[..., 8] = c.d_r * yi - gt * yr - c.om * zr + w1 * xr
    out[..., 9] = -c.d_r * yr - gt * yi - c.om * zi - c.xi * sy + w1 * xim
    out[..., 10] = c.d_r * zi + c.chi * ai - c.g1 * ar - gl * zr + c.om * yr
    out[..., 11] = (
        -c.d_r * zr - c.chi * ar - c.xi * sz + c.om * yi - c.g1 * ai - gl * zi
    )
    return out


def rhs(
    params: SystemParams, drive: DriveConfig, state: SystemState,
    t: float = 0.0,
) -> SystemState:
    """Time derivative of every correlator at the given state."""
    c = _coeffs(params, drive)
    return SystemState.from_vector(_rhs_flat(t, state.to_vector(), c))


@dataclass(frozen=True)
class EvolveResult:
    """Trajectory returned by :func:`evolve`."""

    t: np.ndarray        # sample times [us], shape (n,)
    y: np.ndarray        # states, shape (n, 12), canonical packing

    @property
    def final(self) -> SystemState:
        return SystemState.from_vector(self.y[-1])

    def state(self, i: int) -> SystemState:
        return SystemState.from_vector(self.y[i])


def evolve(
    params: SystemParams,
    drive: DriveConfig,
    state0: SystemState,
    t_final: float,
    *,
    t_eval: np.ndarray | None = None,
    rtol: float = 1.0e-9,
    atol: float = 1.0e-12,
    max_step: float = np.inf,
) -> EvolveResult:
    """Integrate the correlator equations with an adaptive RK 4(5) pair.

    Parameters
    ----------
    params, drive : system and tone configuration
    state0 : SystemState
        Initial condition.
    t_final : float
        End time in us.
    t_eval : ndarray, optional
        Times at which to sample the trajectory; defaults to the
        integrator's own accepted steps.
    rtol, atol, max_step :
        Standard adaptive-step controls.

    Raises
    ------
    StepSizeUnderflow
        If the integrator is forced below the minimum step size.
    """
    if t_final < 0.0:
        raise ValueError(f"t_final must be non-negative, got {t_final}")
    y0 = state0.to_vector()
    if t_final == 0.0:
        return EvolveResult(t=np.array([0.0]), y=y0[None, :])
    c = _coeffs(params, drive)
    sol = solve_ivp(
        _rhs_flat, (0.0, t_final), y0, method="RK45", t_eval=t_eval,
        rtol=rtol, atol=atol, max_step=max_step, args=(c,), dense_output=False,
    )
    if sol.status == -1:
        raise StepSizeUnderflow(f"integration failed: {sol.message}")
    if not sol.success:
        raise NoConvergence(f"integration failed: {sol.message}")
    return EvolveResult(t=sol.t, y=sol.y.T.copy())


# Dormand-Prince 5(4) tableau (FSAL: the 7th stage is the first stage of
# the next step).
_DP_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_DP_A = [
    np.array([]),
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
    np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]),
]
_DP_B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_DP_E = np.array([
    71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40,
])


def _integrate_batch(
    c: _Coeffs,
    Y0: np.ndarray,
    *,
    rtol: float,
    atol: float,
    t_cap: float,
    steady_tol: float | None = None,
    window: float = _STEADY_WINDOW,
    max_steps: int = 2_000_000,
):
    """Shared-step adaptive integration of a stack of independent points.

    All points advance with a common step size chosen so the local error
    of the worst point stays within tolerance.  If ``steady_tol`` is
    given, integration stops once the rhs max-norm of every point has
    stayed below it for the trailing ``window`` (in us); otherwise it
    runs to ``t_cap``.

    Returns ``(t, Y, F, settled)`` where ``F`` is the rhs at the final
    state and ``settled`` says whether the steady criterion was met.
    """
    Y = np.array(Y0, dtype=float)
    t = 0.0
    F = _rhs_batch(Y, c)
    K = np.empty((7,) + Y.shape)
    K[0] = F
    # Conservative first step; the controller adapts within a few steps.
    scale_freq = max(
        c.kappa, c.g1, float(np.max(np.abs(c.d_r))) if np.ndim(c.d_r) else abs(c.d_r),
        float(np.max(c.om)) if np.ndim(c.om) else c.om, c.chi, 1.0,
    )
    h = min(1.0e-3, 0.1 / scale_freq, t_cap)
    bad_until = np.zeros(Y.shape[0])
    last_reject = False
    for _ in range(max_steps):
        if h < 1.0e-12 * max(1.0, abs(t)):
            raise StepSizeUnderflow(
                f"batched integrator step underflow at t={t:.3g} us"
            )
        h = min(h, t_cap - t)
        for s in range(1, 7):
            Ys = Y + h * np.tensordot(_DP_A[s], K[:s], axes=(0, 0))
            K[s] = _rhs_batch(Ys, c)
        Ynew = Y + h * np.tensordot(_DP_B, K, axes=(0, 0))
        err_vec = h * np.tensordot(_DP_E, K, axes=(0, 0))
        scale = atol + rtol * np.maximum(np.abs(Y), np.abs(Ynew))
        err = float(np.max(np.sqrt(np.mean((err_vec / scale) ** 2, axis=-1))))
        if not np.isfinite(err):
            err = 10.0
        if err <= 1.0:
            t += h
            Y = Ynew
            K[0] = K[6]  # FSAL
            F = K[0]
            if steady_tol is not None:
                norms = np.max(np.abs(F), axis=-1)
                bad_until[norms >= steady_tol] = t + window
                if t >= window and t >= float(np.max(bad_until)):
                    return t, Y, F, True
            if t >= t_cap:
                return t, Y, F, steady_tol is None
            factor = min(10.0, max(0.2, 0.9 * err ** -0.2)) if err > 0 else 10.0
            if last_reject:
                factor = min(1.0, factor)
            last_reject = False
            h *= factor
        else:
            h *= max(0.2, 0.9 * err ** -0.2)
            last_reject = True
    raise NoConvergence(
        f"batched integrator exceeded {max_steps} steps at t={t:.3g} us"
    )


def _jacobian_batch(c: _Coeffs, Y: np.ndarray, F: np.ndarray) -> np.ndarray:
    """Forward-difference Jacobians, step sqrt(eps)*max(1, |y_i|)."""
    n, m = Y.shape
    J = np.empty((n, m, m))
    for j in range(m):
        hj = _SQRT_EPS * np.maximum(1.0, np.abs(Y[:, j]))
        Yp = Y.copy()
        Yp[:, j] += hj
        J[:, :, j] = (_rhs_batch(Yp, c) - F) / hj[:, None]
    return J


def _newton_batch(
    c: _Coeffs,
    Y0: np.ndarray,
    *,
    tol: float,
    max_iter: int = _NEWTON_MAX_ITER,
):
    """Damped Newton iteration on the rhs for a stack of points.

    Independent points share the vectorized linear algebra but are
    damped and frozen individually, so each point's result does not
    depend on its batch mates.  Returns ``(Y, res, iters, ok)``.
    """
    Y = np.array(Y0, dtype=float)
    npts = Y.shape[0]
    F = _rhs_batch(Y, c)
    res = np.max(np.abs(F), axis=-1)
    iters = np.zeros(npts, dtype=int)
    ok = res < tol
    stalled = np.zeros(npts, dtype=int)
    active = ~ok & np.all(np.isfinite(Y), axis=-1)
    for it in range(1, max_iter + 1):
        if not active.any():
            break
        idx = np.nonzero(active)[0]
        Ya = Y[idx]
        Fa = F[idx]
        J = _jacobian_batch(_gather_coeffs(c, idx), Ya, Fa)
        try:
            step = np.linalg.solve(J, -Fa[..., None])[..., 0]
        except np.linalg.LinAlgError:
            step = np.stack([
                _solve_or_lstsq(J[k], -Fa[k]) for k in range(len(idx))
            ])
        if not np.all(np.isfinite(step)):
            step = np.where(np.isfinite(step), step, 0.0)
        alpha = np.ones(len(idx))
        accepted = np.zeros(len(idx), dtype=bool)
        res_a = res[idx]
        for _ in range(9):
            trying = ~accepted
            if not trying.any():
                break
            cand = Ya[trying] + alpha[trying, None] * step[trying]
            Fc = _rhs_batch(cand, _gather_coeffs(c, idx[trying]))
            rc = np.max(np.abs(Fc), axis=-1)
            good = np.isfinite(rc) & (
                (rc < res_a[trying] * (1.0 - 1.0e-4 * alpha[trying])) | (rc < tol)
            )
            tr = np.nonzero(trying)[0]
            acc = tr[good]
            Ya[acc] = cand[good]
            Fa[acc] = Fc[good]
            res_a[acc] = rc[good]
            accepted[acc] = True
            alpha[tr[~good]] *= 0.5
        Y[idx] = Ya
        F[idx] = Fa
        res[idx] = res_a
        stalled[idx[~accepted]] += 1
        stalled[idx[accepted]] = 0
        newly = active & (res < tol)
        iters[newly] = it
        ok |= newly
        active = active & ~ok & (stalled < 3) & np.all(np.isfinite(Y), axis=-1)
    return Y, res, iters, ok


def _solve_or_lstsq(J: np.ndarray, b: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.solve(J, b)
    except np.linalg.LinAlgError:
        return np.linalg.lstsq(J, b, rcond=None)[0]


def _gather_coeffs(c: _Coeffs, idx: np.ndarray) -> _Coeffs:
    """Restrict per-point coefficient arrays to a subset of points."""
    def pick(v):
        return v[idx] if np.ndim(v) else v
    return _Coeffs(
        d_r=pick(c.d_r), d_q=pick(c.d_q), xi=pick(c.xi), om=pick(c.om),
        chi=c.chi, kappa=c.kappa, g1=c.g1, g2=c.g2, z0=c.z0, nth=c.nth,
    )


def _seed_batch(params: SystemParams, c: _Coeffs, n_sc, p_plus_sc) -> np.ndarray:
    """Initial Newton guess built from the semiclassical fixed point.

    The field is the pulled-Lorentzian response to the mean inversion,
    every mixed correlator is factorized, and the Bloch vector solves
    the drive equations with the photon number frozen.
    """
    n_sc = np.atleast_1d(np.asarray(n_sc, dtype=float))
    p_sc = np.atleast_1d(np.asarray(p_plus_sc, dtype=float))
    npts = n_sc.size
    sz = np.clip(2.0 * p_sc - 1.0, -params.z0, 0.0)
    a = -1j * c.xi / (c.kappa + 1j * (c.d_r + c.chi * sz))
    a = np.broadcast_to(a, (npts,))
    om = np.broadcast_to(np.asarray(c.om, dtype=float), (npts,))
    w0 = c.d_q + c.chi * (1.0 + 2.0 * n_sc)
    with np.errstate(divide="ignore", invalid="ignore"):
        sy = np.where(
            om > 0.0, params.gamma1 * (1.0 + sz / params.z0) / np.where(om > 0, om, 1.0), 0.0
        )
    sx = -w0 * sy * params.z0 / params.gamma2
    # Keep the seed on or inside the Bloch sphere.
    tr = np.sqrt(sx * sx + sy * sy)
    lim = np.sqrt(np.maximum(1.0e-12, 1.0 - sz * sz))
    shrink = np.where(tr > lim, lim / np.maximum(tr, 1.0e-300), 1.0)
    sx = sx * shrink
    sy = sy * shrink
    Y = np.zeros((npts, 12))
    Y[:, 0] = sx
    Y[:, 1] = sy
    Y[:, 2] = sz
    Y[:, 3] = a.real
    Y[:, 4] = a.imag
    Y[:, 5] = np.abs(a) ** 2 + params.n_th
    Y[:, 6] = (sx * a).real
    Y[:, 7] = (sx * a).imag
    Y[:, 8] = (sy * a).real
    Y[:, 9] = (sy * a).imag
    Y[:, 10] = (sz * a).real
    Y[:, 11] = (sz * a).imag
    return Y


def _stable_batch(c: _Coeffs, Y: np.ndarray) -> np.ndarray:
    """True where the linearization around the state is strictly stable."""
    F = _rhs_batch(Y, c)
    J = _jacobian_batch(c, Y, F)
    eig = np.linalg.eigvals(J)
    margin = 1.0e-6 * max(c.kappa, c.g1)
    return np.max(eig.real, axis=-1) < margin


def _validate_batch(c: _Coeffs, Y: np.ndarray, res, tol: float) -> np.ndarray:
    """Physical-bounds screen for candidate steady states."""
    finite = np.all(np.isfinite(Y), axis=-1)
    Ys = np.where(np.isfinite(Y), Y, 0.0)
    bloch = Ys[:, 0] ** 2 + Ys[:, 1] ** 2 + Ys[:, 2] ** 2
    amp = np.hypot(Ys[:, 3], Ys[:, 4])
    n = Ys[:, 5]
    xi_arr = np.broadcast_to(np.asarray(c.xi, dtype=float), (Y.shape[0],))
    # <a+a> = n_th - (xi/kappa) Im<a> at any steady state, so n can never
    # exceed n_th + xi*|a|/kappa there.
    n_cap = c.nth + xi_arr * amp / c.kappa * (1.0 + 1.0e-6) + 1.0e-9
    ok = (
        finite
        & (res < tol)
        & (bloch <= _bloch_cap(c))
        & (Ys[:, 2] <= 1.0e-6)
        & (n >= -1.0e-9)
        & (n <= n_cap)
        & (amp <= 3.0 * xi_arr / c.kappa + 1.0e-9)
    )
    return ok


def _bloch_cap(c: _Coeffs) -> float:
    """Bloch-vector norm bound: z0 sphere plus numerical slack."""
    return max(1.0, c.z0 * c.z0) + 1.0e-6


class Strategy(enum.Enum):
    """How :func:`steady_state` locates the stationary point."""

    TIME_EVOLUTION = "time-evolution"
    NEWTON = "newton"


@dataclass(frozen=True)
class SteadyStateResult:
    """Stationary state plus diagnostics of how it was obtained."""

    state: SystemState
    strategy: Strategy
    residual: float            # max-norm of the rhs at the returned state
    iterations_or_time: float  # Newton iterations, or simulated time [us]


def _steady_tol(params: SystemParams) -> float:
    return _STEADY_RTOL * max(params.kappa, params.gamma1)


def _newton_tol(params: SystemParams) -> float:
    return max(_NEWTON_TOL * max(params.kappa, params.gamma1), 1.0e-12)


def _t_cap(params: SystemParams) -> float:
    return 200.0 * max(params.t1, params.t2, 1.0 / params.kappa)


def steady_state(
    params: SystemParams,
    drive: DriveConfig,
    strategy: Strategy = Strategy.NEWTON,
    *,
    seed: SystemState | None = None,
) -> SteadyStateResult:
    """Stationary solution of the correlator equations.

    Parameters
    ----------
    params, drive : system and tone configuration
    strategy : Strategy
        ``TIME_EVOLUTION`` integrates from the ground state (or ``seed``)
        until the rhs max-norm stays below 1e-8*max(kappa, Gamma_1) for a
        trailing 1 us window.  ``NEWTON`` runs a damped Newton iteration
        seeded from the semiclassical fixed point (or ``seed``).
    seed : SystemState, optional
        Starting point overriding the default for either strategy.

    Raises
    ------
    NoConvergence
        If the time cap or the iteration budget is exhausted, or the
        Newton iterate is rejected by the physical-bounds screen.
    """
    results = steady_states(
        params, [drive], strategy, seeds=None if seed is None else [seed]
    )
    return results[0]


def steady_states(
    params: SystemParams,
    drives: list[DriveConfig],
    strategy: Strategy = Strategy.NEWTON,
    *,
    seeds: list[SystemState] | None = None,
) -> list[SteadyStateResult]:
    """Batched :func:`steady_state` over many drive configurations.

    All points advance together through the shared-step integrator or
    the vectorized Newton iteration, which is far faster than solving
    them one at a time.  Raises NoConvergence if any point fails.
    """
    dets = [detunings(params, d) for d in drives]
    c = _batch_coeffs(
        params,
        np.array([d.d_omega_r for d in dets]),
        np.array([d.d_omega_q for d in dets]),
        np.array([d.xi for d in drives]),
        np.array([d.omega_rabi for d in drives]),
    )
    npts = len(drives)
    if seeds is not None:
        Y0 = np.stack([s.to_vector() for s in seeds])
    elif strategy is Strategy.TIME_EVOLUTION:
        Y0 = np.tile(ground_state(params).to_vector(), (npts, 1))
    else:
        sc_n = np.empty(npts)
        sc_p = np.empty(npts)
        for i, (det, d) in enumerate(zip(dets, drives)):
            sol = semiclassical.solve_row(
                params, np.array([det.d_omega_r]), det.d_omega_q,
                d.xi, d.omega_rabi,
            )
            sc_n[i] = sol["n_ph"][0]
            sc_p[i] = sol["p_plus"][0]
        Y0 = _seed_batch(params, c, sc_n, sc_p)

    if strategy is Strategy.TIME_EVOLUTION:
        tol = _steady_tol(params)
        t_end, Y, F, settled = _integrate_batch(
            c, Y0, rtol=1.0e-10, atol=1.0e-13, t_cap=_t_cap(params),
            steady_tol=tol,
        )
        if not settled:
            raise NoConvergence(
                f"no steady state within t_cap={_t_cap(params):.0f} us",
                residual=float(np.max(np.abs(F))),
            )
        res = np.max(np.abs(F), axis=-1)
        return [
            SteadyStateResult(
                state=SystemState.from_vector(Y[i]),
                strategy=strategy,
                residual=float(res[i]),
                iterations_or_time=t_end,
            )
            for i in range(npts)
        ]

    tol = _newton_tol(params)
    Y, res, iters, ok = _newton_batch(c, Y0, tol=tol)
    ok = ok & _validate_batch(c, Y, res, tol)
    if not ok.all():
        bad = int(np.nonzero(~ok)[0][0])
        raise NoConvergence(
            f"Newton failed for drive point {bad} "
            f"(residual {res[bad]:.3g})",
            residual=float(res[bad]),
        )
    return [
        SteadyStateResult(
            state=SystemState.from_vector(Y[i]),
            strategy=strategy,
            residual=float(res[i]),
            iterations_or_time=float(iters[i]),
        )
        for i in range(npts)
    ]


def steady_row(
    params: SystemParams,
    d_omega_r: np.ndarray,
    d_omega_q: float,
    xi: float,
    omega_rabi: float,
) -> tuple[np.ndarray, np.ndarray]:
    """Steady states along a probe-detuning row, with per-point fallback.

    The fast path seeds a vectorized Newton iteration from the
    semiclassical fixed point and screens the result against physical
    bounds and linear stability.  Points that fail the screen are re-run
    by ramping up from the vacuum ground state (which selects the branch
    an experiment sweeping power upward would sit on) and polishing with
    Newton.  Points that still fail come back as NaN rather than
    aborting the row.

    Returns
    -------
    (Y, ok) : states of shape (n, 12) and a boolean validity mask.
    """
    d_omega_r = np.asarray(d_omega_r, dtype=float)
    c = _batch_coeffs(params, d_omega_r, d_omega_q, xi, omega_rabi)
    sc = semiclassical.solve_row(params, d_omega_r, d_omega_q, xi, omega_rabi)
    Y0 = _seed_batch(params, c, sc["n_ph"], sc["p_plus"])
    tol = _newton_tol(params)
    Y, res, _, ok = _newton_batch(c, Y0, tol=tol)
    ok = ok & _validate_batch(c, Y, res, tol)
    if ok.any():
        ok_idx = np.nonzero(ok)[0]
        stable = _stable_batch(_gather_coeffs(c, ok_idx), Y[ok_idx])
        ok[ok_idx[~stable]] = False

    retry = np.nonzero(~ok)[0]
    if retry.size:
        cr = _gather_coeffs(c, retry)
        Yg = np.tile(ground_state(params).to_vector(), (retry.size, 1))
        try:
            _, Yt, Ft, _ = _integrate_batch(
                cr, Yg, rtol=1.0e-6, atol=1.0e-9,
                t_cap=min(_t_cap(params), 80.0),
                steady_tol=1.0e-3 * max(params.kappa, params.gamma1),
                window=0.0,
            )
            Yp, rp, _, okp = _newton_batch(cr, Yt, tol=tol)
            okp = okp & _validate_batch(cr, Yp, rp, tol)
            if okp.any():
                pi = np.nonzero(okp)[0]
                stable = _stable_batch(_gather_coeffs(cr, pi), Yp[pi])
                okp[pi[~stable]] = False
            Y[retry[okp]] = Yp[okp]
            ok[retry[okp]] = True
        except (NoConvergence, StepSizeUnderflow):
            pass
    Y[~ok] = np.nan
    return Y, ok
