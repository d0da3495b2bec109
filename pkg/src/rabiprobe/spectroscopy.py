"""Two-tone transmission maps and the weak-to-strong-driving transition.

A map is built row by row: the probe detuning runs along a row while the
second axis steps either the qubit drive amplitude or the drive
frequency.  Three model layers can fill the same grid: the
probabilistically averaged line shapes (``ANALYTICAL``), the
self-consistent semiclassical response (``SEMICLASSICAL``) and the
steady state of the full correlator equations (``SEMIQUANTUM``).

All amplitudes are normalized by the bare-resonator peak response
xi/kappa, so a perfectly transmitted line has height 1.  On top of the
maps sit a peak classifier and the extraction of the driving amplitude
Omega_2 at which the two qubit-state-split lines collapse into one:
the boundary between the slow-jump regime and motional averaging.
"""

from __future__ import annotations

import enum
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import bloch, semiclassical
from .errors import ConfigError, RegimeNotBracketed
from .params import DriveConfig, SystemParams, dressed_qubit_frequency

DEFAULT_PROBE_POINTS = 401
DEFAULT_AMP_POINTS = 81
DEFAULT_REL_THRESHOLD = 0.02


class Model(enum.Enum):
    """Which approximation layer fills the transmission map."""

    ANALYTICAL = "analytical"
    SEMICLASSICAL = "semiclassical"
    SEMIQUANTUM = "semiquantum"


class AxisKind(enum.Enum):
    """Meaning of the second (row) axis of a sweep grid."""

    AMPLITUDE = "amplitude"    # rows step the Rabi drive amplitude
    FREQUENCY = "frequency"    # rows step the drive detuning d_omega_q


class Classification(enum.Enum):
    """Outcome of peak counting on one probe-frequency cut."""

    TWO_PEAKS = "TwoPeaks"
    ONE_PEAK = "OnePeak"
    INDETERMINATE = "Indeterminate"


@dataclass(frozen=True)
class SweepGrid:
    """Probe axis plus a second axis of drive amplitudes or detunings.

    ``probe_detunings`` holds d_omega_r values (rad/us, strictly
    ascending); ``axis_values`` holds Rabi amplitudes for an
    ``AMPLITUDE`` axis or drive detunings d_omega_q for a ``FREQUENCY``
    axis, also strictly ascending.
    """

    probe_detunings: np.ndarray
    axis_kind: AxisKind
    axis_values: np.ndarray

    def __post_init__(self) -> None:
        probe = np.asarray(self.probe_detunings, dtype=float)
        ax = np.asarray(self.axis_values, dtype=float)
        object.__setattr__(self, "probe_detunings", probe)
        object.__setattr__(self, "axis_values", ax)
        if probe.ndim != 1 or probe.size < 3:
            raise ValueError("probe_detunings must be 1-D with >= 3 points")
        if np.any(np.diff(probe) <= 0.0):
            raise ValueError("probe_detunings must be strictly ascending")
        if ax.ndim != 1 or ax.size < 1:
            raise ValueError("axis_values must be a non-empty 1-D array")
        if ax.size > 1 and np.any(np.diff(ax) <= 0.0):
            raise ValueError("axis_values must be strictly ascending")
        if self.axis_kind is AxisKind.AMPLITUDE and np.any(ax < 0.0):
            raise ValueError("drive amplitudes must be non-negative")


def default_probe_axis(
    params: SystemParams, n: int = DEFAULT_PROBE_POINTS
) -> np.ndarray:
    """Probe detunings spanning both pulled lines: [-2 chi, 2 chi]."""
    return np.linspace(-2.0 * params.chi, 2.0 * params.chi, n)


def omega1_zero_detuning(params: SystemParams) -> float:
    """Saturation amplitude 2/sqrt(T1 T2) at zero detuning and no field."""
    return float(np.sqrt(semiclassical.omega1_squared(params, 0.0, 0.0)))


def default_amplitude_axis(
    params: SystemParams, n: int = DEFAULT_AMP_POINTS
) -> np.ndarray:
    """Log-spaced Rabi amplitudes from 0.01 to 100 times Omega_1(0)."""
    om1 = omega1_zero_detuning(params)
    return np.geomspace(0.01 * om1, 100.0 * om1, n)


def resonant_drive_detuning(params: SystemParams, model: Model) -> float:
    """Drive detuning that puts the drive on the qubit resonance.

    The correlator equations carry the dispersive shift explicitly, so
    their qubit resonance in an empty resonator sits at the dressed
    frequency and the resonant detuning is ``-chi``.  The analytical and
    semiclassical layers measure the drive from the already-shifted
    transition, where resonance means zero detuning.
    """
    if model is Model.SEMIQUANTUM:
        return params.omega_q - dressed_qubit_frequency(params)
    return 0.0


def resonant_drive(
    params: SystemParams,
    model: Model,
    xi: float,
    omega_rabi: float,
) -> DriveConfig:
    """Drive tuned to the model's qubit resonance, probe at the bare
    resonator (individual sweep points override the probe frequency)."""
    d_q = resonant_drive_detuning(params, model)
    return DriveConfig(
        xi=xi,
        omega_p=params.omega_r,
        omega_rabi=omega_rabi,
        omega_d=params.omega_q - d_q,
    )


@dataclass(frozen=True)
class TransmissionMap:
    """Normalized transmission on a sweep grid.

    ``amplitude[i, j]`` is |<a>| / (xi/kappa) at ``axis_values[i]`` and
    ``probe_detunings[j]``.  Points where no steady state could be
    certified are NaN; ``failed_points`` counts them.
    """

    grid: SweepGrid
    model: Model
    amplitude: np.ndarray
    xi: float
    d_omega_q: float           # fixed drive detuning (amplitude axis)
    omega_rabi: float          # fixed drive amplitude (frequency axis)
    failed_points: int = 0

    def row(self, i: int) -> np.ndarray:
        return self.amplitude[i]

    def row_report(
        self,
        i: int,
        *,
        smooth: bool = False,
        rel_threshold: float = DEFAULT_REL_THRESHOLD,
    ) -> "PeakReport":
        return find_peaks(
            self.grid.probe_detunings,
            self.amplitude[i],
            float(self.grid.axis_values[i]),
            smooth=smooth,
            rel_threshold=rel_threshold,
        )


@dataclass(frozen=True)
class PeakReport:
    """Classified local maxima of one probe-frequency cut."""

    classification: Classification
    positions: tuple            # probe detunings of the peaks [rad/us]
    heights: tuple              # normalized amplitudes at the peaks
    cut_value: float            # second-axis value the cut was taken at


def _row_amplitudes(
    params: SystemParams,
    model: Model,
    probe: np.ndarray,
    d_omega_q: float,
    xi: float,
    omega_rabi: float,
) -> tuple[np.ndarray, int]:
    """Normalized |<a>| along one row; returns (amplitudes, n_failed)."""
    if xi <= 0.0:
        raise ConfigError("sweeps need a positive probe amplitude xi")
    norm = xi / params.kappa
    if model is Model.ANALYTICAL:
        amps = semiclassical.averaged_row(params, probe, d_omega_q, xi, omega_rabi)
        return amps / norm, 0
    if model is Model.SEMICLASSICAL:
        row = semiclassical.solve_row(params, probe, d_omega_q, xi, omega_rabi)
        return np.sqrt(row["n_ph"]) / norm, 0
    Y, ok = bloch.steady_row(params, probe, d_omega_q, xi, omega_rabi)
    amps = np.hypot(Y[:, 3], Y[:, 4]) / norm
    return amps, int(np.count_nonzero(~ok))


def _row_task(args) -> tuple[np.ndarray, int]:
    params, model, probe, d_q, xi, om = args
    return _row_amplitudes(params, model, probe, d_q, xi, om)


def _effective_workers(workers: int, n_rows: int) -> int:
    if workers < 0:
        raise ConfigError(f"workers must be >= 0, got {workers}")
    if workers == 0:
        workers = os.cpu_count() or 1
    return max(1, min(workers, n_rows))


def sweep(
    params: SystemParams,
    base_drive: DriveConfig,
    grid: SweepGrid,
    *,
    model: Model = Model.SEMIQUANTUM,
    workers: int = 0,
) -> TransmissionMap:
    """Fill a transmission map row by row.

    Parameters
    ----------
    params : SystemParams
    base_drive : DriveConfig
        Supplies the probe amplitude and whichever drive parameter the
        grid does not step (the drive frequency for an ``AMPLITUDE``
        axis, the Rabi amplitude for a ``FREQUENCY`` axis).  The probe
        frequency in ``base_drive`` is ignored; each column sets its
        own.
    grid : SweepGrid
    model : Model
        Approximation layer used to compute each point.
    workers : int
        Process count for row-parallel evaluation; 0 picks the CPU
        count, 1 runs serially.  Results are assembled in grid order,
        so the output is identical for any worker count.

    Notes
    -----
    Points of the semi-quantum model where no stable steady state could
    be certified are NaN in the result and counted in
    ``failed_points``; the sweep never aborts on them.
    """
    from .params import detunings as _detunings

    det = _detunings(params, base_drive)
    probe = grid.probe_detunings
    if grid.axis_kind is AxisKind.AMPLITUDE:
        tasks = [
            (params, model, probe, det.d_omega_q, base_drive.xi, float(om))
            for om in grid.axis_values
        ]
    else:
        tasks = [
            (params, model, probe, float(dq), base_drive.xi, base_drive.omega_rabi)
            for dq in grid.axis_values
        ]

    n_workers = _effective_workers(workers, len(tasks))
    if n_workers == 1:
        results = [_row_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            results = list(pool.map(_row_task, tasks, chunksize=1))

    amplitude = np.stack([r[0] for r in results])
    failed = int(sum(r[1] for r in results))
    return TransmissionMap(
        grid=grid,
        model=model,
        amplitude=amplitude,
        xi=base_drive.xi,
        d_omega_q=det.d_omega_q,
        omega_rabi=base_drive.omega_rabi,
        failed_points=failed,
    )


def find_peaks(
    probe_axis: np.ndarray,
    cut: np.ndarray,
    cut_value: float = 0.0,
    *,
    smooth: bool = False,
    rel_threshold: float = DEFAULT_REL_THRESHOLD,
) -> PeakReport:
    """Count strict local maxima of a transmission cut.

    A point is a peak when it exceeds both immediate neighbours, all
    three samples are finite, and its height is at least
    ``rel_threshold`` times the largest finite value of the cut.
    Exactly two peaks classify as TwoPeaks, exactly one as OnePeak,
    anything else (including an unusable cut) as Indeterminate.

    Parameters
    ----------
    probe_axis, cut : ndarray
        Probe detunings and the transmission samples on them.
    cut_value : float
        Second-axis value, echoed into the report.
    smooth : bool
        Apply a single 3-point moving average before counting.  Off by
        default; useful for noisy imported data, unnecessary for model
        output.
    rel_threshold : float
        Relative height floor below which maxima are ignored.
    """
    probe_axis = np.asarray(probe_axis, dtype=float)
    vals = np.asarray(cut, dtype=float).copy()
    if probe_axis.shape != vals.shape or vals.ndim != 1:
        raise ValueError("probe_axis and cut must be 1-D arrays of equal size")
    if vals.size < 3 or not np.any(np.isfinite(vals)):
        return PeakReport(Classification.INDETERMINATE, (), (), cut_value)
    if smooth:
        sm = vals.copy()
        sm[1:-1] = (vals[:-2] + vals[1:-1] + vals[2:]) / 3.0
        vals = sm
    floor = rel_threshold * float(np.nanmax(vals))
    left = vals[:-2]
    mid = vals[1:-1]
    right = vals[2:]
    is_peak = (
        np.isfinite(left) & np.isfinite(mid) & np.isfinite(right)
        & (mid > left) & (mid > right) & (mid >= floor)
    )
    idx = np.nonzero(is_peak)[0] + 1
    if idx.size == 2:
        cls = Classification.TWO_PEAKS
    elif idx.size == 1:
        cls = Classification.ONE_PEAK
    else:
        cls = Classification.INDETERMINATE
    return PeakReport(
        classification=cls,
        positions=tuple(float(probe_axis[i]) for i in idx),
        heights=tuple(float(vals[i]) for i in idx),
        cut_value=cut_value,
    )


def _classify_amp(
    params, probe, d_q, xi, omega_rabi, model, smooth, rel_threshold
) -> PeakReport:
    amps, _ = _row_amplitudes(params, model, probe, d_q, xi, omega_rabi)
    return find_peaks(
        probe, amps, omega_rabi, smooth=smooth, rel_threshold=rel_threshold
    )


def extract_omega2(
    params: SystemParams,
    probe_axis: np.ndarray,
    amp_axis: np.ndarray,
    *,
    xi: float,
    d_omega_q: float | None = None,
    model: Model = Model.SEMIQUANTUM,
    smooth: bool = False,
    rel_threshold: float = DEFAULT_REL_THRESHOLD,
) -> float:
    """Drive amplitude where the split lines have collapsed into one.

    Walks the amplitude axis upward and takes the smallest value whose
    cut classifies as OnePeak, then refines by a single bisection
    (geometric, matching the log spacing the axis normally has) of the
    bracketing interval.  The result is the midpoint of the refined
    bracket.

    Parameters
    ----------
    params : SystemParams
    probe_axis : ndarray
        Probe detunings for each cut, rad/us.
    amp_axis : ndarray
        Strictly ascending candidate Rabi amplitudes, rad/us.
    xi : float
        Probe amplitude, rad/us.
    d_omega_q : float, optional
        Drive detuning; defaults to the model's resonant value.
    model, smooth, rel_threshold :
        Passed through to the row builder and peak counter.

    Raises
    ------
    RegimeNotBracketed
        If the weakest cut is not TwoPeaks or the strongest cut is not
        OnePeak, i.e. the axis does not straddle the transition.
    """
    amp_axis = np.asarray(amp_axis, dtype=float)
    if amp_axis.ndim != 1 or amp_axis.size < 2:
        raise ValueError("amp_axis must be 1-D with at least 2 points")
    if np.any(np.diff(amp_axis) <= 0.0):
        raise ValueError("amp_axis must be strictly ascending")
    if d_omega_q is None:
        d_omega_q = resonant_drive_detuning(params, model)

    def classify(om: float) -> Classification:
        return _classify_amp(
            params, probe_axis, d_omega_q, xi, om, model, smooth, rel_threshold
        ).classification

    first = classify(float(amp_axis[0]))
    if first is not Classification.TWO_PEAKS:
        raise RegimeNotBracketed(
            f"weakest drive {amp_axis[0]:.4g} rad/us classifies as "
            f"{first.value}, expected TwoPeaks"
        )
    last = classify(float(amp_axis[-1]))
    if last is not Classification.ONE_PEAK:
        raise RegimeNotBracketed(
            f"strongest drive {amp_axis[-1]:.4g} rad/us classifies as "
            f"{last.value}, expected OnePeak"
        )

    lo = float(amp_axis[0])
    hi = float(amp_axis[-1])
    for k in range(1, amp_axis.size - 1):
        cls = classify(float(amp_axis[k]))
        if cls is Classification.ONE_PEAK:
            lo = float(amp_axis[k - 1])
            hi = float(amp_axis[k])
            break
    else:
        lo = float(amp_axis[-2])

    mid = float(np.sqrt(lo * hi))
    if classify(mid) is Classification.ONE_PEAK:
        hi = mid
    else:
        lo = mid
    return float(np.sqrt(lo * hi))


def reference_photon_number(params: SystemParams, xi: float) -> float:
    """Photon number of the undriven system probed on its ground-state
    peak (d_omega_r = chi*z0): the scale the transition amplitude is
    plotted against."""
    drive = DriveConfig(
        xi=xi,
        omega_p=params.omega_r - params.chi * params.z0,
        omega_rabi=0.0,
        omega_d=params.omega_q,
    )
    result = bloch.steady_state(params, drive, bloch.Strategy.NEWTON)
    return result.state.n_ph


def _bracket_amp_axis(
    params: SystemParams,
    probe_axis: np.ndarray,
    xi: float,
    d_omega_q: float,
    model: Model,
    smooth: bool,
    rel_threshold: float,
) -> np.ndarray:
    """Amplitude axis straddling the two-to-one transition for one probe power.

    The split regime shifts with probe power: a stronger probe Stark-
    detunes the driven transition, so both the amplitude where the
    second line first clears the peak floor and the amplitude where the
    lines collapse move up.  The edges are searched on a power-of-two
    ladder anchored at a fixed fraction of the bare saturation
    amplitude, so probe powers with indistinguishable physics get
    bit-identical axes (and therefore identical extracted values).

    Raises RegimeNotBracketed when no drive on the ladder resolves two
    lines (e.g. overlapping lines, kappa >= chi) or none collapses them.
    """

    def classify(om: float) -> Classification:
        return _classify_amp(
            params, probe_axis, d_omega_q, xi, om, model, smooth, rel_threshold
        ).classification

    base = 0.05 * omega1_zero_detuning(params)
    lo = None
    for j in range(16):
        cand = base * 2.0**j
        if classify(cand) is Classification.TWO_PEAKS:
            lo = cand
            break
    if lo is None:
        raise RegimeNotBracketed(
            "no drive amplitude on the search ladder resolves two lines"
        )
    hi = None
    cand = 8.0 * lo
    for _ in range(16):
        if classify(cand) is Classification.ONE_PEAK:
            hi = cand
            break
        cand *= 2.0
    if hi is None:
        raise RegimeNotBracketed(
            "no drive amplitude on the search ladder collapses the lines"
        )
    return np.geomspace(lo, hi, DEFAULT_AMP_POINTS)


def omega2_vs_photon_number(
    params: SystemParams,
    xi_values,
    *,
    model: Model = Model.SEMIQUANTUM,
    d_omega_q: float | None = None,
    probe_axis: np.ndarray | None = None,
    amp_axis: np.ndarray | None = None,
    smooth: bool = False,
    rel_threshold: float = DEFAULT_REL_THRESHOLD,
) -> list[tuple[float, float]]:
    """Transition amplitude Omega_2 as a function of measurement strength.

    For each probe amplitude xi the reference photon number (undriven
    system, probe on the ground-state peak) and the extracted collapse
    amplitude are paired up.  Entries follow the order of ``xi_values``.
    When no amplitude axis is given, one is bracketed per probe power:
    the transition region moves with the Stark spread of the photon
    number, so no fixed axis straddles it for every power at once.

    Raises RegimeNotBracketed if the amplitude window misses the
    transition for one of the probe powers.
    """
    xi_values = np.asarray(xi_values, dtype=float)
    if probe_axis is None:
        probe_axis = default_probe_axis(params)
    if d_omega_q is None:
        d_omega_q = resonant_drive_detuning(params, model)
    out: list[tuple[float, float]] = []
    for xi in xi_values:
        axis = amp_axis
        if axis is None:
            axis = _bracket_amp_axis(
                params, probe_axis, float(xi), d_omega_q, model,
                smooth, rel_threshold,
            )
        om2 = extract_omega2(
            params, probe_axis, axis, xi=float(xi), d_omega_q=d_omega_q,
            model=model, smooth=smooth, rel_threshold=rel_threshold,
        )
        n_ref = reference_photon_number(params, float(xi))
        out.append((n_ref, om2))
    return out
