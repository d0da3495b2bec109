"""Probe transmission of a resonator dispersively coupled to a driven qubit.

Three model layers compute the same observable, the steady-state probe
transmission amplitude, at increasing levels of fidelity: probabilistic
averaging of pulled resonator lines, a self-consistent semiclassical
fixed point, and the full first+second order correlator equations.
"""

from .bloch import (
    EvolveResult,
    Strategy,
    SteadyStateResult,
    SystemState,
    evolve,
    ground_state,
    rhs,
    steady_state,
    steady_states,
)
from .errors import (
    ConfigError,
    NoConvergence,
    RabiProbeError,
    RegimeNotBracketed,
    StepSizeUnderflow,
)
from .params import (
    Detunings,
    DriveConfig,
    SystemParams,
    angular_from_ghz,
    angular_from_mhz,
    default_params,
    detunings,
    dressed_qubit_frequency,
    drive_for_detunings,
    mhz_from_angular,
)
from .semiclassical import (
    SemiclassicalSolution,
    cavity_intensity,
    merged_amplitude,
    omega1_squared,
    p_plus,
    partial_amplitude,
    probabilistic_average,
    shifted_partial_amplitude,
    solve_self_consistent,
)
from .spectroscopy import (
    AxisKind,
    Classification,
    Model,
    PeakReport,
    SweepGrid,
    TransmissionMap,
    default_amplitude_axis,
    default_probe_axis,
    extract_omega2,
    find_peaks,
    omega1_zero_detuning,
    omega2_vs_photon_number,
    reference_photon_number,
    resonant_drive,
    resonant_drive_detuning,
    sweep,
)

__version__ = "0.1.0"

__all__ = [
    "AxisKind",
    "Classification",
    "ConfigError",
    "Detunings",
    "DriveConfig",
    "EvolveResult",
    "Model",
    "NoConvergence",
    "PeakReport",
    "RabiProbeError",
    "RegimeNotBracketed",
    "SemiclassicalSolution",
    "StepSizeUnderflow",
    "Strategy",
    "SteadyStateResult",
    "SweepGrid",
    "SystemParams",
    "SystemState",
    "TransmissionMap",
    "angular_from_ghz",
    "angular_from_mhz",
    "cavity_intensity",
    "default_amplitude_axis",
    "default_params",
    "default_probe_axis",
    "detunings",
    "dressed_qubit_frequency",
    "drive_for_detunings",
    "evolve",
    "extract_omega2",
    "find_peaks",
    "ground_state",
    "merged_amplitude",
    "mhz_from_angular",
    "omega1_squared",
    "omega1_zero_detuning",
    "omega2_vs_photon_number",
    "p_plus",
    "partial_amplitude",
    "probabilistic_average",
    "reference_photon_number",
    "resonant_drive",
    "resonant_drive_detuning",
    "rhs",
    "shifted_partial_amplitude",
    "solve_self_consistent",
    "steady_state",
    "steady_states",
    "sweep",
    "__version__",
]
