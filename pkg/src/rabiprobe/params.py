"""Parameter containers and unit conventions.

All frequencies inside the package are *angular* and carry units of
rad/us.  Inverse times (kappa, Gamma_1, Gamma_2) are in 1/us, which is
dimensionally the same thing, so every rate and every detuning can be
combined freely.  Conversion from laboratory units (MHz, GHz, ordinary
frequencies) happens exactly once, at construction time, through the
helpers below.

The default parameter set describes a transmon at 6.440 GHz read out
through a 7.643 GHz resonator with a dispersive shift chi/2pi = 4.1 MHz,
linewidth kappa/2pi = 1 MHz, T1 = 1.55 us and T2 = 2.65 us.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

TWO_PI = 2.0 * math.pi


def angular_from_mhz(f_mhz: float) -> float:
    """Ordinary frequency in MHz -> angular frequency in rad/us."""
    return TWO_PI * f_mhz


def angular_from_ghz(f_ghz: float) -> float:
    """Ordinary frequency in GHz -> angular frequency in rad/us."""
    return TWO_PI * 1.0e3 * f_ghz


def mhz_from_angular(omega: float) -> float:
    """Angular frequency in rad/us -> ordinary frequency in MHz."""
    return omega / TWO_PI


@dataclass(frozen=True)
class SystemParams:
    """Fixed hardware parameters of the resonator-qubit system.

    All fields are angular frequencies or rates in rad/us (equivalently
    1/us), except the dimensionless ``z0`` and ``n_th``.
    """

    omega_r: float      # bare resonator frequency [rad/us]
    omega_q: float      # bare qubit transition frequency [rad/us]
    chi: float          # dispersive shift [rad/us]
    kappa: float        # resonator half-linewidth [1/us]
    gamma1: float       # qubit energy relaxation rate 1/T1 [1/us]
    gamma2: float       # qubit dephasing rate 1/T2 [1/us]
    z0: float = 1.0     # equilibrium inversion magnitude, dimensionless
    n_th: float = 0.0   # thermal photon occupation of the resonator bath

    def __post_init__(self) -> None:
        if self.kappa <= 0.0:
            raise ValueError(f"kappa must be positive, got {self.kappa}")
        if self.gamma1 <= 0.0 or self.gamma2 <= 0.0:
            raise ValueError(
                f"relaxation rates must be positive, got gamma1={self.gamma1}, "
                f"gamma2={self.gamma2}"
            )
        if self.z0 <= 0.0:
            raise ValueError(f"z0 must be positive, got {self.z0}")
        if self.n_th < 0.0:
            raise ValueError(f"n_th must be non-negative, got {self.n_th}")

    @property
    def t1(self) -> float:
        """Energy relaxation time T1 [us]."""
        return 1.0 / self.gamma1

    @property
    def t2(self) -> float:
        """Coherence time T2 [us]."""
        return 1.0 / self.gamma2


@dataclass(frozen=True)
class DriveConfig:
    """Amplitudes and frequencies of the two applied tones.

    The probe tone (xi, omega_p) addresses the resonator; the drive tone
    (omega_rabi, omega_d) addresses the qubit.  Angular units, rad/us.
    """

    xi: float           # probe amplitude [rad/us]
    omega_p: float      # probe frequency [rad/us]
    omega_rabi: float   # qubit drive (Rabi) amplitude [rad/us]
    omega_d: float      # qubit drive frequency [rad/us]

    def __post_init__(self) -> None:
        if self.xi < 0.0:
            raise ValueError(f"xi must be non-negative, got {self.xi}")
        if self.omega_rabi < 0.0:
            raise ValueError(
                f"omega_rabi must be non-negative, got {self.omega_rabi}"
            )


@dataclass(frozen=True)
class Detunings:
    """Rotating-frame detunings, rad/us.

    ``d_omega_r = omega_r - omega_p`` is the probe detuning from the bare
    resonator; ``d_omega_q = omega_q - omega_d`` is the drive detuning
    from the bare qubit.  Positive detuning means the tone sits below the
    bare transition.
    """

    d_omega_r: float
    d_omega_q: float


def default_params() -> SystemParams:
    """Parameter set of the experiment the models are benchmarked against."""
    return SystemParams(
        omega_r=angular_from_ghz(7.643),
        omega_q=angular_from_ghz(6.440),
        chi=angular_from_mhz(4.1),
        kappa=angular_from_mhz(1.0),
        gamma1=1.0 / 1.55,
        gamma2=1.0 / 2.65,
        z0=1.0,
        n_th=0.0,
    )


def detunings(params: SystemParams, drive: DriveConfig) -> Detunings:
    """Detunings of the two tones from the bare transitions."""
    return Detunings(
        d_omega_r=params.omega_r - drive.omega_p,
        d_omega_q=params.omega_q - drive.omega_d,
    )


def drive_for_detunings(
    params: SystemParams,
    d_omega_r: float,
    d_omega_q: float,
    xi: float,
    omega_rabi: float,
) -> DriveConfig:
    """Build a DriveConfig whose detunings come out as requested.

    Inverse of :func:`detunings`: ``omega_p = omega_r - d_omega_r`` and
    ``omega_d = omega_q - d_omega_q``.
    """
    return DriveConfig(
        xi=xi,
        omega_p=params.omega_r - d_omega_r,
        omega_rabi=omega_rabi,
        omega_d=params.omega_q - d_omega_q,
    )


def dressed_qubit_frequency(params: SystemParams, n_ph: float = 0.0) -> float:
    """Qubit frequency including the dispersive (Lamb + ac-Stark) shift.

    In the correlator equations the drive detuning always appears as
    ``d_omega_q + chi*(1 + 2<n>)``, so a drive is resonant with the
    dressed qubit when ``omega_d`` equals this value, not ``omega_q``.
    With ``n_ph = 0`` this is the resonance of the qubit in an empty
    resonator.
    """
    return params.omega_q + params.chi * (1.0 + 2.0 * n_ph)
