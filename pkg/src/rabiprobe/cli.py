"""Command-line front end: run configs, sweeps, and file outputs.

Configuration files are flat ``key = value`` text with ``#`` comments
and section-prefixed keys (``system.chi_mhz = 4.1``).  Frequencies in
configs are ordinary (non-angular) MHz or GHz; the single conversion to
the angular rad/us units used internally happens when the run
configuration is turned into parameter objects.

Outputs are plain CSV (one ``#`` comment block echoing the run, a
header row of probe detunings, one row per second-axis value, floats
printed with %.17g so they round-trip bit-exactly, failed points as
literal ``nan``) and 8-bit binary PGM heat maps for a quick look
without plotting tools.

Exit codes: 0 on success, 1 for configuration or usage errors, 2 for
numerical failures (no convergence, a transition that the amplitude
window does not bracket, or more than 10% failed grid points).
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from dataclasses import dataclass

import numpy as np

from . import bloch, semiclassical, spectroscopy
from .errors import ConfigError, NoConvergence, RabiProbeError, RegimeNotBracketed
from .params import (
    DriveConfig,
    SystemParams,
    angular_from_ghz,
    angular_from_mhz,
    mhz_from_angular,
)
from .spectroscopy import AxisKind, Model, SweepGrid, TransmissionMap

FAILURE_FRACTION_LIMIT = 0.10


@dataclass(frozen=True)
class RunConfig:
    """One run's worth of settings, in the units the config file uses.

    Values stay in laboratory units (MHz, GHz, us) here so that parsing
    and re-serializing a config is idempotent; conversion to angular
    internal units happens in the ``build_*`` helpers.
    """

    # system
    omega_r_ghz: float = 7.643
    omega_q_ghz: float = 6.440
    chi_mhz: float = 4.1
    kappa_mhz: float = 1.0
    t1_us: float = 1.55
    t2_us: float = 2.65
    z0: float = 1.0
    n_th: float = 0.0
    # drive
    xi_over_kappa: float = 0.05
    xi_mhz: float | None = None
    omega_rabi_mhz: float | None = None
    resonant: bool = True
    drive_detuning_mhz: float = 0.0
    probe_detuning_mhz: float | None = None
    # grid
    probe_min_mhz: float | None = None
    probe_max_mhz: float | None = None
    probe_points: int = 401
    amp_min_mhz: float | None = None
    amp_max_mhz: float | None = None
    amp_points: int = 81
    amp_spacing: str = "log"
    freq_min_mhz: float | None = None
    freq_max_mhz: float | None = None
    freq_points: int = 81
    # run
    model: str = "semiquantum"
    strategy: str = "newton"
    workers: int = 0
    out: str | None = None
    # command-specific lists (comma-separated, lab units)
    cuts_omega_rabi_mhz: str = "0.0157,0.157,0.785,4.71"
    omega2_xi_over_kappa: str = "0.01,0.05,0.2,0.5,1,2"


# (config key, RunConfig attribute, value kind)
_CONFIG_SPEC = [
    ("system.omega_r_ghz", "omega_r_ghz", "float"),
    ("system.omega_q_ghz", "omega_q_ghz", "float"),
    ("system.chi_mhz", "chi_mhz", "float"),
    ("system.kappa_mhz", "kappa_mhz", "float"),
    ("system.t1_us", "t1_us", "float"),
    ("system.t2_us", "t2_us", "float"),
    ("system.z0", "z0", "float"),
    ("system.n_th", "n_th", "float"),
    ("drive.xi_over_kappa", "xi_over_kappa", "float"),
    ("drive.xi_mhz", "xi_mhz", "ofloat"),
    ("drive.omega_rabi_mhz", "omega_rabi_mhz", "ofloat"),
    ("drive.resonant", "resonant", "bool"),
    ("drive.drive_detuning_mhz", "drive_detuning_mhz", "float"),
    ("drive.probe_detuning_mhz", "probe_detuning_mhz", "ofloat"),
    ("grid.probe_min_mhz", "probe_min_mhz", "ofloat"),
    ("grid.probe_max_mhz", "probe_max_mhz", "ofloat"),
    ("grid.probe_points", "probe_points", "int"),
    ("grid.amp_min_mhz", "amp_min_mhz", "ofloat"),
    ("grid.amp_max_mhz", "amp_max_mhz", "ofloat"),
    ("grid.amp_points", "amp_points", "int"),
    ("grid.amp_spacing", "amp_spacing", "str"),
    ("grid.freq_min_mhz", "freq_min_mhz", "ofloat"),
    ("grid.freq_max_mhz", "freq_max_mhz", "ofloat"),
    ("grid.freq_points", "freq_points", "int"),
    ("run.model", "model", "str"),
    ("run.strategy", "strategy", "str"),
    ("run.workers", "workers", "int"),
    ("run.out", "out", "ostr"),
    ("cuts.omega_rabi_mhz", "cuts_omega_rabi_mhz", "str"),
    ("omega2.xi_over_kappa", "omega2_xi_over_kappa", "str"),
]

_KEY_TO_FIELD = {key: (attr, kind) for key, attr, kind in _CONFIG_SPEC}


def _parse_value(key: str, raw: str, kind: str):
    raw = raw.strip()
    try:
        if kind in ("float", "ofloat"):
            v = float(raw)
            if not np.isfinite(v):
                raise ValueError("not finite")
            return v
        if kind == "int":
            return int(raw)
        if kind == "bool":
            if raw.lower() == "true":
                return True
            if raw.lower() == "false":
                return False
            raise ValueError("expected true or false")
        return raw
    except ValueError as exc:
        raise ConfigError(f"bad value for {key}: {raw!r} ({exc})") from None


def parse_config(text: str) -> RunConfig:
    """Parse flat ``key = value`` configuration text.

    Unknown or duplicate keys are rejected rather than ignored, so a
    typo cannot silently fall back to a default.
    """
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, raw = body.split("=", 1)
        key = key.strip()
        if key not in _KEY_TO_FIELD:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        attr, kind = _KEY_TO_FIELD[key]
        values[key] = (attr, _parse_value(key, raw, kind))
    if "drive.xi_over_kappa" in values and "drive.xi_mhz" in values:
        raise ConfigError(
            "give either drive.xi_over_kappa or drive.xi_mhz, not both"
        )
    fields = {attr: v for attr, v in values.values()}
    cfg = RunConfig(**fields)
    _validate_config(cfg)
    return cfg


def _validate_config(cfg: RunConfig) -> None:
    if cfg.model not in ("analytical", "semiclassical", "semiquantum"):
        raise ConfigError(f"unknown model {cfg.model!r}")
    if cfg.strategy not in ("newton", "time-evolution"):
        raise ConfigError(f"unknown strategy {cfg.strategy!r}")
    if cfg.amp_spacing not in ("log", "linear"):
        raise ConfigError(f"amp_spacing must be 'log' or 'linear', got {cfg.amp_spacing!r}")
    for name in ("probe_points", "amp_points", "freq_points"):
        if getattr(cfg, name) < 3:
            raise ConfigError(f"{name} must be at least 3")
    if cfg.workers < 0:
        raise ConfigError("workers must be >= 0")
    if cfg.t1_us <= 0 or cfg.t2_us <= 0:
        raise ConfigError("t1_us and t2_us must be positive")
    if cfg.kappa_mhz <= 0:
        raise ConfigError("kappa_mhz must be positive")


def _fmt_value(v, kind: str) -> str:
    if kind == "bool":
        return "true" if v else "false"
    if kind in ("float", "ofloat"):
        return repr(float(v))
    return str(v)


def serialize_config(cfg: RunConfig) -> str:
    """Canonical text form; unset optional keys are omitted.

    ``parse_config(serialize_config(cfg))`` reproduces ``cfg`` exactly,
    which makes parse -> serialize idempotent.
    """
    lines = ["# rabiprobe run configuration"]
    section = None
    for key, attr, kind in _CONFIG_SPEC:
        v = getattr(cfg, attr)
        if v is None:
            continue
        sec = key.split(".", 1)[0]
        if sec != section:
            lines.append("")
            section = sec
        lines.append(f"{key} = {_fmt_value(v, kind)}")
    return "\n".join(lines) + "\n"


def load_config(path: str) -> RunConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return parse_config(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None


def build_params(cfg: RunConfig) -> SystemParams:
    """Lab units -> angular internal units (the only conversion point)."""
    return SystemParams(
        omega_r=angular_from_ghz(cfg.omega_r_ghz),
        omega_q=angular_from_ghz(cfg.omega_q_ghz),
        chi=angular_from_mhz(cfg.chi_mhz),
        kappa=angular_from_mhz(cfg.kappa_mhz),
        gamma1=1.0 / cfg.t1_us,
        gamma2=1.0 / cfg.t2_us,
        z0=cfg.z0,
        n_th=cfg.n_th,
    )


def build_xi(cfg: RunConfig, params: SystemParams) -> float:
    if cfg.xi_mhz is not None:
        return angular_from_mhz(cfg.xi_mhz)
    return cfg.xi_over_kappa * params.kappa


def build_omega_rabi(cfg: RunConfig, params: SystemParams) -> float:
    if cfg.omega_rabi_mhz is None:
        return spectroscopy.omega1_zero_detuning(params)
    return angular_from_mhz(cfg.omega_rabi_mhz)


def build_d_omega_q(cfg: RunConfig, params: SystemParams, model: Model) -> float:
    if cfg.resonant:
        return spectroscopy.resonant_drive_detuning(params, model)
    return angular_from_mhz(cfg.drive_detuning_mhz)


def build_probe_axis(cfg: RunConfig, params: SystemParams) -> np.ndarray:
    lo = (
        -2.0 * params.chi
        if cfg.probe_min_mhz is None
        else angular_from_mhz(cfg.probe_min_mhz)
    )
    hi = (
        2.0 * params.chi
        if cfg.probe_max_mhz is None
        else angular_from_mhz(cfg.probe_max_mhz)
    )
    if hi <= lo:
        raise ConfigError("probe axis: max must exceed min")
    return np.linspace(lo, hi, cfg.probe_points)


def build_amp_axis(cfg: RunConfig, params: SystemParams) -> np.ndarray:
    om1 = spectroscopy.omega1_zero_detuning(params)
    lo = (
        0.01 * om1
        if cfg.amp_min_mhz is None
        else angular_from_mhz(cfg.amp_min_mhz)
    )
    hi = (
        100.0 * om1
        if cfg.amp_max_mhz is None
        else angular_from_mhz(cfg.amp_max_mhz)
    )
    if hi <= lo:
        raise ConfigError("amplitude axis: max must exceed min")
    if cfg.amp_spacing == "log":
        if lo <= 0.0:
            raise ConfigError("log-spaced amplitude axis needs amp_min > 0")
        return np.geomspace(lo, hi, cfg.amp_points)
    return np.linspace(lo, hi, cfg.amp_points)


def build_freq_axis(cfg: RunConfig, params: SystemParams) -> np.ndarray:
    lo = (
        -3.0 * params.chi
        if cfg.freq_min_mhz is None
        else angular_from_mhz(cfg.freq_min_mhz)
    )
    hi = (
        3.0 * params.chi
        if cfg.freq_max_mhz is None
        else angular_from_mhz(cfg.freq_max_mhz)
    )
    if hi <= lo:
        raise ConfigError("frequency axis: max must exceed min")
    return np.linspace(lo, hi, cfg.freq_points)


def _f17(x: float) -> str:
    return "%.17g" % x


def write_map_csv(path: str, tmap: TransmissionMap, cfg: RunConfig) -> None:
    """CSV with a comment header, probe detunings as columns, one row
    per second-axis value.  All values are angular (rad/us)."""
    lines = [
        "# rabiprobe transmission map",
        f"# model = {tmap.model.value}",
        f"# axis = {tmap.grid.axis_kind.value}",
        "# units: all frequencies/amplitudes in rad/us, transmission normalized to xi/kappa",
        f"# xi = {_f17(tmap.xi)}",
        f"# d_omega_q = {_f17(tmap.d_omega_q)}",
        f"# omega_rabi = {_f17(tmap.omega_rabi)}",
        f"# failed_points = {tmap.failed_points}",
    ]
    for cfg_line in serialize_config(cfg).splitlines():
        if cfg_line and not cfg_line.startswith("#"):
            lines.append(f"# config: {cfg_line}")
    header = "axis," + ",".join(_f17(v) for v in tmap.grid.probe_detunings)
    lines.append(header)
    for i, v in enumerate(tmap.grid.axis_values):
        row = tmap.amplitude[i]
        lines.append(_f17(float(v)) + "," + ",".join(_f17(x) for x in row))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def read_map_csv(path: str):
    """Inverse of :func:`write_map_csv`.

    Returns ``(probe_detunings, axis_values, amplitude)``; comment lines
    are skipped.  Values parse back bit-exactly thanks to %.17g.
    """
    probe = None
    axis_vals = []
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            cells = line.split(",")
            if probe is None:
                probe = np.array([float(c) for c in cells[1:]])
                continue
            axis_vals.append(float(cells[0]))
            rows.append([float(c) for c in cells[1:]])
    if probe is None:
        raise ConfigError(f"{path}: no header row found")
    return probe, np.array(axis_vals), np.array(rows)


def write_map_pgm(path: str, tmap: TransmissionMap) -> None:
    """8-bit binary PGM: columns follow the probe axis, rows follow the
    second axis (ascending top to bottom).  Normalized amplitude 0..1
    maps to 0..255; failed points render black."""
    amp = np.array(tmap.amplitude, dtype=float)
    amp[~np.isfinite(amp)] = 0.0
    amp = np.clip(amp, 0.0, 1.0)
    pix = np.round(amp * 255.0).astype(np.uint8)
    h, w = pix.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(pix.tobytes())


def _model_of(cfg: RunConfig) -> Model:
    return Model(cfg.model)


def _parse_float_list(raw: str, what: str) -> list[float]:
    out = []
    for part in raw.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            out.append(float(part))
        except ValueError:
            raise ConfigError(f"bad {what} entry: {part!r}") from None
    if not out:
        raise ConfigError(f"empty {what} list")
    return out


def _echo(msg: str, sink: list[str]) -> None:
    print(msg)
    sink.append(msg)


def cmd_steady(cfg: RunConfig) -> int:
    params = build_params(cfg)
    model = _model_of(cfg)
    xi = build_xi(cfg, params)
    om = build_omega_rabi(cfg, params)
    d_q = build_d_omega_q(cfg, params, model)
    d_r = (
        params.chi
        if cfg.probe_detuning_mhz is None
        else angular_from_mhz(cfg.probe_detuning_mhz)
    )
    drive = DriveConfig(
        xi=xi, omega_p=params.omega_r - d_r,
        omega_rabi=om, omega_d=params.omega_q - d_q,
    )
    norm = xi / params.kappa
    lines: list[str] = []
    _echo(f"model = {model.value}", lines)
    _echo(f"d_omega_r = {_f17(d_r)} rad/us ({mhz_from_angular(d_r):.6g} MHz)", lines)
    _echo(f"d_omega_q = {_f17(d_q)} rad/us ({mhz_from_angular(d_q):.6g} MHz)", lines)
    _echo(f"xi = {_f17(xi)} rad/us", lines)
    _echo(f"omega_rabi = {_f17(om)} rad/us", lines)

    if model is Model.SEMIQUANTUM:
        strategy = (
            bloch.Strategy.NEWTON
            if cfg.strategy == "newton"
            else bloch.Strategy.TIME_EVOLUTION
        )
        result = bloch.steady_state(params, drive, strategy)
        st = result.state
        _echo(f"strategy = {strategy.value}", lines)
        for label, v in zip(bloch.STATE_LABELS, st.to_vector()):
            _echo(f"{label} = {_f17(float(v))}", lines)
        _echo(f"|a| = {_f17(abs(st.a))}", lines)
        _echo(f"transmission = {_f17(abs(st.a) / norm)}", lines)
        _echo(f"residual = {result.residual:.3e}", lines)
        _echo(f"iterations_or_time = {result.iterations_or_time:.6g}", lines)
    elif model is Model.SEMICLASSICAL:
        sol = semiclassical.solve_self_consistent(params, drive)
        _echo(f"n_ph = {_f17(sol.n_ph)}", lines)
        _echo(f"p_plus = {_f17(sol.p_plus)}", lines)
        _echo(f"omega1 = {_f17(sol.omega1)} rad/us", lines)
        _echo(f"branch_count = {sol.branch_count}", lines)
        _echo(f"converged = {sol.converged}", lines)
        _echo(f"transmission = {_f17(sol.amplitude / norm)}", lines)
    else:
        sol = semiclassical.solve_self_consistent(params, drive)
        occ = sol.p_plus
        a_minus = semiclassical.shifted_partial_amplitude(
            params, d_r, xi, 1.0 - occ
        )
        a_plus = semiclassical.shifted_partial_amplitude(params, d_r, xi, occ)
        avg = semiclassical.probabilistic_average(occ, a_minus, a_plus)
        _echo(f"p_plus = {_f17(occ)}", lines)
        _echo(f"a_minus = {_f17(a_minus / norm)}", lines)
        _echo(f"a_plus = {_f17(a_plus / norm)}", lines)
        _echo(f"transmission = {_f17(avg / norm)}", lines)
    if cfg.out:
        with open(f"{cfg.out}.txt", "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
    return 0


def _finish_map(cfg: RunConfig, tmap: TransmissionMap, out_default: str) -> int:
    out = cfg.out or out_default
    write_map_csv(f"{out}.csv", tmap, cfg)
    write_map_pgm(f"{out}.pgm", tmap)
    total = tmap.amplitude.size
    print(
        f"grid {tmap.amplitude.shape[0]} x {tmap.amplitude.shape[1]}, "
        f"failed points {tmap.failed_points}/{total}"
    )
    print(f"wrote {out}.csv and {out}.pgm")
    if tmap.failed_points > FAILURE_FRACTION_LIMIT * total:
        print("too many failed grid points", file=sys.stderr)
        return 2
    return 0


def cmd_sweep_drive(cfg: RunConfig) -> int:
    params = build_params(cfg)
    model = _model_of(cfg)
    grid = SweepGrid(
        probe_detunings=build_probe_axis(cfg, params),
        axis_kind=AxisKind.AMPLITUDE,
        axis_values=build_amp_axis(cfg, params),
    )
    d_q = build_d_omega_q(cfg, params, model)
    drive = DriveConfig(
        xi=build_xi(cfg, params), omega_p=params.omega_r,
        omega_rabi=0.0, omega_d=params.omega_q - d_q,
    )
    tmap = spectroscopy.sweep(
        params, drive, grid, model=model, workers=cfg.workers
    )
    return _finish_map(cfg, tmap, "rabiprobe_sweep_drive")


def cmd_sweep_detuning(cfg: RunConfig) -> int:
    params = build_params(cfg)
    model = _model_of(cfg)
    grid = SweepGrid(
        probe_detunings=build_probe_axis(cfg, params),
        axis_kind=AxisKind.FREQUENCY,
        axis_values=build_freq_axis(cfg, params),
    )
    drive = DriveConfig(
        xi=build_xi(cfg, params), omega_p=params.omega_r,
        omega_rabi=build_omega_rabi(cfg, params), omega_d=params.omega_q,
    )
    tmap = spectroscopy.sweep(
        params, drive, grid, model=model, workers=cfg.workers
    )
    return _finish_map(cfg, tmap, "rabiprobe_sweep_detuning")


def cmd_cuts(cfg: RunConfig) -> int:
    params = build_params(cfg)
    model = _model_of(cfg)
    omegas = sorted(
        angular_from_mhz(v)
        for v in _parse_float_list(cfg.cuts_omega_rabi_mhz, "cuts.omega_rabi_mhz")
    )
    grid = SweepGrid(
        probe_detunings=build_probe_axis(cfg, params),
        axis_kind=AxisKind.AMPLITUDE,
        axis_values=np.array(omegas),
    )
    d_q = build_d_omega_q(cfg, params, model)
    drive = DriveConfig(
        xi=build_xi(cfg, params), omega_p=params.omega_r,
        omega_rabi=0.0, omega_d=params.omega_q - d_q,
    )
    tmap = spectroscopy.sweep(
        params, drive, grid, model=model, workers=cfg.workers
    )
    for i, om in enumerate(omegas):
        report = tmap.row_report(i)
        pos = ", ".join(f"{mhz_from_angular(p):+.4g}" for p in report.positions)
        hts = ", ".join(f"{h:.4g}" for h in report.heights)
        print(
            f"omega_rabi = {mhz_from_angular(om):.6g} MHz: "
            f"{report.classification.value}"
            + (f" at [{pos}] MHz, heights [{hts}]" if report.positions else "")
        )
    out = cfg.out or "rabiprobe_cuts"
    write_map_csv(f"{out}.csv", tmap, cfg)
    print(f"wrote {out}.csv")
    total = tmap.amplitude.size
    if tmap.failed_points > FAILURE_FRACTION_LIMIT * total:
        print("too many failed grid points", file=sys.stderr)
        return 2
    return 0


def cmd_omega2(cfg: RunConfig) -> int:
    params = build_params(cfg)
    model = _model_of(cfg)
    ratios = _parse_float_list(cfg.omega2_xi_over_kappa, "omega2.xi_over_kappa")
    xi_values = [r * params.kappa for r in ratios]
    pairs = spectroscopy.omega2_vs_photon_number(
        params, xi_values, model=model
    )
    out = cfg.out or "rabiprobe_omega2"
    lines = ["# xi_over_kappa,xi_rad_us,n_ph_ref,omega2_rad_us"]
    for ratio, xi, (n_ref, om2) in zip(ratios, xi_values, pairs):
        print(
            f"xi/kappa = {ratio:g}: n_ref = {n_ref:.6g}, "
            f"Omega_2 = {om2:.6g} rad/us ({mhz_from_angular(om2):.6g} MHz)"
        )
        lines.append(
            f"{_f17(ratio)},{_f17(xi)},{_f17(n_ref)},{_f17(om2)}"
        )
    with open(f"{out}.csv", "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    print(f"wrote {out}.csv")
    return 0


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems as ConfigError (exit code 1)."""

    def error(self, message: str):
        raise ConfigError(message)


def _build_parser() -> _Parser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="path to a key = value config file")
    common.add_argument(
        "--model", choices=["analytical", "semiclassical", "semiquantum"],
        help="model layer (default from config: semiquantum)",
    )
    common.add_argument("--out", help="output file prefix")
    common.add_argument(
        "--workers", type=int, help="worker processes (0 = auto, 1 = serial)"
    )
    parser = _Parser(
        prog="rabiprobe",
        description=(
            "Steady-state probe transmission of a resonator dispersively "
            "coupled to a periodically driven qubit."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "steady", parents=[common],
        help="single steady-state point",
    )
    p.add_argument(
        "--strategy", choices=["newton", "time-evolution"],
        help="semi-quantum steady-state solver",
    )
    p.add_argument(
        "--probe-detuning-mhz", type=float,
        help="probe detuning d_omega_r / 2pi (default: +chi, the ground-state peak)",
    )
    p.add_argument("--omega-rabi-mhz", type=float, help="drive amplitude / 2pi")
    p.add_argument("--xi-over-kappa", type=float, help="probe amplitude / kappa")

    p = sub.add_parser(
        "sweep-drive", parents=[common],
        help="transmission map over probe detuning x drive amplitude",
    )

    p = sub.add_parser(
        "cuts", parents=[common],
        help="probe-frequency cuts at fixed drive amplitudes, with peak reports",
    )
    p.add_argument(
        "--omega-rabi-mhz",
        help="comma-separated drive amplitudes / 2pi in MHz",
    )

    p = sub.add_parser(
        "sweep-detuning", parents=[common],
        help="transmission map over probe detuning x drive detuning",
    )

    p = sub.add_parser(
        "omega2", parents=[common],
        help="extract the line-collapse amplitude for several probe powers",
    )
    p.add_argument(
        "--xi-over-kappa",
        help="comma-separated probe amplitudes as fractions of kappa",
    )
    return parser


def _apply_overrides(cfg: RunConfig, args: argparse.Namespace) -> RunConfig:
    updates = {}
    if args.model is not None:
        updates["model"] = args.model
    if args.out is not None:
        updates["out"] = args.out
    if args.workers is not None:
        updates["workers"] = args.workers
    if getattr(args, "strategy", None) is not None:
        updates["strategy"] = args.strategy
    if getattr(args, "probe_detuning_mhz", None) is not None:
        updates["probe_detuning_mhz"] = args.probe_detuning_mhz
    if args.command == "steady":
        if args.omega_rabi_mhz is not None:
            updates["omega_rabi_mhz"] = args.omega_rabi_mhz
        if args.xi_over_kappa is not None:
            updates["xi_over_kappa"] = args.xi_over_kappa
            updates["xi_mhz"] = None
    if args.command == "cuts" and args.omega_rabi_mhz is not None:
        updates["cuts_omega_rabi_mhz"] = args.omega_rabi_mhz
    if args.command == "omega2" and args.xi_over_kappa is not None:
        updates["omega2_xi_over_kappa"] = args.xi_over_kappa
    if updates:
        cfg = dataclasses.replace(cfg, **updates)
        _validate_config(cfg)
    return cfg


_COMMANDS = {
    "steady": cmd_steady,
    "sweep-drive": cmd_sweep_drive,
    "cuts": cmd_cuts,
    "sweep-detuning": cmd_sweep_detuning,
    "omega2": cmd_omega2,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = load_config(args.config) if args.config else RunConfig()
        cfg = _apply_overrides(cfg, args)
        return _COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (NoConvergence, RegimeNotBracketed) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RabiProbeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
