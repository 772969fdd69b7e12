"""Human and CSV rendering of reports, trajectories and sweep tables.

The human format is line-oriented ``key: value`` text, stable and greppable.
CSV output is RFC-4180 with LF line endings and a mandatory header row whose
first column is the schema version; numbers are full-precision scientific
notation so a parse round-trip is exact.  Energy sweeps append the fitted
log-log slope as a ``#`` comment line after the data (documented in
``scenarios/SCHEMA.md``).
"""

import csv
import io

from .constants import CODATA2018
from .errors import DomainError
from .gain import GainReport, RateTrajectory, SweepResult
from .lindblad.evolve import ObservableTrajectory

SCHEMA_VERSION = 1

_COHERENCE_COLUMNS = ("photon_transit", "recoil_transit", "doppler",
                      "cascade", "explicit")

GAIN_CSV_COLUMNS = (
    "schema_version", "name", "particle_kind", "energy_J",
    "natural_rate_per_s", "half_life_s", "parent_mass_kg",
    "daughter_lifetime_s", "diameter_m", "length_m", "atom_number",
    "density_per_m3", "wavelength_m", "solid_angle", "mode_count",
    "optical_density", "gain_rate_per_s", "loss_rate_per_s",
    "dimensionless_gain", "above_threshold", "growth_rate_per_s",
    "enhanced_rate_per_s", "threshold_margin", "mode_depletion_od",
    "mode_depletion_satisfied", "dominant_loss_channel", "coherence_regime",
) + tuple(f"coherence_{name}_s" for name in _COHERENCE_COLUMNS) + (
    "inverse_gain_length_per_m", "stimulation_od",
    "stimulation_cross_section_m2",
)


def _num(value):
    if value is None:
        return ""
    return f"{value:.17e}"


def _flag(value):
    if value is None:
        return ""
    return "true" if value else "false"


def _human_num(value, unit=""):
    if value is None:
        return "n/a"
    text = f"{value:.6g}"
    return f"{text} {unit}".rstrip()


def emit_report(obj, format="human"):
    """Render a GainReport, trajectory, or sweep table to text."""
    if format not in ("human", "csv"):
        raise DomainError(f"unknown format {format!r}; expected human or csv")
    if isinstance(obj, GainReport):
        return (gain_report_human(obj) if format == "human"
                else gain_report_csv(obj))
    if isinstance(obj, SweepResult):
        return (sweep_human(obj) if format == "human" else sweep_csv(obj))
    if isinstance(obj, ObservableTrajectory):
        return (observable_trajectory_human(obj) if format == "human"
                else observable_trajectory_csv(obj))
    if isinstance(obj, RateTrajectory):
        return (rate_trajectory_human(obj) if format == "human"
                else rate_trajectory_csv(obj))
    raise DomainError(f"cannot emit a report for {type(obj).__name__}")


def _gain_row(report: GainReport):
    echo = report.inputs_echo or {}
    times = report.coherence.channels
    row = {
        "schema_version": str(SCHEMA_VERSION),
        "name": report.name,
        "particle_kind": echo.get("particle_kind", ""),
        "energy_J": _num(echo.get("energy")),
        "natural_rate_per_s": _num(echo.get("natural_rate")),
        "half_life_s": _num(echo.get("half_life")),
        "parent_mass_kg": _num(echo.get("parent_mass")),
        "daughter_lifetime_s": _num(echo.get("daughter_lifetime")),
        "diameter_m": _num(echo.get("diameter")),
        "length_m": _num(echo.get("length")),
        "atom_number": _num(echo.get("atom_number")),
        "density_per_m3": _num(echo.get("density")),
        "wavelength_m": _num(report.wavelength),
        "solid_angle": _num(report.solid_angle),
        "mode_count": _num(report.mode_count),
        "optical_density": _num(report.optical_density),
        "gain_rate_per_s": _num(report.gain_rate),
        "loss_rate_per_s": _num(report.loss_rate),
        "dimensionless_gain": _num(report.dimensionless_gain),
        "above_threshold": _flag(report.above_threshold),
        "growth_rate_per_s": _num(report.growth_rate),
        "enhanced_rate_per_s": _num(report.enhanced_rate),
        "threshold_margin": _num(report.threshold_margin),
        "mode_depletion_od": _num(report.mode_depletion_od),
        "mode_depletion_satisfied": _flag(report.mode_depletion_satisfied),
        "dominant_loss_channel": report.dominant_loss_channel,
        "coherence_regime": report.coherence.regime,
        "inverse_gain_length_per_m": _num(report.inverse_gain_length),
        "stimulation_od": _num(report.stimulation_od),
        "stimulation_cross_section_m2": _num(report.stimulation_cross_section),
    }
    for name in _COHERENCE_COLUMNS:
        row[f"coherence_{name}_s"] = _num(times.get(name))
    return row


def _write_csv(header, rows, trailing_comments=()):
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    text = buffer.getvalue()
    for comment in trailing_comments:
        text += f"# {comment}\n"
    return text


def gain_report_csv(report: GainReport):
    row = _gain_row(report)
    return _write_csv(GAIN_CSV_COLUMNS,
                      [[row[c] for c in GAIN_CSV_COLUMNS]])


def gain_report_human(report: GainReport):
    echo = report.inputs_echo or {}
    lines = [
        f"schema_version: {SCHEMA_VERSION}",
        "report: gain",
        f"name: {report.name}",
        f"particle: {echo.get('particle_kind', '')}",
        f"energy: {_human_num(echo.get('energy'), 'J')}",
        f"natural_rate: {_human_num(echo.get('natural_rate'), '/s')}",
        f"half_life: {_human_num(echo.get('half_life'), 's')}",
        f"parent_mass: {_human_num(echo.get('parent_mass'), 'kg')}",
        f"daughter_lifetime: {_human_num(echo.get('daughter_lifetime'), 's')}",
        f"diameter: {_human_num(echo.get('diameter'), 'm')}",
        f"length: {_human_num(echo.get('length'), 'm')}",
        f"atom_number: {_human_num(echo.get('atom_number'))}",
        f"density: {_human_num(echo.get('density'), '/m^3')}",
        f"coherence_mode: {echo.get('coherence_mode', 'auto')}",
        f"wavelength: {_human_num(report.wavelength, 'm')}",
        f"solid_angle: {_human_num(report.solid_angle)}",
        f"mode_count: {_human_num(report.mode_count)}",
        f"optical_density: {_human_num(report.optical_density)}",
        f"gain_rate_G: {_human_num(report.gain_rate, '/s')}",
        f"loss_rate_L: {_human_num(report.loss_rate, '/s')}",
        f"dimensionless_gain_g: {_human_num(report.dimensionless_gain)}",
        f"above_threshold: {_flag(report.above_threshold)}",
        f"growth_rate: {_human_num(report.growth_rate, '/s')}",
        f"enhanced_rate: {_human_num(report.enhanced_rate, '/s')}",
        f"threshold_margin: {_human_num(report.threshold_margin)}",
        f"mode_depletion_od: {_human_num(report.mode_depletion_od)}",
        f"mode_depletion_satisfied: {_flag(report.mode_depletion_satisfied)}",
        f"dominant_loss_channel: {report.dominant_loss_channel}",
        f"coherence_regime: {report.coherence.regime}",
        f"loss_floor_applied: {_flag(report.coherence.floor_applied)}",
    ]
    for name, value in report.coherence.channels.items():
        lines.append(f"coherence.{name}: {_human_num(value, 's')}")
    if report.inverse_gain_length is not None:
        lines += [
            f"inverse_gain_length: {_human_num(report.inverse_gain_length, '/m')}",
            f"stimulation_od: {_human_num(report.stimulation_od)}",
            "stimulation_cross_section: "
            f"{_human_num(report.stimulation_cross_section, 'm^2')}",
        ]
    for name, value in CODATA2018.as_dict().items():
        lines.append(f"constants.{name}: {value!r}")
    return "\n".join(lines) + "\n"


def sweep_csv(sweep: SweepResult):
    header = ("variable", "value") + GAIN_CSV_COLUMNS
    rows = []
    for value, report in zip(sweep.values, sweep.reports):
        row = _gain_row(report)
        rows.append([sweep.variable, _num(value)]
                    + [row[c] for c in GAIN_CSV_COLUMNS])
    comments = []
    if sweep.slope is not None:
        comments.append(f"loglog_slope={sweep.slope:.6f}")
    return _write_csv(header, rows, comments)


def sweep_human(sweep: SweepResult):
    lines = [f"schema_version: {SCHEMA_VERSION}",
             f"report: sweep over {sweep.variable} ({len(sweep.reports)} points)"]
    for value, report in zip(sweep.values, sweep.reports):
        g = report.dimensionless_gain
        lines.append(
            f"{sweep.variable}: {_human_num(value)}  "
            f"g: {_human_num(g)}  above_threshold: {_flag(report.above_threshold)}")
    if sweep.slope is not None:
        lines.append(f"loglog_slope: {sweep.slope:.6f}")
    return "\n".join(lines) + "\n"


def observable_trajectory_csv(traj: ObservableTrajectory):
    names = list(traj.values)
    header = ["schema_version", "time"] + names
    rows = []
    for i, t in enumerate(traj.times):
        rows.append([str(SCHEMA_VERSION), _num(t)]
                    + [_num(traj.values[n][i]) for n in names])
    return _write_csv(header, rows)


def observable_trajectory_human(traj: ObservableTrajectory):
    lines = [f"schema_version: {SCHEMA_VERSION}",
             f"report: trajectory ({traj.backend} backend)"]
    for name, series in traj.values.items():
        lines.append(f"{name}: start {_human_num(series[0])} "
                     f"end {_human_num(series[-1])}")
    return "\n".join(lines) + "\n"


def rate_trajectory_csv(traj: RateTrajectory):
    header = ["schema_version", "time", "occupation", "source", "emitted_total"]
    rows = []
    for i, t in enumerate(traj.times):
        rows.append([str(SCHEMA_VERSION), _num(t), _num(traj.occupation[i]),
                     _num(traj.source[i]), _num(traj.emitted_total[i])])
    return _write_csv(header, rows)


def rate_trajectory_human(traj: RateTrajectory):
    lines = [f"schema_version: {SCHEMA_VERSION}", "report: rate-equation trajectory",
             f"occupation: start {_human_num(traj.occupation[0])} "
             f"end {_human_num(traj.occupation[-1])}",
             f"source: start {_human_num(traj.source[0])} "
             f"end {_human_num(traj.source[-1])}",
             f"emitted_total: end {_human_num(traj.emitted_total[-1])}"]
    return "\n".join(lines) + "\n"
