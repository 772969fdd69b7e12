"""Gain/loss bookkeeping for collective decay.

Implements the mode-resolved gain rate, the below-threshold steady-state
enhancement, threshold and mode-depletion checks, the occupation rate
equation, full scenario evaluation, energy-scaling sweeps, and the
stimulated-annihilation gain of a positronium sample.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from . import physkit
from .constants import CODATA2018, PhysicalConstants
from .errors import DomainError, RegimeError
from .physkit import CoherenceBudget, EmissionChannel, SampleGeometry

# Paper-value comparisons are order-of-magnitude statements; agreement means
# a ratio within this factor either way.
ORDER_OF_MAGNITUDE_FACTOR = 30.0


@dataclass(frozen=True)
class CoherenceSettings:
    """How a scenario's coherence time is chosen at evaluation time.

    mode: auto | recoil | cascade | photon | explicit
    """

    mode: str = "auto"
    time: float | None = None            # s, for mode == "explicit"
    velocity_spread: float | None = None  # m/s, replaces the condensate spread


@dataclass(frozen=True)
class GainFragment:
    gain: float | None          # g, absent above threshold
    above_threshold: bool
    growth_rate: float | None   # G - L, only above threshold
    enhanced_rate: float | None  # (1 + g) G, only below threshold


@dataclass(frozen=True)
class ThresholdCheck:
    satisfied: bool
    margin: float


@dataclass(frozen=True)
class ModeDepletionCheck:
    satisfied: bool
    od_equivalent: float


@dataclass(frozen=True)
class PositroniumGain:
    inverse_gain_length: float   # 1/m
    optical_depth: float         # n * sigma * l
    above_threshold: bool
    cross_section: float         # m^2


@dataclass(frozen=True)
class RateTrajectory:
    """Sampled solution of the occupation rate equation."""

    times: np.ndarray
    occupation: np.ndarray      # decay products holding coherence, M(t)
    source: np.ndarray          # remaining emitters, N(t)
    emitted_total: np.ndarray   # cumulative emission into the tracked mode


@dataclass(frozen=True)
class GainReport:
    """Every derived quantity for one emitter scenario."""

    name: str
    gain_rate: float
    loss_rate: float
    dimensionless_gain: float | None
    above_threshold: bool
    growth_rate: float | None
    enhanced_rate: float | None
    solid_angle: float
    mode_count: float
    optical_density: float          # n lambda^2 l
    threshold_margin: float
    mode_depletion_od: float        # N (lambda/d)^2
    mode_depletion_satisfied: bool
    dominant_loss_channel: str
    coherence: CoherenceBudget
    wavelength: float
    inverse_gain_length: float | None = None    # annihilation channels only
    stimulation_od: float | None = None
    stimulation_cross_section: float | None = None
    inputs_echo: dict | None = None


def gain_rate(atom_number, natural_rate, solid_angle):
    """Emission rate G = N Gamma Omega into the best coherent mode."""
    if atom_number < 0.0 or natural_rate < 0.0 or solid_angle < 0.0:
        raise DomainError("gain_rate arguments must be non-negative")
    return atom_number * natural_rate * solid_angle


def dimensionless_gain(gain, loss) -> GainFragment:
    """Steady-state occupation g = G/(L-G) of the preferred mode.

    Above threshold (G >= L) the steady state does not exist; the fragment
    reports the exponential growth rate G - L instead of a gain.
    """
    if not loss > 0.0:
        raise DomainError("loss rate must be positive")
    if gain < 0.0:
        raise DomainError("gain rate must be non-negative")
    if gain >= loss:
        return GainFragment(gain=None, above_threshold=True,
                            growth_rate=gain - loss, enhanced_rate=None)
    g = gain / (loss - gain)
    return GainFragment(gain=g, above_threshold=False, growth_rate=None,
                        enhanced_rate=(1.0 + g) * gain)


def threshold_check(atom_number, natural_rate, wavelength, diameter,
                    coherence_time) -> ThresholdCheck:
    """Exponential-amplification condition N Gamma (lambda/d)^2 tau > 1 (strict)."""
    margin = (atom_number * natural_rate
              * physkit.coherent_solid_angle(wavelength, diameter)
              * coherence_time)
    return ThresholdCheck(satisfied=margin > 1.0, margin=margin)


def mode_depletion_check(atom_number, wavelength, diameter) -> ModeDepletionCheck:
    """Mode-competition condition N (lambda/d)^2 > 1 (strict).

    Below it the number of populated modes exceeds the number of atoms and the
    source is depleted before any mode is stimulated.
    """
    od = atom_number * physkit.coherent_solid_angle(wavelength, diameter)
    return ModeDepletionCheck(satisfied=od > 1.0, od_equivalent=od)


def positronium_gain(density, length, cross_section=None,
                     constants: PhysicalConstants = CODATA2018) -> PositroniumGain:
    """Single-pass stimulated-annihilation gain of a positronium sample.

    The inverse gain length is n*sigma with sigma the one-photon stimulation
    cross section, defaulting to the unitarity-limited lambda_c^2/(2 pi) at
    511 keV.  The threshold quantity is n*sigma*l > 1: at least one stimulated
    photon per end-fire mode before the sample has annihilated away.
    """
    if density < 0.0:
        raise DomainError("density must be non-negative")
    if not length > 0.0:
        raise DomainError("length must be positive")
    if cross_section is None:
        cross_section = constants.compton_wavelength**2 / (2.0 * math.pi)
    elif not cross_section > 0.0:
        raise DomainError("cross_section must be positive")
    inverse = density * cross_section
    od = inverse * length
    return PositroniumGain(inverse_gain_length=inverse, optical_depth=od,
                           above_threshold=od > 1.0, cross_section=cross_section)


def integrate_rate_equation(gain, loss, occupation0=0.0, source0=1.0,
                            horizon=1.0, deplete_source=False, gamma=None,
                            rtol=1e-9, atol=None, samples=200) -> RateTrajectory:
    """Integrate dM/dt = G(M+1) - L M on an even sample grid.

    With ``deplete_source`` the gain follows the shrinking source,
    G(t) = N(t) Gamma Omega, and the source decays through both spontaneous
    and stimulated emission; ``gamma`` (the spontaneous rate) is then
    required.  This depletion model extrapolates beyond the undepleted
    steady-state analysis.
    """
    for name, value in (("gain", gain), ("loss", loss),
                        ("occupation0", occupation0), ("source0", source0),
                        ("horizon", horizon)):
        if not math.isfinite(value):
            raise DomainError(f"{name} must be finite")
    if gain < 0.0 or loss < 0.0:
        raise DomainError("gain and loss must be non-negative")
    if not horizon > 0.0:
        raise DomainError("horizon must be positive")
    if occupation0 < 0.0 or source0 < 0.0:
        raise DomainError("initial occupation and source must be non-negative")

    times = np.linspace(0.0, horizon, samples)
    if atol is None:
        atol = 1e-12 * max(1.0, occupation0, source0)

    if deplete_source:
        if gamma is None or not gamma >= 0.0:
            raise DomainError("deplete_source requires a non-negative gamma")
        if not source0 > 0.0:
            raise DomainError("deplete_source requires a positive source0")
        per_atom = gain / source0   # Gamma * Omega

        def rhs(t, y):
            m, n, _ = y
            emit = per_atom * n * (m + 1.0)
            return (emit - loss * m, -gamma * n - per_atom * n * m, emit)

        y0 = (occupation0, source0, 0.0)
    else:

        def rhs(t, y):
            m, _ = y
            emit = gain * (m + 1.0)
            return (emit - loss * m, emit)

        y0 = (occupation0, 0.0)

    sol = solve_ivp(rhs, (0.0, horizon), y0, method="DOP853",
                    rtol=rtol, atol=atol, t_eval=times)
    if not sol.success:
        raise DomainError(f"rate-equation integration failed: {sol.message}")

    occupation = sol.y[0]
    if deplete_source:
        source = sol.y[1]
        emitted = sol.y[2]
    else:
        source = np.full_like(times, source0)
        emitted = sol.y[1]
    return RateTrajectory(times=times, occupation=occupation, source=source,
                          emitted_total=emitted)


def rate_equation_solution(gain, loss, occupation0, times):
    """Closed form of the constant-coefficient rate equation (test oracle).

    M(t) = M0 e^{(G-L)t} + G/(L-G) (1 - e^{(G-L)t}) for G != L.
    """
    times = np.asarray(times, dtype=float)
    net = gain - loss
    if net == 0.0:
        return occupation0 + gain * times
    growth = np.exp(net * times)
    return occupation0 * growth + gain / (-net) * (1.0 - growth)


def evaluate_scenario(channel: EmissionChannel, geometry: SampleGeometry,
                      coherence: CoherenceSettings | None = None, *,
                      name="", constants: PhysicalConstants = CODATA2018
                      ) -> GainReport:
    """Assemble the full feasibility report for one emitter scenario."""
    if coherence is None:
        coherence = CoherenceSettings()
    wavelength = physkit.photon_wavelength(channel.energy, constants)
    solid_angle = physkit.coherent_solid_angle(wavelength, geometry.diameter)
    budget = physkit.coherence_budget(
        channel, geometry, coherence.velocity_spread,
        mode=coherence.mode, explicit_time=coherence.time, constants=constants)

    g_rate = gain_rate(geometry.atom_number, channel.natural_rate, solid_angle)
    fragment = dimensionless_gain(g_rate, budget.loss_rate)
    threshold = threshold_check(geometry.atom_number, channel.natural_rate,
                                wavelength, geometry.diameter,
                                1.0 / budget.loss_rate)
    depletion = mode_depletion_check(geometry.atom_number, wavelength,
                                     geometry.diameter)

    inverse_gain_length = stimulation_od = cross_section = None
    if channel.particle_kind == "annihilation_pair":
        ps = positronium_gain(geometry.density, geometry.length,
                              constants=constants)
        inverse_gain_length = ps.inverse_gain_length
        stimulation_od = ps.optical_depth
        cross_section = ps.cross_section

    echo = {
        "name": name,
        "particle_kind": channel.particle_kind,
        "energy": channel.energy,
        "natural_rate": channel.natural_rate,
        "half_life": channel.half_life,
        "parent_mass": channel.parent_mass,
        "daughter_lifetime": channel.daughter_lifetime,
        "diameter": geometry.diameter,
        "length": geometry.length,
        "atom_number": geometry.atom_number,
        "density": geometry.density,
        "coherence_mode": coherence.mode,
        "coherence_time": coherence.time,
        "velocity_spread": coherence.velocity_spread,
    }

    return GainReport(
        name=name,
        gain_rate=g_rate,
        loss_rate=budget.loss_rate,
        dimensionless_gain=fragment.gain,
        above_threshold=fragment.above_threshold,
        growth_rate=fragment.growth_rate,
        enhanced_rate=fragment.enhanced_rate,
        solid_angle=solid_angle,
        mode_count=physkit.mode_count(geometry.diameter, wavelength),
        optical_density=physkit.optical_density(geometry.density, wavelength,
                                                geometry.length),
        threshold_margin=threshold.margin,
        mode_depletion_od=depletion.od_equivalent,
        mode_depletion_satisfied=depletion.satisfied,
        dominant_loss_channel=budget.dominant,
        coherence=budget,
        wavelength=wavelength,
        inverse_gain_length=inverse_gain_length,
        stimulation_od=stimulation_od,
        stimulation_cross_section=cross_section,
        inputs_echo=echo,
    )


SWEEP_VARIABLES = ("energy", "atom_number", "diameter", "length", "density")


@dataclass(frozen=True)
class SweepResult:
    variable: str
    values: np.ndarray
    reports: tuple
    slope: float | None    # d(log g)/d(log E) for energy sweeps


def log_grid(start, stop, points_per_decade=20):
    """Logarithmic grid with at least ``points_per_decade`` over [start, stop]."""
    if not (start > 0.0 and stop > start):
        raise DomainError("need 0 < start < stop")
    decades = math.log10(stop / start)
    n = max(2, int(math.ceil(points_per_decade * decades)) + 1)
    return np.geomspace(start, stop, n)


def _displace(channel, geometry, variable, value):
    if variable == "energy":
        return channel.with_energy(value), geometry
    if variable == "atom_number":
        return channel, SampleGeometry.from_atom_number(
            geometry.diameter, geometry.length, value)
    if variable == "diameter":
        return channel, SampleGeometry.from_atom_number(
            value, geometry.length, geometry.atom_number)
    if variable == "length":
        return channel, SampleGeometry.from_atom_number(
            geometry.diameter, value, geometry.atom_number)
    if variable == "density":
        return channel, SampleGeometry.from_density(
            geometry.diameter, geometry.length, value)
    raise DomainError(f"unknown sweep variable {variable!r}; "
                      f"expected one of {SWEEP_VARIABLES}")


def parameter_sweep(channel, geometry, variable, values,
                    coherence: CoherenceSettings | None = None, *,
                    name="", constants: PhysicalConstants = CODATA2018
                    ) -> SweepResult:
    """Evaluate a scenario across a grid of one input variable.

    Energy sweeps additionally fit the log-log slope of the gain and require
    an overlap-limited coherence budget (see gain_energy_scaling).
    """
    values = np.asarray(list(values), dtype=float)
    if variable == "energy":
        return gain_energy_scaling(channel, geometry, values, coherence,
                                   name=name, constants=constants)
    reports = tuple(
        evaluate_scenario(*_displace(channel, geometry, variable, v),
                          coherence, name=name, constants=constants)
        for v in values)
    return SweepResult(variable=variable, values=values, reports=reports,
                       slope=None)


def gain_energy_scaling(channel, geometry, energies,
                        coherence: CoherenceSettings | None = None, *,
                        name="", constants: PhysicalConstants = CODATA2018
                        ) -> SweepResult:
    """Gain versus emission energy with a fitted log-log slope.

    Only meaningful when the coherence time tracks the recoil (or a fixed
    velocity spread), where the transit time scales as 1/E and the gain as
    1/E^3.  Cascade- or transit-of-light-limited budgets would flatten the
    scaling to 1/E^2, so those are refused rather than silently fitted.
    """
    if coherence is None:
        coherence = CoherenceSettings()
    if coherence.mode in ("cascade", "explicit", "photon"):
        raise RegimeError(
            f"energy scaling is defined for overlap-limited coherence; "
            f"mode {coherence.mode!r} fixes the coherence time and would "
            f"scale as 1/E^2 instead of 1/E^3")
    if coherence.mode == "auto" and channel.daughter_lifetime is not None:
        raise RegimeError(
            "energy scaling refused: the daughter cascade limits coherence "
            "(fixed lifetime gives a 1/E^2 scaling); rerun with the recoil "
            "coherence mode to isolate the overlap-limited scaling")

    energies = np.asarray(list(energies), dtype=float)
    reports = []
    for energy in energies:
        report = evaluate_scenario(channel.with_energy(energy), geometry,
                                   coherence, name=name, constants=constants)
        budget = report.coherence
        if budget.regime != "superradiance" or budget.floor_applied:
            raise RegimeError(
                f"energy scaling refused at E = {energy:.4g} J: coherence is "
                f"not overlap-limited there (dominant channel "
                f"{budget.dominant!r}, regime {budget.regime!r})")
        if report.above_threshold:
            raise RegimeError(
                f"energy scaling refused at E = {energy:.4g} J: scenario is "
                f"above threshold and has no steady-state gain")
        reports.append(report)

    gains = np.array([r.dimensionless_gain for r in reports])
    slope = float(np.polyfit(np.log(energies), np.log(gains), 1)[0])
    return SweepResult(variable="energy", values=energies,
                       reports=tuple(reports), slope=slope)


def thermal_equivalent_inputs(channel, geometry, mass_ratio,
                              constants: PhysicalConstants = CODATA2018):
    """Channel/geometry/coherence of the heavy-atom stand-in ensemble.

    Same density and Doppler width as the condensate, heavier atoms; the
    returned inputs must evaluate to the identical gain report.
    """
    ensemble = physkit.equivalent_thermal_ensemble(geometry, channel,
                                                   mass_ratio, constants)
    heavy_channel = EmissionChannel(
        particle_kind=channel.particle_kind,
        energy=channel.energy,
        natural_rate=channel.natural_rate,
        half_life=channel.half_life,
        parent_mass=ensemble.mass,
        daughter_lifetime=channel.daughter_lifetime,
        label=channel.label,
    )
    settings = CoherenceSettings(mode="auto",
                                 velocity_spread=ensemble.velocity_spread)
    return heavy_channel, geometry, settings, ensemble
