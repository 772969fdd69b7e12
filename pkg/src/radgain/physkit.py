"""Single-formula physics of collective emission from a trapped sample.

Wavelengths, recoils, solid angles, mode counts, optical densities and the
coherence-time budget that decides whether a sample amplifies its own decay
radiation.  Everything here is a pure function of SI inputs.
"""

import math
from dataclasses import dataclass, replace
from types import MappingProxyType

from .constants import CODATA2018, PhysicalConstants
from .errors import DomainError

PARTICLE_KINDS = ("photon", "neutrino", "annihilation_pair")

# Atoms recoiling faster than this fraction of c get a warning flag.
RELATIVISTIC_FRACTION = 0.01

# Hydrogen 2p -> 1s lifetime, the anchor for the Z^-4 inner-shell estimate.
HYDROGEN_2P_LIFETIME = 1.6e-9


@dataclass(frozen=True)
class EmissionChannel:
    """One decay branch: what is emitted, how fast, and by what parent.

    ``natural_rate`` and ``half_life`` are stored together and must satisfy
    natural_rate * half_life = ln 2.  ``daughter_lifetime`` is the lifetime of
    a secondary decay of the daughter state, when there is one.
    """

    particle_kind: str
    energy: float                  # J
    natural_rate: float            # 1/s
    half_life: float               # s
    parent_mass: float             # kg
    daughter_lifetime: float | None = None
    label: str = ""

    def __post_init__(self):
        if self.particle_kind not in PARTICLE_KINDS:
            raise DomainError(
                f"unknown particle_kind {self.particle_kind!r}; "
                f"expected one of {PARTICLE_KINDS}"
            )
        for name in ("energy", "natural_rate", "half_life", "parent_mass"):
            if not getattr(self, name) > 0.0:
                raise DomainError(f"{name} must be positive")
        if abs(self.natural_rate * self.half_life - math.log(2.0)) > 1e-12 * math.log(2.0):
            raise DomainError("natural_rate * half_life must equal ln(2)")
        if self.daughter_lifetime is not None and not self.daughter_lifetime > 0.0:
            raise DomainError("daughter_lifetime must be positive when present")

    @classmethod
    def from_half_life(cls, particle_kind, energy, half_life, parent_mass,
                       daughter_lifetime=None, label=""):
        return cls(particle_kind, energy, math.log(2.0) / half_life, half_life,
                   parent_mass, daughter_lifetime, label)

    @classmethod
    def from_rate(cls, particle_kind, energy, natural_rate, parent_mass,
                  daughter_lifetime=None, label=""):
        return cls(particle_kind, energy, natural_rate, math.log(2.0) / natural_rate,
                   parent_mass, daughter_lifetime, label)

    @classmethod
    def from_lifetime(cls, particle_kind, energy, lifetime, parent_mass,
                      daughter_lifetime=None, label=""):
        return cls.from_rate(particle_kind, energy, 1.0 / lifetime, parent_mass,
                             daughter_lifetime, label)

    def with_energy(self, energy):
        return replace(self, energy=energy)


@dataclass(frozen=True)
class SampleGeometry:
    """Cloud shape: diameter d, length l, atom number N and density n = N/(d^2 l)."""

    diameter: float       # m
    length: float         # m
    atom_number: float
    density: float        # 1/m^3

    def __post_init__(self):
        for name in ("diameter", "length", "atom_number", "density"):
            if not getattr(self, name) > 0.0:
                raise DomainError(f"{name} must be positive")
        implied = self.atom_number / (self.diameter**2 * self.length)
        if abs(self.density - implied) > 1e-9 * implied:
            raise DomainError(
                "density inconsistent with atom_number/(diameter^2 * length)"
            )

    @classmethod
    def from_atom_number(cls, diameter, length, atom_number):
        return cls(diameter, length, atom_number,
                   atom_number / (diameter**2 * length))

    @classmethod
    def from_density(cls, diameter, length, density):
        return cls(diameter, length, density * diameter**2 * length, density)


@dataclass(frozen=True)
class Recoil:
    """Daughter recoil speed, flagged when the nonrelativistic formula strains."""

    speed: float
    relativistic: bool


@dataclass(frozen=True)
class CoherenceBudget:
    """Competing coherence times and the loss rate they imply.

    ``channels`` holds every candidate time.  ``memory_channels`` are the ones
    whose rates add up to the loss: the faster of the two coherences (emitted
    particle in the volume vs. emitter memory) is adiabatically eliminated and
    the survivor's decay is the loss rate.  ``regime`` records which survived:
    "superradiance" when the particle escapes first, "amplification" when the
    emitter memory dies first.
    """

    channels: MappingProxyType          # name -> time (s)
    memory_channels: tuple
    dominant: str
    loss_rate: float                    # 1/s, after the spontaneous-rate floor
    regime: str
    floor_applied: bool

    def time(self, name):
        return self.channels[name]


@dataclass(frozen=True)
class ThermalEnsemble:
    """Heavy-atom stand-in with the condensate's velocity spread.

    Scaling the mass up at fixed velocity spread shrinks the de Broglie length
    until the gas stops being quantum degenerate, while leaving every quantity
    that controls emission (density, Doppler width) untouched.
    """

    mass: float                 # kg
    velocity_spread: float      # m/s
    de_broglie_length: float    # m
    condensed: bool


def photon_wavelength(energy, constants: PhysicalConstants = CODATA2018):
    """Wavelength h c / E of a photon (or ultrarelativistic particle) of energy E."""
    if not energy > 0.0:
        raise DomainError("energy must be positive")
    return constants.hc / energy


def wavenumber(energy, constants: PhysicalConstants = CODATA2018):
    """Angular wavenumber k = E/(hbar c)."""
    if not energy > 0.0:
        raise DomainError("energy must be positive")
    return energy / (constants.hbar * constants.c)


def recoil_speed(energy, mass, constants: PhysicalConstants = CODATA2018):
    """Nonrelativistic daughter speed E/(m c) from emitting energy E."""
    if energy < 0.0:
        raise DomainError("energy must be non-negative")
    if not mass > 0.0:
        raise DomainError("mass must be positive")
    return energy / (mass * constants.c)


def recoil_velocity(channel: EmissionChannel,
                    constants: PhysicalConstants = CODATA2018) -> Recoil:
    """Recoil of the daughter atom for a channel.

    Pair annihilation leaves no recoiling daughter; the emitted pair inherits
    the source momentum spread instead (see annihilation_momentum_spread), so
    the recoil speed is zero there.
    """
    if channel.particle_kind == "annihilation_pair":
        return Recoil(0.0, False)
    v = recoil_speed(channel.energy, channel.parent_mass, constants)
    return Recoil(v, v > RELATIVISTIC_FRACTION * constants.c)


def coherent_solid_angle(wavelength, diameter):
    """End-fire coherent solid angle (lambda/d)^2, no extra angular factors."""
    if not (wavelength > 0.0 and diameter > 0.0):
        raise DomainError("wavelength and diameter must be positive")
    return (wavelength / diameter) ** 2


def side_mode_solid_angle(wavelength, diameter, length):
    """Side-mode coherent solid angle lambda^2/(d l) of an elongated sample."""
    if not (wavelength > 0.0 and diameter > 0.0 and length > 0.0):
        raise DomainError("wavelength, diameter and length must be positive")
    return wavelength**2 / (diameter * length)


def mode_count(diameter, wavelength):
    """Number of transverse emission modes d^2/lambda^2 a sample radiates into.

    Returned as a real number; below d = lambda the sample is in the
    single-mode regime and the count is 1.
    """
    if not (wavelength > 0.0 and diameter > 0.0):
        raise DomainError("wavelength and diameter must be positive")
    if diameter < wavelength:
        return 1.0
    return (diameter / wavelength) ** 2


def partial_wave_count(diameter, wavelength):
    """Spherical-sample cross-check: sum of 2l+1 up to l_max = floor(d/lambda)."""
    if not (wavelength > 0.0 and diameter > 0.0):
        raise DomainError("wavelength and diameter must be positive")
    l_max = math.floor(diameter / wavelength)
    return float(l_max + 1) ** 2


def optical_density(density, wavelength, length):
    """n lambda^2 l, the multi-mode amplification threshold quantity."""
    if not (density > 0.0 and wavelength > 0.0 and length > 0.0):
        raise DomainError("density, wavelength and length must be positive")
    return density * wavelength**2 * length


def doppler_angular_width(energy, velocity_spread,
                          constants: PhysicalConstants = CODATA2018):
    """Doppler broadening k * dv (rad/s) of emission at energy E from a moving source."""
    if velocity_spread < 0.0:
        raise DomainError("velocity_spread must be non-negative")
    return wavenumber(energy, constants) * velocity_spread


def condensate_velocity_spread(mass, length,
                               constants: PhysicalConstants = CODATA2018):
    """Velocity spread hbar/(m l) implied by confining mass m to length l."""
    if not (mass > 0.0 and length > 0.0):
        raise DomainError("mass and length must be positive")
    return constants.hbar / (mass * length)


def hydrogenic_cascade_lifetime(z):
    """Inner-shell refill lifetime estimate: 1.6 ns * Z^-4 from the hydrogen anchor."""
    if not z >= 1:
        raise DomainError("nuclear charge must be >= 1")
    return HYDROGEN_2P_LIFETIME * float(z) ** -4


def annihilation_momentum_spread(source_momentum_spread):
    """Photon momentum spread for pair emission: half the source's spread."""
    if source_momentum_spread < 0.0:
        raise DomainError("momentum spread must be non-negative")
    return source_momentum_spread / 2.0


def coherence_budget(channel: EmissionChannel, geometry: SampleGeometry,
                     velocity_spread=None, *, mode="auto", explicit_time=None,
                     gamma_floor=True,
                     constants: PhysicalConstants = CODATA2018) -> CoherenceBudget:
    """Assemble the coherence-time candidates and the loss rate they imply.

    Candidates:
      photon_transit   l/c, how long the emitted particle stays in the sample
      recoil_transit   l/v_recoil, condensate overlap loss (equals the inverse
                       Doppler width for the condensate spread hbar/(m l))
      doppler          1/(k dv) when an explicit velocity spread is given
      cascade          secondary decay of the daughter state, when present

    The emitter-memory channels (overlap/Doppler plus cascade) add as rates.
    Whichever coherence decays faster -- emitter memory or in-volume particle
    -- is adiabatically eliminated; the survivor's rate is the loss L, floored
    at the spontaneous rate (``mode`` narrows the emitter-memory channels:
    "recoil" drops the cascade, "cascade" keeps only it, "photon" forces the
    particle-transit channel, "explicit" uses ``explicit_time`` directly).
    """
    length = geometry.length
    channels = {"photon_transit": length / constants.c}

    if mode == "explicit":
        if explicit_time is None or not explicit_time > 0.0:
            raise DomainError("explicit coherence mode requires a positive time")
        channels["explicit"] = explicit_time
        return _finish_budget(channel, channels, ("explicit",), "explicit",
                              gamma_floor)

    # Overlap loss between emitter and decay products.
    overlap_name = None
    if velocity_spread is not None:
        if not velocity_spread > 0.0:
            raise DomainError("velocity_spread must be positive")
        channels["doppler"] = 1.0 / doppler_angular_width(
            channel.energy, velocity_spread, constants)
        overlap_name = "doppler"
    else:
        recoil = recoil_velocity(channel, constants)
        if recoil.speed > 0.0:
            channels["recoil_transit"] = length / recoil.speed
            overlap_name = "recoil_transit"
        else:
            # No recoiling daughter: the condensate momentum width sets the
            # Doppler channel instead.
            dv = condensate_velocity_spread(channel.parent_mass, length, constants)
            channels["doppler"] = 1.0 / doppler_angular_width(
                channel.energy, dv, constants)
            overlap_name = "doppler"

    if channel.daughter_lifetime is not None:
        channels["cascade"] = channel.daughter_lifetime

    if mode == "auto":
        memory = [overlap_name]
        if "cascade" in channels:
            memory.append("cascade")
    elif mode == "recoil":
        memory = [overlap_name]
    elif mode == "cascade":
        if "cascade" not in channels:
            raise DomainError("cascade coherence mode requires a daughter_lifetime")
        memory = ["cascade"]
    elif mode == "photon":
        memory = ["photon_transit"]
    else:
        raise DomainError(f"unknown coherence mode {mode!r}")

    if mode != "photon":
        # Adiabatic elimination: the faster-decaying coherence is removed and
        # the slower one carries the stimulation memory.
        memory_rate = sum(1.0 / channels[name] for name in memory)
        photon_rate = 1.0 / channels["photon_transit"]
        if photon_rate < memory_rate:
            memory = ["photon_transit"]

    regime = "amplification" if memory == ["photon_transit"] else "superradiance"
    return _finish_budget(channel, channels, tuple(memory), regime, gamma_floor)


def _finish_budget(channel, channels, memory, regime, gamma_floor):
    loss = sum(1.0 / channels[name] for name in memory)
    floored = False
    if gamma_floor and loss < channel.natural_rate:
        loss = channel.natural_rate
        floored = True
    dominant = min(memory, key=lambda name: channels[name])
    return CoherenceBudget(
        channels=MappingProxyType(dict(channels)),
        memory_channels=memory,
        dominant=dominant,
        loss_rate=loss,
        regime=regime,
        floor_applied=floored,
    )


def equivalent_thermal_ensemble(geometry: SampleGeometry, channel: EmissionChannel,
                                mass_ratio,
                                constants: PhysicalConstants = CODATA2018
                                ) -> ThermalEnsemble:
    """Heavy-atom thermal ensemble with the condensate's velocity spread.

    The stand-in keeps density and Doppler width fixed, so its coherence time
    and gain match the condensate's exactly; only quantum degeneracy is lost
    once the de Broglie length drops below the interatomic spacing.
    """
    if not mass_ratio >= 1.0:
        raise DomainError("mass_ratio must be >= 1")
    dv = condensate_velocity_spread(channel.parent_mass, geometry.length, constants)
    de_broglie = geometry.length / mass_ratio
    condensed = de_broglie > geometry.density ** (-1.0 / 3.0)
    return ThermalEnsemble(
        mass=channel.parent_mass * mass_ratio,
        velocity_spread=dv,
        de_broglie_length=de_broglie,
        condensed=condensed,
    )
