"""Physical constants (CODATA 2018) and a few derived combinations.

All values are SI.  The set is frozen at build time; reports echo the values
actually used so numbers stay reproducible if CODATA is ever bumped.
"""

import math
from dataclasses import dataclass, field, fields


@dataclass(frozen=True)
class PhysicalConstants:
    c: float = 299792458.0                     # m/s, exact
    h: float = 6.62607015e-34                  # J s, exact
    atomic_mass_unit: float = 1.66053906660e-27  # kg
    electron_volt: float = 1.602176634e-19     # J, exact
    electron_mass: float = 9.1093837015e-31    # kg
    hbar: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "hbar", self.h / (2.0 * math.pi))

    @property
    def hc(self) -> float:
        """h*c in J m."""
        return self.h * self.c

    @property
    def compton_wavelength(self) -> float:
        """Electron Compton wavelength h/(m_e c), the 511 keV photon wavelength."""
        return self.h / (self.electron_mass * self.c)

    @property
    def electron_rest_energy(self) -> float:
        """m_e c^2 in J."""
        return self.electron_mass * self.c**2

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


CODATA2018 = PhysicalConstants()
