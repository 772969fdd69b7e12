"""Boundary conversion between suffixed quantity strings and SI floats.

Scenario documents carry values like ``"0.85 MeV"`` or ``"3 um"``; everything
internal is SI.  Bare numbers are rejected for dimensioned quantities because
a dropped unit is the most likely authoring mistake in this domain.
"""

import re

from .constants import CODATA2018
from .errors import ScenarioError

_EV = CODATA2018.electron_volt
_U = CODATA2018.atomic_mass_unit

UNIT_TABLES = {
    "energy": {
        "J": 1.0,
        "eV": _EV,
        "keV": 1e3 * _EV,
        "MeV": 1e6 * _EV,
    },
    "length": {
        "m": 1.0,
        "cm": 1e-2,
        "mm": 1e-3,
        "um": 1e-6,
        "µm": 1e-6,
        "nm": 1e-9,
        "pm": 1e-12,
        "fm": 1e-15,
    },
    "time": {
        "s": 1.0,
        "ms": 1e-3,
        "us": 1e-6,
        "µs": 1e-6,
        "ns": 1e-9,
        "ps": 1e-12,
        "fs": 1e-15,
        "min": 60.0,
        "h": 3600.0,
        "d": 86400.0,
    },
    "mass": {
        "kg": 1.0,
        "g": 1e-3,
        "u": _U,
    },
    "speed": {
        "m/s": 1.0,
        "cm/s": 1e-2,
        "mm/s": 1e-3,
        "km/s": 1e3,
    },
    "density": {
        "/m^3": 1.0,
        "m^-3": 1.0,
        "/cm^3": 1e6,
        "cm^-3": 1e6,
    },
    "rate": {
        "/s": 1.0,
        "1/s": 1.0,
        "Hz": 1.0,
    },
    "area": {
        "m^2": 1.0,
        "cm^2": 1e-4,
        "barn": 1e-28,
    },
}

SI_SUFFIX = {
    "energy": "J",
    "length": "m",
    "time": "s",
    "mass": "kg",
    "speed": "m/s",
    "density": "/m^3",
    "rate": "/s",
    "area": "m^2",
}

_QUANTITY_RE = re.compile(r"^\s*([+-]?[0-9.][0-9.eE+-]*)\s*(\S.*?)\s*$")


def parse_quantity(text, kind, field=""):
    """Parse ``"<number> <unit>"`` into an SI float.

    Raises ScenarioError naming the field when the unit suffix is missing,
    unknown for the given kind, or the number does not parse.
    """
    table = UNIT_TABLES[kind]
    where = f" for {field!r}" if field else ""
    if isinstance(text, (int, float)):
        raise ScenarioError(
            f"bare number{where}: a {kind} requires a unit suffix "
            f"(one of {', '.join(sorted(table))})"
        )
    m = _QUANTITY_RE.match(str(text))
    if m is None:
        raise ScenarioError(f"cannot parse {text!r} as a {kind}{where}")
    number, suffix = m.groups()
    try:
        value = float(number)
    except ValueError:
        raise ScenarioError(f"bad number {number!r} in {text!r}{where}") from None
    if suffix not in table:
        raise ScenarioError(
            f"unknown {kind} unit {suffix!r}{where}; "
            f"expected one of {', '.join(sorted(table))}"
        )
    return value * table[suffix]


def parse_count(value, field=""):
    """Counts are dimensionless; accept numbers or numeric strings like '1e6'."""
    where = f" for {field!r}" if field else ""
    if isinstance(value, bool):
        raise ScenarioError(f"bad count {value!r}{where}")
    if isinstance(value, (int, float)):
        return float(value)
    try:
        return float(str(value).strip())
    except ValueError:
        raise ScenarioError(f"cannot parse {value!r} as a count{where}") from None


def format_quantity(value, kind):
    """Full-precision SI form that round-trips exactly through parse_quantity."""
    return f"{value:.17e} {SI_SUFFIX[kind]}"
