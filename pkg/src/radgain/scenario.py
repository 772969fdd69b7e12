"""Scenario documents: parsing, serialization, and the built-in set.

Scenarios are hand-authored YAML with unit-suffixed values (see
``scenarios/SCHEMA.md``).  Parsing is total: a document either yields a fully
validated ``Scenario`` or a ``ScenarioError`` naming the problem, with
line/column positions for syntax errors.
"""

import json
import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import yaml

from .errors import ScenarioError
from .gain import CoherenceSettings
from .lindblad.system import (Coupling, InitialState, Jump, LindbladSystem,
                              Mode, dicke_system)
from .physkit import EmissionChannel, SampleGeometry
from .units import format_quantity, parse_count, parse_quantity

SCHEMA_VERSION = 1

COHERENCE_MODES = ("auto", "recoil", "cascade", "photon", "explicit")


@dataclass(frozen=True)
class Scenario:
    name: str
    channel: EmissionChannel
    geometry: SampleGeometry
    coherence: CoherenceSettings = field(default_factory=CoherenceSettings)
    notes: str = ""
    provenance: str = ""


def _require_mapping(node, where):
    if not isinstance(node, dict):
        raise ScenarioError(f"{where} must be a mapping")
    return node


def _take(mapping, where, required=(), optional=()):
    allowed = set(required) | set(optional)
    unknown = sorted(set(mapping) - allowed)
    if unknown:
        raise ScenarioError(f"unknown key(s) in {where}: {', '.join(unknown)}")
    missing = sorted(k for k in required if k not in mapping)
    if missing:
        raise ScenarioError(f"missing key(s) in {where}: {', '.join(missing)}")
    return mapping


def _load_yaml(text):
    try:
        doc = yaml.safe_load(text)
    except yaml.MarkedYAMLError as exc:
        mark = exc.problem_mark
        if mark is not None:
            raise ScenarioError(
                f"parse error at line {mark.line + 1}, column "
                f"{mark.column + 1}: {exc.problem}") from exc
        raise ScenarioError(f"parse error: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ScenarioError(f"parse error: {exc}") from exc
    return _require_mapping(doc, "the document")


def _check_schema_version(doc):
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ScenarioError(
            f"schema_version must be {SCHEMA_VERSION}, got {version!r}")


def _parse_channel(node):
    node = _take(_require_mapping(node, "channel"), "channel",
                 required=("particle", "energy", "parent_mass"),
                 optional=("half_life", "lifetime", "rate",
                           "daughter_lifetime", "label"))
    clocks = [k for k in ("half_life", "lifetime", "rate") if k in node]
    # Exactly one clock, or the stored (half_life, rate) pair emitted by the
    # serializer, which is validated for ln(2) consistency downstream.
    if len(clocks) != 1 and clocks != ["half_life", "rate"]:
        raise ScenarioError(
            "channel needs exactly one of half_life, lifetime or rate")
    particle = node["particle"]
    energy = parse_quantity(node["energy"], "energy", "channel.energy")
    mass = parse_quantity(node["parent_mass"], "mass", "channel.parent_mass")
    daughter = None
    if "daughter_lifetime" in node:
        daughter = parse_quantity(node["daughter_lifetime"], "time",
                                  "channel.daughter_lifetime")
    label = str(node.get("label", ""))
    try:
        if clocks == ["half_life", "rate"]:
            return EmissionChannel(
                particle, energy,
                parse_quantity(node["rate"], "rate", "channel.rate"),
                parse_quantity(node["half_life"], "time",
                               "channel.half_life"),
                mass, daughter, label)
        if clocks[0] == "half_life":
            half_life = parse_quantity(node["half_life"], "time",
                                       "channel.half_life")
            return EmissionChannel.from_half_life(particle, energy, half_life,
                                                  mass, daughter, label)
        if clocks[0] == "lifetime":
            lifetime = parse_quantity(node["lifetime"], "time",
                                      "channel.lifetime")
            return EmissionChannel.from_lifetime(particle, energy, lifetime,
                                                 mass, daughter, label)
        rate = parse_quantity(node["rate"], "rate", "channel.rate")
        return EmissionChannel.from_rate(particle, energy, rate, mass,
                                         daughter, label)
    except ValueError as exc:
        raise ScenarioError(f"channel: {exc}") from exc


def _parse_geometry(node):
    node = _take(_require_mapping(node, "geometry"), "geometry",
                 required=("diameter", "length"),
                 optional=("atom_number", "density"))
    diameter = parse_quantity(node["diameter"], "length", "geometry.diameter")
    length = parse_quantity(node["length"], "length", "geometry.length")
    has_n = "atom_number" in node
    has_density = "density" in node
    if not (has_n or has_density):
        raise ScenarioError("geometry needs atom_number or density (or both)")
    try:
        if has_n and has_density:
            return SampleGeometry(
                diameter, length,
                parse_count(node["atom_number"], "geometry.atom_number"),
                parse_quantity(node["density"], "density", "geometry.density"))
        if has_n:
            return SampleGeometry.from_atom_number(
                diameter, length,
                parse_count(node["atom_number"], "geometry.atom_number"))
        return SampleGeometry.from_density(
            diameter, length,
            parse_quantity(node["density"], "density", "geometry.density"))
    except ValueError as exc:
        raise ScenarioError(f"geometry: {exc}") from exc


def _parse_coherence(node):
    if node is None:
        return CoherenceSettings()
    node = _take(_require_mapping(node, "coherence"), "coherence",
                 optional=("mode", "time", "velocity_spread"))
    mode = node.get("mode", "auto")
    if mode not in COHERENCE_MODES:
        raise ScenarioError(
            f"coherence.mode must be one of {', '.join(COHERENCE_MODES)}; "
            f"got {mode!r}")
    time = None
    if "time" in node:
        time = parse_quantity(node["time"], "time", "coherence.time")
    spread = None
    if "velocity_spread" in node:
        spread = parse_quantity(node["velocity_spread"], "speed",
                                "coherence.velocity_spread")
    if mode == "explicit" and time is None:
        raise ScenarioError("coherence.mode explicit requires coherence.time")
    return CoherenceSettings(mode=mode, time=time, velocity_spread=spread)


def parse_scenario(text) -> Scenario:
    doc = _load_yaml(text)
    _take(doc, "the document",
          required=("schema_version", "name", "channel", "geometry"),
          optional=("coherence", "notes", "provenance"))
    _check_schema_version(doc)
    name = doc["name"]
    if not isinstance(name, str) or not name.strip():
        raise ScenarioError("name must be a non-empty string")
    try:
        return Scenario(
            name=name.strip(),
            channel=_parse_channel(doc["channel"]),
            geometry=_parse_geometry(doc["geometry"]),
            coherence=_parse_coherence(doc.get("coherence")),
            notes=str(doc.get("notes", "")),
            provenance=str(doc.get("provenance", "")),
        )
    except ScenarioError:
        raise
    except ValueError as exc:
        raise ScenarioError(str(exc)) from exc


def serialize_scenario(scenario: Scenario) -> str:
    """Emit a document that parses back to an identical Scenario.

    Values are written in full-precision SI, so the round trip is exact.
    """
    ch = scenario.channel
    geo = scenario.geometry
    lines = [
        f"schema_version: {SCHEMA_VERSION}",
        f"name: {scenario.name}",
    ]
    if scenario.notes:
        lines.append(f"notes: {_yaml_str(scenario.notes)}")
    if scenario.provenance:
        lines.append(f"provenance: {_yaml_str(scenario.provenance)}")
    lines += [
        "channel:",
        f"  particle: {ch.particle_kind}",
        f"  energy: {format_quantity(ch.energy, 'energy')}",
        f"  half_life: {format_quantity(ch.half_life, 'time')}",
        f"  rate: {format_quantity(ch.natural_rate, 'rate')}",
        f"  parent_mass: {format_quantity(ch.parent_mass, 'mass')}",
    ]
    if ch.daughter_lifetime is not None:
        lines.append(
            f"  daughter_lifetime: {format_quantity(ch.daughter_lifetime, 'time')}")
    if ch.label:
        lines.append(f"  label: {_yaml_str(ch.label)}")
    lines += [
        "geometry:",
        f"  diameter: {format_quantity(geo.diameter, 'length')}",
        f"  length: {format_quantity(geo.length, 'length')}",
        f"  atom_number: {geo.atom_number!r}",
        f"  density: {format_quantity(geo.density, 'density')}",
    ]
    coh = scenario.coherence
    if (coh.mode, coh.time, coh.velocity_spread) != ("auto", None, None):
        lines.append("coherence:")
        lines.append(f"  mode: {coh.mode}")
        if coh.time is not None:
            lines.append(f"  time: {format_quantity(coh.time, 'time')}")
        if coh.velocity_spread is not None:
            lines.append(
                f"  velocity_spread: {format_quantity(coh.velocity_spread, 'speed')}")
    return "\n".join(lines) + "\n"


def _yaml_str(text):
    # A JSON string literal is valid single-line YAML with full escaping.
    return json.dumps(str(text))


_BUILTIN_FILES = (
    "cs135m-gamma.yaml",
    "rb83-neutrino.yaml",
    "positronium-annihilation.yaml",
    "sodium-optical.yaml",
)


def builtin_scenarios() -> list:
    """The shipped scenario set, parsed fresh from the packaged documents."""
    out = []
    base = resources.files("radgain") / "scenarios"
    for filename in _BUILTIN_FILES:
        out.append(parse_scenario((base / filename).read_text(encoding="utf-8")))
    return out


def scenario_search_dirs():
    env = os.environ.get("RADGAIN_SCENARIO_DIR", "")
    return [Path(p) for p in env.split(os.pathsep) if p]


def load_scenario(source) -> Scenario:
    """Resolve a built-in name, a file path, or a name under the scenario dir."""
    for scenario in builtin_scenarios():
        if scenario.name == source:
            return scenario
    path = Path(source)
    if path.is_file():
        return parse_scenario(path.read_text(encoding="utf-8"))
    for directory in scenario_search_dirs():
        for candidate in (directory / source, directory / f"{source}.yaml"):
            if candidate.is_file():
                return parse_scenario(candidate.read_text(encoding="utf-8"))
    names = ", ".join(s.name for s in builtin_scenarios())
    raise ScenarioError(
        f"unknown scenario {source!r}; built-ins are: {names}")


def parse_system_spec(text):
    """Parse a simulation-system document into (LindbladSystem, run options).

    Either a ``dicke`` shorthand or explicit modes/hamiltonian/jumps/initial
    sections; rates and strengths are plain numbers in a common inverse-time
    unit and times are in that same unit.
    """
    doc = _load_yaml(text)
    _take(doc, "the document",
          required=("schema_version",),
          optional=("dicke", "modes", "hamiltonian", "jumps", "initial",
                    "horizon", "samples"))
    _check_schema_version(doc)
    options = {}
    if "horizon" in doc:
        options["horizon"] = float(doc["horizon"])
    if "samples" in doc:
        options["samples"] = int(doc["samples"])

    if "dicke" in doc:
        if any(k in doc for k in ("modes", "hamiltonian", "jumps", "initial")):
            raise ScenarioError(
                "dicke shorthand and explicit sections are mutually exclusive")
        node = _take(_require_mapping(doc["dicke"], "dicke"), "dicke",
                     required=("atoms", "coupling"),
                     optional=("form", "photon_loss", "atom_decoherence"))
        try:
            system = dicke_system(
                int(node["atoms"]), float(node["coupling"]),
                form=node.get("form", "trilinear"),
                photon_loss=float(node.get("photon_loss", 0.0)),
                atom_decoherence=float(node.get("atom_decoherence", 0.0)))
        except ValueError as exc:
            raise ScenarioError(f"dicke: {exc}") from exc
        return system, options

    if "modes" not in doc:
        raise ScenarioError("system document needs modes or a dicke shorthand")
    try:
        modes = tuple(
            Mode(str(m["name"]), int(m["truncation"]))
            for m in doc["modes"])
        couplings = tuple(
            Coupling(str(c["kind"]), complex(c["strength"]),
                     tuple(str(n) for n in c["modes"]))
            for c in doc.get("hamiltonian", ()))
        jumps = tuple(
            Jump(str(j["mode"]), float(j["rate"]), str(j.get("kind", "loss")))
            for j in doc.get("jumps", ()))
        initial_node = doc.get("initial", {"kind": "fock", "occupations": {}})
        initial = InitialState(
            kind=str(initial_node["kind"]),
            occupations=initial_node.get("occupations"),
            amplitudes={k: complex(v) for k, v in
                        initial_node["amplitudes"].items()}
            if "amplitudes" in initial_node else None,
            vector=tuple(complex(v) for v in initial_node["vector"])
            if "vector" in initial_node else None,
            total=initial_node.get("total"),
            seed=initial_node.get("seed"),
        )
        system = LindbladSystem(modes, couplings, jumps, initial)
    except (KeyError, TypeError, ValueError) as exc:
        raise ScenarioError(f"bad system document: {exc}") from exc
    return system, options
