"""System specifications for the exact open-system dynamics.

A ``LindbladSystem`` is a declarative description: truncated bosonic modes, a
coupling Hamiltonian, loss jumps, and an initial pure state.  Builders cover
the collective-emission model systems (parent/daughter/photon) and the
randomized systems used to stress the single-body-loss theorem.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import DomainError, SizingError

COUPLING_KINDS = ("bilinear", "trilinear", "number")
COUPLING_ARITY = {"bilinear": 2, "trilinear": 3, "number": 1}
INITIAL_KINDS = ("fock", "coherent", "vector", "random_sector")

DEFAULT_DIMENSION_CAP = 4096


@dataclass(frozen=True)
class Mode:
    name: str
    truncation: int

    def __post_init__(self):
        if not self.name:
            raise DomainError("mode name must be non-empty")
        if int(self.truncation) < 2:
            raise DomainError(f"mode {self.name!r}: truncation must be >= 2")


@dataclass(frozen=True)
class Coupling:
    kind: str
    strength: complex
    modes: tuple

    def __post_init__(self):
        if self.kind not in COUPLING_KINDS:
            raise DomainError(f"unknown coupling kind {self.kind!r}")
        if len(self.modes) != COUPLING_ARITY[self.kind]:
            raise DomainError(
                f"{self.kind} coupling takes {COUPLING_ARITY[self.kind]} modes, "
                f"got {len(self.modes)}")
        if len(set(self.modes)) != len(self.modes):
            raise DomainError(f"{self.kind} coupling modes must be distinct")
        s = complex(self.strength)
        if not (math.isfinite(s.real) and math.isfinite(s.imag)):
            raise DomainError("coupling strength must be finite")
        if self.kind == "number" and s.imag != 0.0:
            raise DomainError("number coupling strength must be real")


@dataclass(frozen=True)
class Jump:
    mode: str
    rate: float
    kind: str = "loss"

    def __post_init__(self):
        if self.kind != "loss":
            raise DomainError(f"unsupported jump kind {self.kind!r}")
        if not (math.isfinite(self.rate) and self.rate >= 0.0):
            raise DomainError("jump rate must be finite and non-negative")


@dataclass(frozen=True)
class InitialState:
    kind: str
    occupations: dict | None = None   # fock
    amplitudes: dict | None = None    # coherent
    vector: tuple | None = None       # explicit, full product basis
    total: int | None = None          # random_sector
    seed: int | None = None           # random_sector

    def __post_init__(self):
        if self.kind not in INITIAL_KINDS:
            raise DomainError(f"unknown initial state kind {self.kind!r}")
        if self.kind == "fock" and self.occupations is None:
            raise DomainError("fock state needs occupations")
        if self.kind == "coherent" and self.amplitudes is None:
            raise DomainError("coherent state needs amplitudes")
        if self.kind == "vector" and self.vector is None:
            raise DomainError("vector state needs the vector")
        if self.kind == "random_sector" and (self.total is None or self.total < 0):
            raise DomainError("random_sector state needs a non-negative total")


@dataclass(frozen=True)
class LindbladSystem:
    modes: tuple
    hamiltonian: tuple = ()
    jumps: tuple = ()
    initial_state: InitialState = field(
        default_factory=lambda: InitialState("fock", occupations={}))

    def __post_init__(self):
        names = [m.name for m in self.modes]
        if not names:
            raise DomainError("a system needs at least one mode")
        if len(set(names)) != len(names):
            raise DomainError("mode names must be unique")
        known = set(names)
        for coupling in self.hamiltonian:
            for name in coupling.modes:
                if name not in known:
                    raise DomainError(f"coupling refers to unknown mode {name!r}")
        for jump in self.jumps:
            if jump.mode not in known:
                raise DomainError(f"jump refers to unknown mode {jump.mode!r}")
        for key in (self.initial_state.occupations,
                    self.initial_state.amplitudes):
            if key:
                for name in key:
                    if name not in known:
                        raise DomainError(
                            f"initial state refers to unknown mode {name!r}")

    @property
    def dimension(self):
        return int(np.prod([m.truncation for m in self.modes]))

    @property
    def truncations(self):
        return tuple(m.truncation for m in self.modes)

    def mode_index(self):
        return {m.name: i for i, m in enumerate(self.modes)}

    def with_truncation_increase(self, extra=2):
        modes = tuple(Mode(m.name, m.truncation + extra) for m in self.modes)
        return LindbladSystem(modes, self.hamiltonian, self.jumps,
                              self.initial_state)


def dicke_system(n_atoms, coupling, form="trilinear", photon_loss=0.0,
                 atom_decoherence=0.0,
                 dimension_cap=DEFAULT_DIMENSION_CAP) -> LindbladSystem:
    """Collective-emission model system in the symmetric (bosonic) sector.

    trilinear: parent -> recoiling daughter + photon, H = chi(a b+ c+ + h.c.)
    bilinear:  parent -> photon directly,            H = chi(c+ a  + h.c.)

    Photon loss drains the photon mode at ``photon_loss``; daughter
    decoherence is modeled as loss on the daughter mode.
    """
    n_atoms = int(n_atoms)
    if n_atoms < 1:
        raise DomainError("n_atoms must be >= 1")
    if not coupling > 0.0:
        raise DomainError("coupling must be positive")
    if photon_loss < 0.0 or atom_decoherence < 0.0:
        raise DomainError("loss rates must be non-negative")
    trunc = n_atoms + 1
    if form == "trilinear":
        modes = (Mode("parent", trunc), Mode("daughter", trunc),
                 Mode("photon", trunc))
        couplings = (Coupling("trilinear", coupling,
                              ("parent", "daughter", "photon")),)
    elif form == "bilinear":
        modes = (Mode("parent", trunc), Mode("photon", trunc))
        couplings = (Coupling("bilinear", coupling, ("photon", "parent")),)
    else:
        raise DomainError(f"unknown form {form!r}; expected trilinear or bilinear")

    dim = int(np.prod([m.truncation for m in modes]))
    if dim > dimension_cap:
        raise SizingError(
            f"Hilbert dimension {dim} = product of truncations "
            f"{tuple(m.truncation for m in modes)} exceeds cap {dimension_cap}")

    jumps = []
    if photon_loss > 0.0:
        jumps.append(Jump("photon", photon_loss))
    if atom_decoherence > 0.0 and form == "trilinear":
        jumps.append(Jump("daughter", atom_decoherence))
    initial = InitialState("fock", occupations={"parent": n_atoms})
    return LindbladSystem(modes, couplings, tuple(jumps), initial)


def add_spectator_mode(system: LindbladSystem, occupation=0, truncation=None,
                       name="spectator") -> LindbladSystem:
    """Append an uncoupled, lossless mode preloaded with ``occupation`` quanta.

    The spectator shares no overlap with anything else, so parent dynamics
    must be bit-for-bit indifferent to its occupation.
    """
    if truncation is None:
        truncation = max(2, occupation + 1)
    modes = system.modes + (Mode(name, truncation),)
    state = system.initial_state
    if state.kind != "fock":
        raise DomainError("spectator preload is defined for fock initial states")
    occupations = dict(state.occupations or {})
    if occupation:
        occupations[name] = occupation
    return LindbladSystem(modes, system.hamiltonian, system.jumps,
                          InitialState("fock", occupations=occupations))


def random_conserving_system(rng, n_modes=None, n_atoms=None, gamma=1.0,
                             state_kind=None, coherent_dimension_cap=300
                             ) -> LindbladSystem:
    """Random number-conserving system with uniform loss on every mode.

    Hopping strengths and detunings are drawn at order ``gamma`` so the
    integration over a few lifetimes stays cheap.  Coherent initial states are
    only drawn while the product dimension stays below
    ``coherent_dimension_cap`` (they forbid the exact sector restriction).
    """
    if n_modes is None:
        n_modes = int(rng.integers(2, 5))
    if n_atoms is None:
        n_atoms = int(rng.integers(2, 5))
    names = [f"m{i}" for i in range(n_modes)]
    trunc = n_atoms + 1
    modes = tuple(Mode(name, trunc) for name in names)

    couplings = []
    pairs = [(i, j) for i in range(n_modes) for j in range(i + 1, n_modes)]
    for i, j in pairs:
        if rng.random() < 0.7:
            strength = (rng.uniform(0.1, 0.6) * gamma_scale(gamma)
                        * np.exp(2j * math.pi * rng.random()))
            couplings.append(Coupling("bilinear", strength, (names[i], names[j])))
    if not couplings:
        i, j = pairs[0]
        couplings.append(Coupling("bilinear",
                                  0.4 * gamma_scale(gamma), (names[i], names[j])))
    for name in names:
        if rng.random() < 0.5:
            couplings.append(Coupling(
                "number", rng.uniform(-0.5, 0.5) * gamma_scale(gamma), (name,)))

    jumps = tuple(Jump(name, gamma) for name in names)

    kinds = ["fock", "coherent", "random_sector"]
    if state_kind is None:
        state_kind = kinds[int(rng.integers(0, 3))]
    if state_kind == "coherent" and trunc**n_modes > coherent_dimension_cap:
        state_kind = "fock" if rng.random() < 0.5 else "random_sector"

    if state_kind == "fock":
        occ = _random_composition(rng, n_atoms, n_modes, trunc - 1)
        initial = InitialState("fock",
                               occupations=dict(zip(names, occ)))
    elif state_kind == "coherent":
        weights = rng.dirichlet(np.ones(n_modes))
        amplitudes = {
            name: math.sqrt(n_atoms * w) * np.exp(2j * math.pi * rng.random())
            for name, w in zip(names, weights)}
        initial = InitialState("coherent", amplitudes=amplitudes)
    else:
        initial = InitialState("random_sector", total=n_atoms,
                               seed=int(rng.integers(0, 2**31)))
    return LindbladSystem(modes, tuple(couplings), jumps, initial)


def random_small_system(rng, conserving=False) -> LindbladSystem:
    """Small random system (dimension <= ~36) for oracle comparisons.

    Mixes bilinear, number and (unless ``conserving``) trilinear couplings,
    non-uniform loss rates, and all initial-state kinds.
    """
    n_modes = int(rng.integers(2, 4))
    truncs = [int(rng.integers(2, 4)) for _ in range(n_modes)]
    names = [f"m{i}" for i in range(n_modes)]
    modes = tuple(Mode(n, t) for n, t in zip(names, truncs))

    couplings = []
    for i in range(n_modes):
        for j in range(i + 1, n_modes):
            if rng.random() < 0.8:
                strength = rng.uniform(0.2, 1.0) * np.exp(2j * math.pi * rng.random())
                couplings.append(Coupling("bilinear", strength,
                                          (names[i], names[j])))
        if rng.random() < 0.5:
            couplings.append(Coupling("number", rng.uniform(-1.0, 1.0),
                                      (names[i],)))
    if not conserving and n_modes >= 3 and rng.random() < 0.6:
        order = rng.permutation(n_modes)[:3]
        couplings.append(Coupling(
            "trilinear",
            rng.uniform(0.2, 0.8) * np.exp(2j * math.pi * rng.random()),
            tuple(names[k] for k in order)))

    jumps = tuple(Jump(name, float(rng.uniform(0.2, 1.5)))
                  for name in names if rng.random() < 0.8)

    roll = rng.random()
    max_occ = min(t - 1 for t in truncs)
    if roll < 0.4:
        occ = {name: int(rng.integers(0, t)) for name, t in zip(names, truncs)}
        initial = InitialState("fock", occupations=occ)
    elif roll < 0.7:
        amplitudes = {
            name: rng.uniform(0.2, 0.8) * np.exp(2j * math.pi * rng.random())
            for name in names}
        initial = InitialState("coherent", amplitudes=amplitudes)
    else:
        initial = InitialState("random_sector", total=int(rng.integers(1, max_occ + 1)),
                               seed=int(rng.integers(0, 2**31)))
    return LindbladSystem(modes, tuple(couplings), jumps, initial)


def gamma_scale(gamma):
    """Scale for coupling strengths: comparable to the loss, never zero."""
    return gamma if gamma > 0.0 else 1.0


def _random_composition(rng, total, bins, max_per_bin):
    while True:
        cuts = rng.multinomial(total, np.ones(bins) / bins)
        if cuts.max() <= max_per_bin:
            return [int(c) for c in cuts]
