"""Deterministic master-equation integration and the decay-theorem check.

``evolve`` integrates d(rho)/dt = -i[H,rho] + sum_i (L_i rho L_i+ -
{L_i+ L_i, rho}/2) with adaptive step control on the full (or exactly
sector-restricted) truncated Fock space, sampling observables on an even
grid and enforcing trace, Hermiticity and positivity along the way.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from ..errors import (DomainError, IntegrationError, PreconditionError,
                      RegimeError, SizingError)
from . import fock
from .fock import StateSpace
from .kernels import RhsOperator
from .system import DEFAULT_DIMENSION_CAP, LindbladSystem

TRACE_TOLERANCE = 1e-8          # per unit of max(gamma) * t
POSITIVITY_TOLERANCE = 1e-8
HERMITICITY_TOLERANCE = 1e-8
# Full positivity scans get expensive for big spaces; check a subset there.
POSITIVITY_FULL_SCAN_DIM = 320


@dataclass
class ObservableTrajectory:
    """Sampled expectation values along one evolution."""

    times: np.ndarray
    values: dict                 # observable name -> ndarray
    checks: dict                 # conservation-check headroom actually seen
    backend: str = ""
    restricted: bool = False
    truncation_flag: str = ""    # set by adequacy checks

    def value(self, name):
        return self.values[name]


def _resolve_observables(system, names):
    known = {m.name for m in system.modes}
    resolved = []
    for name in names:
        if name in ("total_number", "coherence"):
            resolved.append(name)
        elif name == "occupation:*":
            resolved.extend(f"occupation:{m.name}" for m in system.modes)
        elif name.startswith("occupation:"):
            mode = name.split(":", 1)[1]
            if mode not in known:
                raise DomainError(f"unknown mode in observable {name!r}")
            resolved.append(name)
        else:
            raise DomainError(
                f"unknown observable {name!r}; expected total_number, "
                f"coherence, or occupation:<mode>")
    return resolved


def _build_space(system: LindbladSystem, dimension_cap, allow_restriction):
    full_dim = system.dimension
    if full_dim > dimension_cap:
        raise SizingError(
            f"Hilbert dimension {full_dim} = product of truncations "
            f"{system.truncations} exceeds cap {dimension_cap}")
    restricted = False
    cap = None
    if (allow_restriction
            and fock.conserves_total_number(system.hamiltonian)
            and all(j.kind == "loss" for j in system.jumps)):
        support = fock.initial_support_total(
            system.initial_state, system.truncations, system.mode_index())
        max_total = sum(t - 1 for t in system.truncations)
        if support is not None and support < max_total:
            cap = support
            restricted = True
    space = StateSpace(system.truncations, total_cap=cap)
    return space, restricted


def _prepare(system, space, backend):
    mode_index = system.mode_index()
    h = fock.build_hamiltonian(space, system.hamiltonian, mode_index)
    fock.check_hermitian(h)
    jump_terms = []
    for jump in system.jumps:
        if jump.rate == 0.0:
            continue
        targets, weights = space.annihilation_map(mode_index[jump.mode])
        jump_terms.append((jump.rate, targets, weights))
    return RhsOperator(h, jump_terms, backend=backend)


def _observable_row(name, rho, space, mode_index):
    if name == "total_number":
        return float(np.real(np.sum(space.total_number_diag()
                                    * np.real(np.diag(rho)))))
    if name == "coherence":
        mags = np.abs(rho)
        return float(mags.sum() - np.trace(mags))
    mode = name.split(":", 1)[1]
    diag = space.occupation_diag(mode_index[mode])
    return float(np.sum(diag * np.real(np.diag(rho))))


def evolve(system: LindbladSystem, horizon, observables=("total_number",), *,
           rtol=1e-9, atol=1e-12, samples=96, method="DOP853",
           dimension_cap=DEFAULT_DIMENSION_CAP, backend=None, validate=True,
           allow_restriction=True) -> ObservableTrajectory:
    """Integrate the master equation and sample the requested observables."""
    if not horizon > 0.0:
        raise DomainError("horizon must be positive")
    names = _resolve_observables(system, observables)
    space, restricted = _build_space(system, dimension_cap, allow_restriction)
    mode_index = system.mode_index()
    op = _prepare(system, space, backend)

    psi0 = fock.initial_vector(space, system.initial_state, mode_index)
    rho0 = np.outer(psi0, psi0.conj())
    dim = space.dimension

    def rhs(t, y):
        rho = y.view(complex).reshape(dim, dim)
        return op(rho).view(float).ravel()

    times = np.linspace(0.0, horizon, samples)
    sol = solve_ivp(rhs, (0.0, horizon),
                    rho0.view(float).ravel().copy(),
                    method=method, rtol=rtol, atol=atol, t_eval=times)
    if not sol.success:
        raise IntegrationError(f"master-equation integration failed: {sol.message}")

    max_gamma = max((j.rate for j in system.jumps), default=0.0)
    values = {name: np.empty(samples) for name in names}
    trace_dev = herm_dev = 0.0
    min_eig = np.inf
    if dim <= POSITIVITY_FULL_SCAN_DIM:
        eig_samples = set(range(samples))
    else:
        eig_samples = set(np.linspace(0, samples - 1, 10, dtype=int).tolist())

    for i in range(samples):
        rho = np.ascontiguousarray(sol.y[:, i]).view(complex).reshape(dim, dim)
        t = times[i]
        dev = abs(float(np.real(np.trace(rho))) - 1.0)
        budgeted = TRACE_TOLERANCE * (1.0 + max_gamma * t)
        if validate and dev > budgeted:
            raise IntegrationError(
                f"trace drifted by {dev:g} at t = {t:g} (allowed {budgeted:g})")
        trace_dev = max(trace_dev, dev)

        hdev = float(np.abs(rho - rho.conj().T).max())
        if validate and hdev > HERMITICITY_TOLERANCE:
            raise IntegrationError(
                f"density matrix lost Hermiticity: max dev {hdev:g} at t = {t:g}")
        herm_dev = max(herm_dev, hdev)

        if i in eig_samples:
            lo = float(np.linalg.eigvalsh(rho)[0])
            if validate and lo < -POSITIVITY_TOLERANCE:
                raise IntegrationError(
                    f"density matrix went negative: min eigenvalue {lo:g} "
                    f"at t = {t:g}")
            min_eig = min(min_eig, lo)

        for name in names:
            values[name][i] = _observable_row(name, rho, space, mode_index)

    checks = {"trace_max_dev": trace_dev, "hermiticity_max_dev": herm_dev,
              "min_eigenvalue": (None if min_eig is np.inf else min_eig)}
    return ObservableTrajectory(times=times, values=values, checks=checks,
                                backend=op.backend, restricted=restricted)


def verify_exponential_decay(system: LindbladSystem, horizon=None, *,
                             rtol=1e-9, atol=1e-12, samples=64,
                             backend=None,
                             dimension_cap=DEFAULT_DIMENSION_CAP) -> float:
    """Max relative deviation of <N(t)> from N(0) e^{-gamma t}.

    Preconditions are machine-checked and named when violated: one loss jump
    per mode with a single uniform rate, and a Hamiltonian that commutes with
    the total number operator.
    """
    mode_names = [m.name for m in system.modes]
    jump_by_mode = {}
    for jump in system.jumps:
        if jump.mode in jump_by_mode:
            raise PreconditionError(
                f"uniform-loss check needs one jump per mode; mode "
                f"{jump.mode!r} has several")
        jump_by_mode[jump.mode] = jump.rate
    missing = [n for n in mode_names if n not in jump_by_mode]
    if missing:
        raise PreconditionError(
            f"uniform-loss check needs a loss jump on every mode; missing "
            f"{missing}")
    rates = [jump_by_mode[n] for n in mode_names]
    gamma = rates[0]
    spread = max(rates) - min(rates)
    if spread > 1e-12 * max(abs(gamma), 1e-300):
        raise PreconditionError(
            f"jump rates are not uniform: range [{min(rates):g}, {max(rates):g}]")

    space, _ = _build_space(system, dimension_cap, allow_restriction=True)
    h = fock.build_hamiltonian(space, system.hamiltonian, system.mode_index())
    ok, rel = fock.commutes_with_total_number(h, space.total_number_diag())
    if not ok:
        raise PreconditionError(
            f"Hamiltonian does not conserve the total number: relative "
            f"commutator norm {rel:g} exceeds 1e-10")

    if horizon is None:
        horizon = 5.0 / gamma if gamma > 0.0 else 1.0
    traj = evolve(system, horizon, ("total_number",), rtol=rtol, atol=atol,
                  samples=samples, backend=backend,
                  dimension_cap=dimension_cap)
    n = traj.values["total_number"]
    n0 = n[0]
    expected = n0 * np.exp(-gamma * traj.times)
    scale = max(abs(n0), 1e-300)
    return float(np.max(np.abs(n - expected)) / scale)


@dataclass(frozen=True)
class AdiabaticRates:
    """Effective rate model after eliminating a fast-decaying photon mode."""

    gamma_eff: float    # per-emitter emission rate 4 chi^2 / kappa
    gain_rate: float    # N * gamma_eff into the single retained mode
    loss_rate: float    # memory loss of the retained mode


def adiabatic_rate_model(coupling, photon_loss, n_atoms,
                         daughter_loss=0.0) -> AdiabaticRates:
    """Bad-cavity reduction of the emission model to (G, L) rates.

    Valid once the photon leaves much faster than collective emission builds
    up; the conventional boundary kappa >= 10 chi sqrt(N) is enforced and the
    4 chi^2/kappa coefficient is cross-validated numerically in the tests.
    """
    if coupling < 0.0 or daughter_loss < 0.0:
        raise DomainError("rates must be non-negative")
    if not photon_loss > 0.0:
        raise DomainError("photon_loss must be positive")
    if n_atoms < 1:
        raise DomainError("n_atoms must be >= 1")
    if photon_loss < 10.0 * coupling * math.sqrt(n_atoms):
        raise RegimeError(
            f"adiabatic elimination needs photon_loss >= 10 chi sqrt(N) "
            f"= {10.0 * coupling * math.sqrt(n_atoms):g}, got {photon_loss:g}")
    gamma_eff = 4.0 * coupling**2 / photon_loss
    return AdiabaticRates(gamma_eff=gamma_eff,
                          gain_rate=n_atoms * gamma_eff,
                          loss_rate=daughter_loss)


def truncation_margin(system: LindbladSystem, horizon,
                      observables=("total_number",), extra=2,
                      **evolve_kwargs) -> tuple:
    """Rerun with deeper truncations and report the worst relative change.

    Returns (max_rel_change, flagged): flagged when any observable moved by
    more than 1e-7 relative, meaning the truncation was biting.
    """
    base = evolve(system, horizon, observables, **evolve_kwargs)
    deeper = evolve(system.with_truncation_increase(extra), horizon,
                    observables, **evolve_kwargs)
    worst = 0.0
    for name in base.values:
        a = base.values[name]
        b = deeper.values[name]
        scale = max(np.max(np.abs(b)), 1e-300)
        worst = max(worst, float(np.max(np.abs(a - b)) / scale))
    return worst, worst > 1e-7
