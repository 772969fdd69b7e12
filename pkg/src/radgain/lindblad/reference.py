"""Independent dense-Liouvillian oracle for the adaptive integrator.

Everything here is built from explicit Kronecker-product matrices and dense
matrix exponentials -- deliberately none of the index machinery the fast path
uses -- so agreement between the two is a real cross-check.
"""

import math

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from ..errors import DomainError, SizingError
from .evolve import ObservableTrajectory
from .system import LindbladSystem

REFERENCE_DIMENSION_CAP = 200


def _local_annihilation(truncation):
    return np.diag(np.sqrt(np.arange(1, truncation)), k=1).astype(complex)


def _mode_matrix(truncations, index, local):
    op = sp.identity(1, dtype=complex, format="csr")
    for m, t in enumerate(truncations):
        block = sp.csr_matrix(local) if m == index else sp.identity(
            t, dtype=complex, format="csr")
        op = sp.kron(op, block, format="csr")
    return op


def annihilation_matrix(truncations, index):
    return _mode_matrix(truncations, index,
                        _local_annihilation(truncations[index]))


def hamiltonian_matrix(system: LindbladSystem):
    truncs = system.truncations
    mode_index = system.mode_index()
    dim = int(np.prod(truncs))
    h = sp.csr_matrix((dim, dim), dtype=complex)
    ops = {name: annihilation_matrix(truncs, i) for name, i in mode_index.items()}
    for coupling in system.hamiltonian:
        s = complex(coupling.strength)
        if coupling.kind == "number":
            a = ops[coupling.modes[0]]
            h = h + s.real * (a.getH() @ a)
        elif coupling.kind == "bilinear":
            ai = ops[coupling.modes[0]]
            aj = ops[coupling.modes[1]]
            term = s * (ai.getH() @ aj)
            h = h + term + term.getH()
        elif coupling.kind == "trilinear":
            aa = ops[coupling.modes[0]]
            ab = ops[coupling.modes[1]]
            ac = ops[coupling.modes[2]]
            term = s * (aa @ ab.getH() @ ac.getH())
            h = h + term + term.getH()
        else:
            raise DomainError(f"unknown coupling kind {coupling.kind!r}")
    return h


def liouvillian_matrix(system: LindbladSystem):
    """Dense Liouvillian acting on the column-stacked density matrix."""
    truncs = system.truncations
    dim = int(np.prod(truncs))
    if dim > REFERENCE_DIMENSION_CAP:
        raise SizingError(
            f"reference oracle is capped at Hilbert dimension "
            f"{REFERENCE_DIMENSION_CAP}; got {dim} from truncations {truncs}")
    eye = sp.identity(dim, dtype=complex, format="csr")
    h = hamiltonian_matrix(system)
    lio = -1j * (sp.kron(eye, h) - sp.kron(h.T, eye))
    mode_index = system.mode_index()
    for jump in system.jumps:
        if jump.rate == 0.0:
            continue
        a = annihilation_matrix(truncs, mode_index[jump.mode])
        n_op = a.getH() @ a
        lio = lio + jump.rate * (
            sp.kron(a.conj(), a)
            - 0.5 * sp.kron(eye, n_op)
            - 0.5 * sp.kron(n_op.T, eye))
    return lio.toarray()


def _initial_vector_full(system: LindbladSystem):
    truncs = system.truncations
    mode_index = system.mode_index()
    dim = int(np.prod(truncs))
    state = system.initial_state
    if state.kind == "fock":
        occ = [0] * len(truncs)
        for name, k in (state.occupations or {}).items():
            occ[mode_index[name]] = int(k)
        for k, t in zip(occ, truncs):
            if not 0 <= k < t:
                raise DomainError(f"occupation {k} outside truncation {t}")
        vec = np.zeros(dim, dtype=complex)
        vec[int(np.ravel_multi_index(tuple(occ), truncs))] = 1.0
        return vec
    if state.kind == "coherent":
        per_mode = []
        for m, t in enumerate(truncs):
            alpha = 0.0j
            for name, a in (state.amplitudes or {}).items():
                if mode_index[name] == m:
                    alpha = complex(a)
            ks = np.arange(t)
            coeff = np.array([alpha**k / math.sqrt(math.factorial(k))
                              for k in ks])
            per_mode.append(coeff)
        vec = per_mode[0]
        for coeff in per_mode[1:]:
            vec = np.kron(vec, coeff)
        return vec / np.linalg.norm(vec)
    if state.kind == "vector":
        vec = np.asarray(state.vector, dtype=complex)
        if vec.shape != (dim,):
            raise DomainError("explicit vector has the wrong dimension")
        return vec / np.linalg.norm(vec)
    if state.kind == "random_sector":
        rng = np.random.default_rng(state.seed)
        totals = np.zeros(dim)
        for m in range(len(truncs)):
            n_diag = np.arange(truncs[m], dtype=float)
            totals += np.real(np.diag(
                _mode_matrix(truncs, m, np.diag(n_diag)).toarray()))
        members = np.nonzero(np.rint(totals) == int(state.total))[0]
        if members.size == 0:
            raise DomainError(f"no states with total {state.total}")
        coeffs = rng.normal(size=members.size) + 1j * rng.normal(size=members.size)
        vec = np.zeros(dim, dtype=complex)
        vec[members] = coeffs / np.linalg.norm(coeffs)
        return vec
    raise DomainError(f"unknown initial state kind {state.kind!r}")


def matrix_exponential_reference(system: LindbladSystem, horizon,
                                 observables=("total_number",), samples=40
                                 ) -> ObservableTrajectory:
    """Evolve by dense exponentiation of the Liouvillian at each sample."""
    if not horizon > 0.0:
        raise DomainError("horizon must be positive")
    truncs = system.truncations
    dim = int(np.prod(truncs))
    lio = liouvillian_matrix(system)
    psi0 = _initial_vector_full(system)
    rho0 = np.outer(psi0, psi0.conj())
    vec0 = rho0.reshape(-1, order="F")

    mode_index = system.mode_index()
    diags = {}
    for name, m in mode_index.items():
        diags[name] = np.real(np.diag(
            _mode_matrix(truncs, m,
                         np.diag(np.arange(truncs[m], dtype=float))).toarray()))
    total_diag = sum(diags.values())

    times = np.linspace(0.0, horizon, samples)
    values = {name: np.empty(samples) for name in observables}
    for i, t in enumerate(times):
        propagated = scipy.linalg.expm(lio * t) @ vec0
        rho = propagated.reshape(dim, dim, order="F")
        for name in observables:
            if name == "total_number":
                values[name][i] = float(np.real(np.sum(total_diag * np.diag(rho))))
            elif name == "coherence":
                mags = np.abs(rho)
                values[name][i] = float(mags.sum() - np.trace(mags))
            elif name.startswith("occupation:"):
                mode = name.split(":", 1)[1]
                values[name][i] = float(np.real(np.sum(diags[mode] * np.diag(rho))))
            else:
                raise DomainError(f"unknown observable {name!r}")
    return ObservableTrajectory(times=times, values=values, checks={},
                                backend="matrix-exponential", restricted=False)
