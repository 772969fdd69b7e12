"""Truncated product Fock spaces and the operators that act on them.

A ``StateSpace`` enumerates occupation tuples, optionally restricted to a
total-occupation sector.  The restriction is exact whenever every Hamiltonian
term conserves the total quantum number and all jumps are losses: the flow
never leaves the sector spanned by the initial state, so dropping the rest of
the product space changes nothing but the cost.
"""

import itertools
import math

import numpy as np
import scipy.sparse as sp

from ..errors import DomainError, PreconditionError

NUMBER_CONSERVING_KINDS = ("bilinear", "number")


class StateSpace:
    """Basis of occupation tuples for a list of mode truncations."""

    def __init__(self, truncations, total_cap=None):
        truncations = tuple(int(t) for t in truncations)
        if any(t < 2 for t in truncations):
            raise DomainError("every truncation must be >= 2")
        states = itertools.product(*(range(t) for t in truncations))
        if total_cap is not None:
            states = (s for s in states if sum(s) <= total_cap)
        basis = np.array(list(states), dtype=np.int64)
        if basis.size == 0:
            raise DomainError("state space is empty")
        self.truncations = truncations
        self.total_cap = total_cap
        self.basis = basis
        self.dimension = basis.shape[0]
        self._index = {tuple(row): i for i, row in enumerate(basis.tolist())}

    def index_of(self, occupations):
        key = tuple(int(k) for k in occupations)
        if key not in self._index:
            raise DomainError(f"occupations {key} outside the state space")
        return self._index[key]

    def occupation_diag(self, mode):
        return self.basis[:, mode].astype(float)

    def total_number_diag(self):
        return self.basis.sum(axis=1).astype(float)

    def annihilation_map(self, mode):
        """Column action of the mode annihilation operator.

        Returns (targets, weights): a|state i> = weights[i] |state targets[i]>,
        with targets[i] = -1 for states the operator annihilates.
        """
        targets = np.full(self.dimension, -1, dtype=np.int64)
        weights = np.zeros(self.dimension)
        for i, row in enumerate(self.basis):
            k = row[mode]
            if k > 0:
                lowered = row.copy()
                lowered[mode] -= 1
                targets[i] = self._index[tuple(lowered.tolist())]
                weights[i] = math.sqrt(k)
        return targets, weights

    def annihilation_matrix(self, mode):
        targets, weights = self.annihilation_map(mode)
        valid = targets >= 0
        return sp.csr_matrix(
            (weights[valid], (targets[valid], np.nonzero(valid)[0])),
            shape=(self.dimension, self.dimension))


def conserves_total_number(couplings):
    """True when every coupling kind preserves the total quantum number."""
    return all(c.kind in NUMBER_CONSERVING_KINDS for c in couplings)


def build_hamiltonian(space: StateSpace, couplings, mode_index):
    """Assemble the (Hermitian) coupling Hamiltonian on the given basis."""
    rows, cols, vals = [], [], []
    truncs = space.truncations
    for coupling in couplings:
        s = complex(coupling.strength)
        ids = tuple(mode_index[name] for name in coupling.modes)
        if coupling.kind == "number":
            (m,) = ids
            for x, row in enumerate(space.basis):
                k = row[m]
                if k:
                    rows.append(x)
                    cols.append(x)
                    vals.append(s.real * k)
        elif coupling.kind == "bilinear":
            i, j = ids
            for x, row in enumerate(space.basis):
                kj = row[j]
                ki = row[i]
                if kj > 0 and ki + 1 <= truncs[i] - 1:
                    moved = row.copy()
                    moved[j] -= 1
                    moved[i] += 1
                    y = space._index.get(tuple(moved.tolist()))
                    if y is None:
                        continue
                    amp = s * math.sqrt(kj * (ki + 1))
                    rows += [y, x]
                    cols += [x, y]
                    vals += [amp, amp.conjugate()]
        elif coupling.kind == "trilinear":
            a, b, c = ids
            for x, row in enumerate(space.basis):
                ka, kb, kc = row[a], row[b], row[c]
                if ka > 0 and kb + 1 <= truncs[b] - 1 and kc + 1 <= truncs[c] - 1:
                    moved = row.copy()
                    moved[a] -= 1
                    moved[b] += 1
                    moved[c] += 1
                    y = space._index.get(tuple(moved.tolist()))
                    if y is None:
                        continue
                    amp = s * math.sqrt(ka * (kb + 1) * (kc + 1))
                    rows += [y, x]
                    cols += [x, y]
                    vals += [amp, amp.conjugate()]
        else:
            raise DomainError(f"unknown coupling kind {coupling.kind!r}")
    h = sp.csr_matrix(
        (np.asarray(vals, dtype=complex), (rows, cols)),
        shape=(space.dimension, space.dimension))
    h.sum_duplicates()
    return h


def check_hermitian(h, rel_tol=1e-12):
    if h.nnz == 0:
        return 0.0
    scale = abs(h).max()
    dev = abs(h - h.getH()).max()
    if dev > rel_tol * scale:
        raise PreconditionError(
            f"assembled Hamiltonian is not Hermitian: max |H - H^dag| = {dev:g} "
            f"against scale {scale:g}")
    return float(dev / scale) if scale else 0.0


def commutes_with_total_number(h, total_diag, rel_tol=1e-10):
    """Machine check that [H, N_total] vanishes on this basis.

    With N_total diagonal, the commutator entry at (x, y) is
    H[x, y] * (total[y] - total[x]); the check is its max against max |H|.
    """
    if h.nnz == 0:
        return True, 0.0
    coo = h.tocoo()
    dev = np.abs(coo.data * (total_diag[coo.col] - total_diag[coo.row])).max()
    scale = np.abs(coo.data).max()
    return dev <= rel_tol * scale, float(dev / scale)


def initial_vector(space: StateSpace, state, mode_index):
    """Build the initial pure-state vector on the given basis."""
    dim = space.dimension
    n_modes = len(space.truncations)
    if state.kind == "fock":
        occ = [0] * n_modes
        for name, k in (state.occupations or {}).items():
            occ[mode_index[name]] = int(k)
        vec = np.zeros(dim, dtype=complex)
        vec[space.index_of(occ)] = 1.0
        return vec
    if state.kind == "coherent":
        alphas = np.zeros(n_modes, dtype=complex)
        for name, a in (state.amplitudes or {}).items():
            alphas[mode_index[name]] = complex(a)
        # Truncated (projected) coherent product state, renormalized.
        log_fact = [math.lgamma(k + 1) for k in range(max(space.truncations))]
        vec = np.empty(dim, dtype=complex)
        for i, row in enumerate(space.basis):
            c = 1.0 + 0.0j
            for m, k in enumerate(row):
                if alphas[m] == 0.0:
                    if k:
                        c = 0.0
                        break
                    continue
                c *= alphas[m] ** int(k) / math.sqrt(math.exp(log_fact[k]))
            vec[i] = c
        norm = np.linalg.norm(vec)
        if norm == 0.0:
            raise DomainError("coherent state projects to zero on this basis")
        return vec / norm
    if state.kind == "vector":
        full = np.asarray(state.vector, dtype=complex)
        expected = int(np.prod(space.truncations))
        if full.shape != (expected,):
            raise DomainError(
                f"explicit vector must have the full product dimension {expected}")
        if space.total_cap is None:
            vec = full.copy()
        else:
            flat = np.ravel_multi_index(space.basis.T, space.truncations)
            vec = full[flat]
        norm = np.linalg.norm(vec)
        if norm == 0.0:
            raise DomainError("explicit vector has no support on this basis")
        return vec / norm
    if state.kind == "random_sector":
        totals = space.basis.sum(axis=1)
        members = np.nonzero(totals == int(state.total))[0]
        if members.size == 0:
            raise DomainError(
                f"no basis states with total occupation {state.total}")
        rng = np.random.default_rng(state.seed)
        coeffs = rng.normal(size=members.size) + 1j * rng.normal(size=members.size)
        vec = np.zeros(dim, dtype=complex)
        vec[members] = coeffs / np.linalg.norm(coeffs)
        return vec
    raise DomainError(f"unknown initial state kind {state.kind!r}")


def initial_support_total(state, truncations, mode_index):
    """Largest total occupation the initial state can populate, or None.

    None means unbounded below the truncation ceiling (coherent states), which
    disables the sector restriction.
    """
    if state.kind == "fock":
        return sum(int(k) for k in (state.occupations or {}).values())
    if state.kind == "random_sector":
        return int(state.total)
    if state.kind == "vector":
        full = np.asarray(state.vector, dtype=complex)
        support = np.nonzero(full)[0]
        if support.size == 0:
            return 0
        occ = np.array(np.unravel_index(support, tuple(truncations)))
        return int(occ.sum(axis=0).max())
    return None
