"""Compiled and NumPy kernels must agree to machine precision.

The slow-but-obvious dense formula below is the in-test oracle both backends
are checked against.
"""

import numpy as np
import pytest

from radgain.lindblad import compiled_available, random_small_system
from radgain.lindblad.fock import StateSpace, build_hamiltonian
from radgain.lindblad.kernels import RhsOperator

BACKENDS = ["python"] + (["compiled"] if compiled_available() else [])


def dense_rhs(h, rho, jump_terms):
    """Textbook dense evaluation used as the oracle."""
    out = -1j * (h @ rho - rho @ h)
    dim = rho.shape[0]
    for gamma, targets, weights in jump_terms:
        a = np.zeros((dim, dim), dtype=complex)
        for i, (t, w) in enumerate(zip(targets, weights)):
            if t >= 0:
                a[t, i] = w
        n_op = a.conj().T @ a
        out += gamma * (a @ rho @ a.conj().T
                        - 0.5 * (n_op @ rho + rho @ n_op))
    return out


def prepared(system):
    space = StateSpace(system.truncations)
    mi = system.mode_index()
    h = build_hamiltonian(space, system.hamiltonian, mi)
    jump_terms = [(j.rate, *space.annihilation_map(mi[j.mode]))
                  for j in system.jumps]
    return space, h, jump_terms


def random_hermitian(rng, dim):
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return np.ascontiguousarray(m + m.conj().T)


@pytest.mark.parametrize("backend", BACKENDS)
def test_matches_dense_oracle(backend):
    rng = np.random.default_rng(99)
    for _ in range(8):
        system = random_small_system(rng)
        space, h, jump_terms = prepared(system)
        op = RhsOperator(h, jump_terms, backend=backend)
        rho = random_hermitian(rng, space.dimension)
        expected = dense_rhs(h.toarray(), rho, jump_terms)
        got = op(rho)
        assert np.abs(got - expected).max() <= 1e-12 * np.abs(expected).max()


@pytest.mark.skipif(not compiled_available(),
                    reason="compiled kernel not built")
def test_backends_agree_bitwise_tight():
    rng = np.random.default_rng(5)
    for _ in range(10):
        system = random_small_system(rng)
        space, h, jump_terms = prepared(system)
        op_py = RhsOperator(h, jump_terms, backend="python")
        op_c = RhsOperator(h, jump_terms, backend="compiled")
        rho = random_hermitian(rng, space.dimension)
        a, b = op_py(rho), op_c(rho)
        scale = max(np.abs(a).max(), 1.0)
        assert np.abs(a - b).max() <= 1e-13 * scale


@pytest.mark.parametrize("backend", BACKENDS)
def test_no_hamiltonian_no_jumps(backend):
    import scipy.sparse as sp
    dim = 6
    op = RhsOperator(sp.csr_matrix((dim, dim), dtype=complex), [],
                     backend=backend)
    rho = np.eye(dim, dtype=complex) / dim
    assert np.abs(op(rho)).max() == 0.0


def test_env_override_forces_python(monkeypatch):
    from radgain.lindblad import kernels
    monkeypatch.setenv("RADGAIN_PURE_PYTHON", "1")
    assert kernels.default_backend() == "python"
    monkeypatch.setenv("RADGAIN_PURE_PYTHON", "0")
    expected = "compiled" if compiled_available() else "python"
    assert kernels.default_backend() == expected
