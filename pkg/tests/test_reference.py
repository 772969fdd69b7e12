import numpy as np
import pytest

from radgain.errors import SizingError
from radgain.lindblad import (InitialState, Jump, LindbladSystem, Mode,
                              evolve, liouvillian_matrix,
                              matrix_exponential_reference,
                              random_small_system)


def test_identity_slice_leaves_state_unchanged():
    system = LindbladSystem(
        (Mode("a", 3), Mode("b", 2)), (), (),
        InitialState("fock", occupations={"a": 2, "b": 1}))
    lio = liouvillian_matrix(system)
    assert np.abs(lio).max() == 0.0
    traj = matrix_exponential_reference(system, 2.0,
                                        ("total_number", "occupation:a"),
                                        samples=8)
    assert np.all(traj.values["total_number"] == 3.0)
    assert np.all(traj.values["occupation:a"] == 2.0)


def test_single_damped_mode_closed_form():
    gamma, alpha = 1.3, 0.9
    system = LindbladSystem((Mode("a", 12),), (), (Jump("a", gamma),),
                            InitialState("coherent", amplitudes={"a": alpha}))
    traj = matrix_exponential_reference(system, 3.0 / gamma,
                                        ("total_number",), samples=25)
    expected = abs(alpha)**2 * np.exp(-gamma * traj.times)
    assert np.max(np.abs(traj.values["total_number"] - expected)) <= 1e-9


def test_dimension_cap():
    system = LindbladSystem((Mode("a", 30), Mode("b", 30)),
                            initial_state=InitialState("fock",
                                                       occupations={}))
    with pytest.raises(SizingError, match="900"):
        matrix_exponential_reference(system, 1.0)


def test_agrees_with_adaptive_integrator_on_random_systems():
    rng = np.random.default_rng(17)
    observables = ("total_number", "coherence", "occupation:m0")
    for _ in range(6):
        system = random_small_system(rng)
        horizon = 2.0
        fast = evolve(system, horizon, observables, samples=15)
        oracle = matrix_exponential_reference(system, horizon, observables,
                                              samples=15)
        for name in observables:
            a = fast.values[name]
            b = oracle.values[name]
            scale = max(np.abs(b).max(), 1e-12)
            assert np.max(np.abs(a - b)) / scale <= 1e-7, name


def test_liouvillian_preserves_trace_algebraically():
    rng = np.random.default_rng(8)
    system = random_small_system(rng)
    lio = liouvillian_matrix(system)
    dim = system.dimension
    # Tr(d rho/dt) = 0 for every rho: the vectorized trace functional must
    # annihilate the Liouvillian from the left.
    trace_vec = np.eye(dim, dtype=complex).reshape(-1, order="F")
    assert np.abs(trace_vec @ lio).max() <= 1e-10
