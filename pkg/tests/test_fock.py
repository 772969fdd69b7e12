import math

import numpy as np
import pytest

from radgain.errors import DomainError, PreconditionError
from radgain.lindblad import fock
from radgain.lindblad.fock import StateSpace
from radgain.lindblad.system import Coupling, InitialState, Jump, LindbladSystem, Mode


def two_mode_space(trunc=3, cap=None):
    return StateSpace((trunc, trunc), total_cap=cap)


def test_dimensions():
    assert StateSpace((3, 4)).dimension == 12
    assert StateSpace((5, 5, 5, 5), total_cap=4).dimension == 70


def test_annihilation_map_matches_matrix():
    space = two_mode_space(4)
    for mode in (0, 1):
        targets, weights = space.annihilation_map(mode)
        a = space.annihilation_matrix(mode).toarray()
        for i, row in enumerate(space.basis):
            col = a[:, i]
            if targets[i] < 0:
                assert not col.any()
            else:
                assert col[targets[i]] == pytest.approx(weights[i])
                assert np.count_nonzero(col) == 1


def test_annihilation_ladder_values():
    space = StateSpace((4,))
    targets, weights = space.annihilation_map(0)
    # a|k> = sqrt(k)|k-1>
    for k in range(4):
        idx = space.index_of((k,))
        if k == 0:
            assert targets[idx] == -1
        else:
            assert targets[idx] == space.index_of((k - 1,))
            assert weights[idx] == pytest.approx(math.sqrt(k))


def test_bilinear_hamiltonian_is_hermitian_and_conserving():
    space = two_mode_space(4)
    couplings = (Coupling("bilinear", 0.7 + 0.2j, ("a", "b")),
                 Coupling("number", 0.3, ("a",)))
    h = fock.build_hamiltonian(space, couplings, {"a": 0, "b": 1})
    fock.check_hermitian(h)
    ok, rel = fock.commutes_with_total_number(h, space.total_number_diag())
    assert ok and rel <= 1e-15


def test_trilinear_breaks_conservation():
    space = StateSpace((3, 3, 3))
    h = fock.build_hamiltonian(
        space, (Coupling("trilinear", 0.5, ("a", "b", "c")),),
        {"a": 0, "b": 1, "c": 2})
    fock.check_hermitian(h)
    ok, rel = fock.commutes_with_total_number(h, space.total_number_diag())
    assert not ok and rel > 1e-3


def test_trilinear_matrix_element():
    space = StateSpace((3, 3, 3))
    h = fock.build_hamiltonian(
        space, (Coupling("trilinear", 2.0, ("a", "b", "c")),),
        {"a": 0, "b": 1, "c": 2}).toarray()
    src = space.index_of((2, 0, 0))
    dst = space.index_of((1, 1, 1))
    # <1,1,1| a b+ c+ |2,0,0> = sqrt(2)
    assert h[dst, src] == pytest.approx(2.0 * math.sqrt(2.0))
    assert h[src, dst] == pytest.approx(2.0 * math.sqrt(2.0))


def test_initial_fock_and_errors():
    space = two_mode_space(3)
    vec = fock.initial_vector(space, InitialState("fock",
                                                  occupations={"b": 2}),
                              {"a": 0, "b": 1})
    assert vec[space.index_of((0, 2))] == 1.0
    with pytest.raises(DomainError):
        fock.initial_vector(space, InitialState("fock",
                                                occupations={"a": 5}),
                            {"a": 0, "b": 1})


def test_initial_coherent_normalized_and_poissonian():
    space = StateSpace((12,))
    vec = fock.initial_vector(space, InitialState("coherent",
                                                  amplitudes={"a": 0.8}),
                              {"a": 0})
    assert np.linalg.norm(vec) == pytest.approx(1.0)
    probs = np.abs(vec)**2
    expected = np.array([math.exp(-0.64) * 0.64**k / math.factorial(k)
                         for k in range(12)])
    assert np.max(np.abs(probs - expected)) < 1e-10


def test_initial_random_sector_is_seeded_and_in_sector():
    space = StateSpace((4, 4), total_cap=3)
    state = InitialState("random_sector", total=3, seed=11)
    v1 = fock.initial_vector(space, state, {"a": 0, "b": 1})
    v2 = fock.initial_vector(space, state, {"a": 0, "b": 1})
    assert np.array_equal(v1, v2)
    totals = space.basis.sum(axis=1)
    assert np.all(np.abs(v1[totals != 3]) == 0.0)
    assert np.linalg.norm(v1) == pytest.approx(1.0)


def test_initial_vector_projection_onto_sector():
    full = np.zeros(16, dtype=complex)
    full[np.ravel_multi_index((1, 1), (4, 4))] = 1.0
    full[np.ravel_multi_index((3, 3), (4, 4))] = 1.0
    space = StateSpace((4, 4), total_cap=2)
    vec = fock.initial_vector(space, InitialState("vector",
                                                  vector=tuple(full)),
                              {"a": 0, "b": 1})
    assert np.linalg.norm(vec) == pytest.approx(1.0)
    assert abs(vec[space.index_of((1, 1))]) == pytest.approx(1.0)


def test_support_total():
    truncs = (4, 4)
    mi = {"a": 0, "b": 1}
    assert fock.initial_support_total(
        InitialState("fock", occupations={"a": 2, "b": 1}), truncs, mi) == 3
    assert fock.initial_support_total(
        InitialState("random_sector", total=2), truncs, mi) == 2
    assert fock.initial_support_total(
        InitialState("coherent", amplitudes={"a": 1.0}), truncs, mi) is None


def test_system_validation():
    with pytest.raises(DomainError):
        Mode("", 3)
    with pytest.raises(DomainError):
        Mode("a", 1)
    with pytest.raises(DomainError):
        Coupling("bilinear", 1.0, ("a",))
    with pytest.raises(DomainError):
        Coupling("number", 1.0 + 1.0j, ("a",))
    with pytest.raises(DomainError):
        Jump("a", -1.0)
    with pytest.raises(DomainError):
        LindbladSystem((Mode("a", 3),), jumps=(Jump("b", 1.0),))
    with pytest.raises(DomainError):
        LindbladSystem((Mode("a", 3), Mode("a", 3)))
