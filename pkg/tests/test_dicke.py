"""Collective-emission model systems: Rabi exchange, bad-cavity rates,
bosonic stimulation, and locality of the stimulation memory."""

import math

import numpy as np
import pytest

from conftest import assert_rel
from radgain.errors import DomainError, RegimeError, SizingError
from radgain.lindblad import (InitialState, LindbladSystem, Mode,
                              adiabatic_rate_model, add_spectator_mode,
                              dicke_system, evolve)
from radgain.lindblad.system import Coupling, Jump


def decay_rate_between(traj, name, t1, t2):
    """Log-slope of an observable between two times (linear interpolation)."""
    times = traj.times
    series = traj.values[name]
    v1 = np.interp(t1, times, series)
    v2 = np.interp(t2, times, series)
    return math.log(v1 / v2) / (t2 - t1)


def test_single_atom_rabi_period():
    chi = 2.0
    system = dicke_system(1, chi, "trilinear", photon_loss=0.0)
    traj = evolve(system, 1.5 * math.pi / chi, ("occupation:parent",),
                  samples=301)
    expected = np.cos(chi * traj.times)**2
    assert np.max(np.abs(traj.values["occupation:parent"] - expected)) <= 1e-6


def test_zero_coupling_freezes_everything():
    system = LindbladSystem(
        (Mode("parent", 3), Mode("daughter", 3), Mode("photon", 3)),
        (Coupling("trilinear", 1e-30, ("parent", "daughter", "photon")),),
        (),
        InitialState("fock", occupations={"parent": 2}))
    traj = evolve(system, 3.0, ("occupation:parent", "occupation:photon"),
                  samples=20)
    assert np.max(np.abs(traj.values["occupation:parent"] - 2.0)) <= 1e-9
    assert np.max(np.abs(traj.values["occupation:photon"])) <= 1e-9


def test_bilinear_form_exchanges_parent_and_photon():
    chi = 1.0
    system = dicke_system(1, chi, "bilinear", photon_loss=0.0)
    traj = evolve(system, math.pi / chi, ("occupation:parent",
                                          "occupation:photon"), samples=101)
    total = traj.values["occupation:parent"] + traj.values["occupation:photon"]
    assert np.max(np.abs(total - 1.0)) <= 1e-9
    # Half a Rabi period moves the quantum entirely into the photon mode.
    mid = np.interp(0.5 * math.pi / chi, traj.times,
                    traj.values["occupation:photon"])
    assert mid == pytest.approx(1.0, abs=1e-6)


def test_dicke_validation_and_cap():
    with pytest.raises(DomainError):
        dicke_system(0, 1.0)
    with pytest.raises(DomainError):
        dicke_system(1, -1.0)
    with pytest.raises(SizingError):
        dicke_system(20, 1.0, "trilinear")


def test_bad_cavity_single_atom_rate_matches_adiabatic_model():
    chi, kappa = 1.0, 100.0
    rates = adiabatic_rate_model(chi, kappa, 1)
    assert_rel(rates.gamma_eff, 4.0 * chi**2 / kappa, 1e-12)
    system = dicke_system(1, chi, "trilinear", photon_loss=kappa)
    horizon = 0.5 / rates.gamma_eff
    traj = evolve(system, horizon, ("occupation:parent",), samples=200)
    measured = decay_rate_between(traj, "occupation:parent", 0.2 * horizon,
                                  horizon)
    assert_rel(measured, rates.gamma_eff, 0.05)


def test_adiabatic_model_scalings_and_guard():
    assert adiabatic_rate_model(0.0, 10.0, 3).gamma_eff == 0.0
    one = adiabatic_rate_model(1.0, 100.0, 1)
    two = adiabatic_rate_model(1.0, 200.0, 1)
    assert_rel(one.gamma_eff / two.gamma_eff, 2.0, 1e-12)
    n_scaled = adiabatic_rate_model(1.0, 100.0, 4)
    assert_rel(n_scaled.gain_rate, 4.0 * n_scaled.gamma_eff, 1e-12)
    with pytest.raises(RegimeError):
        adiabatic_rate_model(1.0, 5.0, 1)


def test_daughter_preload_doubles_emission_rate():
    # One parent with one daughter quantum already present emits twice as
    # fast as a lone parent: the (M+1) stimulation factor.
    chi, kappa = 1.0, 100.0
    gamma_eff = 4.0 * chi**2 / kappa
    modes = (Mode("parent", 3), Mode("daughter", 3), Mode("photon", 3))
    coupling = (Coupling("trilinear", chi, ("parent", "daughter", "photon")),)
    jumps = (Jump("photon", kappa),)
    horizon = 0.25 / gamma_eff

    plain = LindbladSystem(modes, coupling, jumps,
                           InitialState("fock", occupations={"parent": 1}))
    preloaded = LindbladSystem(
        modes, coupling, jumps,
        InitialState("fock", occupations={"parent": 1, "daughter": 1}))
    # The kappa >> chi separation makes this run stiff; integrate tighter so
    # accumulated error stays inside the positivity tolerance.
    t_plain = evolve(plain, horizon, ("occupation:parent",), samples=200,
                     rtol=1e-10, atol=1e-13)
    t_pre = evolve(preloaded, horizon, ("occupation:parent",), samples=200,
                   rtol=1e-10, atol=1e-13)

    t1, t2 = 0.2 * horizon, horizon
    rate_plain = decay_rate_between(t_plain, "occupation:parent", t1, t2)
    rate_pre = decay_rate_between(t_pre, "occupation:parent", t1, t2)
    assert_rel(rate_pre / rate_plain, 2.0, 0.10)
    # Preloading the coupled modes strictly accelerates early emission.
    quarter = len(t_plain.times) // 4
    assert np.all(t_pre.values["occupation:parent"][1:quarter]
                  < t_plain.values["occupation:parent"][1:quarter])


def test_spectator_preload_changes_nothing():
    chi, kappa = 1.0, 50.0
    base = dicke_system(2, chi, "trilinear", photon_loss=kappa)
    empty = add_spectator_mode(base, occupation=0, truncation=3)
    loaded = add_spectator_mode(base, occupation=2, truncation=3)
    horizon = 2.0
    t_empty = evolve(empty, horizon, ("occupation:parent",), samples=60)
    t_loaded = evolve(loaded, horizon, ("occupation:parent",), samples=60)
    dev = np.max(np.abs(t_empty.values["occupation:parent"]
                        - t_loaded.values["occupation:parent"]))
    assert dev <= 1e-8
