"""Feasibility engine for collective enhancement of radioactive decay.

Gain/threshold/coherence arithmetic for arbitrary emitter scenarios, plus an
exact Lindblad oracle on small truncated Fock spaces to back the rate-level
claims with full open-system dynamics.
"""

__version__ = "0.1.0"

from .constants import CODATA2018, PhysicalConstants
from .gain import (CoherenceSettings, GainReport, RateTrajectory, SweepResult,
                   dimensionless_gain, evaluate_scenario, gain_energy_scaling,
                   gain_rate, integrate_rate_equation, log_grid,
                   mode_depletion_check, parameter_sweep, positronium_gain,
                   threshold_check)
from .physkit import (CoherenceBudget, EmissionChannel, SampleGeometry,
                      ThermalEnsemble, annihilation_momentum_spread,
                      coherence_budget, coherent_solid_angle,
                      condensate_velocity_spread, doppler_angular_width,
                      equivalent_thermal_ensemble, hydrogenic_cascade_lifetime,
                      mode_count, optical_density, partial_wave_count,
                      photon_wavelength, recoil_velocity,
                      side_mode_solid_angle)
from .report import emit_report
from .scenario import (Scenario, builtin_scenarios, load_scenario,
                       parse_scenario, parse_system_spec, serialize_scenario)
