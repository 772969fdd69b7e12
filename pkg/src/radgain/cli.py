"""Command-line interface.

Exit codes: 0 success, 1 failed verification, 2 input/validation error,
3 capability or regime refusal.  Reports go to standard output, diagnostics
to standard error.
"""

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__, gain, scenario
from .errors import (DomainError, IntegrationError, PreconditionError,
                     RegimeError, ScenarioError, SizingError)
from .gain import CoherenceSettings
from .lindblad import (evolve, random_conserving_system,
                       verify_exponential_decay)
from .report import emit_report
from .units import parse_count, parse_quantity

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2
EXIT_REFUSED = 3

_SWEEP_UNIT_KIND = {"energy": "energy", "diameter": "length",
                    "length": "length", "density": "density"}


def _coherence_override(settings: CoherenceSettings, args) -> CoherenceSettings:
    mode = args.coherence if args.coherence else settings.mode
    time = settings.time
    if args.coherence_time:
        time = parse_quantity(args.coherence_time, "time", "--coherence-time")
        if not args.coherence:
            mode = "explicit"
    spread = settings.velocity_spread
    if args.velocity_spread:
        spread = parse_quantity(args.velocity_spread, "speed",
                                "--velocity-spread")
    return CoherenceSettings(mode=mode, time=time, velocity_spread=spread)


def cmd_evaluate(args):
    scn = scenario.load_scenario(args.scenario)
    settings = _coherence_override(scn.coherence, args)
    rep = gain.evaluate_scenario(scn.channel, scn.geometry, settings,
                                 name=scn.name)
    sys.stdout.write(emit_report(rep, args.format))
    return EXIT_OK


def cmd_sweep(args):
    scn = scenario.load_scenario(args.scenario)
    settings = _coherence_override(scn.coherence, args)
    variable = args.variable
    if variable == "atom_number":
        start = parse_count(args.start, "--start")
        stop = parse_count(args.stop, "--stop")
    else:
        kind = _SWEEP_UNIT_KIND[variable]
        start = parse_quantity(args.start, kind, "--start")
        stop = parse_quantity(args.stop, kind, "--stop")
    values = gain.log_grid(start, stop, args.points_per_decade)
    result = gain.parameter_sweep(scn.channel, scn.geometry, variable, values,
                                  settings, name=scn.name)
    sys.stdout.write(emit_report(result, args.format))
    return EXIT_OK


def cmd_simulate(args):
    path = Path(args.system)
    if not path.is_file():
        raise ScenarioError(f"no such system file: {args.system}")
    system, options = scenario.parse_system_spec(
        path.read_text(encoding="utf-8"))
    horizon = args.horizon if args.horizon is not None \
        else options.get("horizon", 1.0)
    samples = args.samples if args.samples is not None \
        else options.get("samples", 96)
    observables = tuple(name.strip() for name in args.observables.split(",")
                        if name.strip())
    backend = None if args.backend == "auto" else args.backend
    traj = evolve(system, horizon, observables, rtol=args.rtol,
                  samples=samples, backend=backend)
    sys.stdout.write(emit_report(traj, args.format))
    return EXIT_OK


def cmd_verify_decay(args):
    if args.non_conserving:
        # Deliberately break the theorem's precondition to show the guard.
        from .lindblad import Coupling, InitialState, Jump, LindbladSystem, Mode
        modes = (Mode("a", 3), Mode("b", 3), Mode("c", 3))
        system = LindbladSystem(
            modes,
            (Coupling("trilinear", 0.5, ("a", "b", "c")),),
            tuple(Jump(m.name, args.gamma) for m in modes),
            InitialState("fock", occupations={"a": 2}))
        verify_exponential_decay(system)  # raises PreconditionError
        return EXIT_OK

    rng = np.random.default_rng(args.seed)
    print(f"seed: {args.seed}")
    print(f"draws: {args.draws}  modes: {args.modes[0]}-{args.modes[1]}  "
          f"atoms: {args.atoms[0]}-{args.atoms[1]}  gamma: {args.gamma:g}  "
          f"lifetimes: {args.lifetimes:g}")
    horizon = (args.lifetimes / args.gamma) if args.gamma > 0.0 else 1.0
    worst = 0.0
    for i in range(args.draws):
        n_modes = int(rng.integers(args.modes[0], args.modes[1] + 1))
        n_atoms = int(rng.integers(args.atoms[0], args.atoms[1] + 1))
        system = random_conserving_system(rng, n_modes, n_atoms,
                                          gamma=args.gamma)
        deviation = verify_exponential_decay(system, horizon=horizon,
                                             rtol=args.rtol)
        worst = max(worst, deviation)
        print(f"draw {i + 1:3d}: modes={n_modes} atoms={n_atoms} "
              f"state={system.initial_state.kind:<13s} "
              f"deviation={deviation:.3e}")
    passed = worst < args.tolerance
    print(f"max_deviation: {worst:.3e}")
    print(f"tolerance: {args.tolerance:g}")
    print(f"result: {'PASS' if passed else 'FAIL'}")
    return EXIT_OK if passed else EXIT_FAILED


def cmd_list_scenarios(args):
    for scn in scenario.builtin_scenarios():
        summary = " ".join(scn.notes.split())
        if len(summary) > 88:
            summary = summary[:85] + "..."
        print(f"{scn.name}: {summary}")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="radgain",
        description="Feasibility engine for collective enhancement of "
                    "radioactive decay, with an exact small-system "
                    "master-equation oracle.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser(
        "evaluate", help="evaluate a scenario and print its gain report")
    p_eval.add_argument("scenario",
                        help="built-in name or path to a scenario document")
    p_eval.add_argument("--coherence", choices=scenario.COHERENCE_MODES,
                        default=None, help="override the coherence mode")
    p_eval.add_argument("--coherence-time", default=None, metavar="TIME",
                        help='explicit coherence time, e.g. "50 ps"')
    p_eval.add_argument("--velocity-spread", default=None, metavar="SPEED",
                        help='source velocity spread, e.g. "3 mm/s"')
    p_eval.add_argument("--format", choices=("human", "csv"), default="human")
    p_eval.set_defaults(func=cmd_evaluate)

    p_sweep = sub.add_parser(
        "sweep", help="sweep one scenario variable and print a CSV table")
    p_sweep.add_argument("scenario")
    p_sweep.add_argument("--variable", required=True,
                         choices=gain.SWEEP_VARIABLES)
    p_sweep.add_argument("--start", required=True,
                         help='grid start, e.g. "1 keV" (bare number for '
                              'atom_number)')
    p_sweep.add_argument("--stop", required=True, help="grid end")
    p_sweep.add_argument("--points-per-decade", type=int, default=20)
    p_sweep.add_argument("--coherence", choices=scenario.COHERENCE_MODES,
                         default=None)
    p_sweep.add_argument("--coherence-time", default=None)
    p_sweep.add_argument("--velocity-spread", default=None)
    p_sweep.add_argument("--format", choices=("human", "csv"), default="csv")
    p_sweep.set_defaults(func=cmd_sweep)

    p_sim = sub.add_parser(
        "simulate", help="integrate a system document and print the "
                         "trajectory CSV")
    p_sim.add_argument("system", help="path to a system document")
    p_sim.add_argument("--horizon", type=float, default=None)
    p_sim.add_argument("--samples", type=int, default=None)
    p_sim.add_argument("--rtol", type=float, default=1e-9)
    p_sim.add_argument("--observables",
                       default="total_number,occupation:*",
                       help="comma-separated: total_number, coherence, "
                            "occupation:<mode> or occupation:*")
    p_sim.add_argument("--backend", choices=("auto", "python", "compiled"),
                       default="auto")
    p_sim.add_argument("--format", choices=("human", "csv"), default="csv")
    p_sim.set_defaults(func=cmd_simulate)

    p_verify = sub.add_parser(
        "verify-decay", help="check exponential total-number decay over "
                             "randomized number-conserving systems")
    p_verify.add_argument("--draws", type=int, default=50)
    p_verify.add_argument("--seed", type=int, default=20250810)
    p_verify.add_argument("--modes", type=int, nargs=2, default=(2, 4),
                          metavar=("MIN", "MAX"))
    p_verify.add_argument("--atoms", type=int, nargs=2, default=(2, 4),
                          metavar=("MIN", "MAX"))
    p_verify.add_argument("--gamma", type=float, default=1.0)
    p_verify.add_argument("--lifetimes", type=float, default=5.0)
    p_verify.add_argument("--tolerance", type=float, default=1e-6)
    p_verify.add_argument("--rtol", type=float, default=1e-9)
    p_verify.add_argument("--non-conserving", action="store_true",
                          help="feed a number-non-conserving Hamiltonian to "
                               "demonstrate the precondition guard")
    p_verify.set_defaults(func=cmd_verify_decay)

    p_list = sub.add_parser("list-scenarios", help="list built-in scenarios")
    p_list.set_defaults(func=cmd_list_scenarios)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ScenarioError, DomainError, PreconditionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (RegimeError, SizingError) as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except IntegrationError as exc:
        print(f"integration error: {exc}", file=sys.stderr)
        return EXIT_REFUSED


if __name__ == "__main__":
    sys.exit(main())
