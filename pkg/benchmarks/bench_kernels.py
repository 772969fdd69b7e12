"""Compare the compiled and NumPy master-equation kernels.

Times the raw right-hand-side evaluation and a short adaptive integration on
systems of increasing dimension.  Run from the repository root:

    python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from radgain.lindblad import (compiled_available, dicke_system, evolve,
                              random_conserving_system)
from radgain.lindblad.fock import StateSpace, build_hamiltonian
from radgain.lindblad.kernels import RhsOperator

REPEATS = 7


def build_cases():
    rng = np.random.default_rng(1)
    cases = [
        ("conserving 3x5", random_conserving_system(rng, 3, 4, state_kind="coherent")),
        ("conserving 4x4", random_conserving_system(rng, 4, 3, state_kind="coherent")),
        ("dicke N=7", dicke_system(7, 1.0, "trilinear", photon_loss=10.0)),
        ("conserving 4x5", random_conserving_system(rng, 4, 4, state_kind="coherent")),
    ]
    return cases


def time_rhs(system, backend, rng):
    space = StateSpace(system.truncations)
    mi = system.mode_index()
    h = build_hamiltonian(space, system.hamiltonian, mi)
    jumps = [(j.rate, *space.annihilation_map(mi[j.mode]))
             for j in system.jumps]
    op = RhsOperator(h, jumps, backend=backend)
    dim = space.dimension
    rho = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = np.ascontiguousarray(rho + rho.conj().T)
    op(rho)  # warm up
    samples = []
    for _ in range(REPEATS):
        start = time.perf_counter()
        op(rho)
        samples.append(time.perf_counter() - start)
    return dim, np.median(samples)


def time_evolve(system, backend):
    start = time.perf_counter()
    evolve(system, 0.5, ("total_number",), samples=8, backend=backend,
           validate=False, allow_restriction=False)
    return time.perf_counter() - start


def main():
    if not compiled_available():
        print("compiled kernel not built; only the NumPy path is available")
    rng = np.random.default_rng(2)
    header = (f"{'case':<16} {'dim':>5} {'rhs py (ms)':>12} "
              f"{'rhs c (ms)':>11} {'speedup':>8} {'evolve py (s)':>14} "
              f"{'evolve c (s)':>13}")
    print(header)
    print("-" * len(header))
    for label, system in build_cases():
        dim, t_py = time_rhs(system, "python", rng)
        row = f"{label:<16} {dim:>5} {t_py * 1e3:>12.3f} "
        if compiled_available():
            _, t_c = time_rhs(system, "compiled", rng)
            e_py = time_evolve(system, "python")
            e_c = time_evolve(system, "compiled")
            row += (f"{t_c * 1e3:>11.3f} {t_py / t_c:>8.2f} "
                    f"{e_py:>14.2f} {e_c:>13.2f}")
        else:
            row += f"{'-':>11} {'-':>8} {time_evolve(system, 'python'):>14.2f} {'-':>13}"
        print(row)


if __name__ == "__main__":
    main()
