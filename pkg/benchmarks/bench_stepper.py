#!/usr/bin/env python3
"""Benchmark the compiled mode-evolution core against the numpy fallback.

Runs the weak-drive oracle stepping loop at a few system sizes, checks
that both implementations produce identical trajectories, and reports the
speedup.  Usage: python benchmarks/bench_stepper.py [--steps N]
"""
import argparse
import time

import numpy as np

from vpl import _stepper_py
from vpl.bogolyubov import ModeSystem

try:
    from vpl import _stepper
except ImportError:
    _stepper = None


def initial_state(system):
    a = np.eye(system.mode_count, dtype=np.complex128)
    p = np.diag(-1j * system.omega).astype(np.complex128)
    return a, p


def run(impl, system, steps):
    a, p = initial_state(system)
    start = time.perf_counter()
    status = impl.evolve_batch(system.omega, system.coupling,
                               system.drive_frequency, system.ramp_time,
                               system.time_step, steps, 0.0, a, p)
    elapsed = time.perf_counter() - start
    assert status == -1
    return elapsed, a


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--steps", type=int, default=1500,
                        help="integration steps per measurement")
    args = parser.parse_args()

    if _stepper is None:
        print("compiled stepper not built; benchmarking fallback only")

    print(f"{'K':>6} {'steps':>7} {'numpy [s]':>10} {'cython [s]':>11} "
          f"{'speedup':>8} {'max |diff|':>11}")
    for K in (50, 100, 200, 400):
        system = ModeSystem.from_drive(0.05, mode_count=K)
        steps = min(args.steps, system.steps)
        t_py, a_py = run(_stepper_py, system, steps)
        if _stepper is None:
            print(f"{K:>6} {steps:>7} {t_py:>10.3f} {'-':>11} {'-':>8} {'-':>11}")
            continue
        t_cy, a_cy = run(_stepper, system, steps)
        diff = np.abs(a_cy - a_py).max()
        print(f"{K:>6} {steps:>7} {t_py:>10.3f} {t_cy:>11.3f} "
              f"{t_py / t_cy:>8.1f} {diff:>11.2e}")


if __name__ == "__main__":
    main()
