#!/usr/bin/env python3
"""Benchmark the compiled lab-propagation kernel against the numpy fallback.

Workload: the two-segment population-swap program at carrier/drive ratios
typical of rotating-wave validation runs, integrated at several step
densities.  Both implementations produce the same trajectory to near
machine precision; the table reports wall times and the speedup.

Run:  python bench/benchmark_kernels.py
"""

import math
import time

import numpy as np

from nverc import SystemParams, characteristic_quantities
from nverc._kernels import pyfallback
from nverc.ham import lab_drive_operators, static_hamiltonian
from nverc.pulses import PulseSegment

try:
    from nverc._kernels import _rk4 as compiled
except ImportError:
    compiled = None


def run_sequence(impl, p, segments, steps_per_period):
    hs = static_hamiltonian(p)
    u = np.eye(3, dtype=complex)
    t = 0.0
    h_max = (2.0 * math.pi / p.carrier) / steps_per_period
    for seg in segments:
        ax, ay = lab_drive_operators(seg)
        n = max(1, int(math.ceil(seg.duration / h_max)))
        u = impl.rk4_lab_segment(hs, ax, ay, p.carrier, seg.alpha, seg.beta,
                                 t, seg.duration, n, u)
        t += seg.duration
    return u


def main():
    p = SystemParams(D=500.0, muB=1.0, omega_x=3.0)
    q = characteristic_quantities(p)
    segments = [
        PulseSegment(q.T_prime, 0.0, p.omega_x),
        PulseSegment(q.T_second, math.pi, p.omega_x),
    ]

    print(f"{'steps/period':>13} {'n_steps':>9} {'python [s]':>11} "
          f"{'compiled [s]':>13} {'speedup':>8} {'max |diff|':>11}")
    for spp in (20, 80, 160, 320):
        n_total = sum(
            max(1, int(math.ceil(s.duration / ((2 * math.pi / p.carrier) / spp))))
            for s in segments
        )
        t0 = time.perf_counter()
        u_py = run_sequence(pyfallback, p, segments, spp)
        t_py = time.perf_counter() - t0

        if compiled is None:
            print(f"{spp:>13} {n_total:>9} {t_py:>11.3f} {'n/a':>13} {'n/a':>8} {'n/a':>11}")
            continue

        t0 = time.perf_counter()
        u_c = run_sequence(compiled, p, segments, spp)
        t_c = time.perf_counter() - t0
        diff = float(np.max(np.abs(u_py - u_c)))
        print(f"{spp:>13} {n_total:>9} {t_py:>11.3f} {t_c:>13.4f} "
              f"{t_py / t_c:>8.1f} {diff:>11.2e}")

    if compiled is None:
        print("\ncompiled kernel not built; run `python setup.py build_ext --inplace`")


if __name__ == "__main__":
    main()
