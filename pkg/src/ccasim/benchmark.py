"""Integrator-kernel timing: compiled backend against the numpy fallback.

Workload: a driven, lossy cavity mode (static detuning, oscillating drive
with a smooth envelope, one collapse channel folded in no-jump form) run
through the packed-segment integrators exactly as the evolvers use them.

    python -m ccasim.benchmark [--dims 32 128 512] [--duration 200] [--json]

Durations are in drive periods; each (backend, integrator, dim) cell is the
best of three timed repeats after a warm-up call that absorbs compilation.
"""

import argparse
import json
import sys
import time

import numpy as np

from .backends import HAS_NUMBA
from .dynamics import (Channel, Segment, Term, advance_dp45, advance_gl4,
                       pack_segment, smoothstep)
from .qcore import Factor, PHOTON_MODE, annihilation, number, space

DRIVE_NU = 2.0 * np.pi  # one drive period per unit time


def _packed_workload(dim, duration):
    sp = space(Factor("a", PHOTON_MODE, dim))
    a = annihilation(sp, "a")
    terms = (
        Term(op=number(sp, "a"), scale=0.3),
        Term(op=a, scale=0.2, frequency=DRIVE_NU,
             envelope=smoothstep(0.5, 1.0, duration), add_hc=True),
    )
    channels = (Channel(op=a, amp_scale=0.05),)
    seg = Segment(duration, terms, channels=channels, label="bench")
    return pack_segment(seg, 0.0)


def _initial_state(dim):
    rng = np.random.default_rng(7)
    y = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return (y / np.linalg.norm(y)).astype(np.complex128)


def _time_once(fn):
    t0 = time.perf_counter()
    nsteps = fn()
    return time.perf_counter() - t0, nsteps


def run_case(packed, dim, duration, integrator, backend, repeats=3):
    h_gl4 = 2.0 * np.pi / DRIVE_NU / 50.0  # 50 steps per drive period

    def once():
        y = _initial_state(dim)
        if integrator == "gl4":
            status, _, _, nsteps = advance_gl4(packed, y, 0.0, duration,
                                               h_gl4, backend=backend)
        else:
            status, _, _, nsteps = advance_dp45(packed, y, 0.0, duration,
                                                rtol=1e-9, atol=1e-11,
                                                backend=backend)
        if status != 0:
            raise RuntimeError(f"integrator status {status}")
        return nsteps

    once()  # warm-up: JIT compilation and cache effects land here
    best, nsteps = min(_time_once(once) for _ in range(repeats))
    return {"integrator": integrator, "backend": backend, "dim": dim,
            "seconds": best, "nsteps": int(nsteps),
            "steps_per_s": nsteps / best}


def run_benchmark(dims, duration):
    backends = ["numpy"] + (["numba"] if HAS_NUMBA else [])
    rows = []
    for dim in dims:
        packed = _packed_workload(dim, duration)
        for integrator in ("dp45", "gl4"):
            for backend in backends:
                rows.append(run_case(packed, dim, duration, integrator,
                                     backend))
    return rows


def _print_table(rows):
    header = f"{'integ':>5} {'dim':>6} {'backend':>7} {'steps':>8} " \
             f"{'time [s]':>10} {'steps/s':>12} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    base = {}
    for r in rows:
        key = (r["integrator"], r["dim"])
        if r["backend"] == "numpy":
            base[key] = r["seconds"]
        rel = base.get(key, r["seconds"]) / r["seconds"]
        print(f"{r['integrator']:>5} {r['dim']:>6} {r['backend']:>7} "
              f"{r['nsteps']:>8} {r['seconds']:>10.4f} "
              f"{r['steps_per_s']:>12.0f} {rel:>7.2f}x")


def main(argv=None):
    ap = argparse.ArgumentParser(
        description="Time the packed-segment integrators on each backend.")
    ap.add_argument("--dims", type=int, nargs="+", default=[32, 128, 512])
    ap.add_argument("--duration", type=float, default=200.0,
                    help="integration length in drive periods")
    ap.add_argument("--json", action="store_true",
                    help="emit machine-readable results")
    args = ap.parse_args(argv)
    if not HAS_NUMBA:
        print("numba unavailable: timing the numpy fallback only",
              file=sys.stderr)
    rows = run_benchmark(args.dims, args.duration)
    if args.json:
        json.dump(rows, sys.stdout, indent=2)
        print()
    else:
        _print_table(rows)
    return 0


if __name__ == "__main__":
    sys.exit(main())
