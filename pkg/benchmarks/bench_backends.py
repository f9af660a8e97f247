"""Benchmark the gmpy2 rational backend against the pure-Python fallback.

Runs each workload in a fresh subprocess with WALKORDER_BACKEND forced, so
the two backends are measured under identical conditions:

    python benchmarks/bench_backends.py
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time

WORKLOADS = ("convolve_power_1024", "min_n_curated_64", "leq_st_dense")


def run_workload(name: str) -> float:
    import walkorder as w
    from walkorder.cones import Cone

    half = Cone.halfline()
    bern = w.Measure(1, {(0,): "1/2", (1,): "1/2"})
    X = w.Measure(1, {("2/5",): "1/10", ("3/5",): "9/10"})
    Y = w.Measure(1, {("1/2",): "1/2", ("4/5",): "1/2"})

    t0 = time.perf_counter()
    if name == "convolve_power_1024":
        w.convolve_power(bern, 1024)
    elif name == "min_n_curated_64":
        w.min_n(X, Y, half, n_max=64)
    elif name == "leq_st_dense":
        A = w.convolve_power(X, 48)
        B = w.convolve_power(Y, 48)
        for _ in range(5):
            w.leq_st(A, B, half)
    else:
        raise SystemExit(f"unknown workload {name}")
    return time.perf_counter() - t0


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--backend", choices=("gmpy2", "python"), default=None)
    args = parser.parse_args()

    if args.backend is not None:
        import walkorder

        assert walkorder.BACKEND == args.backend, (
            f"requested {args.backend}, got {walkorder.BACKEND}"
        )
        times = {name: run_workload(name) for name in WORKLOADS}
        print(json.dumps(times))
        return 0

    results = {}
    for backend in ("gmpy2", "python"):
        env = dict(os.environ, WALKORDER_BACKEND=backend)
        proc = subprocess.run(
            [sys.executable, __file__, "--backend", backend],
            env=env,
            capture_output=True,
            text=True,
        )
        if proc.returncode != 0:
            print(f"{backend}: failed\n{proc.stderr}", file=sys.stderr)
            continue
        results[backend] = json.loads(proc.stdout)

    header = f"{'workload':<24}" + "".join(f"{b:>12}" for b in results) + f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for name in WORKLOADS:
        row = f"{name:<24}"
        for backend in results:
            row += f"{results[backend][name]:>11.3f}s"
        if len(results) == 2:
            g, p = results["gmpy2"][name], results["python"][name]
            row += f"{p / g:>9.1f}x"
        print(row)
    return 0


if __name__ == "__main__":
    sys.exit(main())
