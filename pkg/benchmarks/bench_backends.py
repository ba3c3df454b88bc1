"""Compare the numba and numpy backends on the eigensolver-heavy paths.

    python benchmarks/bench_backends.py [--batch 20000] [--repeat 5]
"""

import argparse
import time

import numpy as np

from coupled_otto import _accel
from coupled_otto.cycle import CycleSpec
from coupled_otto.linalg import eig_hermitian_batch, random_hermitian
from coupled_otto.oracles import discretized_cycle_work


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--batch", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    h = np.array([random_hermitian(rng) for _ in range(args.batch)])
    spec = CycleSpec(1.0, 0.0, 0.6, 0.2, 1.0, 3.0)

    backends = ["numpy"] + (["numba"] if _accel.numba_available() else [])
    results = {}
    for name in backends:
        _accel.set_backend(name)
        eig_hermitian_batch(h[:2])  # compile / warm up
        results[name] = (
            best_of(lambda: eig_hermitian_batch(h), args.repeat),
            best_of(lambda: discretized_cycle_work(spec), args.repeat),
        )

    print(f"{'backend':<8} {'eigh batch=' + str(args.batch):>20} {'work oracle 2x1e4':>20}")
    for name, (t_eig, t_orc) in results.items():
        print(f"{name:<8} {t_eig * 1e3:>17.2f} ms {t_orc * 1e3:>17.2f} ms")
    if len(results) == 2:
        s_eig = results["numpy"][0] / results["numba"][0]
        s_orc = results["numpy"][1] / results["numba"][1]
        print(f"speedup  {s_eig:>19.1f}x {s_orc:>19.1f}x")


if __name__ == "__main__":
    main()
