"""Compare the compiled and pure-Python kernel backends.

    python3 benchmarks/bench_kernels.py [--repeat N]

Times the Jacobi eigensolver, the hypergeometric expected-MI sum, Lloyd
iterations, and the full pipeline on a synthetic scenario. The pipeline
timing rebinds the dispatch names in ``groupwalk.kernels``, so both runs
share everything except the kernels.
"""

import argparse
import time

import numpy as np

from groupwalk import kernels, synth
from groupwalk.pipeline import RunConfig, evaluate


def _best(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def _workloads(rng):
    mats = []
    for n in (8, 20, 40):
        A = rng.normal(size=(n, n))
        mats.append(A + A.T)
    contingencies = [(rng.integers(1, 15, 6).astype(np.float64),
                      rng.integers(1, 15, 5).astype(np.float64)) for _ in range(20)]
    X = np.concatenate([rng.normal(c, 0.3, (100, 3)) for c in (0, 3, 6, 9)])
    return mats, contingencies, X


def bench(mod, repeat, rng):
    mats, conts, X = _workloads(rng)
    out = {}
    out["jacobi_eigh (n=8,20,40)"] = _best(
        lambda: [mod.jacobi_eigh(A) for A in mats], repeat)
    out["expected_mutual_info x20"] = _best(
        lambda: [mod.expected_mutual_info(a, a[::-1].copy(), int(a.sum())) for a, _ in conts], repeat)
    out["lloyd (400 pts, m=4)"] = _best(lambda: mod.lloyd(X, X[[0, 100, 200, 300]].copy()), repeat)

    sc = synth.generate(synth.p5_split(frames=120))
    frames, truth = list(sc.frames()), sc.truth()
    names = ("jacobi_eigh", "lloyd", "expected_mutual_info")
    saved = {k: getattr(kernels, k) for k in names}
    for k in names:
        setattr(kernels, k, getattr(mod, k))
    try:
        out["pipeline (p5-split, 120 frames)"] = _best(
            lambda: evaluate(frames, truth, RunConfig()), max(1, repeat // 3))
    finally:
        for k, fn in saved.items():
            setattr(kernels, k, fn)
    return out


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args(argv)

    backends = {name: bench(mod, args.repeat, np.random.default_rng(0))
                for name, mod in kernels.available_backends().items()}

    names = sorted(backends, key=lambda n: n != "python")  # python first
    print(f"{'kernel':34s}" + "".join(f"{n:>12s}" for n in names)
          + ("     speedup" if len(names) == 2 else ""))
    for k in backends[names[0]]:
        row = [backends[n][k] for n in names]
        line = f"{k:34s}" + "".join(f"{t * 1e3:10.2f}ms" for t in row)
        if len(row) == 2:
            line += f"{row[0] / row[1]:11.1f}x"
        print(line)


if __name__ == "__main__":
    main()
