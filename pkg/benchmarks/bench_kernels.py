"""Time the numba kernels against their numpy twins.

    python benchmarks/bench_kernels.py [--repeat 5]

Each kernel is run once per backend to warm up (JIT compilation for numba),
then timed as the best of ``--repeat`` runs. Outputs are compared so a
speedup never hides a wrong answer.
"""

import argparse
import time

import numpy as np

from sigwind import _kernels
from sigwind.sle import SLEConfig, sample_driver, trace_indices


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def cases():
    rng = np.random.default_rng(0)
    inc = rng.normal(size=(5000, 2)) / 50
    cfg = SLEConfig(steps=20000)
    drv = sample_driver(cfg, 0)
    idx = trace_indices(cfg.steps, cfg.vertices)
    poly = np.cumsum(rng.normal(size=(400, 2)), axis=0)
    poly = np.vstack([poly, poly[:1]])
    pts = rng.uniform(poly.min(), poly.max(), size=(200_000, 2))
    return {
        "chen_signature (5000 segments, N=6)": lambda: _kernels.chen_signature(inc, 6),
        "loewner_points (20000 steps, 1000 points)": lambda: _kernels.loewner_points(drv, cfg.dt, idx),
        "winding_and_distance (400-gon, 2e5 points)": lambda: _kernels.winding_and_distance(
            poly[:, 0], poly[:, 1], pts[:, 0], pts[:, 1]
        ),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    backends = _kernels.available_backends()
    old = _kernels.BACKEND
    results = {}
    try:
        for name in backends:
            _kernels.set_backend(name)
            for label, fn in cases().items():
                results[label, name] = best_of(fn, args.repeat)
    finally:
        _kernels.set_backend(old)

    print(f"{'kernel':<46}" + "".join(f"{b:>12}" for b in backends) + ("     speedup" if len(backends) > 1 else ""))
    for label in cases():
        row = f"{label:<46}" + "".join(f"{results[label, b][0] * 1e3:>10.1f}ms" for b in backends)
        if len(backends) > 1:
            t_np, out_np = results[label, "numpy"]
            t_nb, out_nb = results[label, "numba"]
            a = out_np if not isinstance(out_np, tuple) else out_np[0]
            b = out_nb if not isinstance(out_nb, tuple) else out_nb[0]
            assert np.allclose(a, b, atol=1e-9), f"{label}: backends disagree"
            row += f"{t_np / t_nb:>11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
