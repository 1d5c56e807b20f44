"""Time the compiled kernels against the pure-Python fallback.

Run with ``python benchmarks/bench_kernels.py``.
"""
import argparse
import timeit

import numpy as np

from lorentz_willmore import kernels
from lorentz_willmore.elastica import ElasticaProfile, Family, HalfPlaneModel, ModelKind


def cases(n_ellipj, n_steps):
    u = np.random.default_rng(0).uniform(-20, 20, n_ellipj)
    p = ElasticaProfile(Family.CN, 1.7, 0.0, 1, 1, HalfPlaneModel(ModelKind.HYPERBOLIC_Q))
    h = 1e-3
    kh = p.curvature(np.arange(2 * n_steps + 1) * h / 2)
    return {
        "ellipj_core (scalar, x1000)": lambda mod: [mod.ellipj_core(0.37, 0.7) for _ in range(1000)],
        f"ellipj_core ({n_ellipj} points)": lambda mod: mod.ellipj_core(u, 0.7),
        f"rk4_frenet ({n_steps} steps)": lambda mod: mod.rk4_frenet(
            kh, 0.0, 1.0, 1.0, 0.0, h, n_steps, 1.0, 0.0, 1.0, 1.0, 1e-6),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=100_000)
    ap.add_argument("--steps", type=int, default=20_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    mods = kernels.backends()
    if "compiled" not in mods:
        print("compiled extension not built; only the Python backend is available")
    for name, fn in cases(args.points, args.steps).items():
        best = {k: min(timeit.repeat(lambda: fn(m), number=1, repeat=args.repeat)) for k, m in mods.items()}
        line = "  ".join(f"{k} {v * 1e3:9.2f} ms" for k, v in best.items())
        speedup = best["python"] / best["compiled"] if "compiled" in best else float("nan")
        print(f"{name:32s} {line}  speedup {speedup:6.1f}x")


if __name__ == "__main__":
    main()
