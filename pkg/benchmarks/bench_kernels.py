"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import timeit

import numpy as np

from cohbell import kernels
from cohbell.optimizer import nelder_mead
from cohbell.sampling import random_density


def bench(impl, rho, x, repeat):
    bases = [impl.bloch_basis(*x[2 * k:2 * k + 2]) for k in range(4)]
    herm = rho + np.diag([0.1, 0.2, 0.3, 0.4])
    cases = {
        "jacobi_eigh 4x4": lambda: impl.jacobi_eigh(herm, 1e-12, 100),
        "rotate_pair": lambda: impl.rotate_pair(rho, bases[0], bases[2]),
        "bell_stats": lambda: impl.bell_stats(rho, *bases),
        "objective": lambda: impl.objective(rho, x, 1, 0.3),
    }
    out = {}
    for name, fn in cases.items():
        t = timeit.Timer(fn)
        n, _ = t.autorange()
        out[name] = min(t.repeat(repeat, n)) / n * 1e6
    t = timeit.default_timer()
    nelder_mead(lambda y: impl.objective(rho, y, 0, 0.0), x.copy())
    out["nelder-mead restart (2000 evals)"] = (timeit.default_timer() - t) * 1e6
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    rho = np.ascontiguousarray(random_density(4, rng).mat)
    x = rng.uniform(0, 3, 8)
    results = {name: bench(impl, rho, x, args.repeat) for name, impl in kernels.available_backends().items()}
    names = list(results)
    print(f"{'kernel':34s}" + "".join(f"{n + ' [us]':>16s}" for n in names) + ("     speedup" if len(names) > 1 else ""))
    for case in results[names[0]]:
        row = f"{case:34s}" + "".join(f"{results[n][case]:16.2f}" for n in names)
        if "cython" in results and "python" in results:
            row += f"{results['python'][case] / results['cython'][case]:11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
