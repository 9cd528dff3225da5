"""Compare the compiled and pure-python residual kernels.

    python benchmarks/bench_kernels.py [--repeat N]

Times the residual tensor, the finite-difference Jacobian and a full
64-start family solve under each available backend.
"""

import argparse
import timeit
import warnings

import numpy as np

from nilsoliton import catalog, kernels
from nilsoliton.errors import NoConvergenceWarning
from nilsoliton.solver import SolveOptions, solve_family


def bench(label, fn, repeat, number):
    best = min(timeit.repeat(fn, repeat=repeat, number=number)) / number
    unit, scale = ("ms", 1e3) if best >= 1e-3 else ("us", 1e6)
    print(f"  {label:<28} {best * scale:10.2f} {unit}")
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    warnings.simplefilter("ignore", NoConvergenceWarning)

    entry = catalog.family("2.6")
    base, tpl, free = entry.linear_model(entry.default_gauge)
    rng = np.random.default_rng(0)
    theta = rng.normal(size=len(free))
    alpha = base + np.tensordot(theta, tpl, axes=1)
    steps = 1e-6 * np.ones(len(free) + 1)

    results = {}
    previous = kernels.BACKEND
    try:
        for name in kernels.available_backends():
            kernels.set_backend(name)
            print(f"backend: {name}")
            results[name] = (
                bench("residual tensor", lambda: kernels.eq6_tensor(alpha, -2.0), args.repeat, 2000),
                bench("residual + jacobian", lambda: kernels.eq6_fd_jacobian(base, tpl, theta, -2.0, steps),
                      args.repeat, 500),
                bench("solve family 2.6 (64 starts)", lambda: solve_family(entry, SolveOptions()), args.repeat, 1),
            )
    finally:
        kernels.set_backend(previous)

    if len(results) == 2:
        print("speedup (python / compiled):")
        for label, py, ext in zip(("residual tensor", "residual + jacobian", "solve family"),
                                  results["python"], results["compiled"]):
            print(f"  {label:<28} {py / ext:10.1f}x")
    else:
        print("compiled extension not built; only the python backend was timed")


if __name__ == "__main__":
    main()
