#!/usr/bin/env python3
"""Point-wise consistency of the bistochastic Laplacian on a curve.

Samples the closed unit-speed curve with sinusoidal density, scales the
Gaussian kernel to doubly stochastic form, and applies the rescaled
Laplacian to a known smooth function.  The result is compared against
the closed-form density-weighted Laplacian

    (Delta_p f)(t) = f''(t) + (p'(t) / p(t)) f'(t)

evaluated at the sampled intrinsic coordinates.  At a well-chosen
bandwidth the relative 2-norm error sits well below 1, and the scaling
loop terminates in a handful of iterations.

Run:  python3 demos/pointwise_convergence.py
"""

import numpy as np

from sinklap import (
    DensitySpec,
    LaplacianKind,
    delta_p_f,
    pointwise_experiment,
    test_function,
)


def main():
    n = 1000
    spec = DensitySpec.SINUSOIDAL_1D
    print(f"n = {n}, density = {spec.value}")
    print()
    print("closed-form target at a few intrinsic coordinates:")
    for t in (0.0, 0.2, 0.5):
        print(f"  t = {t:.1f}:  f = {test_function(t):+.4f}, "
              f"weighted laplacian = {delta_p_f(t, spec):+.3f}")
    print()
    header = f"{'epsilon':>9} {'relerr2':>9} {'relerrinf':>10} {'sk iters':>9}"
    print(header)
    for eps in (3e-4, 1e-3, 3e-3):
        res = pointwise_experiment(n, spec, eps, LaplacianKind.BISTOCH_UN, seed=0)
        print(f"{eps:9.1e} {res.relerr2:9.4f} {res.relerrinf:10.4f} "
              f"{res.sk_iters:9d}")
    print()
    print("the middle bandwidth balances variance (small eps) against")
    print("bias (large eps); the scaling needs only a few iterations")


if __name__ == "__main__":
    main()
