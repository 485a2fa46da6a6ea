#!/usr/bin/env python3
"""Dyadic model operators and pointwise sparse domination.

The model operator of order alpha sums box averages scaled by
area(Q)^(-alpha/2) over one grid; adding the two shifted grids dominates
the modulus kernel 1/|1 - z conj(w)|^alpha pointwise, with a constant
measured by sweeping pairs through the common-box construction.
"""

import numpy as np

from carleson_lab import SampledFunction, build_quadrature, domination_check, dyadic_apply
from carleson_lab.dyadic import dense_abs_apply
from carleson_lab.geometry import GRIDS

quad = build_quadrature(8)
depth = 8

print("== the model operator counts boxes for flat input ==")
f1 = SampledFunction.constant(quad, 1.0)
out = dyadic_apply(GRIDS[0], 2.0, f1, quad, depth)
for target in (0.05, 0.75, 0.95):
    i = int(np.argmin(np.abs(quad.r - target)))
    print(
        f"|z| = {quad.r[i]:.3f}: value {out.values[i].real:.1f} "
        f"(= number of dyadic levels whose box reaches this depth)"
    )

print("\n== the measured domination constant ==")
for alpha in (1.0, 2.0):
    rep = domination_check(alpha, sample_pairs=10_000, depth=24, seed=20260810)
    print(
        f"alpha = {alpha:g}: c_hat = {rep.c_hat:.4f} over {rep.pairs} pairs, "
        f"{rep.failures} cover failures"
    )

print("\n== pointwise domination on sampled functions ==")
rng = np.random.default_rng(3)
nodes = quad.z
grid_z = np.broadcast_to(nodes[:, None], (nodes.size, nodes.size)).ravel()
grid_w = np.broadcast_to(nodes[None, :], (nodes.size, nodes.size)).ravel()
for alpha in (1.0, 2.0):
    rep = domination_check(
        alpha, sample_pairs=10_000, depth=depth, seed=20260810,
        extra_z=grid_z, extra_w=grid_w,
    )
    worst = 0.0
    for _ in range(10):
        f = SampledFunction(quad, rng.uniform(0.0, 1.0, quad.n_cells))
        lhs = dense_abs_apply(alpha, f, quad)
        rhs = sum(np.real(dyadic_apply(g, alpha, f, quad, depth).values) for g in GRIDS)
        worst = max(worst, float(np.max(lhs / rhs)))
    print(
        f"alpha = {alpha:g}: max pointwise ratio dense/dyadic = {worst:.3f}, "
        f"bound c_hat = {rep.c_hat:.3f}"
    )
print("the dense apply costs O(N^2); the dyadic one aggregates bottom-up in")
print("O(N) and still dominates it pointwise (see the bench subcommand)")
