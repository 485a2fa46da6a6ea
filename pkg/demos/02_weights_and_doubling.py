#!/usr/bin/env python3
"""Weights on the disk and the doubling / reverse-doubling testers.

A weight is reverse doubling when no box concentrates all of its mass in
the outer half.  Area measure has constant 3/4; the weight (1 - |z|)
has 1/2; a density living only on a thin boundary shell fails.
"""

import numpy as np

from carleson_lab import (
    Arc,
    CarlesonBox,
    Weight,
    box_mass,
    build_quadrature,
    doubling_report,
    reverse_doubling_report,
)

print("== box masses ==")
leb, rp1 = Weight.lebesgue(), Weight.radial_power(1)
for length in (1.0, 0.5, 0.125):
    box = CarlesonBox(Arc(0.0, length))
    print(
        f"arc length {length:7g}: area mass {box_mass(leb, box):.6f}, "
        f"(1-|z|) mass {box_mass(rp1, box):.6f}"
    )

print("\n== reverse doubling ==")
for w in (leb, rp1, Weight.radial_power(3)):
    rep = reverse_doubling_report(w, depth=16)
    print(
        f"{w.spec:16s}: delta_hat = {rep.delta_hat:.6f} at arc length "
        f"{rep.worst_arc.length:.4f} -> {'reverse doubling' if rep.verdict else 'FAILS'}"
    )

# a density concentrated on the boundary shell is the canonical failure
r = np.linspace(0.025, 0.975, 20)
theta = np.linspace(0.1, 6.2, 16)
shell = Weight.from_grid(r, theta, np.where(r[:, None] > 0.95, 1.0, 1e-9) * np.ones((20, 16)))
rep = reverse_doubling_report(shell, depth=8, quad=build_quadrature(10), random_arcs=100)
print(f"boundary shell    : delta_hat = {rep.delta_hat:.6f} -> verdict {rep.verdict}")

print("\n== doubling (balls intersected with the disk) ==")
for w in (leb, rp1):
    rep = doubling_report(w, samples=150)
    print(
        f"{w.spec:16s}: sampled doubling constant {rep.c_hat:.3f} "
        f"(worst radius {rep.worst_radius:.3f})"
    )
print("for area measure the constant is the planar scaling factor 4;")
print("boundary clipping only ever lowers the outer mass")
