#!/usr/bin/env python3
"""The Cauchy-area transform, the analytic projection, and the log kernel.

Three facts drive the characterization of embedding weights:
  * the transform K_1 f = integral of f(w) / (1 - z conj(w)) only sees
    the analytic projection of f;
  * composing K_1 with its adjoint produces exactly the log kernel;
  * on monomials the log-kernel operator is diagonal with 1/(n+1)^2.
"""

import numpy as np

from carleson_lab import (
    DiscreteMeasure,
    KernelSpec,
    SampledFunction,
    apply_k1,
    bergman_project,
    build_quadrature,
    factorization_check,
)
from carleson_lab.operators import apply_kernel, k1_projection_discrepancy, poly_eval

quad = build_quadrature(10, angular_base=64)
rng = np.random.default_rng(2)
keep = np.flatnonzero(quad.r <= 0.9)
nodes = quad.z[rng.choice(keep, size=400, replace=False)]

print("== the transform fixes analytic monomials (divided by n+1) ==")
for n in (0, 1, 3):
    f = SampledFunction.from_function(quad, lambda z, n=n: z**n)
    out = apply_k1(f, quad, eval_points=nodes)
    err = np.max(np.abs(out - nodes**n / (n + 1)))
    print(f"K1(z^{n}) vs z^{n}/{n + 1}: max error {err:.2e}")

f = SampledFunction.from_function(quad, np.conj)
print(f"K1(conj z): max |value| {np.max(np.abs(apply_k1(f, quad, eval_points=nodes))):.2e}")

print("\n== analytic projection ==")
f = SampledFunction.from_function(quad, lambda z: np.abs(z) ** 2 + 0j)
coeffs = bergman_project(f, quad, degree=6)
print(f"projection of |z|^2: constant coefficient {coeffs[0].real:.6f} (exact 1/2)")
proj = SampledFunction(quad, poly_eval(coeffs, quad.z))
gap = np.max(np.abs(apply_k1(f, quad, eval_points=nodes) - apply_k1(proj, quad, eval_points=nodes)))
print(f"K1(f) vs K1(projection of f): max gap {gap:.2e}")
worst = k1_projection_discrepancy(
    quad,
    (lambda z: np.conj(z), lambda z: np.abs(z) ** 2 + 0j, lambda z: np.conj(z) * z**2),
    nodes,
)
print(f"same identity over the three standard probes: {worst:.2e}")

print("\n== composing the transform with its adjoint gives the log kernel ==")
for k in (2, 5):
    pts = np.sqrt(rng.uniform(0, 0.36, k)) * np.exp(1j * rng.uniform(0, 2 * np.pi, k))
    dm = DiscreteMeasure(pts, np.ones(k))
    print(f"{k} atoms: max entry discrepancy {factorization_check(dm, quad):.2e}")

print("\n== monomial diagonalization of the log-kernel operator ==")
zt = 0.6 * np.exp(1j * np.linspace(0.2, 6.0, 5))
for n in (0, 2, 8):
    f = SampledFunction(quad, quad.z**n)
    got = apply_kernel(KernelSpec.dirichlet(), f, quad, eval_points=zt)
    err = np.max(np.abs(got - zt**n / (n + 1) ** 2))
    print(f"T(z^{n}) vs z^{n}/(n+1)^2: max error {err:.2e}")
