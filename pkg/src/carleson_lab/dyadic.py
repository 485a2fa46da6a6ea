"""Dyadic model operators, tree mappings, and two-weight testing.

The model operator of order ``alpha`` on a grid replaces the kernel
``|1 - z conj(w)|**-alpha`` by a sum over grid boxes of
``area(Q)**(-alpha/2)`` times the box average of the input; summed over
the two shifted grids it dominates the continuous operator pointwise on
nonnegative functions.  Tree mappings send a function to its weighted
box averages; their strong and weak norms against the box-mass measure
``mass(Q)**t`` are what the embedding results control.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateWeightError, InfiniteMassError, ResolutionError
from .geometry import (
    GRIDS,
    TAU,
    Arc,
    CarlesonBox,
    DyadicIndex,
    bridge_box_batch,
    full_box_area,
)
from .measures import (
    DiskQuadrature,
    SampledFunction,
    Weight,
    box_level_sums,
    box_mass,
    box_mass_levels,
    dual_weight,
)


@dataclass(frozen=True)
class ExponentConfig:
    """Exponent bundle ``(p, q, alpha)`` with the derived quantities."""

    p: float
    q: float
    alpha: float

    def __post_init__(self) -> None:
        if not (1.0 < self.p <= self.q < math.inf):
            raise ValueError(f"need 1 < p <= q < inf, got p={self.p}, q={self.q}")
        if self.alpha <= 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")

    @property
    def p_prime(self) -> float:
        return self.p / (self.p - 1.0)

    @property
    def q_prime(self) -> float:
        return self.q / (self.q - 1.0)

    @property
    def t(self) -> float:
        return self.q / self.p


@dataclass(frozen=True)
class TreeFunction:
    """Values attached to every box of one grid up to a depth."""

    grid: float
    depth: int
    levels: tuple[np.ndarray, ...]

    def value(self, index: DyadicIndex) -> float:
        if index.grid != self.grid or index.level > self.depth:
            raise KeyError(f"{index} not stored in this tree")
        return float(self.levels[index.level][index.position])

    def flat(self) -> np.ndarray:
        return np.concatenate(self.levels)


def _positions_for_cells(quad: DiskQuadrature, grid: float, level: int) -> np.ndarray:
    """Grid position of each cell center at the given level."""
    t = np.mod(quad.theta / TAU - grid, 1.0)
    return np.minimum((t * 2**level).astype(np.int64), 2**level - 1)


def _max_level_for_cells(quad: DiskQuadrature, depth: int) -> np.ndarray:
    """Deepest level whose box can contain each cell center (radius rule)."""
    jmax = np.floor(-np.log2(1.0 - quad.r)).astype(np.int64)
    return np.minimum(jmax, depth)


def dyadic_apply(
    grid: float,
    alpha: float,
    f: SampledFunction,
    quad: DiskQuadrature,
    depth: int,
) -> SampledFunction:
    """Apply the dyadic model operator of order ``alpha`` on one grid.

    Box integrals are aggregated bottom-up by child sums in O(cells);
    the value at a cell is then the root-to-leaf prefix sum of
    ``area(Q)**(-alpha/2) * integral(Q)`` over the boxes containing it.
    """
    if depth > quad.depth:
        raise ResolutionError(f"depth {depth} exceeds quadrature depth {quad.depth}")
    sums = box_level_sums(quad, f.values * quad.area, grid, depth)
    prefix: list[np.ndarray] = []
    running = np.zeros(1, dtype=sums[0].dtype)
    for j in range(depth + 1):
        coef = full_box_area(2.0**-j) ** (-alpha / 2.0)
        running = np.repeat(running, 2)[: 2**j] if j > 0 else running
        running = running + coef * sums[j]
        prefix.append(running)
    jmax = _max_level_for_cells(quad, depth)
    out = np.zeros(quad.n_cells, dtype=sums[0].dtype)
    for j in range(depth + 1):
        sel = jmax == j
        if not sel.any():
            continue
        pos = _positions_for_cells(quad, grid, j)[sel]
        out[sel] = prefix[j][pos]
    return SampledFunction(quad, out)


def dyadic_kernel_matrix(
    grid: float, alpha: float, quad: DiskQuadrature, depth: int, z=None
) -> np.ndarray:
    """Dense kernel of the model operator between cell centers.

    Entry ``(i, j)`` is the sum of ``area(Q)**(-alpha/2)`` over boxes of
    the grid (levels up to ``depth``) containing both centers.  Meant for
    small quadratures; used by the domination and norm checks.
    """
    zs = quad.z if z is None else np.asarray(z, dtype=complex).ravel()
    r = np.abs(zs)
    theta = np.mod(np.angle(zs), TAU)
    jmax_rows = np.minimum(np.floor(-np.log2(1.0 - r)).astype(np.int64), depth)
    jmax_cols = _max_level_for_cells(quad, depth)
    out = np.zeros((zs.size, quad.n_cells))
    for j in range(depth + 1):
        coef = full_box_area(2.0**-j) ** (-alpha / 2.0)
        rows = jmax_rows >= j
        cols = jmax_cols >= j
        tpos = np.minimum(
            (np.mod(theta / TAU - grid, 1.0) * 2**j).astype(np.int64), 2**j - 1
        )
        cpos = _positions_for_cells(quad, grid, j)
        same = (tpos[:, None] == cpos[None, :]) & rows[:, None] & cols[None, :]
        out += coef * same
    return out


def dense_abs_apply(
    alpha: float, f: SampledFunction, quad: DiskQuadrature, eval_points=None,
    block: int = 512,
) -> np.ndarray:
    """``integral of f(w) / |1 - z conj(w)|**alpha`` by quadrature."""
    zs = quad.z if eval_points is None else np.asarray(eval_points, dtype=complex).ravel()
    fw = f.values * quad.area
    cu = np.conj(quad.z)
    out = np.empty(zs.size, dtype=float)
    for lo in range(0, zs.size, block):
        hi = min(lo + block, zs.size)
        kernel = np.abs(1.0 - zs[lo:hi, None] * cu[None, :]) ** (-alpha)
        out[lo:hi] = kernel @ np.real(fw)
    return out


@dataclass(frozen=True)
class DominationReport:
    c_hat: float
    failures: int
    pairs: int
    alpha: float
    depth: int


def domination_check(
    alpha: float,
    sample_pairs: int = 10_000,
    depth: int = 24,
    seed: int = 20260810,
    extra_z=None,
    extra_w=None,
) -> DominationReport:
    """Smallest constant witnessing the kernel bound over sampled pairs.

    For each pair a common box ``Q_L`` at level <= ``depth`` is produced by
    the bridging construction, and the report returns the largest value of
    ``area(Q_L)**(alpha/2) / |1 - z conj(w)|**alpha`` seen.  ``extra_z`` /
    ``extra_w`` append deterministic pairs (used to cover the node grids of
    the pointwise checks).  Failures count pairs with no covering box at an
    admissible level; the bridging construction makes that impossible by
    design, so the count should always be zero.
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    rng = np.random.default_rng(seed)
    z = np.sqrt(rng.uniform(0, 1, sample_pairs)) * np.exp(
        1j * rng.uniform(0, TAU, sample_pairs)
    )
    w = np.sqrt(rng.uniform(0, 1, sample_pairs)) * np.exp(
        1j * rng.uniform(0, TAU, sample_pairs)
    )
    if extra_z is not None:
        z = np.concatenate([z, np.asarray(extra_z, dtype=complex).ravel()])
        w = np.concatenate([w, np.asarray(extra_w, dtype=complex).ravel()])
    _, levels, _, ratio = bridge_box_batch(
        z, w, max_depth=depth, min_length=2.0**-depth
    )
    failures = int(np.sum(levels > depth))
    c_hat = float(np.max(ratio**alpha))
    return DominationReport(
        c_hat=c_hat, failures=failures, pairs=z.size, alpha=alpha, depth=depth
    )


# ---------------------------------------------------------------------------
# Tree mappings
# ---------------------------------------------------------------------------


def tree_averages(
    w: Weight,
    f: SampledFunction,
    grid: float,
    depth: int,
    quad: DiskQuadrature,
) -> tuple[TreeFunction, TreeFunction]:
    """Weighted box averages of ``f`` and box masses, per level.

    Returns ``(averages, masses)`` where ``averages.levels[j][m]`` is the
    mass-normalized integral of ``f`` against the weight over the level-j,
    position-m box.  Masses come from the same cell sums as the integrals,
    so a constant function averages to exactly 1 on every box.
    """
    masses = box_mass_levels(w, quad, grid, depth, force_quadrature=True)
    integrals = box_level_sums(
        quad, np.asarray(f.values) * np.real(w.density(quad.z)) * quad.area, grid, depth
    )
    avgs = []
    for j, (mass_j, int_j) in enumerate(zip(masses, integrals)):
        if np.any(mass_j <= 0.0):
            raise DegenerateWeightError(f"zero-mass box at level {j}")
        avgs.append(int_j / mass_j)
    return (
        TreeFunction(grid, depth, tuple(avgs)),
        TreeFunction(grid, depth, tuple(masses)),
    )


def tree_expectation(
    w: Weight, f: SampledFunction, index: DyadicIndex, quad: DiskQuadrature
) -> float:
    """Weighted average of ``f`` over one box (cell sums top and bottom)."""
    density = np.real(w.density(quad.z))
    mass_sums = box_level_sums(quad, density * quad.area, index.grid, index.level)
    mass = float(mass_sums[index.level][index.position])
    if mass <= 0.0:
        raise DegenerateWeightError(f"zero-mass box {index}")
    values = np.asarray(f.values) * density * quad.area
    sums = box_level_sums(quad, values, index.grid, index.level)
    return float(np.real(sums[index.level][index.position])) / mass


@dataclass(frozen=True)
class EmbeddingReport:
    c1_hat: float
    worst_box: DyadicIndex
    t: float
    depth: int
    tail_estimate: float
    per_grid: dict


def carleson_embedding_constant(
    w: Weight,
    t: float,
    depth: int,
    quad: DiskQuadrature | None = None,
    k_max_level: int | None = None,
    quadrature_masses: bool = False,
) -> EmbeddingReport:
    """Largest ratio ``sum over boxes inside Q_K of mass**t / mass(Q_K)**t``.

    Box sums run over levels up to ``depth``; outer boxes ``Q_K`` run over
    levels up to ``k_max_level`` (default ``depth // 2``).  A geometric
    tail estimate for the truncated inner sum is reported alongside.
    ``quadrature_masses`` forces cell-sum masses even for closed-form
    weights, matching the discrete measure used by the tree mappings.
    """
    if t < 1.0:
        raise ValueError(f"t must be >= 1, got {t}")
    if not w.finite:
        raise InfiniteMassError(f"weight {w.spec!r} has infinite mass")
    k_cap = depth // 2 if k_max_level is None else k_max_level

    best = -math.inf
    worst = DyadicIndex(GRIDS[0], 0, 0)
    tail = 0.0
    per_grid = {}
    for grid in GRIDS:
        if w.is_radial_power and not quadrature_masses:
            level_mass = np.array(
                [2.0**-j * w.outer_radial_mass(2.0**-j) for j in range(depth + 1)]
            )
            if np.any(level_mass <= 0.0):
                raise DegenerateWeightError("zero-mass dyadic box")
            powered = level_mass**t
            grid_best, grid_worst = -math.inf, DyadicIndex(grid, 0, 0)
            for k in range(min(k_cap, depth) + 1):
                counts = 2.0 ** np.arange(0, depth - k + 1)
                total = float(np.sum(counts * powered[k:]))
                ratio = total / powered[k]
                if ratio > grid_best:
                    grid_best = ratio
                    grid_worst = DyadicIndex(grid, k, 0)
            last_term = float(2.0 ** (depth - 0) * powered[depth] / powered[0])
            ratio_step = float(
                (2.0 * powered[depth] / powered[depth - 1]) if depth >= 1 else 0.0
            )
        else:
            if quad is None:
                raise ValueError("sampled weights need a quadrature")
            masses = box_mass_levels(
                w, quad, grid, depth, force_quadrature=quadrature_masses
            )
            powered = [m**t for m in masses]
            if any(np.any(m <= 0.0) for m in masses):
                raise DegenerateWeightError("zero-mass dyadic box")
            # Bottom-up: subtree sums of mass**t.
            subtree = [None] * (depth + 1)
            subtree[depth] = powered[depth].copy()
            for j in range(depth - 1, -1, -1):
                subtree[j] = powered[j] + subtree[j + 1][0::2] + subtree[j + 1][1::2]
            grid_best, grid_worst = -math.inf, DyadicIndex(grid, 0, 0)
            for k in range(min(k_cap, depth) + 1):
                ratios = subtree[k] / powered[k]
                m = int(np.argmax(ratios))
                if ratios[m] > grid_best:
                    grid_best = float(ratios[m])
                    grid_worst = DyadicIndex(grid, k, m)
            last_term = float(np.sum(powered[depth]) / powered[0][0])
            prev = float(np.sum(powered[depth - 1]) / powered[0][0]) if depth >= 1 else 0.0
            ratio_step = last_term / prev if prev > 0 else 0.0
        # Geometric tail: if per-level totals decay by factor rho, the
        # missing levels contribute about last * rho / (1 - rho).
        rho = min(ratio_step, 0.99)
        tail = max(tail, last_term * rho / (1.0 - rho) if rho < 1.0 else math.inf)
        per_grid[grid] = grid_best
        if grid_best > best:
            best = grid_best
            worst = grid_worst
    return EmbeddingReport(
        c1_hat=float(best),
        worst_box=worst,
        t=t,
        depth=depth,
        tail_estimate=float(tail),
        per_grid=per_grid,
    )


def weak_type_norm(
    w: Weight,
    t: float,
    f: SampledFunction,
    depth: int,
    quad: DiskQuadrature,
    per_grid: bool = False,
):
    """Weak norm of the tree of box averages against ``mass**t``.

    Computes ``sup over lambda of lambda * (sum of mass(Q)**t over boxes
    with average > lambda)**(1/t)``; the supremum over the attained
    averages is taken as the left limit at each level set.
    """
    if np.any(np.real(f.values) < 0):
        raise ValueError("weak-type norm expects a nonnegative function")
    results = {}
    for grid in GRIDS:
        avgs, masses = tree_averages(w, f, grid, depth, quad)
        e = np.real(avgs.flat())
        m = masses.flat()
        order = np.argsort(-e)
        e_sorted = e[order]
        prefix = np.cumsum(m[order] ** t)
        positive = e_sorted > 0
        if not positive.any():
            results[grid] = 0.0
            continue
        values = e_sorted[positive] * prefix[positive] ** (1.0 / t)
        results[grid] = float(np.max(values))
    if per_grid:
        return results
    return max(results.values())


def strong_embedding_check(
    w: Weight,
    cfg: ExponentConfig,
    f: SampledFunction,
    depth: int,
    quad: DiskQuadrature,
    per_grid: bool = False,
):
    """Ratio of the tree norm to the weighted input norm.

    Left side: ``(sum over boxes of mass**t * average**q)**(1/q)``; right
    side: ``(integral of |f|**p against the weight)**(1/p)``.  Returns 0
    for an identically zero input.
    """
    fv = np.real(np.asarray(f.values))
    if np.any(fv < 0):
        raise ValueError("strong embedding check expects a nonnegative function")
    right = float(
        np.sum(fv**cfg.p * w.density(quad.z) * quad.area) ** (1.0 / cfg.p)
    )
    if right == 0.0:
        return {g: 0.0 for g in GRIDS} if per_grid else 0.0
    results = {}
    for grid in GRIDS:
        avgs, masses = tree_averages(w, f, grid, depth, quad)
        e = np.real(avgs.flat())
        m = masses.flat()
        left = float(np.sum(m**cfg.t * e**cfg.q) ** (1.0 / cfg.q))
        results[grid] = left / right
    if per_grid:
        return results
    return max(results.values())


# ---------------------------------------------------------------------------
# Two-weight testing
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TestingConstantReport:
    sup_value: float
    worst_box: DyadicIndex | Arc
    dual_spec: str


def two_weight_testing_constant(
    nu: Weight,
    mu: Weight,
    cfg: ExponentConfig,
    depth: int = 16,
    quad: DiskQuadrature | None = None,
    random_arcs: int = 512,
    seed: int = 5,
) -> TestingConstantReport:
    """Supremum of ``mass_nu(Q)**(1/q) mass_dual(Q)**(1/p') / area(Q)**(alpha/2)``.

    The sweep covers both grids up to ``depth`` plus random arcs; the dual
    weight of ``mu`` must have finite mass.
    """
    dual = dual_weight(mu, cfg.p)
    if not dual.finite:
        raise InfiniteMassError(
            f"dual weight {dual.spec!r} has infinite mass; the testing constant "
            "is undefined"
        )
    if not nu.finite:
        raise InfiniteMassError(f"weight {nu.spec!r} has infinite mass")

    def value_for_length(lengths):
        lengths = np.asarray(lengths, dtype=float)
        area = full_box_area(lengths)
        m_nu = lengths * nu.outer_radial_mass(lengths)
        m_du = lengths * dual.outer_radial_mass(lengths)
        return (
            m_nu ** (1.0 / cfg.q)
            * m_du ** (1.0 / cfg.p_prime)
            / area ** (cfg.alpha / 2.0)
        )

    rng = np.random.default_rng(seed)
    if nu.is_radial_power and dual.is_radial_power:
        lengths = 2.0 ** -np.arange(0, depth + 1, dtype=float)
        lengths = np.concatenate([lengths, rng.uniform(0.0, 1.0, random_arcs)])
        lengths = lengths[lengths > 0]
        vals = value_for_length(lengths)
        k = int(np.argmax(vals))
        worst: DyadicIndex | Arc = Arc(0.0, float(lengths[k]))
        if k <= depth:
            worst = DyadicIndex(GRIDS[0], k, 0)
        return TestingConstantReport(float(vals[k]), worst, dual.spec)

    if quad is None:
        raise ValueError("sampled weights need a quadrature")
    depth = min(depth, quad.depth)
    best = -math.inf
    worst = DyadicIndex(GRIDS[0], 0, 0)
    for grid in GRIDS:
        m_nu = box_mass_levels(nu, quad, grid, depth)
        m_du = box_mass_levels(dual, quad, grid, depth)
        for j in range(depth + 1):
            area = full_box_area(2.0**-j)
            vals = (
                m_nu[j] ** (1.0 / cfg.q)
                * m_du[j] ** (1.0 / cfg.p_prime)
                / area ** (cfg.alpha / 2.0)
            )
            k = int(np.argmax(vals))
            if vals[k] > best:
                best = float(vals[k])
                worst = DyadicIndex(grid, j, k)
    for _ in range(random_arcs):
        length = float(rng.uniform(2.0**-depth, 1.0))
        arc = Arc(float(rng.uniform(0.0, TAU)), length)
        box = CarlesonBox(arc)
        val = (
            box_mass(nu, box, quad) ** (1.0 / cfg.q)
            * box_mass(dual, box, quad) ** (1.0 / cfg.p_prime)
            / full_box_area(length) ** (cfg.alpha / 2.0)
        )
        if val > best:
            best = float(val)
            worst = arc
    return TestingConstantReport(best, worst, dual.spec)


@dataclass(frozen=True)
class NormCheckLevel:
    depth: int
    cells: int
    dense_norm: float
    dyadic_norms: dict


@dataclass(frozen=True)
class NormCheckReport:
    levels: tuple[NormCheckLevel, ...]
    stabilized: bool
    method: str


def _weighted_kernel_matrix(kernel, quad, nu_density, mu_density):
    """Matrix whose 2-norm is the operator norm from L2(mu) to L2(nu)."""
    left = np.sqrt(nu_density * quad.area)
    right = np.where(mu_density > 0, quad.area / np.sqrt(mu_density * quad.area), 0.0)
    return kernel * left[:, None] * right[None, :]


def _two_norm_by_power(forward, adjoint, n, tol: float = 1e-6, max_iter: int = 500) -> float:
    rng = np.random.default_rng(314159)
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    v /= np.linalg.norm(v)
    sigma_old = 0.0
    sigma = 0.0
    for _ in range(max_iter):
        u = forward(v)
        v = adjoint(u)
        nv = np.linalg.norm(v)
        if nv == 0:
            return 0.0
        v /= nv
        sigma = math.sqrt(nv)
        if abs(sigma - sigma_old) <= tol * max(sigma, 1e-300):
            break
        sigma_old = sigma
    return float(sigma)


def _matrix_two_norm(b: np.ndarray, tol: float = 1e-6, max_iter: int = 500) -> float:
    bh = b.conj().T
    return _two_norm_by_power(
        lambda v: b @ v, lambda u: bh @ u, b.shape[1], tol, max_iter
    )


def _dyadic_weighted_norm(
    grid, alpha, quad, depth, nu_density, mu_density, tol=1e-6, max_iter=500
) -> float:
    """Weighted norm of the model operator, matrix-free via aggregation."""
    left = np.sqrt(nu_density * quad.area)
    right = np.where(mu_density > 0, quad.area / np.sqrt(mu_density * quad.area), 0.0)
    inv_area = 1.0 / quad.area

    def s_apply(v):
        f = SampledFunction(quad, v * inv_area)
        return dyadic_apply(grid, alpha, f, quad, depth).values

    return _two_norm_by_power(
        lambda v: left * s_apply(right * v),
        lambda u: right * s_apply(left * u),
        quad.n_cells,
        tol,
        max_iter,
    )


def two_weight_norm_check(
    nu: Weight,
    mu: Weight,
    cfg: ExponentConfig,
    quad_depths: tuple[int, ...] = (6, 8, 10),
    dyadic_depth: int | None = None,
    seed: int = 20260810,
    samples: int = 64,
    stabilize_rtol: float = 0.05,
) -> NormCheckReport:
    """Measured norms of the dense and dyadic operators across refinements.

    For ``p = q = 2`` norms come from power iteration on the weighted
    matrices; otherwise they are lower bounds from seeded unit-ball
    samples.  The verdict asks the dense estimates of the last two
    refinements to agree within ``stabilize_rtol``.
    """
    from .measures import build_quadrature  # local import to avoid cycle noise
    from .operators import KernelSpec, eval_kernel

    levels = []
    exact = cfg.p == 2.0 and cfg.q == 2.0
    rng = np.random.default_rng(seed)
    spec = KernelSpec.k_alpha(cfg.alpha)
    for d in quad_depths:
        quad = build_quadrature(d)
        depth = min(dyadic_depth if dyadic_depth is not None else d, quad.depth)
        nu_d = np.real(nu.density(quad.z))
        mu_d = np.real(mu.density(quad.z))
        n = quad.n_cells
        kernel = np.empty((n, n), dtype=complex)
        for lo in range(0, n, 1024):
            hi = min(lo + 1024, n)
            kernel[lo:hi] = eval_kernel(spec, quad.z[lo:hi, None], quad.z[None, :])
        if exact:
            dense = _matrix_two_norm(
                _weighted_kernel_matrix(kernel, quad, nu_d, mu_d)
            )
            dyadic = {
                grid: _dyadic_weighted_norm(grid, cfg.alpha, quad, depth, nu_d, mu_d)
                for grid in GRIDS
            }
        else:
            # Sampled lower bound on the L^p(mu) -> L^q(nu) norm.
            dense = 0.0
            dyadic = {g: 0.0 for g in GRIDS}
            s_mats = {
                g: dyadic_kernel_matrix(g, cfg.alpha, quad, depth) for g in GRIDS
            }
            for _ in range(samples):
                f = rng.standard_normal(quad.n_cells) + 1j * rng.standard_normal(
                    quad.n_cells
                )
                f[mu_d <= 0] = 0.0
                denom = float(
                    np.sum(np.abs(f) ** cfg.p * mu_d * quad.area) ** (1.0 / cfg.p)
                )
                if denom == 0:
                    continue
                f /= denom
                img = kernel @ (f * quad.area)
                dense = max(
                    dense,
                    float(
                        np.sum(np.abs(img) ** cfg.q * nu_d * quad.area)
                        ** (1.0 / cfg.q)
                    ),
                )
                for g in GRIDS:
                    img = s_mats[g] @ (f * quad.area)
                    dyadic[g] = max(
                        dyadic[g],
                        float(
                            np.sum(np.abs(img) ** cfg.q * nu_d * quad.area)
                            ** (1.0 / cfg.q)
                        ),
                    )
        levels.append(
            NormCheckLevel(
                depth=d, cells=quad.n_cells, dense_norm=float(dense), dyadic_norms=dyadic
            )
        )
    stabilized = False
    if len(levels) >= 2:
        a, b = levels[-2].dense_norm, levels[-1].dense_norm
        stabilized = abs(a - b) <= stabilize_rtol * max(abs(b), 1e-300)
    return NormCheckReport(
        levels=tuple(levels),
        stabilized=stabilized,
        method="power-iteration" if exact else "sampled-lower-bound",
    )
