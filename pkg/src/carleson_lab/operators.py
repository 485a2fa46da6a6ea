"""Kernels on the disk, their discretizations, and norm estimation.

The two built-in kernel families are the fractional Cauchy kernels
``1 / (1 - z conj(w))**alpha`` and the logarithmic kernel
``log(1 / (1 - z conj(w))) / (z conj(w))`` whose power series is
``sum x**n / (n + 1)``; the latter reproduces the analytic functions with
norm ``sum (n+1) |a_n|^2``.  Operators against a discrete measure are
plain dense matrices; their norm on the mass-weighted square-summable
space is estimated by power iteration (dense eigensolves stay available
as an oracle for small sizes).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .measures import DiskQuadrature, SampledFunction

_SERIES_SWITCH = 0.5
_SERIES_TERMS = 64
_CUSTOM_SERIES_CAP = 10_000


@dataclass(frozen=True)
class KernelSpec:
    """One of the supported positive-definite kernel families."""

    kind: str  # "k_alpha" | "dirichlet" | "custom-series"
    alpha: float = 1.0
    coefficients: tuple = ()

    @staticmethod
    def k_alpha(alpha: float) -> "KernelSpec":
        if alpha <= 0:
            raise ValueError(f"alpha must be positive, got {alpha}")
        return KernelSpec(kind="k_alpha", alpha=float(alpha))

    @staticmethod
    def dirichlet() -> "KernelSpec":
        return KernelSpec(kind="dirichlet")

    @staticmethod
    def custom_series(coefficients) -> "KernelSpec":
        coeffs = tuple(float(c) for c in coefficients)
        if len(coeffs) > _CUSTOM_SERIES_CAP:
            raise ValueError(f"custom series capped at {_CUSTOM_SERIES_CAP} terms")
        return KernelSpec(kind="custom-series", coefficients=coeffs)

    @property
    def hermitian(self) -> bool:
        # All supported families have real series coefficients, hence
        # k(z, w) = conj(k(w, z)).
        return True

    def series_coefficients(self, n_terms: int) -> np.ndarray:
        """First ``n_terms`` power-series coefficients in ``x = z conj(w)``."""
        n = np.arange(n_terms, dtype=float)
        if self.kind == "dirichlet":
            return 1.0 / (n + 1.0)
        if self.kind == "k_alpha":
            coeffs = np.empty(n_terms)
            coeffs[0] = 1.0
            for k in range(1, n_terms):
                coeffs[k] = coeffs[k - 1] * (k - 1 + self.alpha) / k
            return coeffs
        out = np.zeros(n_terms)
        got = np.asarray(self.coefficients)[:n_terms]
        out[: got.size] = got
        return out


def _dirichlet_values(x: np.ndarray) -> np.ndarray:
    """``sum x**n / (n+1)`` via the series for small ``|x|``, the closed
    form ``log(1/(1-x)) / x`` otherwise; the removable point is 1."""
    x = np.asarray(x, dtype=complex)
    out = np.empty_like(x)
    small = np.abs(x) <= _SERIES_SWITCH
    xs = x[small]
    acc = np.full_like(xs, 1.0 / _SERIES_TERMS)
    for n in range(_SERIES_TERMS - 2, -1, -1):
        acc = acc * xs + 1.0 / (n + 1.0)
    out[small] = acc
    xl = x[~small]
    out[~small] = -np.log(1.0 - xl) / xl
    return out


def eval_kernel(spec: KernelSpec, z, w) -> np.ndarray | complex:
    """Kernel value at points (or arrays of points) strictly inside the disk."""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    x = z * np.conj(w)
    if spec.kind == "k_alpha":
        if spec.alpha == 1.0:
            out = 1.0 / (1.0 - x)
        elif spec.alpha == 2.0:
            out = 1.0 / (1.0 - x)
            out *= out
        else:
            out = np.exp(-spec.alpha * np.log(1.0 - x))
    elif spec.kind == "dirichlet":
        out = _dirichlet_values(x)
    else:
        # finite user series, evaluated exactly by Horner
        coeffs = np.asarray(spec.coefficients)
        out = np.zeros_like(x)
        for c in coeffs[::-1]:
            out = out * x + c
    if out.ndim == 0:
        return complex(out)
    return out


@dataclass(frozen=True)
class DiscreteMeasure:
    """Finitely many atoms strictly inside the disk, all with positive mass."""

    points: np.ndarray
    masses: np.ndarray

    def __post_init__(self) -> None:
        points = np.asarray(self.points, dtype=complex).ravel()
        masses = np.asarray(self.masses, dtype=float).ravel()
        if points.size == 0:
            raise ValueError("a discrete measure needs at least one atom")
        if points.size != masses.size:
            raise ValueError("points and masses must have equal length")
        if np.any(masses <= 0):
            raise ValueError("atom masses must be positive")
        if np.any(np.abs(points) >= 1.0):
            raise ValueError("atoms must lie strictly inside the disk")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "masses", masses)

    @property
    def size(self) -> int:
        return self.points.size


@dataclass(frozen=True)
class OperatorMatrix:
    """A kernel sampled on atoms, acting on the mass-weighted space.

    The action is ``(Tf)_i = sum_j A[i, j] f_j mass_j`` and norms are taken
    in ``l^2(mass)``.
    """

    matrix: np.ndarray
    masses: np.ndarray
    hermitian: bool

    @property
    def size(self) -> int:
        return self.masses.size

    def weighted(self) -> np.ndarray:
        """Similar matrix ``D^1/2 A D^1/2`` whose plain 2-norm is the
        weighted operator norm."""
        root = np.sqrt(self.masses)
        return self.matrix * root[:, None] * root[None, :]


def assemble_operator(spec: KernelSpec, m: DiscreteMeasure) -> OperatorMatrix:
    """Dense matrix ``A[i, j] = k(z_i, z_j)`` over the measure's atoms."""
    a = eval_kernel(spec, m.points[:, None], m.points[None, :])
    return OperatorMatrix(matrix=np.asarray(a), masses=m.masses, hermitian=spec.hermitian)


def real_part_operator(a: OperatorMatrix) -> OperatorMatrix:
    """Entrywise real part; hermitian input becomes real symmetric."""
    return OperatorMatrix(
        matrix=np.real(a.matrix).astype(float), masses=a.masses, hermitian=a.hermitian
    )


@dataclass(frozen=True)
class NormEstimate:
    value: float
    iterations: int
    residual: float
    converged: bool


def operator_norm(
    a: OperatorMatrix,
    tol: float = 1e-8,
    max_iter: int = 10_000,
    seed: int = 20260810,
) -> NormEstimate:
    """Weighted operator norm by power iteration on ``B* B``.

    The start vector is drawn from a seeded generator so runs are
    reproducible; non-convergence is reported through the residual flag
    rather than raised.
    """
    b = a.weighted()
    n = a.size
    if n == 0:
        return NormEstimate(0.0, 0, 0.0, True)
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    v /= np.linalg.norm(v)
    bh = b.conj().T
    sigma_old = 0.0
    for it in range(1, max_iter + 1):
        u = b @ v
        v = bh @ u
        nv = np.linalg.norm(v)
        if nv == 0.0:
            return NormEstimate(0.0, it, 0.0, True)
        v /= nv
        sigma = float(np.sqrt(nv))
        residual = abs(sigma - sigma_old) / max(sigma, 1e-300)
        if residual <= tol:
            return NormEstimate(sigma, it, residual, True)
        sigma_old = sigma
    return NormEstimate(sigma, max_iter, residual, False)


def operator_norm_exact(a: OperatorMatrix) -> float:
    """Dense singular-value oracle for small matrices."""
    return float(np.linalg.norm(a.weighted(), 2))


@dataclass(frozen=True)
class SandwichReport:
    lower_ok: bool
    upper_ok: bool
    norm_full: float
    norm_real: float
    ratios: tuple[float, float]


def norm_sandwich_check(
    spec: KernelSpec,
    m: DiscreteMeasure,
    slack: float = 1e-9,
    exact_cutoff: int = 1024,
) -> SandwichReport:
    """Check ``|T_Re| <= |T| <= 2 |T_Re|`` on the discrete weighted space.

    Norms come from the dense singular-value oracle below the cutoff and
    from power iteration above it.
    """
    t_full = assemble_operator(spec, m)
    t_real = real_part_operator(t_full)
    if m.size <= exact_cutoff:
        n_full = operator_norm_exact(t_full)
        n_real = operator_norm_exact(t_real)
    else:
        n_full = operator_norm(t_full).value
        n_real = operator_norm(t_real).value
    lower_ok = n_real <= n_full * (1.0 + slack)
    upper_ok = n_full <= 2.0 * n_real * (1.0 + slack)
    ratios = (n_real / max(n_full, 1e-300), n_full / max(n_real, 1e-300))
    return SandwichReport(lower_ok, upper_ok, n_full, n_real, ratios)


def gram_psd_check(points, spec: KernelSpec) -> float:
    """Minimum eigenvalue of the kernel Gram matrix on the given points."""
    points = np.asarray(points, dtype=complex).ravel()
    gram = eval_kernel(spec, points[:, None], points[None, :])
    return float(np.linalg.eigvalsh(np.asarray(gram)).min())


# ---------------------------------------------------------------------------
# The Cauchy transform against area measure, and the analytic projection
# ---------------------------------------------------------------------------


def k1_matrix_apply(
    quad: DiskQuadrature, stacked_values: np.ndarray, eval_points=None,
    block: int = 1024,
) -> np.ndarray:
    """Apply the Cauchy-area transform to several functions in one pass.

    ``stacked_values`` has shape ``(n_cells,)`` or ``(n_cells, k)``; the
    kernel block is built once per block of evaluation points and shared
    across the columns, which is what makes multi-function checks cheap.
    """
    zs = quad.z if eval_points is None else np.asarray(eval_points, dtype=complex).ravel()
    vals = np.asarray(stacked_values, dtype=complex)
    squeeze = vals.ndim == 1
    if squeeze:
        vals = vals[:, None]
    fw = vals * quad.area[:, None]
    cu = np.conj(quad.z)
    out = np.empty((zs.size, fw.shape[1]), dtype=complex)
    for lo in range(0, zs.size, block):
        hi = min(lo + block, zs.size)
        out[lo:hi] = (1.0 / (1.0 - zs[lo:hi, None] * cu[None, :])) @ fw
    return out[:, 0] if squeeze else out


def apply_k1(
    f: SampledFunction,
    quad: DiskQuadrature,
    eval_points=None,
    block: int = 1024,
) -> np.ndarray:
    """``(K_1 f)(z) = sum_j f(u_j) / (1 - z conj(u_j)) * area_j``.

    Evaluates at ``eval_points`` (default: every cell center), in blocks to
    bound memory.
    """
    if f.quad is not quad:
        raise ValueError("sampled function does not live on the given quadrature")
    return k1_matrix_apply(quad, f.values, eval_points, block)


def apply_kernel(
    spec: KernelSpec,
    f: SampledFunction,
    quad: DiskQuadrature,
    eval_points=None,
    block: int = 1024,
) -> np.ndarray:
    """Quadrature apply of an arbitrary kernel: ``sum_j k(z, u_j) f_j a_j``."""
    if f.quad is not quad:
        raise ValueError("sampled function does not live on the given quadrature")
    zs = quad.z if eval_points is None else np.asarray(eval_points, dtype=complex).ravel()
    fw = f.values * quad.area
    out = np.empty(zs.size, dtype=complex)
    for lo in range(0, zs.size, block):
        hi = min(lo + block, zs.size)
        out[lo:hi] = eval_kernel(spec, zs[lo:hi, None], quad.z[None, :]) @ fw
    return out


def k1_projection_discrepancy(
    quad: DiskQuadrature,
    functions,
    eval_points,
    degree: int = 16,
) -> float:
    """Largest node discrepancy between ``K_1 f`` and ``K_1`` of the
    analytic projection of ``f``, over the given functions."""
    columns = []
    for fn in functions:
        f = SampledFunction.from_function(quad, fn)
        coeffs = bergman_project(f, quad, degree=degree)
        columns.append(f.values)
        columns.append(poly_eval(coeffs, quad.z))
    stacked = np.stack(columns, axis=1)
    images = k1_matrix_apply(quad, stacked, eval_points)
    diffs = images[:, 0::2] - images[:, 1::2]
    return float(np.max(np.abs(diffs)))


def bergman_project(f: SampledFunction, quad: DiskQuadrature, degree: int = 64) -> np.ndarray:
    """Monomial coefficients ``c_n = (n+1) <f, z^n>`` under normalized area.

    This is the analytic (Bergman) projection truncated at ``degree``; the
    monomials ``sqrt(n+1) z^n`` are orthonormal for the disk of unit area.
    """
    if degree < 0:
        raise ValueError("degree must be >= 0")
    powers = np.ones(quad.n_cells, dtype=complex)
    cu = np.conj(quad.z)
    fw = f.values * quad.area
    coeffs = np.empty(degree + 1, dtype=complex)
    for n in range(degree + 1):
        coeffs[n] = (n + 1.0) * np.sum(fw * powers)
        powers = powers * cu
    return coeffs


def poly_eval(coeffs, z) -> np.ndarray:
    """Evaluate ``sum c_n z**n`` (numpy-style Horner)."""
    z = np.asarray(z, dtype=complex)
    out = np.zeros_like(z)
    for c in np.asarray(coeffs)[::-1]:
        out = out * z + c
    return out


def factorization_check(m: DiscreteMeasure, quad: DiskQuadrature) -> float:
    """Largest entry discrepancy between the composed Cauchy transforms
    and the logarithmic kernel matrix.

    The composition has kernel ``integral of dA(u) / ((1 - z conj(u)) (1 - u conj(w)))``
    which is evaluated here by quadrature in ``u`` and compared against the
    closed-form logarithmic kernel on the same atoms.
    """
    z = m.points
    left = 1.0 / (1.0 - z[:, None] * np.conj(quad.z)[None, :])  # (k, N)
    right = 1.0 / (1.0 - quad.z[:, None] * np.conj(z)[None, :])  # (N, k)
    composed = (left * quad.area[None, :]) @ right
    direct = eval_kernel(KernelSpec.dirichlet(), z[:, None], z[None, :])
    return float(np.max(np.abs(composed - direct)))
