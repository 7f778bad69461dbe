"""Solvers for the linearized equation h + T h = g.

T is the Volterra integral operator with kernel v_x(t, tau, x0(tau)).
Two routes are provided: a Neumann iteration h <- g - T h whose factorial
tail certificate gives an a-priori error bound, and a direct triangular
collocation solve.  Both discretize T identically, so they converge to
the same node values and can cross-check each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import qmc

from .errors import DimMismatch, GridMismatch, SingularBlock
from .function_space import GridFunction, ac_norm, sup_norm, zeros
from .kernels import KernelSpec, TriangularDomain
from .quadrature import cell_midpoint_values, node_matvec_integral, node_pairs


def _require_same(a: GridFunction, b: GridFunction):
    if a.grid != b.grid:
        raise GridMismatch(f"{a.grid} vs {b.grid}")
    if a.dim != b.dim:
        raise DimMismatch(f"dim {a.dim} vs {b.dim}")


def _require_kernel_dim(kernel: KernelSpec, x: GridFunction):
    if kernel.dim != x.dim:
        raise DimMismatch(f"kernel dim {kernel.dim} vs function dim {x.dim}")


def apply_T(kernel: KernelSpec, x0: GridFunction, g: GridFunction) -> GridFunction:
    """(T g)(t_i) = integral over [alpha, t_i] of v_x(t_i, tau, x0(tau)) g(tau)."""
    _require_same(x0, g)
    _require_kernel_dim(kernel, x0)
    vals = node_matvec_integral(kernel.v_x, x0.grid, x0.values, g.values)
    return GridFunction(x0.grid, vals)


@dataclass(frozen=True)
class NeumannBound:
    """Constants of the factorial iterate bound.

    With l_rho a local bound for the linearized kernel, M = sup |g|,
    and the interval [alpha, beta]:

        C = sqrt(beta - alpha) * (1 + beta - alpha)
        D = C * M * l_rho
        A = l_rho * (beta - alpha)

    and the k-th Neumann term satisfies ||T^k g|| <= D A^(k-1) / (k-1)!.
    """

    l_rho: float
    M: float
    C: float
    D: float
    A: float

    def __post_init__(self):
        if self.l_rho < 0 or self.M < 0:
            raise ValueError("l_rho and M must be nonnegative")

    @classmethod
    def for_interval(cls, l_rho: float, M: float, alpha: float, beta: float) -> "NeumannBound":
        if not beta > alpha:
            raise ValueError("need beta > alpha")
        length = beta - alpha
        C = math.sqrt(length) * (1.0 + length)
        return cls(l_rho=float(l_rho), M=float(M), C=C,
                   D=C * float(M) * float(l_rho), A=float(l_rho) * length)


def iterate_bound(k: int, bound: NeumannBound) -> float:
    """Certified bound on ||T^k g||: D * A^(k-1) / (k-1)!."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    # Multiplicative evaluation keeps A = 0 and large k exact and overflow-free.
    term = bound.D
    for j in range(1, k):
        term *= bound.A / j
    return term


def tail_bound(k: int, bound: NeumannBound) -> float:
    """Sum of iterate_bound(j) over j > k."""
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    term = iterate_bound(k + 1, bound)
    total = term
    j = k + 1
    while term > 0 and j < k + 400:
        term *= bound.A / j
        total += term
        if term < 1e-18 * max(total, 1.0):
            break
        j += 1
    return total


def estimate_l_rho(kernel: KernelSpec, rho: float, samples: int,
                   domain: TriangularDomain | None = None,
                   include_time_derivative: bool = False) -> float:
    """Estimate the local bound l_rho by low-discrepancy sampling.

    Takes the max of the spectral norm of v_x over a deterministic
    Halton sample of the triangle times the ball of radius rho, inflated
    by a fixed safety factor of 1.1.  With include_time_derivative the
    max also covers v_tx; the Neumann tail certificate needs that joint
    bound because the derivative norm of each term runs through v_tx.
    """
    if rho <= 0:
        raise ValueError("rho must be positive")
    if samples < 1:
        raise ValueError("samples must be positive")
    dom = domain or kernel.domain or TriangularDomain(0.0, 1.0)
    eng = qmc.Halton(d=2 + kernel.dim, scramble=False)
    u = eng.random(samples)
    t = dom.alpha + (dom.beta - dom.alpha) * u[:, 0]
    tau = dom.alpha + (t - dom.alpha) * u[:, 1]
    x = rho * (2.0 * u[:, 2:] - 1.0)
    mag = np.sqrt((x * x).sum(axis=1))
    over = mag > rho
    if np.any(over):
        x[over] *= (rho / mag[over])[:, None]

    def max_spectral(fn):
        mats = np.asarray(fn(t, tau, x), float)
        if kernel.dim == 1:
            return float(np.abs(mats[..., 0, 0]).max())
        return float(np.linalg.svd(mats, compute_uv=False)[..., 0].max())

    best = max_spectral(kernel.v_x)
    if include_time_derivative:
        best = max(best, max_spectral(kernel.v_tx))
    return 1.1 * best


@dataclass
class NeumannReport:
    iterations: int
    residual_ac: float
    tail_bound: float
    converged: bool
    l_rho: float
    tolerance: float

    def to_dict(self) -> dict:
        return {
            "iterations": self.iterations,
            "residual_ac": self.residual_ac,
            "tail_bound": self.tail_bound,
            "converged": self.converged,
            "l_rho": self.l_rho,
            "tolerance": self.tolerance,
        }


def neumann_solve(kernel: KernelSpec, x0: GridFunction, g: GridFunction,
                  tol: float, max_iter: int = 200,
                  samples: int = 2048) -> tuple[GridFunction, NeumannReport]:
    """Solve h + T h = g by the Neumann iteration h <- g - T h.

    Stops once the computed residual ||h + T h - g|| drops to tol or the
    a-priori factorial tail certifies the remaining gap is below tol.
    On max_iter exhaustion the report is returned with converged=False;
    no exception is raised.
    """
    _require_same(x0, g)
    _require_kernel_dim(kernel, x0)
    if tol <= 0:
        raise ValueError("tol must be positive")
    grid = g.grid
    tri = TriangularDomain(grid.alpha, grid.beta)
    l_rho = estimate_l_rho(kernel, rho=sup_norm(x0) + 1.0, samples=samples,
                           domain=tri, include_time_derivative=True)
    bound = NeumannBound.for_interval(l_rho, sup_norm(g), grid.alpha, grid.beta)

    h = zeros(grid, g.dim)
    Th = apply_T(kernel, x0, h)
    residual = math.inf
    m = 0
    for m in range(1, max_iter + 1):
        h = g - Th
        Th = apply_T(kernel, x0, h)
        residual = ac_norm(h + Th - g)
        apriori_gap = iterate_bound(m, bound) + tail_bound(m, bound)
        if residual <= tol or apriori_gap <= tol:
            break
    report = NeumannReport(
        iterations=m,
        residual_ac=float(residual),
        tail_bound=tail_bound(m, bound),
        converged=bool(residual <= tol),
        l_rho=l_rho,
        tolerance=tol,
    )
    return h, report


def collocation_solve(kernel: KernelSpec, x0: GridFunction,
                      g: GridFunction) -> GridFunction:
    """Direct triangular solve of the discrete system h + T h = g.

    Forward substitution over nodes; the only inversions are the
    (dim x dim) diagonal blocks I + delta/2 * v_x(t_i, m_{i-1}, x0).
    The discrete equations are satisfied to rounding, so the residual
    measured with apply_T is at machine level.
    """
    _require_same(x0, g)
    _require_kernel_dim(kernel, x0)
    grid = g.grid
    N, n, d = grid.n_cells, g.dim, grid.delta
    x0m = cell_midpoint_values(x0.values)
    i_idx, j_idx = node_pairs(N)
    W = np.zeros((N + 1, N, n, n))
    W[i_idx, j_idx] = kernel.v_x(grid.nodes[i_idx], grid.midpoints[j_idx], x0m[j_idx])

    h = np.zeros((N + 1, n))
    eye = np.eye(n)
    for i in range(1, N + 1):
        rhs = g.values[i].copy()
        if i >= 2:
            hm = 0.5 * (h[: i - 1] + h[1:i])
            rhs -= d * np.einsum("jab,jb->a", W[i, : i - 1], hm)
        rhs -= 0.5 * d * (W[i, i - 1] @ h[i - 1])
        block = eye + 0.5 * d * W[i, i - 1]
        if abs(np.linalg.det(block)) < 1e-14:
            raise SingularBlock(
                f"diagonal block at node {i} is singular; refine the grid"
            )
        h[i] = np.linalg.solve(block, rhs)
    return GridFunction(grid, h)
