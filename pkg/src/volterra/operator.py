"""The integral operator, its derivative, and the least-squares functional.

V(x)(t) = x(t) + integral over [alpha, t] of v(t, tau, x(tau)).  The
least-squares functional is evaluated in the derivative norm through the
analytic expansion

    d/dt V(x)(t) = x'(t) + v(t, t, x(t)) + integral of v_t(t, tau, x(tau)),

never by differencing apply_V output: the expansion keeps quadrature
away from the diagonal singularity of v_t and makes the directional
derivative of the discrete functional exact rather than approximate.
"""

from __future__ import annotations

import numpy as np

from .errors import DimMismatch, GridMismatch
from .function_space import GridFunction
from .linear_solver import apply_T
from .quadrature import (
    cell_midpoint_values,
    cell_quarter_values,
    inner_integral,
    inner_matvec_integral,
    mid_pairs,
    node_integral,
    quarter_nodes,
)


def _require_same(a: GridFunction, b: GridFunction):
    if a.grid != b.grid:
        raise GridMismatch(f"{a.grid} vs {b.grid}")
    if a.dim != b.dim:
        raise DimMismatch(f"dim {a.dim} vs {b.dim}")


def _require_kernel_dim(kernel, x: GridFunction):
    if kernel.dim != x.dim:
        raise DimMismatch(f"kernel dim {kernel.dim} vs function dim {x.dim}")


def apply_V(kernel, x: GridFunction) -> GridFunction:
    """Evaluate the operator at the nodes.

    The integral to t_i samples the i cell midpoints, so the integrand
    is never evaluated on the diagonal and the result vanishes at alpha
    by construction.
    """
    _require_kernel_dim(kernel, x)
    vals = node_integral(kernel.v, x.grid, x.values)
    return GridFunction(x.grid, x.values + vals)


def apply_V_dt(kernel, x: GridFunction) -> np.ndarray:
    """Cell-midpoint samples of d/dt V(x); shape (n_cells, dim).

    Per cell i: the difference-quotient slope of x, plus the diagonal
    value v(m_i, m_i, x(m_i)), plus the quadrature of v_t over
    [alpha, m_i] (full cells at their midpoints, the trailing half cell
    at t_i + delta/4).
    """
    _require_kernel_dim(kernel, x)
    grid = x.grid
    slope = np.diff(x.values, axis=0) / grid.delta
    xm = cell_midpoint_values(x.values)
    diag = np.asarray(kernel.v(grid.midpoints, grid.midpoints, xm), float)
    return slope + diag + inner_integral(kernel.v_t, grid, x.values)


def frechet_apply(kernel, x0: GridFunction, h: GridFunction) -> GridFunction:
    """Derivative of the operator at x0 applied to h: h + T h."""
    return h + apply_T(kernel, x0, h)


def frechet_dt(kernel, x0: GridFunction, h: GridFunction) -> np.ndarray:
    """Cell-midpoint samples of d/dt (V'(x0) h); shape (n_cells, dim).

    Mirrors apply_V_dt with v_x on the diagonal and v_tx under the
    integral.
    """
    _require_same(x0, h)
    _require_kernel_dim(kernel, x0)
    grid = x0.grid
    slope = np.diff(h.values, axis=0) / grid.delta
    xm = cell_midpoint_values(x0.values)
    hm = cell_midpoint_values(h.values)
    diag_mat = np.asarray(kernel.v_x(grid.midpoints, grid.midpoints, xm), float)
    diag = np.einsum("pab,pb->pa", diag_mat, hm)
    inner = inner_matvec_integral(kernel.v_tx, grid, x0.values, h.values)
    return slope + diag + inner


def _dy(y: GridFunction) -> np.ndarray:
    return np.diff(y.values, axis=0) / y.grid.delta


def functional_F(kernel, x: GridFunction, y: GridFunction) -> float:
    """Half the squared derivative-norm defect of V(x) against y."""
    _require_same(x, y)
    r = apply_V_dt(kernel, x) - _dy(y)
    return float(0.5 * x.grid.delta * (r * r).sum())


def directional_dF(kernel, x: GridFunction, y: GridFunction,
                   h: GridFunction) -> float:
    """Exact directional derivative of the discrete functional at x.

    Differentiates the quadrature formula itself, so central finite
    differences of functional_F reproduce it to truncation error.
    """
    _require_same(x, y)
    _require_same(x, h)
    D = apply_V_dt(kernel, x) - _dy(y)
    S = frechet_dt(kernel, x, h)
    return float(x.grid.delta * (D * S).sum())


def functional_gradient(kernel, x: GridFunction, y: GridFunction) -> np.ndarray:
    """Euclidean gradient of the discrete functional in node values.

    Shape (n_cells + 1, dim); row 0 is zero since the anchored value is
    not a degree of freedom.  Satisfies <gradient, h.values> =
    directional_dF(..., h) exactly.
    """
    _require_same(x, y)
    _require_kernel_dim(kernel, x)
    grid = x.grid
    N, n, d = grid.n_cells, x.dim, grid.delta
    D = apply_V_dt(kernel, x) - _dy(y)

    g = np.zeros((N + 1, n))
    # Slope term: dD_i picks up (dv_{i+1} - dv_i)/delta, weighted by delta D_i.
    g[1:] += D
    g[:-1] -= D

    xm = cell_midpoint_values(x.values)
    diag_mat = np.asarray(kernel.v_x(grid.midpoints, grid.midpoints, xm), float)
    w_diag = 0.5 * d * np.einsum("pba,pb->pa", diag_mat, D)
    g[:-1] += w_diag
    g[1:] += w_diag

    i_idx, j_idx = mid_pairs(N)
    if i_idx.size:
        mats = np.asarray(
            kernel.v_tx(grid.midpoints[i_idx], grid.midpoints[j_idx], xm[j_idx]), float
        )
        w_full = 0.5 * d * d * np.einsum("pba,pb->pa", mats, D[i_idx])
        np.add.at(g, j_idx, w_full)
        np.add.at(g, j_idx + 1, w_full)

    xq = cell_quarter_values(x.values)
    mats_q = np.asarray(kernel.v_tx(grid.midpoints, quarter_nodes(grid), xq), float)
    w_half = 0.5 * d * d * np.einsum("pba,pb->pa", mats_q, D)
    g[:-1] += 0.75 * w_half
    g[1:] += 0.25 * w_half

    g[0] = 0.0
    return g
