"""Midpoint product quadrature on the causal triangle.

Every integral in the package is discretized with one family of rules:

* integrals from alpha to a node t_i sample the i full-cell midpoints
  m_j (weight delta each) and never touch tau = t;
* integrals from alpha to a cell midpoint m_i use those midpoints for
  the full cells below t_i plus the half cell [t_i, m_i] sampled at its
  own midpoint t_i + delta/4 (weight delta/2), so the closest sample
  stays a distance delta/4 from the diagonal;
* double integrals over the triangle combine the outer midpoints m_i
  (weight delta) with the inner rule above.

The certification module evaluates declared growth bounds on exactly
these nodes.  That alignment matters: it turns the discrete coercivity
inequality into a chain of Cauchy-Schwarz steps with no quadrature
slack, so it holds to rounding error for every grid.
"""

from __future__ import annotations

import numpy as np

from .function_space import Grid


def node_pairs(n_cells: int):
    """Indices (i, j) with j < i: node t_i against cell midpoint m_j."""
    return np.tril_indices(n_cells + 1, k=-1, m=n_cells)


def mid_pairs(n_cells: int):
    """Indices (i, j) with j < i: cell midpoint m_i against midpoint m_j."""
    return np.tril_indices(n_cells, k=-1)


def cell_midpoint_values(values: np.ndarray) -> np.ndarray:
    """Interpolate node values at cell midpoints; shape (N, dim)."""
    return 0.5 * (values[:-1] + values[1:])


def cell_quarter_values(values: np.ndarray) -> np.ndarray:
    """Interpolate node values at t_i + delta/4; shape (N, dim)."""
    return 0.75 * values[:-1] + 0.25 * values[1:]


def quarter_nodes(grid: Grid) -> np.ndarray:
    return grid.nodes[:-1] + 0.25 * grid.delta


def node_integral(f, grid: Grid, values: np.ndarray) -> np.ndarray:
    """Quadrature of f(t_i, tau, x(tau)) over [alpha, t_i] for all nodes.

    f follows the kernel evaluator convention and returns the value
    shape (dim,) per sample.  Output shape (N + 1, dim); row 0 is zero.
    """
    n = values.shape[1]
    out = np.zeros((grid.n_cells + 1, n))
    i_idx, j_idx = node_pairs(grid.n_cells)
    if i_idx.size:
        xm = cell_midpoint_values(values)
        vals = f(grid.nodes[i_idx], grid.midpoints[j_idx], xm[j_idx])
        np.add.at(out, i_idx, vals)
    return grid.delta * out


def node_matvec_integral(fmat, grid: Grid, values: np.ndarray,
                         hvalues: np.ndarray) -> np.ndarray:
    """Like node_integral for matrix-valued fmat applied to h(tau)."""
    n = hvalues.shape[1]
    out = np.zeros((grid.n_cells + 1, n))
    i_idx, j_idx = node_pairs(grid.n_cells)
    if i_idx.size:
        xm = cell_midpoint_values(values)
        hm = cell_midpoint_values(hvalues)
        mats = fmat(grid.nodes[i_idx], grid.midpoints[j_idx], xm[j_idx])
        np.add.at(out, i_idx, np.einsum("pab,pb->pa", mats, hm[j_idx]))
    return grid.delta * out


def inner_integral(f, grid: Grid, values: np.ndarray) -> np.ndarray:
    """Quadrature of f(m_i, tau, x(tau)) over [alpha, m_i] for all cells.

    Full cells below t_i are sampled at their midpoints, the trailing
    half cell at t_i + delta/4.  Output shape (N, dim).
    """
    n = values.shape[1]
    out = np.zeros((grid.n_cells, n))
    i_idx, j_idx = mid_pairs(grid.n_cells)
    if i_idx.size:
        xm = cell_midpoint_values(values)
        vals = f(grid.midpoints[i_idx], grid.midpoints[j_idx], xm[j_idx])
        np.add.at(out, i_idx, vals)
    out *= grid.delta
    xq = cell_quarter_values(values)
    out += 0.5 * grid.delta * f(grid.midpoints, quarter_nodes(grid), xq)
    return out


def inner_matvec_integral(fmat, grid: Grid, values: np.ndarray,
                          hvalues: np.ndarray) -> np.ndarray:
    """Like inner_integral for matrix-valued fmat applied to h(tau)."""
    n = hvalues.shape[1]
    out = np.zeros((grid.n_cells, n))
    i_idx, j_idx = mid_pairs(grid.n_cells)
    if i_idx.size:
        xm = cell_midpoint_values(values)
        hm = cell_midpoint_values(hvalues)
        mats = fmat(grid.midpoints[i_idx], grid.midpoints[j_idx], xm[j_idx])
        np.add.at(out, i_idx, np.einsum("pab,pb->pa", mats, hm[j_idx]))
    out *= grid.delta
    xq = cell_quarter_values(values)
    hq = cell_quarter_values(hvalues)
    mats_q = fmat(grid.midpoints, quarter_nodes(grid), xq)
    out += 0.5 * grid.delta * np.einsum("pab,pb->pa", mats_q, hq)
    return out


def inner_scalar_integral(f2, grid: Grid) -> np.ndarray:
    """Quadrature of f2(m_i, tau) over [alpha, m_i]; same nodes as
    inner_integral, for growth-bound integrands of (t, tau) alone."""
    out = np.zeros(grid.n_cells)
    i_idx, j_idx = mid_pairs(grid.n_cells)
    if i_idx.size:
        vals = np.asarray(f2(grid.midpoints[i_idx], grid.midpoints[j_idx]), float)
        np.add.at(out, i_idx, vals)
    out *= grid.delta
    out += 0.5 * grid.delta * np.asarray(f2(grid.midpoints, quarter_nodes(grid)), float)
    return out


def triangle_integral(f2, grid: Grid) -> float:
    """Double integral of f2(t, tau) over the causal triangle."""
    return float(grid.delta * inner_scalar_integral(f2, grid).sum())
