"""Damped Newton and natural-gradient descent for V(x) = y.

Newton linearizes through the collocation solver; each step is damped by
backtracking on the least-squares functional.  The gradient route
descends the same functional along its Riesz representative in the
derivative inner product, which costs one tridiagonal solve per step and
avoids assembling any second derivative of the kernel.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solveh_banded

from .errors import LineSearchStalled, MaxIterExceeded
from .function_space import GridFunction, ac_norm, axpy, random_anchored
from .linear_solver import collocation_solve
from .operator import apply_V, directional_dF, functional_F, functional_gradient

_MIN_STEP = 2.0**-20


@dataclass
class SolveReport:
    method: str
    iterations: int
    residual_history: list
    functional_history: list
    converged: bool
    multistart_spread: float | None = None
    failed_starts: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "iterations": self.iterations,
            "residual_history": [float(r) for r in self.residual_history],
            "functional_history": [float(f) for f in self.functional_history],
            "converged": self.converged,
            "multistart_spread": self.multistart_spread,
            "failed_starts": list(self.failed_starts),
        }


def solve_newton(kernel, y: GridFunction, x_init: GridFunction | None = None,
                 tol: float = 1e-10, max_iter: int = 50
                 ) -> tuple[GridFunction, SolveReport]:
    """Solve V(x) = y; returns (solution, report).

    The default start is y itself: the operator is a compact
    perturbation of the identity, so y is already an O(||integral||)
    guess.  Raises MaxIterExceeded or LineSearchStalled with the partial
    report attached.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    x = x_init if x_init is not None else y
    r = y - apply_V(kernel, x)
    res = ac_norm(r)
    F = functional_F(kernel, x, y)
    report = SolveReport("newton", 0, [res], [F], False)

    for _ in range(max_iter):
        if res <= tol:
            report.converged = True
            return x, report
        delta = collocation_solve(kernel, x, r)
        s = 1.0
        while True:
            x_trial = axpy(s, delta, x)
            F_trial = functional_F(kernel, x_trial, y)
            if F_trial < F:
                break
            # F bottoms out at its quadrature-consistency floor slightly
            # away from the collocation solution; a trial that already
            # meets the residual tolerance is accepted regardless.
            if ac_norm(y - apply_V(kernel, x_trial)) <= tol:
                break
            s *= 0.5
            if s < _MIN_STEP:
                raise LineSearchStalled(
                    f"no decrease above step {_MIN_STEP}", report=report
                )
        x, F = x_trial, F_trial
        r = y - apply_V(kernel, x)
        res = ac_norm(r)
        report.iterations += 1
        report.residual_history.append(res)
        report.functional_history.append(F)

    if res <= tol:
        report.converged = True
        return x, report
    raise MaxIterExceeded(
        f"newton: residual {res:.3e} > tol {tol:.1e} after {max_iter} iterations",
        report=report,
    )


def _ac_riesz(grid, g_nodes: np.ndarray) -> GridFunction:
    # Solve the pinned-left stiffness system L a = g so that
    # <a, h>_AC = <g, h> for every direction h; L is tridiagonal.
    N = grid.n_cells
    d = grid.delta
    ab = np.zeros((2, N))
    ab[0, 1:] = -1.0 / d
    ab[1, :] = 2.0 / d
    ab[1, -1] = 1.0 / d
    a = solveh_banded(ab, g_nodes[1:], lower=False)
    vals = np.vstack([np.zeros((1, g_nodes.shape[1])), a])
    return GridFunction(grid, vals)


def solve_gradient(kernel, y: GridFunction, x_init: GridFunction | None = None,
                   tol: float = 1e-6, max_iter: int = 500
                   ) -> tuple[GridFunction, SolveReport]:
    """Minimize the least-squares functional by preconditioned descent.

    The descent direction is the negative gradient represented in the
    derivative inner product.  Convergence means F(x) <= tol^2.  Slower
    than Newton but needs no linear solves against the kernel.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    x = x_init if x_init is not None else y
    F = functional_F(kernel, x, y)
    res = ac_norm(y - apply_V(kernel, x))
    report = SolveReport("gradient", 0, [res], [F], False)
    ftol = tol * tol

    for _ in range(max_iter):
        if F <= ftol:
            report.converged = True
            return x, report
        g_nodes = functional_gradient(kernel, x, y)
        direction = -1.0 * _ac_riesz(x.grid, g_nodes)
        slope = directional_dF(kernel, x, y, direction)
        if slope >= 0:
            break  # numerically stationary; fall through to the final check
        s = 1.0
        F_trial = functional_F(kernel, axpy(s, direction, x), y)
        # One parabolic refinement from phi(0), phi'(0), phi(s).
        denom = F_trial - F - slope * s
        if denom > 0:
            s_star = -slope * s * s / (2.0 * denom)
            if 0 < s_star:
                F_star = functional_F(kernel, axpy(s_star, direction, x), y)
                if F_star < F_trial:
                    s, F_trial = s_star, F_star
        while F_trial >= F:
            s *= 0.5
            if s < _MIN_STEP:
                break
            F_trial = functional_F(kernel, axpy(s, direction, x), y)
        if F_trial >= F:
            break
        x, F = axpy(s, direction, x), F_trial
        res = ac_norm(y - apply_V(kernel, x))
        report.iterations += 1
        report.residual_history.append(res)
        report.functional_history.append(F)

    if F <= ftol:
        report.converged = True
        return x, report
    raise MaxIterExceeded(
        f"gradient: F {F:.3e} > tol^2 {ftol:.1e} after {report.iterations} iterations",
        report=report,
    )


def multistart_uniqueness(kernel, y: GridFunction, n_starts: int,
                          tol: float = 1e-10, max_iter: int = 80,
                          seed: int = 0, start_norm: float = 10.0
                          ) -> tuple[GridFunction | None, SolveReport]:
    """Probe uniqueness by Newton from scattered random starts.

    Starts are deterministic given seed: anchored Brownian draws with
    ac_norm spread uniformly up to start_norm.  The report carries the
    max pairwise distance among converged results in multistart_spread
    and marks failed starts instead of propagating their errors.
    """
    if n_starts < 2:
        raise ValueError("n_starts must be at least 2")
    rng = np.random.default_rng(seed)
    solutions = []
    report = SolveReport("newton", 0, [], [], False, multistart_spread=None)
    for start in range(n_starts):
        target = start_norm * rng.uniform(0.0, 1.0)
        x0 = random_anchored(y.grid, y.dim, rng, norm=target)
        try:
            x, rep = solve_newton(kernel, y, x_init=x0, tol=tol, max_iter=max_iter)
        except (MaxIterExceeded, LineSearchStalled):
            report.failed_starts.append(start)
            continue
        solutions.append(x)
        report.iterations += rep.iterations
        report.residual_history.append(rep.residual_history[-1])
        report.functional_history.append(rep.functional_history[-1])

    spread = 0.0
    for i in range(len(solutions)):
        for j in range(i + 1, len(solutions)):
            spread = max(spread, ac_norm(solutions[i] - solutions[j]))
    report.multistart_spread = spread
    report.converged = not report.failed_starts and bool(solutions)
    best = solutions[0] if solutions else None
    return best, report
