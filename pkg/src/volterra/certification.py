"""Numerical certification of the well-posedness conditions.

Two sufficient conditions are checked, named A3 and A4 in reports.  A3
applies to kernels vanishing on the diagonal and requires the declared
majorant c0 of the time derivative to satisfy

    ||c0||_{L2(triangle)} < sqrt(2) / (2 (beta - alpha)),

strictly.  A4 drops the diagonal requirement and instead bounds the
combined majorant

    ctilde(t) = sqrt(t - alpha) c1(t)
                + (beta - alpha)/sqrt(2) * (integral of c2(t, .)^2)^(1/2)

by ||ctilde||_{L2} < 1/2, strictly.  Margins are threshold minus norm;
a margin of exactly zero fails.  All integrals run on the shared
triangle quadrature, on the same nodes the operator module uses, so the
derived coercivity constants transfer to the discrete functional without
quadrature slack.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import MissingBounds
from .function_space import Grid
from .kernels import KernelSpec
from .quadrature import inner_scalar_integral, triangle_integral

_DIAG_SAMPLES = 50
_DIAG_ATOL = 1e-10


@dataclass(frozen=True)
class HypothesisReport:
    """Outcome of one certification check.

    passed holds iff margin > 0 and, for the A3 variant, the diagonal
    sampling found no violation.  samples_used counts every kernel or
    bound evaluation that fed the verdict, for auditability.
    """

    variant: str
    diagonal_zero_ok: bool
    norm_value: float
    threshold: float
    margin: float
    passed: bool
    samples_used: int

    def to_dict(self) -> dict:
        return {
            "variant": self.variant,
            "diagonal_zero_ok": self.diagonal_zero_ok,
            "norm_value": self.norm_value,
            "threshold": self.threshold,
            "margin": self.margin,
            "passed": self.passed,
            "samples_used": self.samples_used,
        }


def _sample_diagonal(kernel: KernelSpec, grid: Grid) -> tuple[bool, int]:
    """Max |v(t, t, x)| over a t-lattice times an x-lattice (or ball)."""
    t = np.linspace(grid.alpha, grid.beta, _DIAG_SAMPLES)
    if kernel.dim == 1:
        xs = np.linspace(-10.0, 10.0, _DIAG_SAMPLES)[:, None]
    else:
        rng = np.random.default_rng(0)
        xs = rng.standard_normal((_DIAG_SAMPLES, kernel.dim))
        mags = np.sqrt((xs * xs).sum(axis=1, keepdims=True))
        xs *= 10.0 * rng.uniform(0, 1, size=(_DIAG_SAMPLES, 1)) / np.maximum(mags, 1e-30)
    tt = np.repeat(t, _DIAG_SAMPLES)
    xx = np.tile(xs, (_DIAG_SAMPLES, 1))
    vals = np.asarray(kernel.v(tt, tt, xx), float)
    ok = bool(np.abs(vals).max() <= _DIAG_ATOL)
    return ok, tt.size


def check_A3(kernel: KernelSpec, grid: Grid) -> HypothesisReport:
    """Certify the diagonal-vanishing condition on the given grid.

    Needs declared bounds c0, d0 (MissingBounds otherwise).  norm_value
    is the triangle L2 norm of c0 by midpoint product quadrature;
    the diagonal condition is verified by direct sampling of v(t, t, x).
    """
    b = kernel.bounds
    if b is None or b.c0 is None or b.d0 is None:
        raise MissingBounds(f"kernel {kernel.name} declares no c0/d0 bounds")
    diag_ok, n_diag = _sample_diagonal(kernel, grid)
    c0 = b.c0
    norm_sq = triangle_integral(lambda t, tau: np.asarray(c0(t, tau), float) ** 2, grid)
    norm_value = math.sqrt(max(norm_sq, 0.0))
    threshold = math.sqrt(2.0) / (2.0 * grid.length)
    margin = threshold - norm_value
    n_quad = grid.n_cells * (grid.n_cells - 1) // 2 + grid.n_cells
    return HypothesisReport(
        variant="A3",
        diagonal_zero_ok=diag_ok,
        norm_value=norm_value,
        threshold=threshold,
        margin=margin,
        passed=bool(margin > 0 and diag_ok),
        samples_used=n_diag + n_quad,
    )


def _ctilde_at_midpoints(kernel: KernelSpec, grid: Grid) -> np.ndarray:
    b = kernel.bounds
    c1, c2 = b.c1, b.c2
    inner = inner_scalar_integral(
        lambda t, tau: np.asarray(c2(t, tau), float) ** 2, grid
    )
    root = np.sqrt(grid.midpoints - grid.alpha) * np.asarray(c1(grid.midpoints), float)
    return root + grid.length / math.sqrt(2.0) * np.sqrt(np.maximum(inner, 0.0))


def check_A4(kernel: KernelSpec, grid: Grid) -> HypothesisReport:
    """Certify the diagonal-growth condition on the given grid.

    Needs declared bounds c1, d1, c2, d2 (MissingBounds otherwise).
    ctilde is assembled at the cell midpoints with the shared inner
    quadrature; norm_value is its outer-midpoint L2 norm, checked
    against the threshold 1/2.
    """
    b = kernel.bounds
    if b is None or any(f is None for f in (b.c1, b.d1, b.c2, b.d2)):
        raise MissingBounds(f"kernel {kernel.name} declares no c1/d1/c2/d2 bounds")
    ct = _ctilde_at_midpoints(kernel, grid)
    norm_value = math.sqrt(float(grid.delta * (ct * ct).sum()))
    threshold = 0.5
    margin = threshold - norm_value
    n_quad = grid.n_cells * (grid.n_cells - 1) // 2 + 2 * grid.n_cells
    return HypothesisReport(
        variant="A4",
        diagonal_zero_ok=kernel.diagonal_zero,
        norm_value=norm_value,
        threshold=threshold,
        margin=margin,
        passed=bool(margin > 0),
        samples_used=n_quad,
    )


def coercivity_constants(kernel: KernelSpec, grid: Grid) -> tuple[float, float]:
    """Discrete coercivity pair (||ctilde||, ||dtilde||) for the functional.

    For kernels declaring only c0/d0 (diagonal-vanishing style), those
    play the roles of c2/d2 with c1 = d1 = 0.  Evaluation runs on the
    operator module's quadrature nodes; with these constants

        F_0(x) >= (1/2 - ||ctilde||) ||x||^2 - ||dtilde|| ||x||

    holds for the discrete functional up to rounding.
    """
    b = kernel.bounds
    if b is None:
        raise MissingBounds(f"kernel {kernel.name} declares no bounds")
    if b.c1 is not None and b.c2 is not None:
        c1, c2 = b.c1, b.c2
        d1 = b.d1 if b.d1 is not None else (lambda t: np.zeros(np.shape(t)))
        d2 = b.d2 if b.d2 is not None else (lambda t, tau: np.zeros(np.broadcast_shapes(np.shape(t), np.shape(tau))))
    elif b.c0 is not None and b.d0 is not None:
        if not kernel.diagonal_zero:
            raise MissingBounds(
                f"kernel {kernel.name} declares only c0/d0 but is not diagonal-zero"
            )
        c1 = lambda t: np.zeros(np.shape(t))
        d1 = lambda t: np.zeros(np.shape(t))
        c2, d2 = b.c0, b.d0
    else:
        raise MissingBounds(f"kernel {kernel.name} bounds are incomplete")

    inner_c = inner_scalar_integral(lambda t, tau: np.asarray(c2(t, tau), float) ** 2, grid)
    ct = np.sqrt(grid.midpoints - grid.alpha) * np.asarray(c1(grid.midpoints), float) \
        + grid.length / math.sqrt(2.0) * np.sqrt(np.maximum(inner_c, 0.0))
    dt = np.asarray(d1(grid.midpoints), float) \
        + inner_scalar_integral(lambda t, tau: np.asarray(d2(t, tau), float), grid)
    c_norm = math.sqrt(float(grid.delta * (ct * ct).sum()))
    d_norm = math.sqrt(float(grid.delta * (dt * dt).sum()))
    return c_norm, d_norm


def check_example1(a_bar: float) -> HypothesisReport:
    """Closed-form admissibility of the logarithmic kernel on [0, 1].

    The triangle L2 norm of its c0 is sqrt(4/35) |a_bar| exactly, so the
    condition reduces to a_bar^2 < 35/8, checked in exact arithmetic.
    """
    norm_value = 2.0 * abs(float(a_bar)) / math.sqrt(35.0)
    threshold = math.sqrt(2.0) / 2.0
    margin = threshold - norm_value
    return HypothesisReport(
        variant="A3",
        diagonal_zero_ok=True,
        norm_value=norm_value,
        threshold=threshold,
        margin=margin,
        passed=bool(margin > 0),
        samples_used=0,
    )


def check_example2(w_prime, A: float, T: float, grid: Grid) -> HypothesisReport:
    """Admissibility of the convolution kernel w(t - tau) z(x) on [0, T].

    Reports the double integral of w'(t - tau)^2 over the triangle in
    norm_value against the threshold 1 / (2 A^2 T^2); the certified
    condition is strict.  The grid must span [0, T].
    """
    if not (A > 0 and T > 0):
        raise ValueError(f"need A > 0 and T > 0, got A={A}, T={T}")
    if abs(grid.alpha) > 1e-12 or abs(grid.beta - T) > 1e-12 * max(1.0, T):
        raise ValueError(f"grid [{grid.alpha}, {grid.beta}] must span [0, {T}]")
    value = triangle_integral(
        lambda t, tau: np.asarray(w_prime(np.asarray(t, float) - tau), float) ** 2, grid
    )
    threshold = 1.0 / (2.0 * A * A * T * T)
    margin = threshold - value
    n_quad = grid.n_cells * (grid.n_cells - 1) // 2 + grid.n_cells
    return HypothesisReport(
        variant="A3",
        diagonal_zero_ok=True,
        norm_value=value,
        threshold=threshold,
        margin=margin,
        passed=bool(margin > 0),
        samples_used=n_quad,
    )
