"""Kernel descriptions for the integral operator and its linearization.

A kernel bundles the integrand v(t, tau, x) with the three partial
derivatives the solvers consume (v_t, v_x, v_tx), optional growth-bound
metadata used by the certification module, and an optional triangular
domain restriction.

Evaluator convention
--------------------
Evaluators are numpy-vectorized over leading axes: t and tau are float
arrays of a common broadcast shape S, x has shape S + (dim,).  v and
v_t return shape S + (dim,); v_x and v_tx return S + (dim, dim).
Quadrature never samples tau = t, so evaluators whose time derivative is
singular on the diagonal (Example 1 below) are safe; they only need to
be finite on tau < t.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import KernelContract, OutsideTriangle
from .function_space import PREDICATE_SLACK

# |w(0)| above this is a contract violation for convolution kernels.
_W_ANCHOR_ATOL = 1e-10


@dataclass(frozen=True)
class TriangularDomain:
    """The causal triangle alpha <= tau <= t <= beta."""

    alpha: float
    beta: float

    def __post_init__(self):
        if not self.beta > self.alpha:
            raise ValueError(f"need beta > alpha, got [{self.alpha}, {self.beta}]")

    def contains(self, t: float, tau: float) -> bool:
        s = PREDICATE_SLACK
        return (self.alpha - s <= tau <= t + s) and (t <= self.beta + s)


@dataclass(frozen=True)
class GrowthBounds:
    """Declared majorants for certification; all fields optional.

    c0, d0 bound the time derivative, |v_t(t,tau,x)| <= c0(t,tau)|x| +
    d0(t,tau), for kernels vanishing on the diagonal.  c1, d1 bound the
    diagonal value |v(t,t,x)| <= c1(t)|x| + d1(t), and c2, d2 bound v_t
    in the same style as c0, d0.  Scalar-argument callables, vectorized.
    d0 and d2 may be integrably singular on the diagonal; quadrature
    keeps a distance of at least delta/4 from it.
    """

    c0: Optional[Callable] = None
    d0: Optional[Callable] = None
    c1: Optional[Callable] = None
    d1: Optional[Callable] = None
    c2: Optional[Callable] = None
    d2: Optional[Callable] = None


@dataclass(frozen=True)
class KernelSpec:
    dim: int
    v: Callable
    v_t: Callable
    v_x: Callable
    v_tx: Callable
    diagonal_zero: bool = False
    bounds: Optional[GrowthBounds] = None
    domain: Optional[TriangularDomain] = None
    name: str = "custom"

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be at least 1")


_WHICH = ("v", "vt", "vx", "vtx")


def eval_checked(kernel: KernelSpec, which: str, t: float, tau: float, x) -> np.ndarray:
    """Evaluate one kernel component with domain checking.

    which is one of 'v', 'vt', 'vx', 'vtx'.  Raises OutsideTriangle when
    tau > t or when (t, tau) leaves the kernel's declared domain.
    """
    if which not in _WHICH:
        raise ValueError(f"which must be one of {_WHICH}, got {which!r}")
    dom = kernel.domain or TriangularDomain(-math.inf, math.inf)
    if tau > t + PREDICATE_SLACK or not dom.contains(t, tau):
        raise OutsideTriangle(f"(t, tau) = ({t}, {tau}) outside the causal triangle")
    xv = np.atleast_1d(np.asarray(x, dtype=float))
    if xv.shape != (kernel.dim,):
        raise ValueError(f"x must have shape ({kernel.dim},), got {xv.shape}")
    fn = {"v": kernel.v, "vt": kernel.v_t, "vx": kernel.v_x, "vtx": kernel.v_tx}[which]
    return np.asarray(fn(np.float64(t), np.float64(tau), xv), dtype=float)


def _wrap_scalar_value(f):
    def ev(t, tau, x):
        t, tau = np.broadcast_arrays(np.asarray(t, float), np.asarray(tau, float))
        out = np.broadcast_to(np.asarray(f(t, tau, np.asarray(x)[..., 0]), float), t.shape)
        return out[..., None]

    return ev


def _wrap_scalar_slope(f):
    def ev(t, tau, x):
        t, tau = np.broadcast_arrays(np.asarray(t, float), np.asarray(tau, float))
        out = np.broadcast_to(np.asarray(f(t, tau, np.asarray(x)[..., 0]), float), t.shape)
        return out[..., None, None]

    return ev


def scalar_kernel(v, v_t, v_x, v_tx, **kwargs) -> KernelSpec:
    """Build a dim-1 KernelSpec from plain scalar formulas f(t, tau, xi)."""
    return KernelSpec(
        dim=1,
        v=_wrap_scalar_value(v),
        v_t=_wrap_scalar_value(v_t),
        v_x=_wrap_scalar_slope(v_x),
        v_tx=_wrap_scalar_slope(v_tx),
        **kwargs,
    )


def _const2(value):
    def f(t, tau):
        t = np.asarray(t, float)
        return np.full(np.broadcast_shapes(t.shape, np.shape(tau)), value)

    return f


def _const1(value):
    def f(t):
        return np.full(np.shape(np.asarray(t, float)), value)

    return f


def zero_kernel(dim: int = 1) -> KernelSpec:
    """v identically zero; the operator is the identity."""

    def vec(t, tau, x):
        t = np.asarray(t, float)
        shape = np.broadcast_shapes(t.shape, np.shape(tau))
        return np.zeros(shape + (dim,))

    def mat(t, tau, x):
        t = np.asarray(t, float)
        shape = np.broadcast_shapes(t.shape, np.shape(tau))
        return np.zeros(shape + (dim, dim))

    bounds = GrowthBounds(
        c0=_const2(0.0), d0=_const2(0.0),
        c1=_const1(0.0), d1=_const1(0.0),
        c2=_const2(0.0), d2=_const2(0.0),
    )
    return KernelSpec(dim=dim, v=vec, v_t=vec, v_x=mat, v_tx=mat,
                      diagonal_zero=True, bounds=bounds, name="zero")


def linear_kernel(lam: float, dim: int = 1) -> KernelSpec:
    """v(t, tau, x) = lam * x; the operator is x + lam * integral of x."""
    lam = float(lam)

    def v(t, tau, x):
        t = np.asarray(t, float)
        shape = np.broadcast_shapes(t.shape, np.shape(tau))
        return lam * np.broadcast_to(np.asarray(x, float), shape + (dim,))

    def v_t(t, tau, x):
        t = np.asarray(t, float)
        shape = np.broadcast_shapes(t.shape, np.shape(tau))
        return np.zeros(shape + (dim,))

    def v_x(t, tau, x):
        t = np.asarray(t, float)
        shape = np.broadcast_shapes(t.shape, np.shape(tau))
        return np.broadcast_to(lam * np.eye(dim), shape + (dim, dim)).copy()

    def v_tx(t, tau, x):
        t = np.asarray(t, float)
        shape = np.broadcast_shapes(t.shape, np.shape(tau))
        return np.zeros(shape + (dim, dim))

    bounds = GrowthBounds(
        c1=_const1(abs(lam)), d1=_const1(0.0),
        c2=_const2(0.0), d2=_const2(0.0),
    )
    return KernelSpec(dim=dim, v=v, v_t=v_t, v_x=v_x, v_tx=v_tx,
                      diagonal_zero=(lam == 0.0), bounds=bounds,
                      name=f"linear({lam})")


def example1_kernel(a_bar: float) -> KernelSpec:
    """Logarithmic kernel with a weak diagonal singularity in v_t.

    v(t, tau, x) = a_bar * (t - tau)^(2/3) * log(1 + 2 (t-tau)^2 x^2)
    on the triangle over [0, 1].  v vanishes on the diagonal; v_t blows
    up like (t - tau)^(-1/3) but stays integrable, which is exactly the
    regime the half-cell-offset quadrature is built for.  Declared
    bounds: |v_t| <= c0 |x| + d0 with c0 = (2 sqrt2 / 3)|a_bar| s^(2/3)
    and d0 = 2 |a_bar| s^(-1/3), s = t - tau.
    """
    ab = float(a_bar)

    def v(t, tau, xi):
        s = t - tau
        return ab * s ** (2.0 / 3.0) * np.log1p(2.0 * s * s * xi * xi)

    def v_t(t, tau, xi):
        s = t - tau
        g = 2.0 * s * s * xi * xi
        return (2.0 / 3.0) * ab * s ** (-1.0 / 3.0) * np.log1p(g) \
            + ab * s ** (2.0 / 3.0) * 4.0 * s * xi * xi / (1.0 + g)

    def v_x(t, tau, xi):
        s = t - tau
        return ab * 4.0 * s ** (8.0 / 3.0) * xi / (1.0 + 2.0 * s * s * xi * xi)

    def v_tx(t, tau, xi):
        s = t - tau
        g = 2.0 * s * s * xi * xi
        return ab * 4.0 * xi * s ** (5.0 / 3.0) \
            * (8.0 / 3.0 + (2.0 / 3.0) * g) / (1.0 + g) ** 2

    c0_coef = 2.0 * math.sqrt(2.0) / 3.0 * abs(ab)

    def c0(t, tau):
        return c0_coef * (np.asarray(t, float) - tau) ** (2.0 / 3.0)

    def d0(t, tau):
        return 2.0 * abs(ab) * (np.asarray(t, float) - tau) ** (-1.0 / 3.0)

    return scalar_kernel(
        v, v_t, v_x, v_tx,
        diagonal_zero=True,
        bounds=GrowthBounds(c0=c0, d0=d0),
        domain=TriangularDomain(0.0, 1.0),
        name=f"example1({a_bar})",
    )


def example2_kernel(w, w_prime, z, z_prime, A: float, B: float,
                    T: float = 1.0) -> KernelSpec:
    """Convolution-in-time feedback kernel v(t, tau, x) = w(t - tau) z(x).

    w must vanish at 0 (checked; KernelContract otherwise) and carry its
    derivative explicitly, as does z: the library never differentiates
    numerically on the caller's behalf.  A, B >= 0 must majorize z as
    |z(x)| <= A|x| + B; that contract is the caller's and is what the
    declared bounds c0 = A|w'|, d0 = B|w'| encode.
    """
    if not (A >= 0 and B >= 0):
        raise KernelContract(f"need A, B >= 0, got A={A}, B={B}")
    w0 = float(np.asarray(w(0.0)))
    if abs(w0) > _W_ANCHOR_ATOL:
        raise KernelContract(f"w(0) = {w0:.3e} must vanish")

    def v(t, tau, xi):
        return np.asarray(w(t - tau), float) * np.asarray(z(xi), float)

    def v_t(t, tau, xi):
        return np.asarray(w_prime(t - tau), float) * np.asarray(z(xi), float)

    def v_x(t, tau, xi):
        return np.asarray(w(t - tau), float) * np.asarray(z_prime(xi), float)

    def v_tx(t, tau, xi):
        return np.asarray(w_prime(t - tau), float) * np.asarray(z_prime(xi), float)

    def c0(t, tau):
        return A * np.abs(np.asarray(w_prime(np.asarray(t, float) - tau), float))

    def d0(t, tau):
        return B * np.abs(np.asarray(w_prime(np.asarray(t, float) - tau), float))

    return scalar_kernel(
        v, v_t, v_x, v_tx,
        diagonal_zero=True,
        bounds=GrowthBounds(c0=c0, d0=d0),
        domain=TriangularDomain(0.0, float(T)),
        name="example2",
    )
