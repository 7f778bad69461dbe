"""Operator application, its time derivative, linearization, and the functional."""

import math

import numpy as np
import pytest
from pytest import approx

import volterra as vt
from volterra import (
    Grid,
    ac_norm,
    apply_V,
    apply_V_dt,
    axpy,
    directional_dF,
    frechet_apply,
    from_callable,
    functional_F,
    functional_gradient,
    linear_kernel,
    example1_kernel,
    random_anchored,
    scale,
    sub,
    zero_kernel,
    zeros,
)


def test_zero_kernel_is_identity(unit_grid, rng):
    x = random_anchored(unit_grid, 2, rng)
    out = apply_V(zero_kernel(dim=2), x)
    assert np.array_equal(out.values, x.values)


def test_apply_V_linear_kernel_exact_on_linear_input():
    # V(x)(t) = t + lam * t^2 / 2 for x(t) = t; midpoint rule is exact here
    g = Grid(0.0, 1.0, 50)
    x = from_callable(lambda t: t, g)
    out = apply_V(linear_kernel(0.5), x)
    expect = g.nodes + 0.25 * g.nodes**2
    assert np.allclose(out.values[:, 0], expect, rtol=1e-14, atol=1e-15)


def test_apply_V_dt_linear_kernel_exact_on_linear_input():
    # d/dt V(x) = x' + v(t, t, x(t)) + 0 = 1 + lam * m at each midpoint
    g = Grid(0.0, 1.0, 50)
    x = from_callable(lambda t: t, g)
    out = apply_V_dt(linear_kernel(0.5), x)
    assert out.shape == (50, 1)
    assert np.allclose(out[:, 0], 1.0 + 0.5 * g.midpoints, rtol=1e-14, atol=1e-15)


def test_apply_V_dt_consistent_with_slopes_of_apply_V():
    # two routes to the derivative: analytic expansion vs differenced nodes
    g = Grid(0.0, 1.0, 200)
    ker = example1_kernel(1.0)
    x = from_callable(lambda t: t * (1.0 - 0.3 * t), g)
    analytic = apply_V_dt(ker, x)
    nodes = apply_V(ker, x)
    slopes = np.diff(nodes.values, axis=0) / g.delta
    assert np.max(np.abs(analytic - slopes)) < 5e-4


def test_functional_vanishes_at_exact_solution():
    # for v = 0.5 x and y = t + t^2/4, x(t) = t solves the discrete system
    # exactly: both sides have identical slopes, so F(x) = 0 to rounding
    g = Grid(0.0, 1.0, 64)
    ker = linear_kernel(0.5)
    x = from_callable(lambda t: t, g)
    y = from_callable(lambda t: t + 0.25 * t * t, g)
    assert functional_F(ker, x, y) < 1e-28


def test_functional_is_half_squared_ac_distance_for_zero_kernel(unit_grid, rng):
    x = random_anchored(unit_grid, 1, rng)
    y = random_anchored(unit_grid, 1, rng)
    F = functional_F(zero_kernel(), x, y)
    assert F == approx(0.5 * ac_norm(sub(x, y)) ** 2, rel=1e-12)


def test_functional_positive_away_from_solution(unit_grid, rng):
    ker = example1_kernel(1.0)
    y = from_callable(lambda t: t, unit_grid)
    x = random_anchored(unit_grid, 1, rng, norm=2.0)
    assert functional_F(ker, x, y) > 0.0


class TestFrechet:
    def test_linearization_remainder_is_second_order(self, rng):
        g = Grid(0.0, 1.0, 80)
        ker = example1_kernel(1.0)
        x0 = random_anchored(g, 1, rng, norm=1.0)
        h = random_anchored(g, 1, rng, norm=1.0)
        rem = []
        for eps in (1e-2, 1e-3):
            xp = axpy(eps, h, x0)
            r = sub(sub(apply_V(ker, xp), apply_V(ker, x0)),
                    scale(eps, frechet_apply(ker, x0, h)))
            rem.append(ac_norm(r))
        # halving eps by 10 should cut the remainder by ~100
        assert rem[1] == approx(rem[0] / 100.0, rel=0.2)

    def test_frechet_is_exact_for_linear_kernels(self, unit_grid, rng):
        ker = linear_kernel(0.8)
        x0 = random_anchored(unit_grid, 1, rng)
        h = random_anchored(unit_grid, 1, rng)
        lhs = sub(apply_V(ker, axpy(1.0, h, x0)), apply_V(ker, x0))
        rhs = frechet_apply(ker, x0, h)
        assert ac_norm(sub(lhs, rhs)) < 1e-12


class TestDirectionalDerivative:
    def test_matches_central_differences(self, rng):
        g = Grid(0.0, 1.0, 60)
        ker = example1_kernel(1.0)
        y = from_callable(lambda t: t, g)
        for _ in range(5):
            x = random_anchored(g, 1, rng, norm=1.0)
            h = random_anchored(g, 1, rng, norm=1.0)
            d = directional_dF(ker, x, y, h)
            eps = 1e-6
            fd = (functional_F(ker, axpy(eps, h, x), y)
                  - functional_F(ker, axpy(-eps, h, x), y)) / (2.0 * eps)
            assert d == approx(fd, rel=1e-6, abs=1e-12)

    def test_gradient_represents_the_directional_derivative(self, rng):
        # <grad, h> over nodes equals dF(x)[h] by construction, to rounding
        g = Grid(0.0, 1.0, 60)
        ker = example1_kernel(1.0)
        y = from_callable(lambda t: t, g)
        for _ in range(5):
            x = random_anchored(g, 1, rng, norm=1.0)
            h = random_anchored(g, 1, rng, norm=1.0)
            grad = functional_gradient(ker, x, y)
            assert grad.shape == (61, 1)
            assert grad[0, 0] == 0.0
            ip = float((grad * h.values).sum())
            d = directional_dF(ker, x, y, h)
            assert ip == approx(d, rel=1e-11, abs=1e-14)

    def test_gradient_vanishes_at_the_minimum(self):
        g = Grid(0.0, 1.0, 64)
        ker = linear_kernel(0.5)
        x = from_callable(lambda t: t, g)
        y = from_callable(lambda t: t + 0.25 * t * t, g)
        grad = functional_gradient(ker, x, y)
        assert np.max(np.abs(grad)) < 1e-14


def test_apply_V_rejects_dim_mismatch(unit_grid):
    x = zeros(unit_grid, dim=2)
    with pytest.raises(vt.DimMismatch):
        apply_V(linear_kernel(1.0, dim=1), x)


def test_functional_decreases_along_newton_direction():
    g = Grid(0.0, 1.0, 50)
    ker = example1_kernel(1.0)
    y = from_callable(lambda t: t, g)
    x = scale(0.5, y)
    F0 = functional_F(ker, x, y)
    r = sub(y, apply_V(ker, x))
    step = vt.collocation_solve(ker, x, r)
    assert functional_F(ker, axpy(1.0, step, x), y) < F0
