"""Neumann iteration with factorial tail certificates, and direct collocation."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from pytest import approx

import volterra as vt
from volterra import (
    Grid,
    NeumannBound,
    SingularBlock,
    TriangularDomain,
    ac_norm,
    apply_T,
    collocation_solve,
    estimate_l_rho,
    example1_kernel,
    from_callable,
    iterate_bound,
    linear_kernel,
    neumann_solve,
    random_anchored,
    sub,
    sup_norm,
    tail_bound,
    zero_kernel,
    zeros,
)


class TestApplyT:
    def test_unit_slope_kernel_integrates(self):
        # v_x = 1: (T g)(t) = integral of g; exact for linear g
        g = Grid(0.0, 1.0, 50)
        x0 = zeros(g)
        rhs = from_callable(lambda t: t, g)
        out = apply_T(linear_kernel(1.0), x0, rhs)
        assert np.allclose(out.values[:, 0], g.nodes**2 / 2.0, rtol=1e-14, atol=1e-16)

    def test_twice_applied_approximates_cubic(self):
        g = Grid(0.0, 1.0, 200)
        x0 = zeros(g)
        rhs = from_callable(lambda t: t, g)
        out = apply_T(linear_kernel(1.0), x0, apply_T(linear_kernel(1.0), x0, rhs))
        assert np.max(np.abs(out.values[:, 0] - g.nodes**3 / 6.0)) < 1e-5

    def test_depends_on_base_point_for_nonlinear_kernels(self, unit_grid, rng):
        ker = example1_kernel(1.0)
        h = random_anchored(unit_grid, 1, rng)
        a = apply_T(ker, zeros(unit_grid), h)
        b = apply_T(ker, from_callable(lambda t: t, unit_grid), h)
        assert ac_norm(a) == 0.0  # v_x vanishes at x = 0
        assert ac_norm(sub(a, b)) > 0.0


class TestBounds:
    def test_interval_constants(self):
        nb = NeumannBound.for_interval(l_rho=1.0, M=1.0, alpha=0.0, beta=1.0)
        assert nb.C == approx(2.0)       # sqrt(len) * (1 + len)
        assert nb.D == approx(2.0)       # C * M * l_rho
        assert nb.A == approx(1.0)       # l_rho * len

    def test_iterate_bound_factorial_decay(self):
        nb = NeumannBound.for_interval(l_rho=1.0, M=1.0, alpha=0.0, beta=1.0)
        assert iterate_bound(1, nb) == approx(2.0)
        assert iterate_bound(3, nb) == approx(1.0)          # 2 / 2!
        assert iterate_bound(20, nb) == approx(2.0 / math.factorial(19), rel=1e-12)
        with pytest.raises(ValueError):
            iterate_bound(0, nb)

    def test_tail_bound_matches_exponential_series(self):
        # D = 2, A = 1: tail after k is 2 * (e - sum_{i<k} 1/i!)
        nb = NeumannBound.for_interval(l_rho=1.0, M=1.0, alpha=0.0, beta=1.0)
        for k in (1, 2, 5, 10):
            partial = sum(1.0 / math.factorial(i) for i in range(k))
            assert tail_bound(k, nb) == approx(2.0 * (math.e - partial), rel=1e-10)

    def test_tail_bound_dominates_iterate_bound_sum(self):
        nb = NeumannBound.for_interval(l_rho=2.0, M=1.5, alpha=0.0, beta=0.9)
        explicit = sum(iterate_bound(j, nb) for j in range(4, 60))
        assert tail_bound(3, nb) == approx(explicit, rel=1e-12)

    def test_zero_contraction_gives_zero_bounds(self):
        nb = NeumannBound.for_interval(l_rho=0.0, M=1.0, alpha=0.0, beta=1.0)
        assert iterate_bound(1, nb) == 0.0
        assert iterate_bound(5, nb) == 0.0
        assert tail_bound(1, nb) == 0.0


class TestEstimateLRho:
    def test_linear_kernel_is_flat(self):
        ker = linear_kernel(0.6)
        est = estimate_l_rho(ker, rho=2.0, samples=512,
                             domain=TriangularDomain(0.0, 1.0))
        assert est == approx(1.1 * 0.6, rel=1e-12)

    def test_upper_bounds_fresh_samples(self, rng):
        ker = example1_kernel(1.3)
        rho = 2.5
        est = estimate_l_rho(ker, rho, samples=4096,
                             domain=TriangularDomain(0.0, 1.0))
        t = rng.uniform(0.0, 1.0, 10000)
        tau = t * rng.uniform(0.0, 1.0, 10000)
        x = rng.uniform(-rho, rho, (10000, 1))
        vals = np.abs(ker.v_x(t, tau, x)[:, 0, 0])
        assert vals.max() <= est

    def test_time_derivative_flag_raises_the_estimate(self):
        # |v_tx| exceeds |v_x| for the logarithmic kernel
        ker = example1_kernel(1.0)
        base = estimate_l_rho(ker, 1.0, 2048, domain=TriangularDomain(0.0, 1.0))
        joint = estimate_l_rho(ker, 1.0, 2048, domain=TriangularDomain(0.0, 1.0),
                               include_time_derivative=True)
        assert joint > base

    def test_rejects_bad_arguments(self):
        ker = linear_kernel(1.0)
        with pytest.raises(ValueError):
            estimate_l_rho(ker, rho=0.0, samples=10)
        with pytest.raises(ValueError):
            estimate_l_rho(ker, rho=1.0, samples=0)


class TestNeumann:
    def test_matches_resolvent_closed_form(self):
        g = Grid(0.0, 1.0, 500)
        rhs = from_callable(lambda t: t, g)
        h, rep = neumann_solve(linear_kernel(1.0), zeros(g), rhs, tol=1e-12)
        exact = from_callable(lambda t: 1.0 - math.exp(-t), g)
        assert rep.converged
        assert ac_norm(sub(h, exact)) / ac_norm(exact) < 1e-4
        assert abs(h.values[-1, 0] - (1.0 - math.exp(-1.0))) < 1e-5

    def test_report_certifies_the_stop(self):
        g = Grid(0.0, 1.0, 100)
        rhs = from_callable(lambda t: t, g)
        h, rep = neumann_solve(linear_kernel(1.0), zeros(g), rhs, tol=1e-10)
        assert rep.converged
        assert rep.residual_ac <= 1e-10
        assert rep.l_rho == approx(1.1, rel=1e-12)
        assert rep.tolerance == 1e-10

    def test_budget_exhaustion_reports_not_converged(self):
        g = Grid(0.0, 1.0, 50)
        rhs = from_callable(lambda t: t, g)
        h, rep = neumann_solve(linear_kernel(1.0), zeros(g), rhs,
                               tol=1e-30, max_iter=3)
        assert not rep.converged
        assert rep.iterations == 3

    def test_twenty_partial_sums_match_alternating_series(self):
        # sum_{k<20} (-1)^k T^k g with (T^k g)(t) = t^{k+1}/(k+1)!
        g = Grid(0.0, 1.0, 500)
        ker = linear_kernel(1.0)
        x0 = zeros(g)
        term = from_callable(lambda t: t, g)
        partial = term.values.copy()
        for k in range(1, 20):
            term = apply_T(ker, x0, term)
            partial += (-1.0) ** k * term.values
        series = from_callable(
            lambda t: sum((-1.0) ** k * t ** (k + 1) / math.factorial(k + 1)
                          for k in range(20)),
            g,
        )
        assert ac_norm(sub(vt.GridFunction(g, partial), series)) < 1e-6

    def test_iterates_stay_below_certificate(self, rng):
        g = Grid(0.0, 1.0, 100)
        ker = example1_kernel(1.0)
        x0 = random_anchored(g, 1, rng, norm=1.5)
        rhs = random_anchored(g, 1, rng)
        rho = sup_norm(x0)
        lr = estimate_l_rho(ker, rho, 2048, domain=TriangularDomain(0.0, 1.0),
                            include_time_derivative=True)
        nb = NeumannBound.for_interval(lr, sup_norm(rhs), 0.0, 1.0)
        h = rhs
        for k in range(1, 16):
            h = apply_T(ker, x0, h)
            assert ac_norm(h) <= iterate_bound(k, nb) + 1e-6


class TestCollocation:
    def test_solves_the_discrete_equations_exactly(self, rng):
        g = Grid(0.0, 1.0, 80)
        ker = example1_kernel(1.0)
        x0 = random_anchored(g, 1, rng, norm=1.0)
        rhs = random_anchored(g, 1, rng)
        h = collocation_solve(ker, x0, rhs)
        resid = sub(vt.frechet_apply(ker, x0, h), rhs)
        assert ac_norm(resid) < 1e-12

    def test_agrees_with_neumann(self):
        g = Grid(0.0, 1.0, 500)
        ker = linear_kernel(1.0)
        x0 = zeros(g)
        rhs = from_callable(lambda t: t, g)
        hn, _ = neumann_solve(ker, x0, rhs, tol=1e-12)
        hc = collocation_solve(ker, x0, rhs)
        assert ac_norm(sub(hn, hc)) / ac_norm(hc) < 1e-8

    def test_matches_resolvent_closed_form(self):
        g = Grid(0.0, 1.0, 500)
        h = collocation_solve(linear_kernel(1.0), zeros(g),
                              from_callable(lambda t: t, g))
        exact = from_callable(lambda t: 1.0 - math.exp(-t), g)
        assert ac_norm(sub(h, exact)) / ac_norm(exact) < 1e-4

    def test_singular_diagonal_block_raises(self):
        # 1 + (delta/2) v_x = 0 when v_x = -2 N on the unit interval
        g = Grid(0.0, 1.0, 16)
        ker = linear_kernel(-32.0)
        with pytest.raises(SingularBlock):
            collocation_solve(ker, zeros(g), from_callable(lambda t: t, g))

    @given(lam=st.floats(min_value=-3.0, max_value=3.0),
           seed=st.integers(min_value=0, max_value=2**31 - 1))
    @settings(max_examples=30, deadline=None)
    def test_random_linear_problems_solve_to_machine_precision(self, lam, seed):
        g = Grid(0.0, 1.0, 40)
        ker = linear_kernel(lam)
        rhs = random_anchored(g, 1, np.random.default_rng(seed))
        h = collocation_solve(ker, zeros(g), rhs)
        resid = sub(vt.frechet_apply(ker, zeros(g), h), rhs)
        assert ac_norm(resid) <= 1e-10 * max(1.0, ac_norm(rhs))


def test_multi_dimensional_systems_roundtrip(rng):
    # block collocation on a 2d system against its own residual
    g = Grid(0.0, 1.0, 60)
    ker = linear_kernel(0.7, dim=2)
    x0 = zeros(g, dim=2)
    rhs = random_anchored(g, 2, rng)
    h = collocation_solve(ker, x0, rhs)
    resid = sub(vt.frechet_apply(ker, x0, h), rhs)
    assert ac_norm(resid) < 1e-12
