import math

import numpy as np
import pytest

from fraclap.assembly import interior_indices, load_vector
from fraclap.energies import dirichlet_frac, dirichlet_local, objective_frac, objective_local
from fraclap.errors import ConfigError, DataError, ShapeError
from fraclap.grid import Domain, linf_distance, make_grid, sample
from fraclap.kernels import FracParams
from fraclap.profiles import random_bump
from fraclap.solver import (
    assemble_frac,
    assemble_local,
    exact_solution_ball,
    frac_laplacian_pointwise,
    lift_and_solve,
    solve_frac_dirichlet,
    solve_local_dirichlet,
)

DOM = Domain(-1.0, 1.0, -2.0, 2.0)


def const_f(n: int, value: float = 1.0):
    return sample(DOM, n, lambda x: value)


class TestAssembly:
    def test_symmetric_positive_definite(self):
        form = assemble_frac(DOM, 65, FracParams(s=0.4, eps=0.2))
        a = form.entries
        assert np.array_equal(a, a.T)
        assert np.linalg.eigvalsh(a).min() > 0.0

    def test_near_one_warns(self):
        with pytest.warns(RuntimeWarning):
            assemble_frac(DOM, 33, FracParams(s=0.9995))

    def test_dimension_guard(self):
        with pytest.raises(ConfigError):
            assemble_frac(DOM, 33, FracParams(s=0.5, d=2))

    def test_no_interior_nodes(self):
        dom = Domain(0.3, 0.4, -0.7, 1.4)
        with pytest.raises(ConfigError):
            assemble_frac(dom, 4, FracParams(s=0.5))

    def test_local_tridiagonal_entries(self):
        form = assemble_local(DOM, 17)
        a = form.entries
        h = 0.25
        assert a.shape == (form.n_int, form.n_int)
        assert np.allclose(np.diag(a), 2.0 / h)
        assert np.allclose(np.diag(a, 1), -1.0 / h)
        assert np.all(np.triu(a, 2) == 0.0)

    def test_frac_approaches_local_tridiagonal(self):
        frac = assemble_frac(DOM, 33, FracParams(s=0.999)).entries
        loc = assemble_local(DOM, 33).entries
        assert np.max(np.abs(frac - loc)) <= 0.05 * np.max(np.abs(loc))


class TestFracSolve:
    def test_zero_load(self):
        u = solve_frac_dirichlet(DOM, 65, FracParams(s=0.5), const_f(65, 0.0))
        assert np.all(u.values == 0.0)

    def test_linearity(self):
        p = FracParams(s=0.6)
        rng = np.random.default_rng(61)
        f1 = random_bump(rng, DOM, 65)
        f2 = random_bump(rng, DOM, 65)
        u1 = solve_frac_dirichlet(DOM, 65, p, f1)
        u2 = solve_frac_dirichlet(DOM, 65, p, f2)
        u12 = solve_frac_dirichlet(DOM, 65, p, f1 + f2)
        assert np.allclose(u12.values, u1.values + u2.values, rtol=1e-12, atol=1e-14)

    def test_zero_outside_omega(self):
        u = solve_frac_dirichlet(DOM, 65, FracParams(s=0.5), const_f(65))
        outside = np.abs(u.nodes) >= 1.0 - 1e-12
        assert np.all(u.values[outside] == 0.0)

    def test_converges_to_closed_form_ball_solution(self):
        p = FracParams(s=0.6)
        errs = []
        for n in (129, 257, 513):
            u = solve_frac_dirichlet(DOM, n, p, const_f(n))
            ref = u.with_values(exact_solution_ball(p, u.nodes))
            errs.append(linf_distance(u, ref, "box"))
        assert errs[0] > errs[1] > errs[2]
        assert errs[-1] < 1e-2

    def test_nonnegative_for_nonnegative_load(self):
        rng = np.random.default_rng(62)
        f = random_bump(rng, DOM, 129)
        f = f.with_values(np.abs(f.values))
        for s in (0.3, 0.7):
            u = solve_frac_dirichlet(DOM, 129, FracParams(s=s), f)
            assert u.values.min() >= -1e-12

    def test_galerkin_minimality(self):
        p = FracParams(s=0.55)
        rng = np.random.default_rng(63)
        f = random_bump(rng, DOM, 65)
        u = solve_frac_dirichlet(DOM, 65, p, f)
        base = objective_frac(u, f, p)
        for _ in range(5):
            w = random_bump(rng, DOM, 65)
            for t in (-0.1, -0.01, 0.01, 0.1):
                assert objective_frac(u + t * w, f, p) >= base - 1e-12

    def test_mismatched_grid_rejected(self):
        with pytest.raises(ShapeError):
            solve_frac_dirichlet(DOM, 65, FracParams(s=0.5), const_f(33))


class TestLocalSolve:
    def test_parabola_nodal_exactness(self):
        u = solve_local_dirichlet(DOM, 257, const_f(257, 2.0))
        want = np.clip(1.0 - u.nodes**2, 0.0, None)
        assert np.allclose(u.values, want, atol=1e-12)

    def test_zero_load(self):
        u = solve_local_dirichlet(DOM, 65, const_f(65, 0.0))
        assert np.all(u.values == 0.0)


class TestStabilityIdentities:
    def test_frac_energy_gap_identity(self):
        p = FracParams(s=0.45, eps=0.1)
        n = 257
        rng = np.random.default_rng(71)
        f = random_bump(rng, DOM, n)
        u = solve_frac_dirichlet(DOM, n, p, f)
        base = objective_frac(u, f, p)
        for _ in range(5):
            phi = random_bump(rng, DOM, n)
            gap = objective_frac(phi, f, p) - base
            want = dirichlet_frac(phi - u, p).total
            assert gap == pytest.approx(want, rel=1e-10)

    def test_local_energy_gap_identity(self):
        n = 257
        rng = np.random.default_rng(72)
        f = random_bump(rng, DOM, n)
        u = solve_local_dirichlet(DOM, n, f)
        base = objective_local(u, f)
        for _ in range(5):
            phi = random_bump(rng, DOM, n)
            gap = objective_local(phi, f) - base
            want = dirichlet_local(phi - u)
            assert gap == pytest.approx(want, rel=1e-10)


class TestBallSolution:
    def test_vanishes_outside(self):
        p = FracParams(s=0.5)
        assert exact_solution_ball(p, 1.0) == 0.0
        assert exact_solution_ball(p, -3.7) == 0.0
        out = exact_solution_ball(p, np.array([-2.0, 1.5]))
        assert np.all(out == 0.0)

    def test_local_limit_amplitude(self):
        got = exact_solution_ball(FracParams(s=0.999), 0.0)
        assert got == pytest.approx(0.5, rel=0.02)

    def test_profile_satisfies_unit_source(self):
        p = FracParams(s=0.6)
        g = lambda t: exact_solution_ball(p, t)
        for x in (0.0, 0.3):
            val = frac_laplacian_pointwise(g, p, x)
            assert val == pytest.approx(1.0, rel=2e-2)


class TestPointwiseOperator:
    def test_annihilates_constants(self):
        for s in (0.3, 0.5, 0.9):
            assert frac_laplacian_pointwise(lambda t: 4.0, FracParams(s=s), 0.2) == 0.0

    def test_annihilates_affine(self):
        # the symmetric second difference cancels affine terms; only the
        # rounding of g itself survives under the singular weight
        for s in (0.3, 0.5, 0.9):
            p = FracParams(s=s)
            got = frac_laplacian_pointwise(lambda t: 2.0 * t - 1.0, p, 0.2)
            assert abs(got) <= 1e-9

    def test_local_limit_matches_second_derivative(self):
        p = FracParams(s=0.99)
        g = lambda t: math.exp(-t * t)
        for x in (0.0, 0.5):
            want = -(4.0 * x * x - 2.0) * math.exp(-x * x)
            assert frac_laplacian_pointwise(g, p, x) == pytest.approx(want, abs=0.02)

    def test_error_bar(self):
        p = FracParams(s=0.7)
        g = lambda t: math.exp(-t * t)
        val, bar = frac_laplacian_pointwise(g, p, 0.0, full_output=True)
        assert bar > 0.0
        assert bar < 1e-2
        assert val == pytest.approx(frac_laplacian_pointwise(g, p, 0.0), rel=1e-14)

    def test_nonfinite_data_rejected(self):
        with pytest.raises(DataError):
            frac_laplacian_pointwise(lambda t: float("nan"), FracParams(s=0.5), 0.0)

    def test_dimension_guard(self):
        with pytest.raises(ConfigError):
            frac_laplacian_pointwise(lambda t: 0.0, FracParams(s=0.5, d=2), 0.0)


class TestLiftAndSolve:
    def test_zero_data_matches_plain_solve(self):
        p = FracParams(s=0.6)
        rng = np.random.default_rng(81)
        f = random_bump(rng, DOM, 65)
        direct = solve_frac_dirichlet(DOM, 65, p, f)
        lifted = lift_and_solve(DOM, 65, p, f, lambda t: 0.0)
        assert np.array_equal(direct.values, lifted.values)

    def test_affine_data_is_reproduced(self):
        # affine functions are annihilated pointwise, so with zero source the
        # corrector vanishes identically and the output is the data itself
        p = FracParams(s=0.7)
        g = lambda t: 0.5 * t + 0.2
        u = lift_and_solve(DOM, 65, p, const_f(65, 0.0), g)
        assert np.allclose(u.values, 0.5 * u.nodes + 0.2, atol=1e-12)

    def test_matches_data_outside_omega(self):
        p = FracParams(s=0.6)
        g = lambda t: math.cos(t)
        u = lift_and_solve(DOM, 65, p, const_f(65), g)
        outside = np.abs(u.nodes) >= 1.0 - 1e-12
        assert np.allclose(u.values[outside], np.cos(u.nodes[outside]), atol=1e-14)

    def test_corrector_satisfies_weak_form(self):
        n = 65
        p = FracParams(s=0.6)
        g = lambda t: math.cos(t)
        f = const_f(n)
        u = lift_and_solve(DOM, n, p, f, g)
        grid = make_grid(DOM, n)
        idx = interior_indices(grid)
        tol = 1e-9 * grid.h
        x = grid.nodes
        near = (x >= DOM.omega_lo - grid.h - tol) & (x <= DOM.omega_hi + grid.h + tol)
        shift = np.zeros(n)
        for i in np.nonzero(near)[0]:
            shift[i] = frac_laplacian_pointwise(g, p, float(x[i]))
        b = load_vector(grid.with_values(f.values - shift))[idx]
        a = assemble_frac(DOM, n, p).entries
        corr = u.values - np.cos(x)
        residual = a @ corr[idx] - b
        assert np.max(np.abs(residual)) <= 1e-10 * max(1.0, np.max(np.abs(b)))
