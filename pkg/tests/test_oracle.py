"""Sampler reproducibility and quadrature/Monte Carlo helper behavior."""

import math

import numpy as np
import pytest

from tmoments.errors import DomainError, EstimationError, NonConvergenceError
from tmoments.normal_moments import GammaParams
from tmoments.oracle import (DEFAULT_SEED, KINDS, McEstimate, QuadResult, _run_quad,
                             gamma_pdf, mc_moment_nd, mixture_pdf_1d, normal_pdf,
                             quad_mass_nd, quad_moment_1d, sample_t_1d, sample_t_nd,
                             tensor_quad)
from tmoments.t1d import TParams1D
from tmoments.tnd import TParamsND
from tmoments.truncated import Rectangle


class TestDensities:
    def test_normal_pdf_value(self):
        ref = math.exp(-0.5) / math.sqrt(2.0 * math.pi)
        assert math.isclose(normal_pdf(1.0, 0.0, 1.0), ref, rel_tol=1e-15)
        arr = normal_pdf(np.array([0.0, 1.0]), 0.0, 1.0)
        assert arr.shape == (2,)

    def test_gamma_pdf_value(self):
        # shape 2, rate 3 at x = 1: 9 x exp(-3x)
        assert math.isclose(gamma_pdf(1.0, GammaParams(2.0, 3.0)),
                            9.0 * math.exp(-3.0), rel_tol=1e-14)

    def test_gamma_pdf_vanishes_at_nonpositive(self):
        p = GammaParams(2.0, 3.0)
        assert gamma_pdf(0.0, p) == 0.0
        assert gamma_pdf(-1.0, p) == 0.0
        out = gamma_pdf(np.array([-1.0, 0.0, 0.5]), p)
        assert out[0] == out[1] == 0.0 and out[2] > 0.0


class TestSamplers:
    def test_fixed_seed_reproduces_bits_1d(self):
        p = TParams1D(0.5, 2.0, 7.0)
        a = sample_t_1d(p, 1000, seed=42)
        b = sample_t_1d(p, 1000, seed=42)
        assert np.array_equal(a, b)
        c = sample_t_1d(p, 1000, seed=43)
        assert not np.array_equal(a, c)

    def test_fixed_seed_reproduces_bits_nd(self):
        p = TParamsND([0.1, -0.2], [[1.3, 0.2], [0.2, 0.9]], 12.0)
        a = sample_t_nd(p, 500, seed=7)
        b = sample_t_nd(p, 500, seed=7)
        assert a.shape == (500, 2)
        assert np.array_equal(a, b)

    def test_sample_moments_match_distribution_1d(self):
        p = TParams1D(1.5, 0.5, 10.0)
        x = sample_t_1d(p, 200_000, seed=101)
        se_mean = x.std(ddof=1) / math.sqrt(x.size)
        assert abs(x.mean() - p.mu) < 4.0 * se_mean
        target_var = p.nu / (p.sigma * (p.nu - 2.0))
        sq = (x - p.mu) ** 2
        se_var = sq.std(ddof=1) / math.sqrt(x.size)
        assert abs(sq.mean() - target_var) < 4.0 * se_var

    def test_sample_covariance_matches_distribution_nd(self):
        sigma = np.array([[1.2, 0.4], [0.4, 0.9]])
        p = TParamsND([0.2, -0.1], sigma, 25.0)
        x = sample_t_nd(p, 200_000, seed=55)
        target = p.nu / (p.nu - 2.0) * np.linalg.inv(sigma)
        emp = np.cov(x.T)
        assert np.abs(emp - target).max() < 0.05


class TestQuadMoment1D:
    def test_mass_and_symmetry(self):
        p = TParams1D(0.7, 1.3, 4.0)
        full = quad_moment_1d("raw", 0, p, tol=1e-12)
        assert abs(full.value - 1.0) < 1e-11
        upper_half = quad_moment_1d("raw", 0, p, bounds=(p.mu, math.inf), tol=1e-12)
        assert abs(upper_half.value - 0.5) < 1e-11

    def test_central_first_moment_is_zero(self):
        p = TParams1D(-2.0, 0.6, 5.0)
        res = quad_moment_1d("central", 1, p, tol=1e-12)
        assert abs(res.value) < 1e-11

    def test_all_kinds_accepted(self):
        p = TParams1D(0.4, 1.0, 8.0)
        for kind in KINDS:
            res = quad_moment_1d(kind, 2, p, tol=1e-10)
            assert isinstance(res, QuadResult)
            assert res.value > 0.0
            assert res.est_abs_error <= max(1e-10, 1e-10 * abs(res.value))
            assert res.evaluations > 0

    def test_input_validation(self):
        p = TParams1D(0.0, 1.0, 5.0)
        with pytest.raises(DomainError, match="unknown kind"):
            quad_moment_1d("bogus", 2, p)
        with pytest.raises(DomainError, match="nonnegative"):
            quad_moment_1d("raw", -1, p)
        with pytest.raises(DomainError, match="empty integration range"):
            quad_moment_1d("raw", 2, p, bounds=(2.0, 2.0))

    def test_reports_nonconvergence(self):
        with pytest.raises(NonConvergenceError) as exc:
            _run_quad(lambda x: math.sin(1e6 * x), 0.0, 1.0, 1e-10)
        assert exc.value.iterations > 0
        assert exc.value.est_error > 1e-10


class TestMixturePdf:
    def test_matches_cauchy_density(self):
        # nu = 1, mu = 0, sigma = 1 is the standard Cauchy: 1/(pi (1 + t^2))
        p = TParams1D(0.0, 1.0, 1.0)
        for t in (0.0, 0.8, -2.5):
            res = mixture_pdf_1d(t, p, tol=1e-11)
            assert abs(res.value - 1.0 / (math.pi * (1.0 + t * t))) < 1e-10


class TestMcMomentNd:
    def test_fixed_seed_is_deterministic(self):
        p = TParamsND([0.1, -0.2], [[1.3, 0.2], [0.2, 0.9]], 12.0)
        a = mc_moment_nd((2, 1), p, n_samples=50_000, seed=3)
        b = mc_moment_nd((2, 1), p, n_samples=50_000, seed=3)
        assert a.value == b.value
        assert a.std_error == b.std_error
        assert a.seed == 3 and a.n_samples == 50_000

    def test_default_seed_recorded(self):
        p = TParamsND([0.0], [[1.0]], 9.0)
        est = mc_moment_nd((1,), p, n_samples=1_000)
        assert est.seed == DEFAULT_SEED
        assert isinstance(est, McEstimate)

    def test_standard_error_scales_with_samples(self):
        p = TParamsND([0.1, -0.2], [[1.3, 0.2], [0.2, 0.9]], 12.0)
        small = mc_moment_nd((2, 0), p, n_samples=50_000, seed=3)
        large = mc_moment_nd((2, 0), p, n_samples=200_000, seed=3)
        ratio = small.std_error / large.std_error
        assert 1.6 < ratio < 2.4  # expect ~sqrt(4) = 2

    def test_rectangle_as_pair(self):
        p = TParamsND([0.0, 0.0], np.eye(2), 10.0)
        r = Rectangle([-1.0, -1.0], [1.0, 1.0])
        a = mc_moment_nd((1, 1), p, rect=r, n_samples=20_000, seed=9)
        b = mc_moment_nd((1, 1), p, rect=(r.lower, r.upper), n_samples=20_000, seed=9)
        assert a.value == b.value

    def test_empty_rectangle_raises(self):
        p = TParamsND([0.0, 0.0], np.eye(2), 10.0)
        far = Rectangle([500.0, 500.0], [501.0, 501.0])
        with pytest.raises(EstimationError, match="none of the"):
            mc_moment_nd((0, 0), p, rect=far, n_samples=10_000, seed=1)

    def test_warns_on_infinite_sampling_variance(self):
        p = TParamsND([0.0, 0.0], np.eye(2), 5.0)
        with pytest.warns(UserWarning, match="infinite sampling variance"):
            mc_moment_nd((3, 0), p, n_samples=1_000, seed=2)

    def test_dimension_check(self):
        p = TParamsND([0.0, 0.0], np.eye(2), 10.0)
        with pytest.raises(DomainError, match="dimension"):
            mc_moment_nd((1,), p, n_samples=100)


class TestTensorQuad:
    def test_polynomial_is_exact(self):
        # int_0^2 int_-1^1 x^2 y^4 dy dx = (8/3)(2/5)
        def f(pts):
            return pts[:, 0] ** 2 * pts[:, 1] ** 4

        res = tensor_quad(f, [0.0, -1.0], [2.0, 1.0], tol=1e-12)
        assert abs(res.value - (8.0 / 3.0) * (2.0 / 5.0)) < 1e-12

    def test_gaussian_mass(self):
        def f(pts):
            return np.exp(-0.5 * np.sum(pts ** 2, axis=1)) / (2.0 * math.pi)

        res = tensor_quad(f, [-8.0, -8.0], [8.0, 8.0], tol=1e-10)
        assert abs(res.value - 1.0) < 1e-9

    def test_input_validation(self):
        f = lambda pts: np.ones(pts.shape[0])
        with pytest.raises(DomainError, match="finite"):
            tensor_quad(f, [0.0], [math.inf])
        with pytest.raises(DomainError, match="lower < upper"):
            tensor_quad(f, [1.0], [0.0])
        with pytest.raises(DomainError, match="equal-length"):
            tensor_quad(f, [0.0, 0.0], [1.0])

    def test_cusp_exhausts_refinement(self):
        f = lambda pts: np.abs(pts[:, 0]) ** 0.1
        with pytest.raises(NonConvergenceError) as exc:
            tensor_quad(f, [-1.0], [1.0], tol=1e-12)
        # the partial value is still reported for diagnosis
        assert abs(exc.value.value - 2.0 / 1.1) < 1e-2


class TestQuadMassNd:
    @pytest.mark.parametrize("p", [
        TParamsND([0.3, -1.0], [[2.0, 0.5], [0.5, 1.0]], 4.0),
        TParamsND([0.0, 0.0], np.eye(2) * 0.3, 2.5),
    ])
    def test_bivariate_mass(self, p):
        res = quad_mass_nd(p, tol=1e-8)
        assert abs(res.value - 1.0) < 1e-7

    def test_trivariate_mass(self):
        p = TParamsND([0.1, 0.0, -0.4], np.eye(3) * 1.5, 6.0)
        res = quad_mass_nd(p, tol=1e-7)
        assert abs(res.value - 1.0) < 1e-6
