import mpmath
import pytest

from numeric_core import RayError
from parametrix import (G_ell, G_model, H_ell, ModelFunction, biorthogonality_matrix, circle_bound_constant,
                        expected_small_z_exponent_G, index_for, inner_product, jump_residual_G, jump_residual_H,
                        max_biorthogonality_deviation, small_z_exponent_G, t_shift)

SQRT2 = mpmath.sqrt(2)


class TestIndex:

    @pytest.mark.parametrize("theta", [0.5, 1, SQRT2, 2])
    def test_ell_zero(self, theta):
        index = index_for(0, theta)
        assert index.m_ell == 1 and index.R_lambda == 1
        assert index.n_ell == 0 and index.R_beta == 0

    def test_theta_one_ell_one(self):
        index = index_for(1, 1)
        assert index.m_ell == 0
        assert index.R_lambda == mpmath.mpf(0.5)

    @pytest.mark.parametrize("ell", range(-6, 9))
    @pytest.mark.parametrize("theta", [0.5, SQRT2, 3])
    def test_fractional_parts_in_range(self, ell, theta):
        index = index_for(ell, theta)
        theta = mpmath.mpf(theta)
        assert 0 < index.R_lambda <= 1
        assert -theta / (theta + 1) < index.R_beta <= 1 / (theta + 1)
        assert index.R_lambda == theta * ell / (theta + 1) + index.m_ell

    def test_t_shift(self):
        assert t_shift(1, 1, 0) == mpmath.mpf(0.25)


class TestModelFunctions:

    def test_ray_requires_side(self, ctx):
        theta = SQRT2
        ray = mpmath.pi / (theta + 1)
        with pytest.raises(RayError):
            G_model(mpmath.expj(ray), 1, theta, 0.3, ctx)
        with ctx.workprec():
            plus = G_model(mpmath.expj(ray), 1, theta, 0.3, ctx, side="+")
            minus = G_model(mpmath.expj(ray), 1, theta, 0.3, ctx, side="-")
        assert abs(plus - minus) > 1e-6

    @pytest.mark.parametrize("ray", ["upper", "lower"])
    def test_jump_relations(self, ctx, ray):
        with ctx.workprec():
            g_residual = jump_residual_G(1, 1, SQRT2, 0.3, ctx, ray=ray)
            h_residual = jump_residual_H(1, 0, SQRT2, 0.3, ctx, ray=ray)
        assert abs(g_residual) <= 1e3 * ctx.rel_tol
        assert abs(h_residual) <= 1e3 * ctx.rel_tol

    def test_jump_relation_with_rotated_rays(self, ctx):
        with ctx.workprec():
            assert abs(jump_residual_G(0.8, 1, 2, -0.4, ctx, gamma=mpmath.mpf(0.2))) <= 1e3 * ctx.rel_tol

    def test_continuous_across_positive_axis(self, ctx):
        eps = mpmath.mpf("1e-12")
        with ctx.workprec():
            above = G_model(0.8 * mpmath.expj(eps), 1, SQRT2, 0.3, ctx)
            below = G_model(0.8 * mpmath.expj(-eps), 1, SQRT2, 0.3, ctx)
        assert abs(above - below) <= 1e-9 * max(1, abs(above))

    @pytest.mark.parametrize("ell", [0, 1, 4])
    def test_large_z_normalization(self, ctx, ell):
        z = 50 * mpmath.expj(0.3)
        with ctx.workprec():
            g = mpmath.exp(z) * G_ell(ell, z, 1, 0, ctx) * z ** (-ell)
            h = mpmath.exp(-z) * H_ell(ell, z, 1, 0, ctx) * z ** (-ell)
        assert abs(g - 1) <= mpmath.mpf(10) / 50
        assert abs(h - 1) <= mpmath.mpf(10) / 50

    def test_small_z_exponent(self, ctx):
        expected = expected_small_z_exponent_G(0, 1, -0.4, sector="left")
        assert float(expected) == pytest.approx(0.1)
        fitted = small_z_exponent_G(0, 1, -0.4, ctx, angle=2.5)
        assert abs(fitted - float(expected)) <= 0.05 * abs(float(expected))

    def test_circle_bound(self, ctx):
        constant, ratios = circle_bound_constant(range(-4, 9), 2, SQRT2, 0.3, ctx)
        assert set(ratios) == set(range(-4, 9))
        assert mpmath.isfinite(constant) and constant > 0
        assert constant == max(ratios.values())

    def test_family_names(self, ctx):
        with pytest.raises(ValueError):
            ModelFunction("K", 0, 1, 0, ctx)


class TestPairings:

    @pytest.mark.parametrize("family", ["plain", "tilde"])
    def test_biorthogonality(self, ctx, family):
        with ctx.workprec():
            matrix = biorthogonality_matrix(2, 1, SQRT2, 0.3, ctx, family=family)
        assert max_biorthogonality_deviation(matrix) <= 1e-10

    def test_radius_independence(self, ctx):
        with ctx.workprec():
            small = biorthogonality_matrix(2, 0.5, 2, -0.4, ctx)
            large = biorthogonality_matrix(2, 2, 2, -0.4, ctx)
        assert max(abs(small[key] - large[key]) for key in small) <= 1e-10

    @pytest.mark.parametrize("family", ["plain", "tilde"])
    def test_gamma_independence(self, ctx, family):
        with ctx.workprec():
            flat = biorthogonality_matrix(2, 1, SQRT2, 0.3, ctx, family=family, gamma=0)
            shifted = biorthogonality_matrix(2, 1, SQRT2, 0.3, ctx, family=family, gamma=0.05)
        assert max(abs(flat[key] - shifted[key]) for key in flat) <= 1e-10

    def test_single_inner_product_matches_table(self, ctx):
        with ctx.workprec():
            g = ModelFunction("G", 1, 0.5, 1.3, ctx)
            single = inner_product(g, -1, 1, 0.5, 1.3, ctx)
            off = inner_product(g, -2, 1, 0.5, 1.3, ctx)
        assert abs(single - 1) <= 1e-10
        assert abs(off) <= 1e-10
