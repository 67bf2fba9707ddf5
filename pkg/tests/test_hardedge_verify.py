import math

import mpmath
import pandas as pd
import polars as pl
import pytest

from biorthogonal import build_system
from hardedge_verify import (ConvergenceReport, bessel_limit_oracle, default_z_samples, fit_rate, gauss_jacobi_rule,
                             hard_edge_constants, hard_edge_count, k_product, kappa_prefactor, kernel_target,
                             limit_kernel, limit_kernel_rescaled, p_prefactor, polynomial_error,
                             predicted_kappa_rate, predicted_polynomial_rate, q_prefactor, scaled_kernel,
                             verify_kappa)
from numeric_core import ConfigError, FitFailure

GRID = (0.2, 0.7, 1.3, 2.5)

# exact hard-edge data of V(x) = x at θ = 1
LAGUERRE_CONSTANTS = {"rho": 1.0, "c": 1.0, "lagrange_ell": -2.0, "g0_re": -1.0, "gtilde0_re": -1.0}


def relative(a, b):
    return abs(a - b) / abs(b)


class TestLimitKernel:

    @pytest.mark.parametrize("x", GRID)
    @pytest.mark.parametrize("y", GRID)
    def test_bessel_oracle(self, ctx, x, y):
        with ctx.workprec():
            assert relative(limit_kernel(x, y, 0, 1, ctx), bessel_limit_oracle(x, y, 0, ctx)) <= 1e-8

    def test_bessel_oracle_with_alpha(self, ctx):
        with ctx.workprec():
            assert relative(limit_kernel(0.4, 1.7, 0.5, 1, ctx), bessel_limit_oracle(0.4, 1.7, 0.5, ctx)) <= 1e-8

    @pytest.mark.parametrize("theta, alpha", [(1, 0.5), (2, -0.4)])
    def test_series_agrees_with_gauss_jacobi(self, ctx, theta, alpha):
        with ctx.workprec():
            series = limit_kernel(0.6, 1.4, alpha, theta, ctx, method="series")
            quadrature = limit_kernel(0.6, 1.4, alpha, theta, ctx, method="gauss_jacobi")
            assert relative(series, quadrature) <= 1e-15

    def test_irrational_theta_uses_the_series(self, ctx):
        with ctx.workprec():
            value = limit_kernel(0.6, 1.4, 0.3, math.sqrt(2), ctx)
        assert mpmath.isfinite(value) and value != 0

    def test_product_kernel_at_theta_one(self, ctx):
        with ctx.workprec():
            expected = mpmath.besselj(0, 2 * mpmath.sqrt(0.5)) * mpmath.besselj(0, 2 * mpmath.sqrt(1.5))
            assert relative(k_product(0.5, 1.5, 0, 1, ctx), expected) <= 1e3 * ctx.rel_tol

    def test_rescaling(self, ctx):
        with ctx.workprec():
            assert relative(limit_kernel_rescaled(0.5, 0.9, 0, 1, 1, ctx), limit_kernel(0.5, 0.9, 0, 1, ctx)) <= 1e-15
            expected = 2 * limit_kernel(1.0, 1.8, 0, 2, ctx)
            assert relative(limit_kernel_rescaled(0.5, 0.9, 0, 2, 1, ctx), expected) <= 1e-15

    @pytest.mark.parametrize("args, method", [((1, 1, -1, 1), "auto"), ((-1, 1, 0, 1), "auto"),
                                              ((1, 1, 0, 1), "trapezoid")])
    def test_rejects_bad_arguments(self, ctx, args, method):
        with pytest.raises(ValueError):
            limit_kernel(*args, ctx, method=method)

    def test_gauss_jacobi_rule(self):
        rule = gauss_jacobi_rule(8, 0.5, 128)
        with mpmath.workprec(128):
            assert abs(mpmath.fsum(w for _, w in rule) - mpmath.mpf(2) / 3) <= mpmath.mpf("1e-30")
            assert abs(mpmath.fsum(w * u ** 3 for u, w in rule) - mpmath.mpf(2) / 9) <= mpmath.mpf("1e-30")
        assert all(0 < u < 1 for u, _ in rule)


class TestConvergenceReport:

    def test_fit_rate(self):
        n = [10, 20, 40, 80]
        assert fit_rate(n, [3 * k ** -0.5 for k in n]) == pytest.approx(-0.5)
        with pytest.raises(FitFailure):
            fit_rate(n, [1.0, 0.5, 0.0, 0.1])

    @pytest.mark.parametrize("n_values, errors, ratios", [((8, 8), (0.1, 0.05), None), ((8, 12), (0.1,), None),
                                                           ((8, 12), (0.1, -0.05), None),
                                                           ((8, 12), (0.1, 0.05), (1.1,))])
    def test_validation(self, n_values, errors, ratios):
        with pytest.raises(ConfigError):
            ConvergenceReport("kappa_n", n_values, errors, -2 / 3, {}, ratios=ratios)

    def test_prefactors_need_one_value_per_n(self):
        with pytest.raises(ConfigError):
            ConvergenceReport("p_n", (8, 12), (0.1, 0.05), -1 / 3, {}, prefactors={"C_n": (1.0,)})

    def test_rate_and_monotonicity(self):
        n = (8, 12, 16, 24)
        fast = ConvergenceReport("kappa_n", n, tuple(k ** -0.7 for k in n), -2 / 3, {})
        slow = ConvergenceReport("kappa_n", n, tuple(k ** -0.2 for k in n), -2 / 3, {})
        too_fast = ConvergenceReport("p_n", n, tuple(k ** -5.0 for k in n), -1 / 3, {})
        bumpy = ConvergenceReport("kappa_n", n, (0.1, 0.2, 0.05, 0.01), -2 / 3, {})
        assert fast.rate_ok() and fast.decreasing()
        assert not slow.rate_ok()
        assert too_fast.decreasing() and not too_fast.rate_ok()
        assert not bumpy.decreasing() and bumpy.decreasing(burn_in=1)

    @pytest.mark.parametrize("backend, frame_type", [("pandas", pd.DataFrame), ("polars", pl.DataFrame)])
    def test_frames(self, backend, frame_type):
        report = ConvergenceReport("kernel", (8, 16), (0.1, 0.04), -1 / 3, {"rho": 1.0},
                                   columns={"error_unscaled": (0.2, 0.08)})
        frame = report.to_frame(backend)
        assert isinstance(frame, frame_type)
        assert list(frame.columns) == ["n", "error", "ratio", "error_unscaled"]
        assert report.to_records()[1] == {"n": 16, "error": "0.04", "ratio": "", "error_unscaled": "0.08"}

    def test_json_dict(self):
        report = ConvergenceReport("kappa_n", (8, 16), (0.1, 0.05), -0.9, {"c": 1.0}, ratios=(1.1, 1.05))
        document = report.to_json_dict()
        assert document["fitted_rate"] == pytest.approx(-1)
        assert document["rate_ok"] and document["decreasing"]
        assert document["ratios"] == [1.1, 1.05]


class TestPredictions:

    @pytest.mark.parametrize("theta, polynomial, kappa", [(1, -1 / 3, -2 / 3), (2, -0.2, -0.6), (0.5, -1 / 3, -2 / 3)])
    def test_rates(self, theta, polynomial, kappa):
        assert predicted_polynomial_rate(theta) == pytest.approx(polynomial)
        assert predicted_kappa_rate(theta) == pytest.approx(kappa)

    @pytest.mark.parametrize("n", [10, 20, 40])
    def test_kappa_prefactor_against_stirling(self, n):
        with mpmath.workprec(128):
            kappa = mpmath.factorial(n) ** 2 / mpmath.mpf(n) ** (2 * n + 1)
            ratio = kappa / kappa_prefactor(n, LAGUERRE_CONSTANTS, 0, 1)
        assert float(ratio - 1) == pytest.approx(1 / (6 * n), rel=0.05)

    def test_p_prefactor_against_stirling(self):
        with mpmath.workprec(128):
            ratio = p_prefactor(30, LAGUERRE_CONSTANTS, 0, 1) / (mpmath.factorial(30) / mpmath.mpf(30) ** 30)
        assert abs(ratio - 1) <= 1 / (12 * 30) * 1.1

    def test_samples(self):
        samples = default_z_samples()
        assert len(samples) == 12
        assert all(abs(z) <= 2 for z in samples)

    def test_constants_from_equilibrium(self, marchenko_pastur):
        constants = hard_edge_constants(marchenko_pastur)
        assert constants["rho"] == pytest.approx(1, rel=2e-2)
        assert constants["gtilde0_re"] == pytest.approx(constants["g0_re"])
        assert constants["lagrange_ell"] == pytest.approx(-2, abs=5e-3)


class TestFiniteN:

    @pytest.fixture
    def laguerre(self, linear_params, ctx):
        return {n: build_system(linear_params(n), n, ctx) for n in (4, 12)}

    @pytest.mark.parametrize("which", ["p", "q"])
    def test_mehler_heine(self, laguerre, ctx, which):
        samples = [0.5, mpmath.mpc(1, 1)]
        small = polynomial_error(laguerre[4], LAGUERRE_CONSTANTS, samples, ctx, which)
        large = polynomial_error(laguerre[12], LAGUERRE_CONSTANTS, samples, ctx, which)
        assert large < small
        assert large <= 0.1

    def test_polynomial_error_needs_p_n(self, linear_params, ctx):
        system = build_system(linear_params(4), 3, ctx)
        with pytest.raises(ConfigError):
            polynomial_error(system, LAGUERRE_CONSTANTS, [0.5], ctx)

    def test_conventions_coincide_at_unit_rho(self, laguerre, ctx):
        system = laguerre[12]
        with mpmath.workprec(system.work_bits):
            theorem = scaled_kernel(system, LAGUERRE_CONSTANTS, 0.7, 1.1)
            unscaled = scaled_kernel(system, LAGUERRE_CONSTANTS, 0.7, 1.1, convention="unscaled")
            assert relative(theorem, unscaled) <= mpmath.mpf("1e-30")
            target = kernel_target(0.7, 1.1, 0, 1, LAGUERRE_CONSTANTS, ctx)
            assert relative(target, kernel_target(0.7, 1.1, 0, 1, LAGUERRE_CONSTANTS, ctx, "unscaled")) <= 1e-15
            assert relative(theorem, target) <= 0.2
        with pytest.raises(ValueError):
            scaled_kernel(system, LAGUERRE_CONSTANTS, 0.7, 1.1, convention="natural")

    def test_hard_edge_count(self, laguerre, ctx):
        count = hard_edge_count(laguerre[12], LAGUERRE_CONSTANTS, 2, ctx)
        assert 0 < count < 12

    def test_reports_carry_per_n_prefactors(self, laguerre, marchenko_pastur):
        systems = [laguerre[4], laguerre[12]]
        document = verify_kappa(marchenko_pastur, systems).to_json_dict()
        constants = hard_edge_constants(marchenko_pastur)
        prefactors = document["prefactors"]
        assert set(prefactors) == {"C_n", "C_tilde_n", "kappa_prefactor"}
        for i, system in enumerate(systems):
            assert prefactors["C_n"][i] == pytest.approx(float(p_prefactor(system.n, constants, 0, 1)), rel=1e-12)
            assert prefactors["C_tilde_n"][i] == pytest.approx(float(q_prefactor(system.n, constants, 0, 1)),
                                                               rel=1e-12)
            assert document["ratios"][i] * prefactors["kappa_prefactor"][i] == pytest.approx(
                float(system.kappas[system.n]), rel=1e-12)
