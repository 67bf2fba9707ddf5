import json

import mpmath
import pytest

from biorthogonal import (BiorthogonalSystem, SystemCache, biorthogonality_residual, build_system,
                          cauchy_transform_p, cauchy_transform_q, config_hash, conjugation_residual, direct_kappa,
                          jump_residual_p, jump_residual_q, kernel_n, mixed_moment, moment_matrix,
                          reproducing_residual, system_key, tail_ratio_p, tail_ratio_q, trace_residual)
from equilibrium import LinearPotential, ModelParams
from numeric_core import AxisError, ConfigError, DegreeTooLow, DomainError, PrecisionContext


def laguerre_moment(j, k, params):
    power = params.alpha + j + params.theta * k + 1
    return mpmath.gamma(power) / mpmath.mpf(params.n) ** power


def laguerre_kappa(j, params):
    return mpmath.factorial(j) * mpmath.gamma(j + params.alpha + 1) / mpmath.mpf(params.n) ** (2 * j + params.alpha + 1)


def relative(a, b):
    return abs(a - b) / abs(b)


@pytest.fixture
def laguerre(linear_params, ctx):
    return build_system(linear_params(3, alpha=0.5), 4, ctx)


class TestMoments:

    @pytest.mark.parametrize("theta", [1.0, 2 ** 0.5, 2.0])
    def test_gamma_closed_form(self, linear_params, ctx, theta):
        params = linear_params(5, alpha=0.3, theta=theta)
        with ctx.workprec():
            for j, k in [(0, 0), (2, 1), (1, 3)]:
                assert relative(mixed_moment(j, k, params, ctx), laguerre_moment(j, k, params)) <= 10 * ctx.rel_tol

    def test_matrix_matches_single_moments(self, linear_params, ctx):
        params = linear_params(2, alpha=-0.4, theta=1.5)
        matrix = moment_matrix(params, 3, ctx)
        assert len(matrix) == 4 and all(len(row) == 4 for row in matrix)
        with ctx.workprec():
            assert relative(matrix[3][2], laguerre_moment(3, 2, params)) <= 10 * ctx.rel_tol

    def test_negative_indices(self, linear_params, ctx):
        with pytest.raises(ValueError):
            mixed_moment(-1, 0, linear_params(1), ctx)


class TestSystem:

    def test_degree_zero(self, linear_params, ctx):
        params = linear_params(2, alpha=0.5)
        system = build_system(params, 0, ctx)
        assert system.p_coeffs == ((1,),) and system.q_coeffs == ((1,),)
        with ctx.workprec():
            assert relative(system.kappas[0], laguerre_moment(0, 0, params)) <= 10 * ctx.rel_tol

    def test_negative_degree(self, linear_params, ctx):
        with pytest.raises(ConfigError):
            build_system(linear_params(2), -1, ctx)

    def test_laguerre_normalizations(self, laguerre, ctx):
        with ctx.workprec():
            for j in range(5):
                assert relative(laguerre.kappas[j], laguerre_kappa(j, laguerre.params)) <= 10 * ctx.rel_tol

    def test_laguerre_polynomials_are_symmetric(self, laguerre, ctx):
        with ctx.workprec():
            constant, leading = laguerre.p_coeffs[1][:2]
            assert relative(constant, -mpmath.mpf(1.5) / 3) <= 10 * ctx.rel_tol
            assert leading == 1
            assert all(abs(p - q) <= 10 * ctx.rel_tol * max(1, abs(p))
                       for p_row, q_row in zip(laguerre.p_coeffs, laguerre.q_coeffs) for p, q in zip(p_row, q_row))

    def test_theta_two_biorthogonality(self, linear_params, ctx):
        system = build_system(linear_params(4, alpha=0.3, theta=2.0), 5, ctx)
        assert system.work_bits > ctx.mantissa_bits
        assert biorthogonality_residual(system) <= mpmath.mpf(10) ** (-ctx.mantissa_bits / 4)

    def test_direct_kappa(self, laguerre):
        with laguerre.context().workprec():
            for j in (0, 3):
                assert relative(direct_kappa(laguerre, j), laguerre.kappas[j]) <= mpmath.mpf("1e-25")

    def test_json_document(self, laguerre):
        document = json.loads(json.dumps(laguerre.to_json()))
        assert document["schema_version"] == 1
        assert document["config"] == system_key(laguerre.params, 4, 128)
        restored = BiorthogonalSystem.from_json(document)
        assert restored.params == laguerre.params and restored.degree == 4
        with mpmath.workprec(laguerre.work_bits):
            tolerance = mpmath.ldexp(1, -(laguerre.work_bits - 8))
            assert all(relative(a, b) <= tolerance for a, b in zip(restored.kappas, laguerre.kappas))

    @pytest.mark.parametrize("mutate", [lambda d: d.update(schema_version=2), lambda d: d.pop("kappas"),
                                        lambda d: d["config"].update(theta="not a number")])
    def test_malformed_documents(self, laguerre, mutate):
        document = json.loads(json.dumps(laguerre.to_json()))
        mutate(document)
        with pytest.raises(ConfigError):
            BiorthogonalSystem.from_json(document)


class TestCache:

    def test_hash_ignores_key_order(self):
        assert config_hash({"a": 1, "b": [1, 2]}) == config_hash({"b": [1, 2], "a": 1})
        assert config_hash({"a": 1}) != config_hash({"a": 2})
        assert len(config_hash({})) == 64

    def test_store_and_reload(self, tmp_path, linear_params, ctx):
        cache = SystemCache(tmp_path / "systems")
        params = linear_params(2, alpha=0.5)
        assert cache.load(params, 2, ctx.mantissa_bits) is None
        built = cache.get_or_build(params, 2, ctx)
        path = cache.path_for(params, 2, ctx.mantissa_bits)
        assert path.exists() and path.parent == tmp_path / "systems"
        loaded = cache.get_or_build(params, 2, ctx)
        assert loaded.config_key() == built.config_key()
        assert cache.path_for(params, 2, 256) != path

    def test_unreadable_entry(self, tmp_path, linear_params, ctx):
        cache = SystemCache(tmp_path)
        params = linear_params(2)
        cache.path_for(params, 1, ctx.mantissa_bits).write_text("{", encoding="utf-8")
        with pytest.raises(ConfigError):
            cache.load(params, 1, ctx.mantissa_bits)


class TestKernel:

    def test_single_term_is_the_weight(self, linear_params, ctx):
        system = build_system(linear_params(1), 0, ctx)
        with mpmath.workprec(system.work_bits):
            assert relative(kernel_n(system, 0.7, 2.0), mpmath.exp(-0.7)) <= 10 * ctx.rel_tol

    def test_trace(self, linear_params, ctx):
        system = build_system(linear_params(3, alpha=0.5), 2, ctx)
        assert abs(trace_residual(system)) <= mpmath.mpf("1e-20")

    def test_reproducing(self, linear_params, ctx):
        system = build_system(linear_params(3, alpha=0.5, theta=2.0), 2, ctx)
        assert abs(reproducing_residual(system, 0.5, 1.2)) <= mpmath.mpf("1e-20")

    @pytest.mark.parametrize("theta, alpha", [(1.0, 0.5), (2.0, 0.0), (0.5, 1.5)])
    def test_diagonal_is_positive(self, linear_params, ctx, theta, alpha):
        system = build_system(linear_params(3, alpha=alpha, theta=theta), 2, ctx)
        for x in (0.01, 0.1, 0.4, 1.0, 1.7, 2.5, 3.3, 4.0, 6.0):
            assert kernel_n(system, x, x) > 0, x

    def test_rank_needs_degree(self, laguerre):
        with pytest.raises(DegreeTooLow):
            kernel_n(laguerre, 1.0, 1.0, n=6)

    def test_positive_arguments(self, laguerre):
        with pytest.raises(DomainError):
            kernel_n(laguerre, -1.0, 1.0)


class TestCauchyTransforms:

    @pytest.fixture(scope="class")
    def six(self):
        params = ModelParams(theta=1.0, alpha=0.0, n=6, potential=LinearPotential())
        return build_system(params, 6, PrecisionContext(mantissa_bits=128))

    @pytest.mark.parametrize("x", [0.3, 1.0, 2.5])
    def test_jumps(self, six, x):
        with six.context().workprec():
            scale = abs(six.p_eval(6, mpmath.mpf(x)) * six.weight(mpmath.mpf(x)))
            assert jump_residual_p(six, x) <= mpmath.mpf("1e-8") * max(scale, mpmath.mpf("1e-30"))
            assert jump_residual_q(six, x) <= mpmath.mpf("1e-8") * max(scale, mpmath.mpf("1e-30"))

    def test_tail_ratios(self, six):
        z = 1e3 * mpmath.expj(0.8)
        with six.context().workprec():
            assert abs(tail_ratio_p(six, z) - 1) <= 1e-2
            assert abs(tail_ratio_q(six, z) - 1) <= 1e-2

    def test_conjugation(self, six):
        with six.context().workprec():
            value = cauchy_transform_p(six, mpmath.mpc(0.7, 0.4))
            assert conjugation_residual(six, mpmath.mpc(0.7, 0.4)) <= mpmath.mpf("1e-20") * max(1, abs(value))

    def test_positive_axis_needs_a_side(self, six):
        with pytest.raises(AxisError):
            cauchy_transform_p(six, 2.0)
        with pytest.raises(AxisError):
            cauchy_transform_q(six, -1.0, side="+")
