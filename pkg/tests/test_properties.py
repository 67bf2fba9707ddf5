import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from equilibrium import MonomialPotential, Potential, SeriesPotential, project_to_simplex, richardson
from equilibrium.kernels import log_ratio
from hardedge_verify import fit_rate
from numeric_core import PrecisionContext, log_gamma
from parametrix import index_for
from specfun import WrightParams, wright_bessel

CTX = PrecisionContext(mantissa_bits=96)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.5, 30), st.floats(-20, 20))
def test_log_gamma_recurrence(re, im):
    with CTX.workprec():
        v = mpmath.mpc(re, im)
        residual = log_gamma(v + 1, CTX) - log_gamma(v, CTX) - mpmath.log(v)
        assert abs(residual) <= 16 * CTX.rel_tol * max(1, abs(log_gamma(v, CTX)))


@settings(max_examples=30, deadline=None)
@given(st.floats(0.1, 5), st.floats(0.1, 3))
def test_wright_at_the_origin(a1, a2):
    with CTX.workprec():
        value = wright_bessel(WrightParams(a1, a2), 0, CTX)
        assert abs(value - mpmath.rgamma(a1)) <= CTX.rel_tol * abs(mpmath.rgamma(a1))


@given(st.integers(-20, 20), st.floats(0.2, 5))
def test_index_ranges(ell, theta):
    index = index_for(ell, theta)
    theta = mpmath.mpf(theta)
    assert 0 < index.R_lambda <= 1
    assert -theta / (theta + 1) < index.R_beta <= 1 / (theta + 1)


@given(st.floats(-10, 10), st.floats(0.01, 10) | st.floats(-10, -0.01), st.floats(1, 4), st.integers(10, 1000))
def test_richardson_is_exact_for_a_single_power(limit, c, order, n):
    values = [limit + c * size ** -order for size in (n / 2, n, 2 * n)]
    assert richardson(*values) == pytest.approx(limit, abs=1e-9 * max(1, abs(c)))


@given(st.floats(0.01, 100), st.floats(0.01, 100), st.floats(0.2, 5))
def test_log_ratio_is_symmetric(x, y, theta):
    assert float(log_ratio(x, y, theta)) == pytest.approx(float(log_ratio(y, x, theta)), rel=1e-9, abs=1e-9)


@given(st.integers(1, 12) | st.lists(st.floats(-5, 5).filter(lambda c: c != 0), min_size=1, max_size=5))
def test_potential_descriptor_round_trip(shape):
    potential = MonomialPotential(shape) if isinstance(shape, int) else SeriesPotential(tuple(shape))
    assert Potential.from_descriptor(potential.descriptor()) == potential


@given(st.floats(-3, -0.05), st.floats(0.01, 100), st.lists(st.integers(2, 500), min_size=2, max_size=8, unique=True))
def test_fit_rate_recovers_power_laws(slope, scale, n_values):
    n_values = sorted(n_values)
    errors = [scale * n ** slope for n in n_values]
    assert fit_rate(n_values, errors) == pytest.approx(slope, abs=1e-8)


@given(st.floats(0.2, 5))
def test_log_ratio_diagonal_limit(theta):
    assert float(log_ratio(2.0, 2.0, theta)) == pytest.approx(math.log(theta * 2 ** (theta - 1)), rel=1e-12)


@given(st.lists(st.floats(-50, 50), min_size=1, max_size=40))
def test_simplex_projection(values):
    projected = project_to_simplex(np.array(values))
    assert projected.min() >= 0
    assert projected.sum() == pytest.approx(1, abs=1e-9)
    assert np.allclose(project_to_simplex(projected), projected, atol=1e-12)
