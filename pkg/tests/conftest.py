import mpmath
import pytest

from equilibrium import LinearPotential, ModelParams, solve_equilibrium
from numeric_core import PrecisionContext


@pytest.fixture
def ctx():
    return PrecisionContext(mantissa_bits=128)


@pytest.fixture
def ctx256():
    return PrecisionContext(mantissa_bits=256)


@pytest.fixture(autouse=True)
def restore_mp_precision():
    prec = mpmath.mp.prec
    yield
    mpmath.mp.prec = prec


@pytest.fixture(scope="session")
def marchenko_pastur():
    """Equilibrium of V(x) = x at θ = 1: support [0, 4], density √((4−x)/x)/(2π)."""
    return solve_equilibrium(LinearPotential(), 1.0, grid_size=400)


@pytest.fixture
def linear_params():
    def make(n: int, alpha: float = 0.0, theta: float = 1.0) -> ModelParams:
        return ModelParams(theta=theta, alpha=alpha, n=n, potential=LinearPotential())

    return make
