"""
Direct minimization of the discretized energy over the probability simplex.

    E(w) = −½ wᵀ M w + Σ_j w_j V(x_j),   w_j ≥ 0,  Σ_j w_j = 1,

with M the symmetrized cell-averaged kernel log|x − y| + log|x^θ − y^θ| on a graded
mesh of [0, X]. The cell averages regularize the diagonal self-interaction. The
support is whatever the minimizer leaves nonzero, so no endpoint is assumed.
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from numeric_core import FitFailure, ConfigError, error_message

from .kernels import collocation_matrix, graded_edges
from .potential import Potential

logger = logging.getLogger(__name__)

SIMPLEX_GRID = 120
MAX_ITERATIONS = 40000
GAP_TOLERANCE = 1e-9
SUPPORT_THRESHOLD = 1e-10
MAX_SPAN_DOUBLINGS = 8


def virial_span(potential: Potential, theta: float) -> float:
    """Root of x V′(x) = 4(1+θ); x V′ is increasing under the one-cut condition."""
    target = 4 * (1 + theta)

    def excess(x: float) -> float:
        return float(x * potential.first_derivative(x)) - target

    lo, hi = 1e-8, 1.0
    while excess(hi) < 0:
        hi *= 4
        if hi > 1e12:
            raise FitFailure(error_message("equilibrium", "x V'(x) never reaches the virial scale", "virial_span"))
    return brentq(excess, lo, hi) if excess(lo) < 0 else lo


def project_to_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto {w ≥ 0, Σw = 1} by the sorted-threshold rule."""
    u = np.sort(v)[::-1]
    cumulative = np.cumsum(u) - 1
    index = np.arange(1, len(v) + 1)
    last = np.nonzero(u - cumulative / index > 0)[0][-1]
    return np.maximum(v - cumulative[last] / (last + 1), 0.0)


@dataclass(frozen=True, eq=False)
class SimplexSolution:
    edges: np.ndarray
    weights: np.ndarray
    b: float
    lagrange_ell: float
    gap: float
    iterations: int

    @property
    def grid(self) -> np.ndarray:
        return (self.edges[:-1] + self.edges[1:]) / 2

    @property
    def psi(self) -> np.ndarray:
        return self.weights / np.diff(self.edges)


class SimplexEnergyMinimizer:
    """
    Accelerated projected gradient on the simplex.

    The Frank–Wolfe gap gᵀw − min g bounds the energy excess and serves as the
    stopping rule. If mass reaches the last cell the span is doubled and the
    minimization restarted.
    """

    def __init__(self, potential: Potential, theta: float, grid_size: int = SIMPLEX_GRID,
                 max_iterations: int = MAX_ITERATIONS):
        if theta <= 0:
            raise ConfigError(error_message(self, f"theta must be positive, got {theta}"))
        if grid_size < 10:
            raise ConfigError(error_message(self, f"grid_size must be at least 10, got {grid_size}"))
        self.potential = potential
        self.theta = float(theta)
        self.grid_size = int(grid_size)
        self.max_iterations = int(max_iterations)
        self.unit_edges = graded_edges(self.grid_size, self.theta)
        self.unit_mid = (self.unit_edges[:-1] + self.unit_edges[1:]) / 2
        matrix = collocation_matrix(self.unit_edges, self.theta)
        self.matrix = (matrix + matrix.T) / 2
        # curvature on the tangent space Σw = 0
        centering = np.eye(self.grid_size) - 1.0 / self.grid_size
        self.lipschitz = float(np.max(np.abs(np.linalg.eigvalsh(centering @ self.matrix @ centering))))

    def _field(self, span: float) -> np.ndarray:
        return np.asarray(self.potential.value(span * self.unit_mid), dtype=float)

    def _minimize_on(self, span: float):
        field = self._field(span)
        weights = np.full(self.grid_size, 1.0 / self.grid_size)
        momentum = weights.copy()
        t = 1.0
        gap = np.inf
        for iteration in range(1, self.max_iterations + 1):
            gradient = field - self.matrix @ momentum
            following = project_to_simplex(momentum - gradient / self.lipschitz)
            t_next = (1 + np.sqrt(1 + 4 * t * t)) / 2
            momentum = following + (t - 1) / t_next * (following - weights)
            weights, t = following, t_next
            if iteration % 50 == 0:
                current = field - self.matrix @ weights
                gap = float(current @ weights - current.min())
                if gap <= GAP_TOLERANCE:
                    break
        return weights, gap, iteration

    def minimize(self) -> SimplexSolution:
        span = virial_span(self.potential, self.theta)
        for _ in range(MAX_SPAN_DOUBLINGS):
            weights, gap, iterations = self._minimize_on(span)
            support = np.nonzero(weights > SUPPORT_THRESHOLD * weights.max())[0]
            if support[-1] < self.grid_size - 1:
                break
            span *= 2
        else:
            raise FitFailure(error_message(self, "mass reaches the end of every trial span"))
        if gap > GAP_TOLERANCE:
            logger.warning("simplex minimization stopped with Frank-Wolfe gap %.3e after %d steps", gap, iterations)

        edges = span * self.unit_edges
        b = float(edges[support[-1] + 1])
        potentials = self.matrix @ weights - self._field(span)
        lagrange_ell = float(np.average(potentials[support], weights=weights[support])
                             + (1 + self.theta) * np.log(span))
        logger.info("simplex minimizer: b≈%.6g, ell≈%.6g, gap %.2e (%d steps, span %.4g)", b, lagrange_ell, gap,
                    iterations, span)
        return SimplexSolution(edges=edges, weights=weights, b=b, lagrange_ell=lagrange_ell, gap=gap,
                               iterations=iterations)
