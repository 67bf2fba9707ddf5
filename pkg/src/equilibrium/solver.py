"""
Equilibrium measure of the two-kernel logarithmic energy with external field V.

A coarse minimization of the energy over the probability simplex gives a first
support [0, b₀]. On a fine graded mesh of [0, b] the Euler–Lagrange equality is then
imposed at the cell midpoints together with the mass constraint, and b is refined by
bisection on the sign of the Euler–Lagrange inequality just beyond the trial endpoint.
"""

import logging
from dataclasses import dataclass, field, replace
from typing import Any, Dict, Optional, Tuple

import numpy as np
from scipy.linalg import lu_factor, lu_solve
from scipy.optimize import bisect

from numeric_core import FitFailure, NotOneCut, ConfigError, error_message

from .kernels import collocation_matrix, graded_edges, log_abs_average, log_ratio_average
from .potential import Potential, check_one_cut_sufficient
from .simplex import SimplexEnergyMinimizer

logger = logging.getLogger(__name__)

LEFT_WINDOW = (1e-4, 1e-2)
RIGHT_WINDOW = (1e-3, 3e-2)
INTERIOR = (0.02, 0.98)
DIP_THRESHOLD = 1e-8
EXPONENT_TOLERANCE = 0.10
MIN_GRID = 50


def equilibrium_constants(b: float, d1: float, theta: float) -> Dict[str, float]:
    """c, ρ, ϱ = (θ+1)ρ and m_θ from the endpoint and the hard-edge coefficient."""
    c = b * theta * (1 + theta) ** (-1 - 1 / theta)
    rho = d1 * np.pi / (theta * np.sin(np.pi / (1 + theta)))
    return {"c": c, "rho": rho, "varrho": (theta + 1) * rho, "m_theta": min(1 + 1 / theta, 2.0)}


@dataclass(frozen=True, eq=False)
class EquilibriumData:
    theta: float
    potential: Potential
    edges: np.ndarray
    weights: np.ndarray
    b: float
    d1: float
    d2: float
    lagrange_ell: float
    g0_re: float
    left_exponent: float
    right_exponent: float
    el_residual: float
    b_simplex: float = float("nan")
    extrapolated: Dict[str, float] = field(default_factory=dict)

    @property
    def grid_size(self) -> int:
        return len(self.weights)

    @property
    def grid(self) -> np.ndarray:
        return (self.edges[:-1] + self.edges[1:]) / 2

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.edges)

    @property
    def psi(self) -> np.ndarray:
        return np.clip(self.weights, 0.0, None) / self.widths

    @property
    def gtilde0_re(self) -> float:
        return self.theta * self.g0_re

    @property
    def c(self) -> float:
        return equilibrium_constants(self.b, self.d1, self.theta)["c"]

    @property
    def rho(self) -> float:
        return equilibrium_constants(self.b, self.d1, self.theta)["rho"]

    @property
    def varrho(self) -> float:
        return equilibrium_constants(self.b, self.d1, self.theta)["varrho"]

    @property
    def m_theta(self) -> float:
        return min(1 + 1 / self.theta, 2.0)

    @property
    def mass(self) -> float:
        return float(np.sum(self.weights))

    def density(self, x):
        """Piecewise-constant density; zero outside [0, b]."""
        x = np.asarray(x, dtype=float)
        index = np.clip(np.searchsorted(self.edges, x, side="right") - 1, 0, self.grid_size - 1)
        inside = (x >= 0) & (x <= self.b)
        return np.where(inside, self.psi[index], 0.0)

    def as_dict(self) -> Dict[str, Any]:
        summary = {
            "theta": self.theta,
            "potential": self.potential.descriptor(),
            "grid_size": self.grid_size,
            "b": self.b,
            "d1": self.d1,
            "d2": self.d2,
            "lagrange_ell": self.lagrange_ell,
            "g0_re": self.g0_re,
            "gtilde0_re": self.gtilde0_re,
            "left_exponent": self.left_exponent,
            "right_exponent": self.right_exponent,
            "el_residual": self.el_residual,
            "b_simplex": self.b_simplex,
            "mass": self.mass,
        }
        summary.update(equilibrium_constants(self.b, self.d1, self.theta))
        if self.extrapolated:
            summary["extrapolated"] = dict(self.extrapolated)
        return summary


class EquilibriumSolver:
    """
    Collocation solver on a fixed unit mesh.

    One LU factorization of the bordered system serves every trial endpoint, since
    changing b only shifts the kernel matrix by a constant.
    """

    def __init__(self, potential: Potential, theta: float, grid_size: int = 400):
        if theta <= 0:
            raise ConfigError(error_message(self, f"theta must be positive, got {theta}"))
        if grid_size < MIN_GRID:
            raise ConfigError(error_message(self, f"grid_size must be at least {MIN_GRID}, got {grid_size}"))
        self.potential = potential
        self.theta = float(theta)
        self.grid_size = int(grid_size)
        self.unit_edges = graded_edges(self.grid_size, self.theta)
        self.unit_mid = (self.unit_edges[:-1] + self.unit_edges[1:]) / 2
        self.unit_widths = np.diff(self.unit_edges)
        self.matrix = collocation_matrix(self.unit_edges, self.theta)
        self._factor = lu_factor(self._bordered(self.matrix))
        self._outer_point = 1 + self.unit_widths[-1]
        self._outer_row = (2 * log_abs_average(np.array([self._outer_point]), self.unit_edges)
                           + log_ratio_average(np.array([self._outer_point]), self.unit_edges, self.theta))[0]
        logger.debug("assembled collocation matrix of size %d for theta=%g", self.grid_size, self.theta)

    @staticmethod
    def _bordered(matrix: np.ndarray) -> np.ndarray:
        size = matrix.shape[0]
        system = np.zeros((size + 1, size + 1))
        system[:size, :size] = matrix
        system[:size, size] = -1.0
        system[size, :size] = 1.0
        return system

    def _rhs(self, b: float, count: int) -> np.ndarray:
        rhs = np.empty(count + 1)
        rhs[:count] = np.asarray(self.potential.value(b * self.unit_mid[:count]), dtype=float)
        rhs[:count] -= (1 + self.theta) * np.log(b)
        rhs[count] = 1.0
        return rhs

    def solve_on(self, b: float) -> Tuple[np.ndarray, float]:
        """Cell masses and ℓ for the support [0, b]."""
        solution = lu_solve(self._factor, self._rhs(b, self.grid_size))
        return solution[:-1], float(solution[-1])

    def el_excess(self, b: float) -> float:
        """
        U − V − ℓ one cell beyond b for the measure collocated on [0, b].

        Positive when the support is too short (the inequality off the support fails),
        negative once b passes the true endpoint.
        """
        weights, ell = self.solve_on(b)
        outside = b * self._outer_point
        return float(self._outer_row @ weights + (1 + self.theta) * np.log(b)
                     - float(self.potential.value(outside)) - ell)

    def locate_edge(self, b_start: Optional[float] = None) -> float:
        """Bracket around the simplex estimate, then bisection on the sign of el_excess."""
        if b_start is None:
            b_start = SimplexEnergyMinimizer(self.potential, self.theta).minimize().b
        lo, hi = b_start / 1.25, b_start * 1.25
        for _ in range(40):
            if self.el_excess(lo) > 0:
                break
            lo /= 1.25
        else:
            raise FitFailure(error_message(self, f"no lower bracket for the endpoint near {b_start:.6g}"))
        for _ in range(40):
            if self.el_excess(hi) < 0:
                break
            hi *= 1.25
        else:
            raise FitFailure(error_message(self, f"no upper bracket for the endpoint near {b_start:.6g}"))
        b = bisect(self.el_excess, lo, hi, xtol=1e-13 * b_start, rtol=1e-13)
        logger.info("support endpoint b=%.12g (theta=%g, grid=%d, simplex start %.6g)", b, self.theta,
                    self.grid_size, b_start)
        return float(b)

    def _left_edge_fit(self, x: np.ndarray, psi: np.ndarray, left: np.ndarray, right: np.ndarray,
                       b: float) -> Tuple[float, float]:
        beta = 1 / (self.theta + 1)
        window = (x >= LEFT_WINDOW[0] * b) & (x <= LEFT_WINDOW[1] * b)
        if window.sum() < 3:
            raise FitFailure(error_message(self, "fewer than three cells in the left-edge window; increase grid_size"))
        power_average = (right[window] ** (1 - beta) - left[window] ** (1 - beta)) / (
            (1 - beta) * (right[window] - left[window]))
        estimates = psi[window] / power_average
        d1 = float(np.polyfit(x[window], estimates, 1)[1])
        slope = float(np.polyfit(np.log(x[window]), np.log(psi[window]), 1)[0])
        if abs(slope + beta) > EXPONENT_TOLERANCE * beta:
            raise FitFailure(error_message(self, f"left-edge exponent {slope:.4f} deviates from {-beta:.4f}"))
        return d1, slope

    def _right_edge_fit(self, x: np.ndarray, psi: np.ndarray, left: np.ndarray, right: np.ndarray,
                        b: float) -> Tuple[float, float]:
        gap = b - x
        window = (gap >= RIGHT_WINDOW[0] * b) & (gap <= RIGHT_WINDOW[1] * b) & (psi > 0)
        if window.sum() < 3:
            raise FitFailure(error_message(self, "fewer than three cells in the right-edge window; increase grid_size"))
        root_average = (2 / 3) * ((b - left[window]) ** 1.5 - (b - right[window]) ** 1.5) / (
            right[window] - left[window])
        d2 = float(np.polyfit(gap[window], psi[window] / root_average, 1)[1])
        slope = float(np.polyfit(np.log(gap[window]), np.log(psi[window]), 1)[0])
        return d2, slope

    def solve(self) -> EquilibriumData:
        if not check_one_cut_sufficient(self.potential, 1e3):
            logger.warning("x V'' + V' > 0 fails on the sample grid; the support may not be one interval")
        if not self.potential.growth_ok():
            logger.warning("V(x)/log x does not grow on the sample points")

        b_simplex = SimplexEnergyMinimizer(self.potential, self.theta).minimize().b
        b = self.locate_edge(b_simplex)
        weights, ell = self.solve_on(b)
        edges = b * self.unit_edges
        x = b * self.unit_mid
        widths = np.diff(edges)
        psi = np.clip(weights, 0.0, None) / widths

        interior = (self.unit_mid > INTERIOR[0]) & (self.unit_mid < INTERIOR[1])
        if psi[interior].min() < DIP_THRESHOLD * psi.max():
            raise NotOneCut(error_message(self, "density vanishes inside the support"))

        d1, left_exponent = self._left_edge_fit(x, psi, edges[:-1], edges[1:], b)
        d2, right_exponent = self._right_edge_fit(x, psi, edges[:-1], edges[1:], b)

        potential_values = self.matrix @ weights + (1 + self.theta) * np.log(b)
        el = potential_values - np.asarray(self.potential.value(x), dtype=float)
        lagrange_ell = float(np.mean(el[interior]))
        el_residual = float(np.max(np.abs(el[interior] - lagrange_ell)) / max(1.0, abs(lagrange_ell)))
        if abs(lagrange_ell - ell) > 1e-8 * max(1.0, abs(ell)):
            logger.warning("averaged Lagrange constant %.12g differs from the solved one %.12g", lagrange_ell, ell)

        g0_re = float(np.sum(weights * (log_abs_average(np.zeros(1), edges)[0])))

        return EquilibriumData(theta=self.theta, potential=self.potential, edges=edges, weights=weights, b=b,
                               d1=d1, d2=d2, lagrange_ell=lagrange_ell, g0_re=g0_re,
                               left_exponent=left_exponent, right_exponent=right_exponent,
                               el_residual=el_residual, b_simplex=b_simplex)


EXTRAPOLATED_FIELDS = ("b", "d1", "d2", "lagrange_ell", "g0_re")


def richardson(coarse: float, middle: float, fine: float) -> float:
    """Extrapolate a sequence on grids N/2, N, 2N with an observed order clipped to [1, 4]."""
    first, second = middle - coarse, fine - middle
    if first == 0 or second == 0 or np.sign(first) != np.sign(second):
        return fine
    order = float(np.clip(np.log2(abs(first / second)), 1.0, 4.0))
    return fine + second / (2 ** order - 1)


def solve_equilibrium(V: Potential, theta: float, grid_size: int = 400, extrapolate: bool = False) -> EquilibriumData:
    """
    Solve for the equilibrium measure of V.

    With extrapolate=True the problem is also solved on grids of half and double size;
    the returned data belong to the finest grid and `extrapolated` holds the Richardson
    estimates of b, d1, d2, ℓ and Re g₊(0), together with the derived constants.
    """
    if not extrapolate:
        return EquilibriumSolver(V, theta, grid_size).solve()

    sizes = (max(grid_size // 2, MIN_GRID), grid_size, 2 * grid_size)
    levels = [EquilibriumSolver(V, theta, size).solve() for size in sizes]
    estimates = {name: richardson(*(getattr(level, name) for level in levels)) for name in EXTRAPOLATED_FIELDS}
    estimates.update(equilibrium_constants(estimates["b"], estimates["d1"], theta))
    estimates["refinement_change"] = max(
        abs(levels[2].b / levels[1].b - 1), abs(levels[2].d1 / levels[1].d1 - 1),
        abs(levels[2].lagrange_ell - levels[1].lagrange_ell) / max(1.0, abs(levels[1].lagrange_ell)))
    logger.info("Richardson estimates: %s", estimates)
    finest = levels[2]
    return replace(finest, extrapolated=estimates)


def virial_residual(eq: EquilibriumData) -> float:
    """∫ x V′(x) dμ − (1+θ)/2, with the midpoint rule per cell."""
    x = eq.grid
    moment = float(np.sum(eq.weights * x * np.asarray(eq.potential.first_derivative(x), dtype=float)))
    return moment - (1 + eq.theta) / 2


def el_inequality(eq: EquilibriumData, x) -> np.ndarray:
    """U(x) − V(x) − ℓ for real x > 0, U the total logarithmic potential; zero on the support nodes."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    averages = 2 * log_abs_average(x, eq.edges) + log_ratio_average(x, eq.edges, eq.theta)
    return averages @ eq.weights - np.asarray(eq.potential.value(x), dtype=float) - eq.lagrange_ell
