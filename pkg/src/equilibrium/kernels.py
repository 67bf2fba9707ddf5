"""
Cell integrals of the two logarithmic kernels on a graded mesh of [0, 1].

The kernels log|x − y| and log|x^θ − y^θ| are scale covariant, so a matrix assembled on
the unit mesh serves every trial support [0, b] up to the additive constant (1+θ) log b.
"""

from functools import lru_cache
from typing import Tuple

import numpy as np

GAUSS_ORDER = 6
NEAR_CELLS = 4.0
ROW_CHUNK = 256


@lru_cache(maxsize=8)
def gauss_rule(order: int = GAUSS_ORDER) -> Tuple[np.ndarray, np.ndarray]:
    """Gauss–Legendre nodes on [−1, 1] and weights normalized to sum to one."""
    nodes, weights = np.polynomial.legendre.leggauss(order)
    return nodes, weights / 2


def graded_edges(grid_size: int, theta: float) -> np.ndarray:
    """Cell edges of [0, 1], clustered like s^{2q} at 0 and quadratically at 1."""
    grading = max(1.0, (theta + 1) / theta)
    s = np.linspace(0.0, 1.0, grid_size + 1)
    edges = ((1 - np.cos(np.pi * s)) / 2) ** grading
    edges[0], edges[-1] = 0.0, 1.0
    return edges


def cell_nodes(edges: np.ndarray, order: int = GAUSS_ORDER) -> np.ndarray:
    nodes, _ = gauss_rule(order)
    mid = (edges[:-1] + edges[1:]) / 2
    half = (edges[1:] - edges[:-1]) / 2
    return mid[:, None] + half[:, None] * nodes[None, :]


def log_antiderivative(u):
    """u log|u| − u, continuous at u = 0."""
    u = np.asarray(u, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        values = u * np.log(np.abs(u)) - u
    return np.where(u == 0, 0.0, values)


def log_ratio(x, y, theta: float):
    """log((x^θ − y^θ)/(x − y)) for positive x, y, without cancellation near x = y."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    log_q = np.log(x) - np.log(y)
    small = np.abs(log_q) < 1e-6
    safe = np.where(small, 1.0, log_q)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(small, theta * (1 + (theta - 1) * log_q / 2), np.expm1(theta * safe) / np.expm1(safe))
    return (theta - 1) * np.log(y) + np.log(ratio)


def log_abs_average(x: np.ndarray, edges: np.ndarray) -> np.ndarray:
    """
    Cell averages (1/h_j)∫_{I_j} log|x_i − y| dy for every target x_i and cell I_j.

    Nearby cells use the closed form; distant cells use Gauss–Legendre to avoid
    cancellation between the two antiderivative values.
    """
    x = np.asarray(x, dtype=float)[:, None]
    left, right = edges[:-1][None, :], edges[1:][None, :]
    width = right - left
    mid = (left + right) / 2
    near = np.abs(x - mid) <= NEAR_CELLS * width

    with np.errstate(divide="ignore", invalid="ignore"):
        exact = (log_antiderivative(x - left) - log_antiderivative(x - right)) / width
    _, weights = gauss_rule()
    y = cell_nodes(edges)[None, :, :]
    with np.errstate(divide="ignore"):
        far = np.sum(weights * np.log(np.abs(x[:, :, None] - y)), axis=-1)
    return np.where(near, exact, far)


def log_ratio_average(x: np.ndarray, edges: np.ndarray, theta: float) -> np.ndarray:
    """Cell averages of log((x^θ − y^θ)/(x − y)) by Gauss–Legendre; the integrand is smooth."""
    _, weights = gauss_rule()
    y = cell_nodes(edges)[None, :, :]
    return np.sum(weights * log_ratio(np.asarray(x, dtype=float)[:, None, None], y, theta), axis=-1)


def collocation_matrix(edges: np.ndarray, theta: float) -> np.ndarray:
    """
    M_ij = average over cell j of log|x_i − y| + log|x_i^θ − y^θ|, x_i the midpoint of cell i.

    Rows are assembled in chunks to bound the size of the node tensor.
    """
    mid = (edges[:-1] + edges[1:]) / 2
    blocks = []
    for start in range(0, len(mid), ROW_CHUNK):
        rows = mid[start:start + ROW_CHUNK]
        blocks.append(2 * log_abs_average(rows, edges) + log_ratio_average(rows, edges, theta))
    return np.vstack(blocks)
