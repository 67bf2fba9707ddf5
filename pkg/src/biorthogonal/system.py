"""
Finite-n biorthogonal system {p_j, q_k, κ_j} from the mixed moment matrix.

With M = L D U (L unit lower, U unit upper, no pivoting), the rows of L^{-1} are the
coefficients of the monic p_j in powers of x, the rows of (U^{-1})ᵀ those of the monic
q_k in powers of t = x^θ, and κ_j = D_j, the ratio of consecutive leading minors.
"""

import logging
import warnings
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

import mpmath

from equilibrium import ModelParams, Potential
from numeric_core import (ConfigError, IllConditioned, PrecisionContext, SingularMoment, decimal_string,
                          error_message, quad_semiaxis)

from .moments import bulk_scale, moment_matrix, weight, working_context

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
MAX_ESCALATIONS = 2

Matrix = Tuple[Tuple[mpmath.mpf, ...], ...]


def _ldu(matrix: List[List[mpmath.mpf]], bits: int) -> Tuple[List[List], List, List[List]]:
    size = len(matrix)
    lower = [[mpmath.mpf(int(i == j)) for j in range(size)] for i in range(size)]
    upper = [[mpmath.mpf(int(i == j)) for j in range(size)] for i in range(size)]
    pivots = []
    work = [row[:] for row in matrix]
    scale = max(abs(v) for row in matrix for v in row)
    floor = mpmath.ldexp(scale, -int(0.9 * bits))
    for j in range(size):
        pivot = work[j][j]
        if not pivot > floor:
            raise SingularMoment(error_message("biorthogonal", f"pivot {j} = {mpmath.nstr(pivot, 5)} is not "
                                               f"positive at {bits} bits", "_ldu"))
        pivots.append(pivot)
        for i in range(j + 1, size):
            lower[i][j] = work[i][j] / pivot
            upper[j][i] = work[j][i] / pivot
        for i in range(j + 1, size):
            for k in range(j + 1, size):
                work[i][k] -= lower[i][j] * pivot * upper[j][k]
    return lower, pivots, upper


def _unit_lower_inverse(lower: List[List]) -> List[List]:
    size = len(lower)
    inverse = [[mpmath.mpf(int(i == j)) for j in range(size)] for i in range(size)]
    for i in range(size):
        for j in range(i):
            inverse[i][j] = -mpmath.fsum(lower[i][k] * inverse[k][j] for k in range(j, i))
    return inverse


def _freeze(rows) -> Matrix:
    return tuple(tuple(row) for row in rows)


@dataclass(frozen=True)
class BiorthogonalSystem:
    params: ModelParams
    degree: int
    p_coeffs: Matrix
    q_coeffs: Matrix
    kappas: Tuple[mpmath.mpf, ...]
    moments: Matrix
    mantissa_bits: int
    work_bits: int

    @property
    def theta(self) -> float:
        return self.params.theta

    @property
    def alpha(self) -> float:
        return self.params.alpha

    @property
    def n(self) -> int:
        return self.params.n

    def p_eval(self, j: int, x):
        """p_j(x); coefficients are stored by increasing power."""
        return mpmath.polyval(list(reversed(self.p_coeffs[j][:j + 1])), x)

    def q_eval(self, k: int, t):
        """q_k(t) in the variable t = x^θ."""
        return mpmath.polyval(list(reversed(self.q_coeffs[k][:k + 1])), t)

    def q_eval_x(self, k: int, x):
        return self.q_eval(k, mpmath.power(x, self.theta))

    def weight(self, x):
        return weight(x, self.params)

    def context(self, ctx: Optional[PrecisionContext] = None) -> PrecisionContext:
        """Evaluation context at the construction's working precision."""
        base = ctx if ctx is not None else PrecisionContext(mantissa_bits=self.mantissa_bits)
        return working_context(base, self.degree)

    def residual_matrix(self) -> List[List]:
        """P M Qᵀ − diag(κ), at the working precision."""
        size = self.degree + 1
        with mpmath.workprec(self.work_bits):
            pm = [[mpmath.fsum(self.p_coeffs[j][a] * self.moments[a][b] for a in range(j + 1))
                   for b in range(size)] for j in range(size)]
            return [[mpmath.fsum(pm[j][b] * self.q_coeffs[k][b] for b in range(k + 1))
                     - (self.kappas[j] if j == k else 0) for k in range(size)] for j in range(size)]

    def config_key(self) -> Dict[str, Any]:
        return system_key(self.params, self.degree, self.mantissa_bits)

    def to_json(self) -> Dict[str, Any]:
        ctx = PrecisionContext(mantissa_bits=self.work_bits)

        def render(rows):
            return [[decimal_string(v, ctx) for v in row] for row in rows]

        with mpmath.workprec(self.work_bits):
            return {
                "schema_version": SCHEMA_VERSION,
                "config": self.config_key(),
                "work_bits": self.work_bits,
                "p_coeffs": render(self.p_coeffs),
                "q_coeffs": render(self.q_coeffs),
                "kappas": [decimal_string(v, ctx) for v in self.kappas],
                "moments": render(self.moments),
            }

    @staticmethod
    def from_json(document: Dict[str, Any]) -> "BiorthogonalSystem":
        try:
            if document["schema_version"] != SCHEMA_VERSION:
                raise ConfigError(error_message(BiorthogonalSystem, f"unsupported schema_version "
                                                f"{document['schema_version']}", "from_json"))
            config = document["config"]
            work_bits = int(document["work_bits"])
            params = ModelParams(theta=float(config["theta"]), alpha=float(config["alpha"]), n=int(config["n"]),
                                 potential=Potential.from_descriptor(config["potential"]))
            with mpmath.workprec(work_bits):
                def parse(rows):
                    return _freeze([mpmath.mpf(v) for v in row] for row in rows)

                return BiorthogonalSystem(params=params, degree=int(config["degree"]),
                                          p_coeffs=parse(document["p_coeffs"]), q_coeffs=parse(document["q_coeffs"]),
                                          kappas=tuple(mpmath.mpf(v) for v in document["kappas"]),
                                          moments=parse(document["moments"]),
                                          mantissa_bits=int(config["mantissa_bits"]), work_bits=work_bits)
        except (KeyError, TypeError, ValueError) as e:
            if isinstance(e, ConfigError):
                raise
            raise ConfigError(error_message(BiorthogonalSystem, f"malformed system document: {e}", "from_json"))


def system_key(params: ModelParams, degree: int, mantissa_bits: int) -> Dict[str, Any]:
    return {
        "theta": repr(float(params.theta)),
        "alpha": repr(float(params.alpha)),
        "n": int(params.n),
        "potential": params.potential.descriptor(),
        "degree": int(degree),
        "mantissa_bits": int(mantissa_bits),
    }


def _build_once(params: ModelParams, degree: int, ctx: PrecisionContext) -> BiorthogonalSystem:
    work = working_context(ctx, degree)
    with work.workprec():
        moments = moment_matrix(params, degree, work)
        lower, pivots, upper = _ldu(moments, work.mantissa_bits)
        p_rows = _unit_lower_inverse(lower)
        q_rows = _unit_lower_inverse([list(col) for col in zip(*upper)])

    spread = max(pivots) / min(pivots)
    if spread > mpmath.ldexp(1, ctx.mantissa_bits // 2):
        warnings.warn(IllConditioned(f"kappa ratio {mpmath.nstr(spread, 5)} exceeds 2^{ctx.mantissa_bits // 2}"))
    logger.info("built biorthogonal system of degree %d (theta=%g, alpha=%g, n=%d) at %d bits",
                degree, params.theta, params.alpha, params.n, work.mantissa_bits)
    return BiorthogonalSystem(params=params, degree=degree, p_coeffs=_freeze(p_rows), q_coeffs=_freeze(q_rows),
                              kappas=tuple(pivots), moments=_freeze(moments), mantissa_bits=ctx.mantissa_bits,
                              work_bits=work.mantissa_bits)


def build_system(params: ModelParams, degree: int, ctx: PrecisionContext,
                 max_escalations: int = MAX_ESCALATIONS) -> BiorthogonalSystem:
    """
    Biorthogonalize the mixed moments up to degree N.

    A SingularMoment at the requested precision is retried after doubling the
    mantissa bits, at most `max_escalations` times.
    """
    if degree < 0:
        raise ConfigError(error_message("biorthogonal", f"degree must be nonnegative, got {degree}", "build_system"))
    attempt = ctx
    for escalation in range(max_escalations + 1):
        try:
            return _build_once(params, degree, attempt)
        except SingularMoment:
            if escalation == max_escalations:
                raise
            logger.warning("singular moment matrix at %d bits, retrying at %d", attempt.mantissa_bits,
                           2 * attempt.mantissa_bits)
            attempt = attempt.escalated()


def biorthogonality_residual(system: BiorthogonalSystem) -> mpmath.mpf:
    """max_jk |∫ p_j q_k(x^θ) w − κ_j δ_jk| / κ_max."""
    with mpmath.workprec(system.work_bits):
        residual = system.residual_matrix()
        return max(abs(v) for row in residual for v in row) / max(system.kappas)


def direct_kappa(system: BiorthogonalSystem, j: int, ctx: Optional[PrecisionContext] = None):
    """κ_j by quadrature of p_j(x) q_j(x^θ) x^α e^{−nV(x)}."""
    work = system.context(ctx)
    with work.workprec():
        def integrand(x):
            return system.p_eval(j, x) * system.q_eval_x(j, x) * system.weight(x)

        return quad_semiaxis(integrand, bulk_scale(j * (1 + system.theta) + system.alpha, system.params), work,
                             alpha=system.alpha)
