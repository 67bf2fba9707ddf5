from .cache import SystemCache, config_hash
from .cauchy import (cauchy_transform_p, cauchy_transform_q, conjugation_residual, jump_residual_p, jump_residual_q,
                     tail_ratio_p, tail_ratio_q)
from .kernel import kernel_n, reproducing_residual, trace_residual
from .moments import mixed_moment, moment_matrix, working_context
from .system import BiorthogonalSystem, biorthogonality_residual, build_system, direct_kappa, system_key
