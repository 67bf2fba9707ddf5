from .experiments import (CONVENTIONS, default_z_samples, hard_edge_constants, hard_edge_count, kappa_prefactor,
                          kernel_target, p_prefactor, polynomial_error, predicted_kappa_rate,
                          predicted_polynomial_rate, prefactor_table, q_prefactor, scaled_kernel, verify_kappa, verify_kernel_limit,
                          verify_pn_asymptotics)
from .limit import (bessel_hard_edge_kernel, bessel_limit_oracle, gauss_jacobi_rule, k_product, limit_kernel,
                    limit_kernel_rescaled)
from .report import ConvergenceReport, fit_rate
