from .index import ParametrixIndex, index_for, t_shift
from .inner_product import (biorthogonality_matrix, circle_bound_constant, inner_product, jump_residual_G,
                            jump_residual_H, max_biorthogonality_deviation)
from .model import (FAMILIES, G_ell, G_model, G_tilde_ell, H_ell, H_model, H_tilde_ell, ModelFunction,
                    g_model_polar, h_model_polar)
from .exponents import expected_small_z_exponent_G, small_z_exponent_G
