from .gfunctions import g_eval, gtilde_eval, jc_map, phi_eval
from .model_params import ModelParams
from .potential import (LinearPotential, MonomialPotential, Potential, SeriesPotential,
                        check_one_cut_sufficient)
from .simplex import SimplexEnergyMinimizer, SimplexSolution, project_to_simplex, virial_span
from .solver import (EquilibriumData, EquilibriumSolver, el_inequality, equilibrium_constants, richardson,
                     solve_equilibrium, virial_residual)
