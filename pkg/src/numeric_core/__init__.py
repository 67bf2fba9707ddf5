from .errors import (AxisError, BranchCutError, ConfigError, ContourNonConvergence, CutError, DegreeTooLow,
                     DomainError, EndpointSingularity, FitFailure, HardEdgeError, IllConditioned, NonConvergence,
                     NotOneCut, PoleError, PrecisionLoss, RayError, SectorError, SingularMoment, error_message)
from .gamma import log_gamma
from .precision import PrecisionContext, decimal_string, to_complex
from .quadrature import (arc_nodes, circle_arcs, quad_circle, quad_interval, quad_line, quad_semiaxis,
                         quad_semiaxis_many)
