import logging
from typing import Callable, Sequence

import mpmath
import numpy as np

from numeric_core import FitFailure, error_message

logger = logging.getLogger(__name__)


def small_z_exponent(f: Callable, angle, radii: Sequence) -> float:
    """
    Least-squares slope of log|f(r e^{i angle})| against log r.

    Used to read off leading small-z powers; the radii should lie well inside the
    regime where a single power dominates.
    """
    log_r = []
    log_f = []
    for r in radii:
        value = abs(f(mpmath.mpf(r) * mpmath.expj(angle)))
        if value == 0:
            raise FitFailure(error_message("specfun", f"f vanishes at r={r}", "small_z_exponent"))
        log_r.append(float(mpmath.log(r)))
        log_f.append(float(mpmath.log(value)))
    slope, _ = np.polyfit(np.array(log_r), np.array(log_f), 1)
    logger.debug("small-z exponent fit at angle %s: %.6f", angle, slope)
    return float(slope)
