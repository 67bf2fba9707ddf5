from .exponents import small_z_exponent
from .fox import (ASYMPTOTIC_EPS, KINDS, RESONANCE_SEPARATION, asymptotic_accuracy_map, asymptotic_sector,
                  asymptotic_threshold, fox_I, fox_I_asymptotic, fox_I_fast, is_resonant, pole_lattices,
                  pole_separation)
from .params import FoxIParams, WrightParams
from .wright import wright_bessel
