"""Volume of A = O(1) (x) pi^* L' on a P^2-bundle over E x E, by three routes."""
from .problem import (H_CLASSES, CutkoskyProblem, NSClass, class_of, nef_contains,
                      q_form, transform_T)
from .integrate import (NORMALIZATION, AdaptiveResult, ToleranceNotReached,
                        full_simplex_is_ample, region_area, richardson,
                        simplex_integral_exact, vol_adaptive, vol_lattice_extrapolated,
                        vol_lattice_sum, vol_mc, vol_sections)

__all__ = [
    "H_CLASSES", "CutkoskyProblem", "NSClass", "class_of", "nef_contains", "q_form",
    "transform_T", "NORMALIZATION", "AdaptiveResult", "ToleranceNotReached",
    "full_simplex_is_ample", "region_area", "richardson", "simplex_integral_exact",
    "vol_adaptive", "vol_lattice_extrapolated", "vol_lattice_sum", "vol_mc", "vol_sections",
]
