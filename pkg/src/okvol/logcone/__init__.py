"""Realise continuous homogeneous log-concave functions as slice volumes of cones."""
from .functions import (CertReport, ConcaveProfile, HomogFn, HypothesisError, certify_homogeneity,
                        certify_log_concavity, constant_profile, homogenize, interior_samples, positive_orthant, product_function, semicircle_profile,
                        weierstrass_profile, weierstrass_second_derivative)
from .ballcone import (BallCone, ScaledCone, ShrinkError, build_ball_cone, shrink_into,
                       slice_volume_mc, unit_ball_volume, verification_sample)
from .realize import Realization, realize

__all__ = [
    "CertReport", "certify_homogeneity", "certify_log_concavity",
    "ConcaveProfile", "HomogFn", "HypothesisError", "constant_profile", "homogenize",
    "interior_samples", "positive_orthant", "product_function", "semicircle_profile",
    "weierstrass_profile", "weierstrass_second_derivative", "BallCone", "ScaledCone",
    "ShrinkError", "build_ball_cone", "shrink_into", "slice_volume_mc", "unit_ball_volume",
    "verification_sample", "Realization", "realize",
]
