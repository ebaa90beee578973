"""Condensed fiber products and zesting of braided categories graded by a finite abelian group."""
from .abgroup import FinAbGroup, make_group
from .errors import (CapacityError, CfpError, InvariantViolation, MathematicalFailure,
                     NotCondensable, Obstructed, ValidationError)
from .metric import PreMetricGroup, central_charge, condense, validate_premetric
from .pointed import (PointedCategory, center_of_Bz, condensed_fiber_product,
                      enumerate_pointed_mme, make_Bz)
from .fusion import GradedFusionRing, cfp_ring, fiber_product_ring, validate_fusion_ring
from .zest import (ZestingDatum, extract_lambda_from_pointed, solve_cocycles, solve_nu,
                   verify_cfp_equals_zesting, zest_fusion_ring, zested_twists_via_cfp)

__all__ = [
    "FinAbGroup", "make_group",
    "CapacityError", "CfpError", "InvariantViolation", "MathematicalFailure", "NotCondensable",
    "Obstructed", "ValidationError",
    "PreMetricGroup", "central_charge", "condense", "validate_premetric",
    "PointedCategory", "center_of_Bz", "condensed_fiber_product", "enumerate_pointed_mme", "make_Bz",
    "GradedFusionRing", "cfp_ring", "fiber_product_ring", "validate_fusion_ring",
    "ZestingDatum", "extract_lambda_from_pointed", "solve_cocycles", "solve_nu",
    "verify_cfp_equals_zesting", "zest_fusion_ring", "zested_twists_via_cfp",
]

__version__ = "0.1.0"
