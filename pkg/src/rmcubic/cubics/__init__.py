"""
Plane cubics over finite fields: models, classification and exhaustive enumeration.
"""

from rmcubic.cubics.classify import (
    classify,
    codeword_weight,
    inflection_count,
    line_profile,
    point_count,
    profile,
)
from rmcubic.cubics.engine import (
    CensusResult,
    CensusRow,
    EnumerationEngine,
    brute_weight_enumerator,
    census_signatures,
    profile_census,
    singular_census,
)
from rmcubic.cubics.forms import TernaryForm
from rmcubic.cubics.models import (
    AFFINE_MONOMIALS,
    MONOMIALS,
    SINGULAR_KINDS,
    AffineCubic,
    CodeSpec,
    CubicClass,
    CubicKind,
    CubicProfile,
    HomogeneousCubic,
)

__all__ = [
    "AFFINE_MONOMIALS",
    "MONOMIALS",
    "SINGULAR_KINDS",
    "AffineCubic",
    "CensusResult",
    "CensusRow",
    "CodeSpec",
    "CubicClass",
    "CubicKind",
    "CubicProfile",
    "EnumerationEngine",
    "HomogeneousCubic",
    "TernaryForm",
    "brute_weight_enumerator",
    "census_signatures",
    "classify",
    "codeword_weight",
    "inflection_count",
    "line_profile",
    "point_count",
    "profile",
    "profile_census",
    "singular_census",
]
