"""Joint, Slodkowski, one-sided and essential spectra of q-commuting operator pairs."""

__version__ = "0.1.0"

from .errors import (BadParameter, CapExceeded, DimensionMismatch, Inconclusive, NumericalBreakdown,
                     OutOfAnnulus, QRelationViolated, QSpectraError)
from .operators import (Combination, DenseMatrix, DiagonalPowers, Identity, OperatorSpec, Scaled,
                        Truncation, UnilateralShift, WeightedShift, Zero, compress)
from .pair import QPair, finite_dim_invertibility_consequence, make_q_pair
from .koszul import CharacterPoint, build_K, build_L, build_R, chain_isomorphism_residual
from .cohomology import ToleranceConfig, classify_point, cohomology_dims
from .exact import exact_cohomology, exact_rank, tor_consistency

__all__ = [
    "__version__", "BadParameter", "CapExceeded", "DimensionMismatch", "Inconclusive",
    "NumericalBreakdown", "OutOfAnnulus", "QRelationViolated", "QSpectraError", "Combination",
    "DenseMatrix", "DiagonalPowers", "Identity", "OperatorSpec", "Scaled", "Truncation",
    "UnilateralShift", "WeightedShift", "Zero", "compress", "QPair",
    "finite_dim_invertibility_consequence", "make_q_pair", "CharacterPoint", "build_K", "build_L",
    "build_R", "chain_isomorphism_residual", "ToleranceConfig", "classify_point", "cohomology_dims",
    "exact_cohomology", "exact_rank", "tor_consistency",
]
