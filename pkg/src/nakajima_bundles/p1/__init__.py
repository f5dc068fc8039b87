"""Split Q-bar-bundles on the projective line: sections, stability, dimensions."""

from .bundle import (HiggsField, InconsistencyError, QBarBundleP1, SplitBundle, UndefinedSlopeError,
                     balanced_params, dbar_constraint, edge_source, h1_dim, hom_dim, slope)
from .scan import ScanRow, random_bundle, scan_existence, splittings
from .stability import (SEMISTABLE, STABLE, UNSTABLE, PreconditionError, StabilityReport, SubbundleCandidate,
                        endomorphism_dimension, expected_dimension, genus_expected_dim, invariant_subbundles,
                        is_stable)

__all__ = [
    "HiggsField", "InconsistencyError", "QBarBundleP1", "SplitBundle", "UndefinedSlopeError", "balanced_params",
    "dbar_constraint", "edge_source", "h1_dim", "hom_dim", "slope", "ScanRow", "random_bundle", "scan_existence",
    "splittings", "SEMISTABLE", "STABLE", "UNSTABLE", "PreconditionError", "StabilityReport",
    "SubbundleCandidate", "endomorphism_dimension", "expected_dimension", "genus_expected_dim",
    "invariant_subbundles", "is_stable",
]
