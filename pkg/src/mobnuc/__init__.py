"""Numerical verification toolkit for Moebius-covariant lowest-weight
representation theory: interval geometry, 2x2 and truncated operator
identities, nuclearity trace norms, characters, split/KMS criteria, and
free-field branching."""

from .branching import (branching_multiplicity, free_field_partition,
                        free_field_spectrum, l2_nuclearity_double_cone,
                        monomial_count)
from .characters import (MultiplicitySpectrum, NuclearityChainReport,
                         bw_nuclearity_bound, character, character_log,
                         l2_nuclearity_norm, load_spectrum,
                         log_ellipticity_fit, net_log_trace, split_distance)
from .geometry import (InnerDistances, Interval, MoebiusElement, dilation_flow,
                       inner_distance, second_inner_distance,
                       symmetric_subinterval, translation_pair)
from .lowest_weight import (GeneratorSet, build_generators,
                            closed_form_trace_norm, embedding_trace_norm,
                            verify_factorization, verify_inequality,
                            verify_two_route_factorization,
                            verify_weight_deformation,
                            weight_deformation_spectrum)
from .report import VerificationReport
from .sl2 import (LieBasis, verify_bch_identity, verify_euclidean_factorization,
                  verify_rotation_factorization)

__version__ = "0.1.0"

__all__ = [
    "GeneratorSet", "InnerDistances", "Interval", "LieBasis",
    "MoebiusElement", "MultiplicitySpectrum", "NuclearityChainReport",
    "VerificationReport", "branching_multiplicity", "build_generators",
    "bw_nuclearity_bound", "character", "character_log",
    "closed_form_trace_norm", "dilation_flow", "embedding_trace_norm",
    "free_field_partition", "free_field_spectrum", "inner_distance",
    "l2_nuclearity_double_cone", "l2_nuclearity_norm", "load_spectrum",
    "log_ellipticity_fit", "monomial_count", "net_log_trace",
    "second_inner_distance", "split_distance", "symmetric_subinterval",
    "translation_pair", "verify_bch_identity",
    "verify_euclidean_factorization", "verify_factorization",
    "verify_inequality", "verify_rotation_factorization",
    "verify_two_route_factorization", "verify_weight_deformation",
    "weight_deformation_spectrum",
]
