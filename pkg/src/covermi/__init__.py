"""Mutual information between network covers (overlapping and hierarchical modules)."""

from .covers import (Cover, CoverError, CoverParseError, DomainMismatchError,
                     DuplicateModuleError, NotAPartitionError, align, check_well_defined,
                     common_domain, find_duplicate_modules, format_cover, is_partition,
                     load_cover, merge_duplicate_modules, parse_cover, parse_cover_text)
from .estimator import (JointCounts, NmiEstimate, accumulate, error_bound, estimate_nmi,
                        nmi_from_counts, theta_far)
from .interleaving import (EventSampler, IllDefinedCoverError, Interleaving, disambiguate,
                           make_rng, run_event, sample_interleaving)
from .oracle import (EnumerationTooLarge, ExactCoverResult, bruteforce_nmi,
                     interleaving_count, prefix_enumeration_nmi)
from .partition import (JointDistribution, MiResult, entropy, exact_partition_nmi,
                        joint_from_counting, joint_from_table, mutual_information, normalize)

__version__ = "0.1.0"
