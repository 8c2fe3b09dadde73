"""Two-part-size partitions, divisor sums and square-shifted divisor congruences."""
from .arith import (
    Factorization,
    SieveTable,
    build_sieve,
    divisor_count,
    divisor_sum,
    factorize,
    is_sum_of_two_squares,
    sum_of_two_squares_bruteforce,
)
from .congruences import (
    FAMILIES,
    CongruenceReport,
    Statement,
    family_membership,
    hooley_sum,
    sigma1_mod8,
    verify_cor_mod3,
    verify_cor_odd,
    verify_doublecount,
    verify_thm_main,
)
from .kernels import BACKEND
from .partitions import (
    PartitionTwoSizes,
    divisor_convolution,
    enumerate_two_size_partitions,
    nu2_formula,
    nu_k_bruteforce,
)
from .rectangles import (
    CanonicalPair,
    GluedPair,
    MultiplicityRecord,
    MultisetCounts,
    Rectangle,
    canonical_pairs,
    classify,
    count_multiset_A,
    counts_by_formula,
    enumerate_multiset_A,
    glue,
)
from .scanner import (
    FamilyScanResult,
    PairScanSummary,
    checkpoint_read,
    checkpoint_write,
    scan_all_pairs,
    scan_family,
)

__version__ = "0.1.0"
