"""Support-constrained parity-check masks: analysis, constructions, certificates."""

from .gf import FieldSpec, field_arith, make_field, next_prime, next_prime_power
from .mask import (
    Mask,
    MaskAnalysis,
    analyze,
    k66_mask,
    mds_condition,
    structural_kruskal_rank,
    structural_row_rank,
    union_support,
)
from .codec import (
    ConstructedCode,
    GFMatrix,
    gf_rank,
    kernel_basis,
    kruskal_rank_verify,
    min_distance_of_kernel,
    random_fill,
)
from .grs import GRSParityCheck, grs_dual_construct, mds_verify, window_mask
from .certificate import (
    CertificateBundle,
    certificate_search,
    moment_rank,
    shift_invariant_pair_check,
    solve_factor,
    vandermonde,
    verify_certificate,
)
from .families import (
    FamilySpec,
    GridResult,
    best_distance,
    enumerate_family,
    grid,
    two_regular_extremal,
)

__version__ = "0.1.0"
FORMAT_VERSION = 1
