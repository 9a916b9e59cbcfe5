"""Exact lattice arithmetic and curve-count bookkeeping for relative invariants."""

from .lattice import (
    IntegralLattice,
    LatticeClass,
    LatticeError,
    DimensionMismatch,
    pairing,
    square,
    signature,
    is_definite,
    direct_sum,
    blow_up,
    enumerate_square_classes,
    bounded_square_classes,
    hyperbolic_plane,
    e8_lattice,
)
from .classes import (
    ClassError,
    ManifoldModel,
    HypersurfaceModel,
    d_of,
    l_of,
    genus_of,
    is_toroidal,
    is_multiply_toroidal,
    is_stable,
    is_small,
    is_exceptional,
    divisibility,
)
from .initialdata import (
    DataClass,
    DataError,
    InitialData,
    PropernessReport,
    is_proper,
    proper_counts,
    same_class,
    partition_sign,
    partition_data,
)
from .decomp import (
    Decomposition,
    DecompositionError,
    InvariantTable,
    enumerate_S,
    tau,
    per_factor,
    gt_from_ru,
    conv_inequality_check,
    dai_sum_bound_check,
    qu_partitions,
)
from .knownvalues import (
    KnownValueError,
    ru_genus0,
    ru_negative_dim,
    k3_vanishing,
    apply_rules,
)
from .k3 import (
    K3Error,
    PeriodPoint,
    build_k3_lattice,
    kahler_chamber_check,
    picard_signature_check,
    pic_membership_certificate,
)
from .rimtori import (
    RimError,
    RimPresentation,
    RefinedKey,
    rim_rank,
    rim_torsion,
    enumerate_lifts,
    refined_sum_check,
)

__version__ = "0.1.0"
