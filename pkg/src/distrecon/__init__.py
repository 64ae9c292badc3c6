"""Shape of point configurations from their distance distributions."""
from ._backend import BACKEND, set_threads
from .geometry import (
    DegenerateScale,
    DistanceMultiset,
    PairKey,
    PointConfig,
    RigidMotion,
    apply_rigid_motion,
    congruent,
    distance_distribution,
    has_repeated_distances,
    rescaled_distribution,
    same_distribution,
    squared_distance_matrix,
)
from .invariants import (
    OrientationDistribution,
    eval_g,
    eval_g_det,
    eval_gm,
    eval_I,
    is_symmetric_distribution,
    orientation_distribution,
    signed_area,
)
from .recon import (
    ComboTuple,
    ComboTuple2D,
    CompareVerdict,
    Orientation,
    ReconReport,
    Verdict,
    compare_configs,
    count_combinations,
    enumerate_combinations,
    test_reconstructible_2d,
    test_reconstructible_md,
)

__version__ = "0.1.0"
