"""Superpixel-based color transfer with capacity-constrained ANN matching."""
from .fusion import (
    FusionParams,
    fuse_pixel,
    matched_color_render,
    q_matrix,
    transfer,
    transfer_float,
    weight,
)
from .image_core import (
    ConfigurationError,
    ImageFormatError,
    PixelFeature,
    RasterImage,
    load_image,
    pixel_feature,
    save_image,
)
from .matching import (
    INF,
    Assignment,
    InfeasibleEpsilonError,
    MatchParams,
    MatchTrace,
    ann_match,
    distance_matrix,
    exact_assign,
    feature_distance,
    init_random,
    propagation_candidates,
    random_search_candidates,
    total_cost,
    try_improve,
)
from .pipeline import TransferConfig, TransferReport, run_benchmark, run_transfer
from .superpixel import (
    SuperpixelDecomposition,
    SuperpixelStats,
    build_adjacency,
    compute_stats,
    decompose,
)

__version__ = "0.1.0"

__all__ = [
    "FusionParams",
    "fuse_pixel",
    "matched_color_render",
    "q_matrix",
    "transfer",
    "transfer_float",
    "weight",
    "ConfigurationError",
    "ImageFormatError",
    "PixelFeature",
    "RasterImage",
    "load_image",
    "pixel_feature",
    "save_image",
    "INF",
    "Assignment",
    "InfeasibleEpsilonError",
    "MatchParams",
    "MatchTrace",
    "ann_match",
    "distance_matrix",
    "exact_assign",
    "feature_distance",
    "init_random",
    "propagation_candidates",
    "random_search_candidates",
    "total_cost",
    "try_improve",
    "TransferConfig",
    "TransferReport",
    "run_benchmark",
    "run_transfer",
    "SuperpixelDecomposition",
    "SuperpixelStats",
    "build_adjacency",
    "compute_stats",
    "decompose",
]

