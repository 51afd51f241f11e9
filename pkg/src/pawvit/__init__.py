"""Anatomy-aware patch warping for ear verification.

An ear image and its binary region map become a 112x112 canvas: the region's
convex hull is resampled, 16 anchors and their centroid span a triangular fan,
adjacent fan triangles are warped into 28x28 patches, and the patches are
tiled 4x4. :mod:`pawvit.verification` scores embeddings of such canvases.
"""
from .config import PipelineConfig
from .errors import PawError
from .fan import FanPartition, build_fan, build_triangles, order_anchors, pair_quadrilaterals
from .geometry import (AnchorSet, canonical_reference, centroid, convex_hull, polygon_area,
                       resample_closed, select_anchors, trace_boundary)
from .maskops import (binarize, intersect, landmarks_to_mask, largest_component, normalize_image,
                      normalize_mask, union)
from .verification import (AucReport, EmbeddingSet, PairScores, count_pairs, repeated_auc,
                           roc_auc, score_pairs)
from .warp import WarpedCanvas, solve_affine, stitch, warp_pipeline, warp_quad_to_patch

__version__ = "0.1.0"
