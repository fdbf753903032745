"""Range aggregation, selection and sequence-editing structures with naive oracles."""
from .agg import AggregateOp, get_op
from .errors import RangeKitError
from .kth_selection import kth_in_subranges, kth_smallest
from .median import MedianCube, l1_median, weighted_lsq_point
from .prefix_cube import (DenseCube, PrefixCube, RangeStamp, batched_range_updates, build_prefix_naive,
                          build_prefix_sweep, range_query)
from .range_tree import CascadeIndex2D, PointSet, RangeTree, fc_build, fc_range_query
from .rotating_stack import RotStack
from .sequence_editor import GroupedEditor, IntervalList
from .stations import StationLine, compute_efforts, min_collapse_effort
from .sweep_select import solve_offline
from .tree_queries import RootedTree, build_subtree_index, subtree_dist_query

__version__ = "0.1.0"

__all__ = [
    "AggregateOp", "get_op", "RangeKitError", "kth_in_subranges", "kth_smallest", "MedianCube",
    "l1_median", "weighted_lsq_point", "DenseCube", "PrefixCube", "RangeStamp",
    "batched_range_updates", "build_prefix_naive", "build_prefix_sweep", "range_query",
    "CascadeIndex2D", "PointSet", "RangeTree", "fc_build", "fc_range_query", "RotStack",
    "GroupedEditor", "IntervalList", "StationLine", "compute_efforts", "min_collapse_effort",
    "solve_offline", "RootedTree", "build_subtree_index", "subtree_dist_query",
]
