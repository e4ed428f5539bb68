"""Oriented bond percolation on the even lattice: right-most paths, break
points, coalescing walks and the forest of right-most paths."""

from .environment import EdgeConfig, ExplicitConfig
from .errors import (ConfigParseError, HorizonExhaustedError, InsufficientDataError,
                     InsufficientWindowError, InvalidVertexError, NoPathError,
                     NotInForestError, NotOnPathError, OutOfWindowError, SpecError,
                     UndecidableError)
from .genealogy import Forest, build_forest
from .kuczek import (BreakPointSeries, WalkPath, break_points, crossing_points,
                     paths_meet, right_edge_series, walk, walks_meet)
from .lattice import Direction, EdgeRef, Side, Vertex, Window, cone
from .paths import (PathRec, anti_leftmost_path, buds, leftmost_path, rightmost_path,
                    side_cluster, stabilization_prefix)
from .reachability import (Frontier, PercSet, anti_cluster, cluster, evolve_frontier,
                           perc_points, percolates_to, symmetric_difference)
