"""Asymmetric bidirectional sampling-based planners (AIT*, EIT*) with an RRT* baseline and benchmark harness."""
from .ait import AitSearch
from .approx import ApproxGraph, rgg_k, rgg_radius
from .bench import aggregate, certify, run_trials
from .eit import EitSearch
from .estimators import AITStar, EITStar, RRTStar, ait_solve, eit_solve, make_planner, rrt_star_solve
from .objective import Clearance, PathLength, make_objective
from .problem import ProblemDefinition, ProblemError, builtin_problem, catalog, load_problem, obstacle_free, wall_gap
from .records import RunRecord
from .rrtstar import RrtStarSearch
from .space import SpaceDescriptor
from .svg import emit_svg_snapshot
from .world import Counters, Obstacle, World

__version__ = "0.1.0"

__all__ = [
    "AITStar", "EITStar", "RRTStar", "AitSearch", "EitSearch", "RrtStarSearch", "ApproxGraph",
    "ProblemDefinition", "ProblemError", "RunRecord", "World", "Obstacle", "Counters", "SpaceDescriptor",
    "PathLength", "Clearance", "make_objective", "make_planner", "ait_solve", "eit_solve", "rrt_star_solve",
    "load_problem", "builtin_problem", "catalog", "wall_gap", "obstacle_free", "run_trials", "aggregate",
    "certify", "emit_svg_snapshot", "rgg_radius", "rgg_k",
]
