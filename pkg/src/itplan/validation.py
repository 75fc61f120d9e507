"""Input validation for planner parameters and problems."""
from __future__ import annotations

import math
import numbers
from pathlib import Path
from typing import Optional

from .approx import STRATEGIES
from .problem import ProblemDefinition, ProblemError, load_problem, problem_from_dict


def check_problem(problem) -> ProblemDefinition:
    """Accept a :class:`ProblemDefinition`, a schema dict, a JSON path or a shipped problem name."""
    if isinstance(problem, ProblemDefinition):
        return problem
    if isinstance(problem, dict):
        return problem_from_dict(problem)
    if isinstance(problem, (str, Path)):
        return load_problem(problem)
    raise TypeError(f"expected a ProblemDefinition, dict or path, got {type(problem).__name__}")


def check_positive(name: str, value, *, integer: bool = False, allow_inf: bool = False):
    kind = numbers.Integral if integer else numbers.Real
    if isinstance(value, bool) or not isinstance(value, kind):
        raise TypeError(f"{name} must be {'an integer' if integer else 'a number'}, got {value!r}")
    if math.isnan(value) or value <= 0 or (math.isinf(value) and not allow_inf):
        raise ValueError(f"{name} must be positive{' (inf allowed)' if allow_inf else ' and finite'}, got {value!r}")
    return value


def check_optional_positive(name: str, value, **kwargs):
    return None if value is None else check_positive(name, value, **kwargs)


def check_seed(seed) -> int:
    if isinstance(seed, bool) or not isinstance(seed, numbers.Integral) or seed < 0:
        raise ValueError(f"seed must be a non-negative integer, got {seed!r}")
    return int(seed)


def check_eta(eta) -> float:
    check_positive("eta", eta)
    if not eta > 1.0:
        raise ValueError(f"eta must exceed 1, got {eta}")
    return float(eta)


def check_strategy(strategy: str) -> str:
    if strategy not in STRATEGIES:
        raise ValueError(f"strategy must be one of {STRATEGIES}, got {strategy!r}")
    return strategy


def check_inflation(name: str, w) -> float:
    check_positive(name, w, allow_inf=True)
    if w < 1:
        raise ValueError(f"{name} must be >= 1, got {w}")
    return float(w)


def check_target(target: Optional[float]) -> Optional[float]:
    if target is None:
        return None
    if isinstance(target, bool) or not isinstance(target, numbers.Real) or math.isnan(target) or target < 0:
        raise ValueError(f"target_cost must be a non-negative number, got {target!r}")
    return float(target)


__all__ = [
    "ProblemError", "check_problem", "check_positive", "check_optional_positive", "check_seed",
    "check_eta", "check_strategy", "check_inflation", "check_target",
]
