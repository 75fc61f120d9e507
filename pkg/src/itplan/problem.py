"""Problem definitions, their JSON schema and the shipped problem catalog."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import jsonschema

from .objective import OBJECTIVE_KINDS, Objective, make_objective
from .world import Obstacle, World

SCHEMA_VERSION = 1

PROBLEM_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "itplan problem definition",
    "type": "object",
    "required": ["name", "dimension", "start", "goals", "obstacles", "objective", "cd_resolution"],
    "additionalProperties": False,
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "name": {"type": "string", "minLength": 1},
        "dimension": {"type": "integer", "minimum": 1},
        "start": {"$ref": "#/$defs/point"},
        "goals": {"type": "array", "minItems": 1, "items": {"$ref": "#/$defs/point"}},
        "obstacles": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["lower", "upper"],
                "additionalProperties": False,
                "properties": {"lower": {"$ref": "#/$defs/vector"}, "upper": {"$ref": "#/$defs/vector"}},
            },
        },
        "objective": {"enum": list(OBJECTIVE_KINDS)},
        "cd_resolution": {"type": "number", "exclusiveMinimum": 0},
        "planner_overrides": {
            "type": "object",
            "additionalProperties": {"type": "object"},
        },
        "optimum": {"type": ["number", "null"]},
        "description": {"type": "string"},
    },
    "$defs": {
        "vector": {"type": "array", "minItems": 1, "items": {"type": "number"}},
        "point": {
            "type": "array",
            "minItems": 1,
            "items": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
        },
    },
}


class ProblemError(ValueError):
    """A problem file that does not parse or describes an invalid problem."""


@dataclass
class ProblemDefinition:
    name: str
    dimension: int
    start: tuple
    goals: List[tuple]
    obstacles: List[Obstacle] = field(default_factory=list)
    objective_kind: str = "path_length"
    cd_resolution: float = 1e-3
    planner_overrides: Dict[str, dict] = field(default_factory=dict)
    optimum: Optional[float] = None
    description: str = ""

    def __post_init__(self):
        self.start = tuple(float(v) for v in self.start)
        self.goals = [tuple(float(v) for v in g) for g in self.goals]
        self.obstacles = [
            o if isinstance(o, Obstacle) else Obstacle(tuple(map(float, o[0])), tuple(map(float, o[1])))
            for o in self.obstacles
        ]

    @cached_property
    def world(self) -> World:
        return World(self.dimension, self.obstacles, self.cd_resolution)

    @cached_property
    def objective(self) -> Objective:
        return make_objective(self.objective_kind, self.world)

    def with_objective(self, kind: str) -> "ProblemDefinition":
        data = self.to_dict()
        data["objective"] = kind
        data["name"] = f"{self.name}" if kind == self.objective_kind else f"{self.name}_{kind}"
        return problem_from_dict(data)

    def validate(self) -> "ProblemDefinition":
        """Geometric checks; raises :class:`ProblemError`."""
        n = self.dimension
        for label, x in [("start", self.start)] + [(f"goals/{i}", g) for i, g in enumerate(self.goals)]:
            if len(x) != n:
                raise ProblemError(f"/{label}: has {len(x)} coordinates, dimension is {n}")
            if not all(0.0 < v < 1.0 for v in x):
                raise ProblemError(f"/{label}: coordinates must lie in the open unit cube")
        for i, o in enumerate(self.obstacles):
            if len(o.lower) != n:
                raise ProblemError(f"/obstacles/{i}: has {len(o.lower)} coordinates, dimension is {n}")
        world = self.world
        if not world.is_valid_state(self.start):
            raise ProblemError("/start: start state is inside an obstacle")
        for i, g in enumerate(self.goals):
            if not world.is_valid_state(g):
                raise ProblemError(f"/goals/{i}: goal state is inside an obstacle")
        return self

    def to_dict(self) -> dict:
        data = {
            "schema_version": SCHEMA_VERSION,
            "name": self.name,
            "dimension": self.dimension,
            "start": list(self.start),
            "goals": [list(g) for g in self.goals],
            "obstacles": [{"lower": list(o.lower), "upper": list(o.upper)} for o in self.obstacles],
            "objective": self.objective_kind,
            "cd_resolution": self.cd_resolution,
        }
        if self.planner_overrides:
            data["planner_overrides"] = self.planner_overrides
        if self.optimum is not None:
            data["optimum"] = self.optimum
        if self.description:
            data["description"] = self.description
        return data


def _pointer(error: jsonschema.ValidationError) -> str:
    return "/" + "/".join(str(p) for p in error.absolute_path)


def problem_from_dict(data: dict) -> ProblemDefinition:
    validator = jsonschema.Draft202012Validator(PROBLEM_SCHEMA)
    errors = sorted(validator.iter_errors(data), key=lambda e: list(map(str, e.absolute_path)))
    if errors:
        e = errors[0]
        raise ProblemError(f"{_pointer(e)}: {e.message}")
    try:
        problem = ProblemDefinition(
            name=data["name"],
            dimension=data["dimension"],
            start=data["start"],
            goals=data["goals"],
            obstacles=[(o["lower"], o["upper"]) for o in data["obstacles"]],
            objective_kind=data["objective"],
            cd_resolution=data["cd_resolution"],
            planner_overrides=data.get("planner_overrides", {}),
            optimum=data.get("optimum"),
            description=data.get("description", ""),
        )
    except ValueError as exc:
        raise ProblemError(str(exc)) from exc
    return problem.validate()


def load_problem(path: Union[str, Path]) -> ProblemDefinition:
    """Parse and validate a problem JSON file (or the name of a shipped problem)."""
    path = Path(path)
    if not path.exists() and path.suffix == "" and str(path) in catalog():
        return builtin_problem(str(path))
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ProblemError(f"{path}: not valid JSON ({exc})") from exc
    return problem_from_dict(data)


# -- shipped catalog ------------------------------------------------------------


def catalog() -> List[str]:
    files = resources.files("itplan").joinpath("problems")
    return sorted(p.name[:-5] for p in files.iterdir() if p.name.endswith(".json"))


def builtin_problem(name: str) -> ProblemDefinition:
    text = resources.files("itplan").joinpath("problems", f"{name}.json").read_text()
    return problem_from_dict(json.loads(text))


def wall_gap(dimension: int = 2, objective: str = "path_length", cd_resolution: float = 1e-3) -> ProblemDefinition:
    """Wall at x0 in [0.45, 0.55] spanning every other axis, with one gap x1 in (0.35, 0.45).

    Start and goal sit at x0 = 0.15 and 0.85 with all other coordinates 0.5.
    """
    n = dimension
    rest_lo = [0.0] * (n - 2)
    rest_hi = [1.0] * (n - 2)
    obstacles = [
        ((0.45, 0.0, *rest_lo), (0.55, 0.35, *rest_hi)),
        ((0.45, 0.45, *rest_lo), (0.55, 1.0, *rest_hi)),
    ]
    start = (0.15,) + (0.5,) * (n - 1)
    goal = (0.85,) + (0.5,) * (n - 1)
    optimum = None
    if objective == "path_length":
        # start -> (0.45, 0.45) -> (0.55, 0.45) -> goal
        leg = math.sqrt(0.3**2 + 0.05**2)
        optimum = 2 * leg + 0.1
    suffix = "" if objective == "path_length" else f"_{objective}"
    overrides = {"rrtstar": {"max_edge_length": {2: 0.3, 8: 1.25, 16: 3.0}.get(n, 0.3 * math.sqrt(n / 2))}}
    return ProblemDefinition(
        name=f"wall_gap_{n}d{suffix}", dimension=n, start=start, goals=[goal], obstacles=obstacles,
        objective_kind=objective, cd_resolution=cd_resolution, planner_overrides=overrides, optimum=optimum,
        description="A wall with a narrow gap between start and goal.",
    ).validate()


def obstacle_free(dimension: int = 2, objective: str = "path_length", cd_resolution: float = 1e-3) -> ProblemDefinition:
    n = dimension
    start = (0.15,) + (0.5,) * (n - 1)
    goal = (0.85,) + (0.5,) * (n - 1)
    return ProblemDefinition(
        name=f"obstacle_free_{n}d", dimension=n, start=start, goals=[goal], obstacles=[],
        objective_kind=objective, cd_resolution=cd_resolution,
        planner_overrides={"rrtstar": {"max_edge_length": {2: 0.3, 8: 1.25, 16: 3.0}.get(n, 0.3)}},
        optimum=math.dist(start, goal) if objective == "path_length" else None,
        description="Empty unit cube.",
    ).validate()
