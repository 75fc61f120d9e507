"""SVG snapshots of a planar search: obstacles, samples, both trees and the solution."""
from __future__ import annotations

import json
import math
from pathlib import Path
from typing import List, Optional, Sequence
from xml.sax.saxutils import escape

from .problem import ProblemDefinition

SIZE = 600
LAYERS = ("obstacles", "samples", "forward-tree", "reverse-tree", "solution", "terminals")
STYLE = {
    "obstacles": 'fill="#4a4a4a" stroke="none"',
    "samples": 'fill="#7f7f7f" stroke="none"',
    "forward-tree": 'stroke="#1f77b4" stroke-width="1" fill="none"',
    "reverse-tree": 'stroke="#ff7f0e" stroke-width="1" fill="none" stroke-dasharray="3,2"',
    "solution": 'stroke="#2ca02c" stroke-width="3" fill="none"',
    "terminals": 'stroke="none"',
}


class UnsupportedDimensionError(ValueError):
    pass


def _x(v: float) -> str:
    return f"{v * SIZE:.3f}"


def _y(v: float) -> str:
    return f"{(1.0 - v) * SIZE:.3f}"


def _segment(a, b) -> str:
    return f'<line x1="{_x(a[0])}" y1="{_y(a[1])}" x2="{_x(b[0])}" y2="{_y(b[1])}"/>'


def render_svg(problem: ProblemDefinition, samples: Sequence = (), forward: Sequence = (), reverse: Sequence = (),
               solution: Optional[Sequence] = None, cost: float = math.inf, time: Optional[float] = None,
               planner: str = "") -> str:
    """Build the SVG text. Output depends only on the arguments."""
    if problem.dimension != 2:
        raise UnsupportedDimensionError(f"SVG snapshots need a 2-dimensional problem, got {problem.dimension}")
    meta = {
        "problem": problem.name, "planner": planner, "time": time,
        "has_solution": solution is not None, "cost": None if math.isinf(cost) else cost,
        "samples": len(samples), "forward_edges": len(forward), "reverse_edges": len(reverse),
    }
    body: List[str] = []

    def group(name: str, items: List[str]) -> None:
        body.append(f'<g id="{name}" {STYLE[name]}>')
        body.extend(f"  {i}" for i in items)
        body.append("</g>")

    group("obstacles", [
        f'<rect x="{_x(o.lower[0])}" y="{_y(o.upper[1])}" width="{(o.upper[0] - o.lower[0]) * SIZE:.3f}" '
        f'height="{(o.upper[1] - o.lower[1]) * SIZE:.3f}"/>'
        for o in problem.obstacles
    ])
    group("samples", [f'<circle cx="{_x(p[0])}" cy="{_y(p[1])}" r="1.5"/>' for p in samples])
    group("forward-tree", [_segment(a, b) for a, b in forward])
    group("reverse-tree", [_segment(a, b) for a, b in reverse])
    solution_items = []
    if solution is not None:
        pts = " ".join(f"{_x(p[0])},{_y(p[1])}" for p in solution)
        solution_items.append(f'<polyline points="{pts}"/>')
    group("solution", solution_items)
    s = problem.start
    group("terminals", [f'<circle cx="{_x(s[0])}" cy="{_y(s[1])}" r="5" fill="#2ca02c"/>'] + [
        f'<circle cx="{_x(g[0])}" cy="{_y(g[1])}" r="5" fill="#d62728"/>' for g in problem.goals
    ])
    head = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">',
        f"<metadata>{escape(json.dumps(meta, sort_keys=True))}</metadata>",
        f'<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white" stroke="black"/>',
    ]
    return "\n".join(head + body + ["</svg>"]) + "\n"


def snapshot_svg(search) -> str:
    """Render a search object, or a bare :class:`ProblemDefinition` (obstacles and terminals only)."""
    if isinstance(search, ProblemDefinition):
        return render_svg(search)
    problem = search.problem
    terminals = {tuple(problem.start), *map(tuple, problem.goals)}
    samples = [p for p in search.sample_points() if tuple(p) not in terminals]
    cost, path = search.current_solution() if search.solution_path() is not None else (math.inf, None)
    return render_svg(problem, samples, search.forward_segments(), search.reverse_segments(), path, cost,
                      round(search.elapsed(), 9), search.planner_id)


def emit_svg_snapshot(search, path) -> Path:
    """Write :func:`snapshot_svg` output to ``path``."""
    text = snapshot_svg(search)
    path = Path(path)
    path.write_text(text)
    return path
