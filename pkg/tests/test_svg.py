import json
import xml.etree.ElementTree as ET

import pytest

from itplan.ait import AitSearch
from itplan.eit import EitSearch
from itplan.problem import wall_gap
from itplan.svg import LAYERS, UnsupportedDimensionError, emit_svg_snapshot, render_svg, snapshot_svg

NS = "{http://www.w3.org/2000/svg}"


def parse(text):
    root = ET.fromstring(text)
    meta = json.loads(root.find(f"{NS}metadata").text)
    groups = {g.get("id"): g for g in root.findall(f"{NS}g")}
    return root, meta, groups


def test_problem_only():
    _, meta, groups = parse(snapshot_svg(wall_gap(2)))
    assert tuple(groups) == LAYERS
    assert len(groups["obstacles"]) == 2
    assert len(groups["samples"]) == 0 and len(groups["solution"]) == 0
    assert len(groups["terminals"]) == 2
    assert meta["has_solution"] is False and meta["cost"] is None


def test_obstacle_geometry_is_y_flipped():
    _, _, groups = parse(snapshot_svg(wall_gap(2)))
    lower = groups["obstacles"][0]
    assert lower.get("x") == "270.000" and lower.get("y") == "390.000"
    assert lower.get("width") == "60.000" and lower.get("height") == "210.000"


@pytest.mark.parametrize("cls", [AitSearch, EitSearch])
def test_solution_flagged(cls):
    s = cls(wall_gap(2), budget=0.3, seed=0)
    s.run()
    _, meta, groups = parse(snapshot_svg(s))
    assert meta["has_solution"] is True and meta["cost"] == s.c_current
    assert len(groups["solution"]) == 1
    assert meta["samples"] == len(groups["samples"]) > 0
    assert meta["forward_edges"] == len(groups["forward-tree"]) > 0
    assert meta["planner"] == cls.planner_id


def test_byte_deterministic(tmp_path):
    texts = []
    for i in range(2):
        s = EitSearch(wall_gap(2), budget=0.2, seed=3)
        s.run()
        texts.append(emit_svg_snapshot(s, tmp_path / f"{i}.svg").read_bytes())
    assert texts[0] == texts[1]


def test_higher_dimensions_rejected():
    with pytest.raises(UnsupportedDimensionError):
        render_svg(wall_gap(8))
    with pytest.raises(ValueError):
        snapshot_svg(wall_gap(16))
