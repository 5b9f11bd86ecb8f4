"""
SVG rendering of a solved scene.

Reads the solution document written by `main.py solve` and draws the ROI
frame, Voronoi cells, nominal sites, effective locations and footprints.
World y points up; the SVG maps (x, y) to (x, -y) and sets the viewBox
accordingly, so coordinates in the file are ground units.
"""

import math
from pathlib import Path
from typing import Any, Dict, List, Optional

from jinja2 import Environment, FileSystemLoader

from persist import load_from_json


_TEMPLATE_DIR = Path(__file__).parent / "templates"
_jinja_env = Environment(
    loader=FileSystemLoader(str(_TEMPLATE_DIR)),
    autoescape=True,
    keep_trailing_newline=True,
)

PADDING = 20.0


class SolutionFormatError(ValueError):
    """The solution document is missing fields or has malformed values."""


def _fmt(value: float) -> str:
    text = f"{value:.3f}"
    return "0.000" if text == "-0.000" else text


def _xy(x: float, y: float) -> str:
    return f"{_fmt(x)},{_fmt(-y)}"


def _pair(value: Any, field: str) -> List[float]:
    if not isinstance(value, list) or len(value) != 2:
        raise SolutionFormatError(f"'{field}' must be [x, y]")
    try:
        x, y = float(value[0]), float(value[1])
    except (TypeError, ValueError):
        raise SolutionFormatError(f"'{field}' must hold numbers")
    if not (math.isfinite(x) and math.isfinite(y)):
        raise SolutionFormatError(f"'{field}' must be finite")
    return [x, y]


def _number(entry: Dict[str, Any], key: str, field: str) -> float:
    value = entry.get(key)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SolutionFormatError(f"'{field}.{key}' must be a number")
    return float(value)


def footprint_path(apex: List[float], r_inner: float, r_outer: float, theta_h: float, direction: float) -> str:
    """SVG path data of an annular sector (full annulus when theta_h >= 2*pi)."""
    ax, ay = apex
    if theta_h >= 2.0 * math.pi - 1e-9:
        parts = [_circle(ax, ay, r_outer)]
        if r_inner > 0.0:
            parts.append(_circle(ax, ay, r_inner))
        return " ".join(parts)

    half = theta_h / 2.0
    lo, hi = direction - half, direction + half
    large = 1 if theta_h > math.pi else 0

    def at(r: float, a: float) -> str:
        return _xy(ax + r * math.cos(a), ay + r * math.sin(a))

    # Counter-clockwise in the world is clockwise on screen: sweep flag 1.
    path = [f"M {at(r_outer, lo)}", f"A {_fmt(r_outer)} {_fmt(r_outer)} 0 {large} 1 {at(r_outer, hi)}"]
    if r_inner > 0.0:
        path.append(f"L {at(r_inner, hi)}")
        path.append(f"A {_fmt(r_inner)} {_fmt(r_inner)} 0 {large} 0 {at(r_inner, lo)}")
    else:
        path.append(f"L {_xy(ax, ay)}")
    path.append("Z")
    return " ".join(path)


def _circle(cx: float, cy: float, r: float) -> str:
    return (
        f"M {_xy(cx + r, cy)} A {_fmt(r)} {_fmt(r)} 0 1 1 {_xy(cx - r, cy)} "
        f"A {_fmt(r)} {_fmt(r)} 0 1 1 {_xy(cx + r, cy)} Z"
    )


def scene_context(document: Dict[str, Any]) -> Dict[str, Any]:
    """Template variables for a solution document."""
    roi = document.get("roi")
    if not isinstance(roi, dict):
        raise SolutionFormatError("'roi' is missing")
    lo, hi = _pair(roi.get("min"), "roi.min"), _pair(roi.get("max"), "roi.max")
    if not (hi[0] > lo[0] and hi[1] > lo[1]):
        raise SolutionFormatError("'roi.max' must dominate 'roi.min'")

    sensors = document.get("sensors")
    cells = document.get("cells")
    if not isinstance(sensors, list) or not isinstance(cells, list):
        raise SolutionFormatError("'sensors' and 'cells' must be lists")

    cell_items = []
    for i, cell in enumerate(cells):
        if not isinstance(cell, dict) or not isinstance(cell.get("vertices"), list):
            raise SolutionFormatError(f"'cells[{i}].vertices' is missing")
        points = [_pair(v, f"cells[{i}].vertices") for v in cell["vertices"]]
        cell_items.append({"owner": cell.get("owner"), "points": " ".join(_xy(x, y) for x, y in points)})

    sensor_items = []
    for i, entry in enumerate(sensors):
        field = f"sensors[{i}]"
        if not isinstance(entry, dict):
            raise SolutionFormatError(f"'{field}' must be an object")
        nominal = _pair(entry.get("nominal"), f"{field}.nominal")
        state = entry.get("state")
        if state not in ("oriented", "sleep", "random"):
            raise SolutionFormatError(f"'{field}.state' is not a known state")
        item = {
            "id": entry.get("id", i),
            "state": state,
            "cx": _fmt(nominal[0]),
            "cy": _fmt(-nominal[1]),
            "footprint": None,
            "effective": None,
        }
        direction = entry.get("direction")
        effective: Optional[List[float]] = None
        if entry.get("effective_location") is not None:
            effective = _pair(entry["effective_location"], f"{field}.effective_location")
        if direction is not None and effective is not None:
            item["footprint"] = footprint_path(
                effective,
                _number(entry, "r_inner", field),
                _number(entry, "r_outer", field),
                _number(entry, "theta_h", field),
                float(direction),
            )
            if math.hypot(effective[0] - nominal[0], effective[1] - nominal[1]) > 1e-9:
                item["effective"] = {"cx": _fmt(effective[0]), "cy": _fmt(-effective[1])}
        sensor_items.append(item)

    width, height = hi[0] - lo[0], hi[1] - lo[1]
    return {
        "view_box": " ".join(
            _fmt(v) for v in (lo[0] - PADDING, -hi[1] - PADDING, width + 2 * PADDING, height + 2 * PADDING)
        ),
        "pixel_width": _fmt(width + 2 * PADDING),
        "pixel_height": _fmt(height + 2 * PADDING),
        "roi": {"x": _fmt(lo[0]), "y": _fmt(-hi[1]), "width": _fmt(width), "height": _fmt(height)},
        "cells": cell_items,
        "sensors": sensor_items,
        "total_area": document.get("total_area"),
    }


def render_scene(document: Dict[str, Any]) -> str:
    """SVG text for a solution document; identical documents give identical bytes."""
    template = _jinja_env.get_template("scene.svg.j2")
    return template.render(**scene_context(document))


def render_solution_file(solution_path: str, svg_path: str, verbose: bool = False) -> str:
    """
    Render a solution file to SVG.

    Returns:
        The path written

    Raises:
        SolutionFormatError: unreadable or malformed solution file
    """
    document = load_from_json(solution_path, verbose=verbose)
    if document is None:
        raise SolutionFormatError(f"Cannot read solution file {solution_path}")
    svg = render_scene(document)
    out = Path(svg_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", encoding="utf-8", newline="\n") as f:
        f.write(svg)
    if verbose:
        print(f"[RENDER] Wrote {len(document['sensors'])} sensor(s) to {svg_path}")
    return str(out)
