"""
Persistence module for run outputs.
Writes JSON and CSV with byte-stable number formatting, reads solution files
back for rendering, and formats results for terminal display.
"""

import csv
import json
import math
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from harness import CONDITIONS, STRATEGIES, ComparisonResult, SweepRow
from orientation import OrientationSolution
from voronoi import VoronoiDiagram


SIGNIFICANT_DIGITS = 9


def stable_number(value: float) -> Optional[float]:
    """Round to SIGNIFICANT_DIGITS; non-finite values become None (JSON null)."""
    if not math.isfinite(value):
        return None
    rounded = float(format(value, f".{SIGNIFICANT_DIGITS}g"))
    return 0.0 if rounded == 0.0 else rounded


def to_stable(data: Any) -> Any:
    """Recursively round every float in a JSON-like structure."""
    if isinstance(data, bool) or data is None or isinstance(data, (int, str)):
        return data
    if isinstance(data, float):
        return stable_number(data)
    if isinstance(data, dict):
        return {str(k): to_stable(v) for k, v in data.items()}
    if isinstance(data, (list, tuple)):
        return [to_stable(v) for v in data]
    raise TypeError(f"Cannot serialize {type(data).__name__}")


def format_cell(value: Any) -> str:
    """CSV cell text; floats use the same rounding as JSON."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return ""
    if isinstance(value, float):
        rounded = stable_number(value)
        return "" if rounded is None else repr(rounded)
    return str(value)


def save_to_json(
    data: Dict[str, Any],
    output_path: str,
    verbose: bool = False
) -> bool:
    """
    Save a result document to a JSON file.

    Args:
        data: JSON-like dictionary; floats are rounded to 9 significant digits
        output_path: Path where the JSON file will be saved
        verbose: Enable verbose logging

    Returns:
        True if successful, False otherwise
    """
    try:
        output_file = Path(output_path)
        output_file.parent.mkdir(parents=True, exist_ok=True)

        if verbose:
            print(f"[PERSIST] Saving {output_path}...")

        with open(output_file, "w", encoding="utf-8", newline="\n") as f:
            json.dump(to_stable(data), f, indent=2, ensure_ascii=False, allow_nan=False)
            f.write("\n")

        if verbose:
            print(f"[PERSIST] File size: {output_file.stat().st_size:,} bytes")
        return True

    except (IOError, OSError) as e:
        print(f"[ERROR] Failed to write to {output_path}: {str(e)}")
        return False
    except (TypeError, ValueError) as e:
        print(f"[ERROR] Cannot serialize data for {output_path}: {str(e)}")
        return False


def load_from_json(input_path: str, verbose: bool = False) -> Optional[Dict[str, Any]]:
    """
    Load a JSON document.

    Returns:
        The decoded dictionary, or None if the file is missing or invalid
    """
    try:
        input_file = Path(input_path)

        if not input_file.exists():
            print(f"[ERROR] File not found: {input_path}")
            return None

        if verbose:
            print(f"[PERSIST] Loading {input_path}...")

        with open(input_file, "r", encoding="utf-8") as f:
            data = json.load(f)

        if not isinstance(data, dict):
            print(f"[ERROR] Expected a JSON object in {input_path}")
            return None
        return data

    except json.JSONDecodeError as e:
        print(f"[ERROR] Invalid JSON in {input_path}: {str(e)}")
        return None
    except IOError as e:
        print(f"[ERROR] Failed to read {input_path}: {str(e)}")
        return None


def save_csv(
    header: Sequence[str],
    rows: Sequence[Sequence[Any]],
    output_path: str,
    verbose: bool = False
) -> bool:
    """Write a header row plus rows as UTF-8 CSV with LF line endings."""
    try:
        output_file = Path(output_path)
        output_file.parent.mkdir(parents=True, exist_ok=True)
        with open(output_file, "w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([format_cell(v) for v in row])
        if verbose:
            print(f"[PERSIST] Wrote {len(rows)} row(s) to {output_path}")
        return True
    except (IOError, OSError) as e:
        print(f"[ERROR] Failed to write to {output_path}: {str(e)}")
        return False


# ---------------------------------------------------------------------------
# Documents
# ---------------------------------------------------------------------------

def _point(p) -> Optional[List[float]]:
    return None if p is None else [p.x, p.y]


def solution_to_dict(solution: OrientationSolution, diagram: VoronoiDiagram) -> Dict[str, Any]:
    """
    Solution document: ROI, per-sensor results and the cell polygons.

    Directions are stored in radians; the document carries everything the
    renderer needs, so rendering never rebuilds the diagram.
    """
    sensors = {s.id: s for s in solution.sensors}
    entries = []
    for a in solution.assignments:
        sensor = sensors[a.sensor]
        report = solution.report_for(a.sensor)
        entries.append({
            "id": a.sensor,
            "nominal": _point(sensor.nominal),
            "r_inner": sensor.r_inner,
            "r_outer": sensor.r_outer,
            "theta_h": sensor.theta_h,
            "state": a.state.value,
            "direction": a.direction,
            "target_vertex": _point(a.target_vertex),
            "effective_location": _point(a.effective_location),
            "area": a.covered_area,
            "rho": report.rrf if report is not None else None,
            "binding_constraint": report.binding_constraint if report is not None else None,
            "branch": a.branch,
            "model": a.model.value,
            "shift": a.shift,
            "rank_index": a.rank_index,
            "rrf_violation": a.rrf_violation,
        })
    return {
        "roi": {"min": _point(diagram.roi.min_corner), "max": _point(diagram.roi.max_corner)},
        "model": solution.model.value,
        "branch_taken": solution.branch_taken,
        "total_area": solution.total_area,
        "iterations": solution.iterations,
        "sensors": entries,
        "cells": [
            {"owner": cell.owner, "vertices": [_point(v) for v in cell.polygon.vertices]}
            for cell in diagram.cells
        ],
    }


SUMMARY_HEADER = (
    "sensor", "state", "branch", "direction_deg", "effective_x", "effective_y",
    "area", "rho", "shift", "rrf_violation",
)


def solution_summary_rows(solution: OrientationSolution) -> List[List[Any]]:
    rows = []
    for a in solution.assignments:
        report = solution.report_for(a.sensor)
        rows.append([
            a.sensor,
            a.state.value,
            a.branch,
            math.degrees(a.direction) if a.direction is not None else None,
            a.effective_location.x if a.effective_location is not None else None,
            a.effective_location.y if a.effective_location is not None else None,
            a.covered_area,
            report.rrf if report is not None else None,
            a.shift,
            a.rrf_violation,
        ])
    return rows


COMPARE_HEADER = ("trial", "strategy", "condition", "total_area")


def comparison_rows(result: ComparisonResult) -> List[List[Any]]:
    rows = []
    for record in result.records:
        for strategy in STRATEGIES:
            for condition in CONDITIONS:
                rows.append([record.trial, strategy, condition, record.totals[(strategy, condition)]])
    return rows


def comparison_means_dict(result: ComparisonResult) -> Dict[str, Any]:
    return {
        "trials": len(result.records),
        "means": result.means,
        "cell_areas": result.cell_summary,
    }


def sweep_rows(rows: Sequence[SweepRow], degrees: bool = False) -> List[List[Any]]:
    """One CSV row per value: parameter, value, mean, then one column per trial."""
    out = []
    for row in rows:
        value = math.degrees(row.value) if degrees else row.value
        out.append([row.parameter, value, row.mean_total, *row.trial_totals])
    return out


def sweep_header(rows: Sequence[SweepRow]) -> List[str]:
    trials = len(rows[0].trial_totals) if rows else 0
    return ["parameter", "value", "mean_total"] + [f"trial_{k}" for k in range(trials)]


# ---------------------------------------------------------------------------
# Display
# ---------------------------------------------------------------------------

def format_solution_for_display(solution: OrientationSolution, max_sensors: int = 10) -> str:
    """
    Format a solution as a readable summary.

    Args:
        solution: Solved orientations
        max_sensors: Maximum number of sensors listed individually

    Returns:
        Formatted string representation
    """
    lines = []
    lines.append("Orientation Solution")
    lines.append("====================")
    lines.append(f"Branch: {solution.branch_taken or 'nominal'}")
    lines.append(f"Total covered area: {solution.total_area:,.2f}")
    lines.append(f"Recalibration sweeps: {solution.iterations}")
    states: Dict[str, int] = {}
    for a in solution.assignments:
        states[a.state.value] = states.get(a.state.value, 0) + 1
    lines.append("Sensors: " + ", ".join(f"{n} {state}" for state, n in sorted(states.items())))
    lines.append("-" * 50)

    for a in solution.assignments[:max_sensors]:
        direction = f"{math.degrees(a.direction):8.2f} deg" if a.direction is not None else "       -    "
        lines.append(f"  #{a.sensor:<4} {a.state.value:<8} {direction}  area {a.covered_area:12,.2f}")
    if len(solution.assignments) > max_sensors:
        lines.append(f"  ... and {len(solution.assignments) - max_sensors} more sensors")
    return "\n".join(lines)


def format_comparison_for_display(result: ComparisonResult) -> str:
    lines = [f"Coverage comparison over {len(result.records)} trial(s)", ""]
    lines.append(f"  {'strategy':<12} {'nominal':>16} {'perturbed':>16}")
    for strategy in STRATEGIES:
        means = result.means[strategy]
        lines.append(f"  {strategy:<12} {means['nominal']:>16,.2f} {means['perturbed']:>16,.2f}")
    return "\n".join(lines)


def format_sweep_for_display(rows: Sequence[SweepRow], degrees: bool = False) -> str:
    if not rows:
        return "No sweep values."
    lines = [f"Sweep over {rows[0].parameter} ({len(rows[0].trial_totals)} trial(s) per value)", ""]
    for row in rows:
        value = math.degrees(row.value) if degrees else row.value
        lines.append(f"  {value:>10g}  mean total {row.mean_total:>16,.2f}")
    return "\n".join(lines)
