"""
Brute-force verifiers for the exact engines.

monte_carlo_area estimates the area of any region given as a vectorized
membership predicate; brute_force_best_vertex re-evaluates every vertex
direction (and a dense grid of directions) for one sensor.
"""

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from geometry import AnnularSector, ConvexPolygon, Point2, covers_points
from orientation import (
    Candidate,
    ModelKind,
    Sensor,
    candidate_directions,
    evaluate_candidate,
)
from voronoi import Roi, VoronoiCell


DEFAULT_CHUNK = 250_000

Membership = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class AreaEstimate:
    mean: float
    std_error: float
    samples: int

    def __post_init__(self):
        if self.std_error < 0.0 or self.samples < 1:
            raise ValueError("std_error must be non-negative and samples positive")


def monte_carlo_area(
    membership: Membership,
    box: Roi,
    samples: int,
    seed: int,
    chunk_size: int = DEFAULT_CHUNK,
) -> AreaEstimate:
    """
    Hit-or-miss estimate of the area of {p in box : membership(p)}.

    Samples are drawn in fixed-size chunks, each from its own Philox stream
    spawned from `seed`, so the estimate does not depend on how chunks are
    scheduled.
    """
    if samples < 1000:
        raise ValueError(f"At least 1000 samples are required, got {samples}")
    n_chunks = -(-samples // chunk_size)
    streams = np.random.SeedSequence(seed).spawn(n_chunks)
    lo, hi = box.min_corner, box.max_corner
    hits = 0
    for k, stream in enumerate(streams):
        n = min(chunk_size, samples - k * chunk_size)
        rng = np.random.Generator(np.random.Philox(stream))
        xy = np.column_stack((rng.uniform(lo.x, hi.x, n), rng.uniform(lo.y, hi.y, n)))
        hits += int(np.count_nonzero(membership(xy)))
    p = hits / samples
    box_area = box.area()
    return AreaEstimate(
        mean=box_area * p,
        std_error=box_area * math.sqrt(p * (1.0 - p) / samples),
        samples=samples,
    )


def footprint_sampling_box(sector: AnnularSector, cell: ConvexPolygon) -> Optional[Roi]:
    """Footprint bounding box intersected with the cell's; None when they miss."""
    (flo, fhi) = sector.bounding_box()
    xs = [v.x for v in cell.vertices]
    ys = [v.y for v in cell.vertices]
    lo = Point2(max(flo.x, min(xs)), max(flo.y, min(ys)))
    hi = Point2(min(fhi.x, max(xs)), min(fhi.y, max(ys)))
    if hi.x <= lo.x or hi.y <= lo.y:
        return None
    return Roi(lo, hi)


def estimate_covered_area(
    sector: AnnularSector, cell: ConvexPolygon, samples: int, seed: int
) -> AreaEstimate:
    box = footprint_sampling_box(sector, cell)
    if box is None:
        return AreaEstimate(0.0, 0.0, samples)
    return monte_carlo_area(
        lambda xy: covers_points(sector, xy) & cell.contains_points(xy), box, samples, seed
    )


@dataclass(frozen=True)
class BruteForceReport:
    best_vertex: Optional[Candidate]
    best_dense_direction: Optional[float]
    best_dense_area: float
    gap: float


def brute_force_best_vertex(
    sensor: Sensor,
    cell: VoronoiCell,
    model: ModelKind,
    shift: float,
    angular_resolution: int = 360,
) -> BruteForceReport:
    """
    Exhaustive re-evaluation of one sensor's orientation choice.

    The vertex optimum uses the same tie rule as the planner (larger area,
    then smaller angle, then lower vertex index). The dense optimum also
    scans `angular_resolution` evenly spaced directions; `gap` is how much
    area the vertex restriction leaves on the table.
    """
    if angular_resolution < 360:
        raise ValueError(f"angular_resolution must be at least 360, got {angular_resolution}")

    best: Optional[Candidate] = None
    for index, (vertex, direction) in enumerate(candidate_directions(sensor, cell)):
        location, area = evaluate_candidate(sensor, cell, direction, model, shift)
        candidate = Candidate(index, vertex, direction, area, location)
        if best is None or _beats(candidate, best):
            best = candidate

    dense_direction = best.direction if best is not None else None
    dense_area = best.area if best is not None else 0.0
    for k in range(angular_resolution):
        direction = -math.pi + (k + 1) * (2.0 * math.pi / angular_resolution)
        _, area = evaluate_candidate(sensor, cell, direction, model, shift)
        if area > dense_area:
            dense_direction, dense_area = direction, area

    vertex_area = best.area if best is not None else 0.0
    return BruteForceReport(
        best_vertex=best,
        best_dense_direction=dense_direction,
        best_dense_area=dense_area,
        gap=dense_area - vertex_area,
    )


def _beats(a: Candidate, b: Candidate) -> bool:
    if not math.isclose(a.area, b.area, rel_tol=1e-9, abs_tol=1e-9):
        return a.area > b.area
    if a.direction != b.direction:
        return a.direction < b.direction
    return a.index < b.index
