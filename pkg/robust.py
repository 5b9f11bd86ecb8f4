"""
Location uncertainty and the radius of robust feasibility (RRF).

A sensor's nominal location must stay inside its Voronoi cell and the ROI.
With every constraint written as a unit-normal half-plane a.x <= b, the
largest ball around the nominal location that keeps all of them satisfied
has radius min_i (b_i - a_i . s). That radius is the sensor's RRF.
"""

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from geometry import EPSILON, HalfPlane, Point2
from voronoi import (
    EdgeSource,
    InfeasibleDeploymentError,
    VoronoiCell,
    VoronoiDiagram,
    cell_halfplanes,
)


@dataclass(frozen=True)
class UncertaintyBall:
    """Closed ball of admissible locations around a nominal position."""

    center: Point2
    radius: float

    def __post_init__(self):
        if not math.isfinite(self.radius) or self.radius < 0.0:
            raise ValueError(f"Uncertainty radius must be finite and non-negative, got {self.radius}")

    def boundary_points(self, n_dirs: int) -> np.ndarray:
        angles = np.arange(n_dirs) * (2.0 * math.pi / n_dirs)
        return np.column_stack(
            (self.center.x + self.radius * np.cos(angles), self.center.y + self.radius * np.sin(angles))
        )


@dataclass(frozen=True)
class RrfReport:
    sensor: int
    rrf: float
    binding_constraint: Optional[EdgeSource]
    slacks: Tuple[Tuple[Optional[EdgeSource], float], ...]


def worst_case_location(nominal: Point2, direction: Tuple[float, float], shift: float) -> Point2:
    """Nominal location moved `shift` units along `direction`."""
    length = math.hypot(direction[0], direction[1])
    if length == 0.0:
        raise ValueError("Shift direction must be non-zero")
    if shift < 0.0:
        raise ValueError(f"Shift must be non-negative, got {shift}")
    return Point2(nominal.x + shift * direction[0] / length, nominal.y + shift * direction[1] / length)


def sensor_rrf(
    nominal: Point2,
    halfplanes: Sequence[HalfPlane],
    sources: Optional[Sequence[EdgeSource]] = None,
    sensor: int = -1,
) -> RrfReport:
    """
    RRF of one sensor: the smallest normalized slack of its constraints.

    Args:
        nominal: Nominal sensor location
        halfplanes: Constraints a.x <= b (normals need not be unit)
        sources: Optional neighbour id / wall tag per half-plane
        sensor: Sensor id recorded in the report

    Raises:
        InfeasibleDeploymentError: the nominal location violates a constraint
    """
    if not halfplanes:
        raise ValueError("At least one half-plane is required")
    labels = list(sources) if sources is not None else [None] * len(halfplanes)
    slacks = []
    for label, h in zip(labels, halfplanes):
        norm = math.hypot(h.normal.x, h.normal.y)
        slack = (h.offset - (h.normal.x * nominal.x + h.normal.y * nominal.y)) / norm
        if slack < -EPSILON:
            raise InfeasibleDeploymentError(
                f"Sensor {sensor} violates constraint {label!r} by {-slack:.3g}; the diagram is corrupted"
            )
        slacks.append((label, max(slack, 0.0)))
    binding, rho = min(slacks, key=lambda item: item[1])
    return RrfReport(sensor=sensor, rrf=rho, binding_constraint=binding, slacks=tuple(slacks))


def cell_rrf(cell: VoronoiCell) -> RrfReport:
    return sensor_rrf(
        cell.site,
        cell_halfplanes(cell),
        sources=[src for src, _ in cell.neighbor_edges],
        sensor=cell.owner,
    )


def network_rrf_reports(diagram: VoronoiDiagram, verbose: bool = False) -> List[RrfReport]:
    """RRF of every sensor in the diagram, in cell order."""
    reports = [cell_rrf(cell) for cell in diagram.cells]
    if verbose:
        rhos = [r.rrf for r in reports]
        print(f"[ROBUST] RRF over {len(reports)} sensors: min {min(rhos):.6g}, max {max(rhos):.6g}")
    return reports


def rrf_oracle(
    nominal: Point2,
    halfplanes: Sequence[HalfPlane],
    alpha: float,
    n_dirs: int,
) -> bool:
    """True when n_dirs evenly spaced points on the alpha-circle satisfy every half-plane."""
    if n_dirs < 8:
        raise ValueError(f"n_dirs must be at least 8, got {n_dirs}")
    pts = UncertaintyBall(nominal, alpha).boundary_points(n_dirs)
    for h in halfplanes:
        norm = math.hypot(h.normal.x, h.normal.y)
        values = (pts[:, 0] * h.normal.x + pts[:, 1] * h.normal.y - h.offset) / norm
        if np.any(values > EPSILON):
            return False
    return True


def bisect_rrf(
    nominal: Point2,
    halfplanes: Sequence[HalfPlane],
    n_dirs: int = 36000,
    tol: float = 1e-6,
    upper: Optional[float] = None,
) -> float:
    """Bracket the RRF by bisection over rrf_oracle; returns the bracket midpoint."""
    if not rrf_oracle(nominal, halfplanes, 0.0, n_dirs):
        raise InfeasibleDeploymentError("Nominal location is infeasible")
    lo = 0.0
    hi = upper if upper is not None else 1.0
    while rrf_oracle(nominal, halfplanes, hi, n_dirs):
        lo, hi = hi, 2.0 * hi
        if hi > 1e12:
            return math.inf
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if rrf_oracle(nominal, halfplanes, mid, n_dirs):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def min_network_rrf(reports: Sequence[RrfReport]) -> float:
    if not reports:
        raise ValueError("At least one RRF report is required")
    return min(r.rrf for r in reports)
