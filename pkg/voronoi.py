"""
Voronoi partition of sensor sites clipped to a rectangular region of interest.

Each cell is built directly: the ROI rectangle is clipped against the
perpendicular bisector toward every other site, nearest sites first. Every
cell edge remembers where it came from (a neighbour id or an ROI wall), so
the cell can be read back as a list of half-planes for the RRF.
"""

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from geometry import (
    EPSILON,
    ConvexPolygon,
    HalfPlane,
    Point2,
    clip_convex_polygon,
    unit_halfplane,
)


# Sites closer than this are treated as coincident.
MIN_SITE_SEPARATION = 1e-6

WALL_BOTTOM = "wall:bottom"
WALL_RIGHT = "wall:right"
WALL_TOP = "wall:top"
WALL_LEFT = "wall:left"

EdgeSource = Union[int, str]


class InfeasibleDeploymentError(ValueError):
    """Sites cannot be partitioned: duplicates, sites outside the ROI, or a corrupted cell."""


@dataclass(frozen=True)
class Roi:
    min_corner: Point2
    max_corner: Point2

    def __post_init__(self):
        object.__setattr__(self, "min_corner", Point2(float(self.min_corner[0]), float(self.min_corner[1])))
        object.__setattr__(self, "max_corner", Point2(float(self.max_corner[0]), float(self.max_corner[1])))
        coords = (*self.min_corner, *self.max_corner)
        if not all(math.isfinite(c) for c in coords):
            raise ValueError("ROI corners must be finite")
        if not (self.max_corner.x > self.min_corner.x and self.max_corner.y > self.min_corner.y):
            raise ValueError(
                f"ROI max corner {tuple(self.max_corner)} must dominate min corner {tuple(self.min_corner)}"
            )

    @classmethod
    def square(cls, side: float) -> "Roi":
        return cls(Point2(0.0, 0.0), Point2(side, side))

    @property
    def width(self) -> float:
        return self.max_corner.x - self.min_corner.x

    @property
    def height(self) -> float:
        return self.max_corner.y - self.min_corner.y

    def area(self) -> float:
        return self.width * self.height

    def strictly_contains(self, p: Point2) -> bool:
        return (
            self.min_corner.x < p.x < self.max_corner.x
            and self.min_corner.y < p.y < self.max_corner.y
        )

    def inset(self, margin: float) -> "Roi":
        return Roi(
            Point2(self.min_corner.x + margin, self.min_corner.y + margin),
            Point2(self.max_corner.x - margin, self.max_corner.y - margin),
        )

    def walls(self) -> List[Tuple[str, HalfPlane]]:
        """The four wall half-planes, in the edge order of the CCW rectangle."""
        lo, hi = self.min_corner, self.max_corner
        return [
            (WALL_BOTTOM, HalfPlane(Point2(0.0, -1.0), -lo.y)),
            (WALL_RIGHT, HalfPlane(Point2(1.0, 0.0), hi.x)),
            (WALL_TOP, HalfPlane(Point2(0.0, 1.0), hi.y)),
            (WALL_LEFT, HalfPlane(Point2(-1.0, 0.0), -lo.x)),
        ]

    def corners(self) -> List[Point2]:
        lo, hi = self.min_corner, self.max_corner
        return [Point2(lo.x, lo.y), Point2(hi.x, lo.y), Point2(hi.x, hi.y), Point2(lo.x, hi.y)]


@dataclass(frozen=True)
class VoronoiCell:
    owner: int
    site: Point2
    polygon: ConvexPolygon
    neighbor_edges: Tuple[Tuple[EdgeSource, HalfPlane], ...]

    def neighbor_ids(self) -> List[int]:
        return [src for src, _ in self.neighbor_edges if isinstance(src, int)]


@dataclass(frozen=True)
class VoronoiDiagram:
    cells: Tuple[VoronoiCell, ...]
    roi: Roi

    def cell_for(self, owner: int) -> VoronoiCell:
        for cell in self.cells:
            if cell.owner == owner:
                return cell
        raise KeyError(f"No cell for sensor {owner}")

    def total_area(self) -> float:
        return sum(cell.polygon.area() for cell in self.cells)

    def vertex_sharing_pairs(self, tol: float = EPSILON) -> List[Tuple[int, int]]:
        """Owner pairs (low id first) whose cells have a common polygon vertex."""
        boxes = []
        for cell in self.cells:
            xs = [v.x for v in cell.polygon.vertices]
            ys = [v.y for v in cell.polygon.vertices]
            boxes.append((min(xs), min(ys), max(xs), max(ys)))
        pairs = []
        n = len(self.cells)
        for i in range(n):
            for j in range(i + 1, n):
                bi, bj = boxes[i], boxes[j]
                if bi[0] > bj[2] + tol or bj[0] > bi[2] + tol or bi[1] > bj[3] + tol or bj[1] > bi[3] + tol:
                    continue
                if _share_vertex(self.cells[i].polygon, self.cells[j].polygon, tol):
                    a, b = self.cells[i].owner, self.cells[j].owner
                    pairs.append((min(a, b), max(a, b)))
        return sorted(pairs)


def _share_vertex(p: ConvexPolygon, q: ConvexPolygon, tol: float) -> bool:
    for u in p.vertices:
        for v in q.vertices:
            if abs(u.x - v.x) <= tol and abs(u.y - v.y) <= tol:
                return True
    return False


def bisector_halfplane(owner: Point2, other: Point2) -> HalfPlane:
    """Half-plane of points at least as close to `owner` as to `other`."""
    nx, ny = other.x - owner.x, other.y - owner.y
    mx, my = 0.5 * (owner.x + other.x), 0.5 * (owner.y + other.y)
    return unit_halfplane((nx, ny), nx * mx + ny * my)


def _validate_sites(sites: Sequence[Point2], roi: Roi) -> None:
    if len(sites) < 1:
        raise InfeasibleDeploymentError("At least one site is required")
    for i, s in enumerate(sites):
        if not (math.isfinite(s.x) and math.isfinite(s.y)):
            raise InfeasibleDeploymentError(f"Site {i} has non-finite coordinates")
        if not roi.strictly_contains(s):
            raise InfeasibleDeploymentError(
                f"Site {i} at ({s.x}, {s.y}) is not strictly inside the ROI"
            )
    xy = np.array(sites, dtype=float)
    for i in range(len(sites) - 1):
        gaps = np.hypot(xy[i + 1:, 0] - xy[i, 0], xy[i + 1:, 1] - xy[i, 1])
        if gaps.size and gaps.min() <= MIN_SITE_SEPARATION:
            j = i + 1 + int(np.argmin(gaps))
            raise InfeasibleDeploymentError(f"Sites {i} and {j} coincide (distance {gaps.min():.3g})")


def _build_cell(index: int, sites: Sequence[Point2], owners: Sequence[int], roi: Roi) -> VoronoiCell:
    site = sites[index]
    walls = roi.walls()
    vertices = roi.corners()
    labels: List[EdgeSource] = [tag for tag, _ in walls]
    planes: Dict[EdgeSource, HalfPlane] = dict(walls)

    others = sorted(
        (j for j in range(len(sites)) if j != index),
        key=lambda j: (math.hypot(sites[j].x - site.x, sites[j].y - site.y), j),
    )
    for j in others:
        h = bisector_halfplane(site, sites[j])
        if all(h.signed_distance(v) <= EPSILON for v in vertices):
            continue
        vertices, labels = clip_convex_polygon(vertices, labels, h, owners[j])
        planes[owners[j]] = h
        if len(vertices) < 3:
            raise InfeasibleDeploymentError(f"Cell of site {owners[index]} collapsed during clipping")

    edges = tuple((label, planes[label]) for label in labels)
    polygon = ConvexPolygon(tuple(vertices), tuple(h for _, h in edges))
    return VoronoiCell(owner=owners[index], site=site, polygon=polygon, neighbor_edges=edges)


def build_clipped_voronoi(
    sites: Sequence[Tuple[float, float]],
    roi: Roi,
    owners: Optional[Sequence[int]] = None,
    verbose: bool = False,
) -> VoronoiDiagram:
    """
    Build the Voronoi diagram of `sites` clipped to `roi`.

    Args:
        sites: Site coordinates, strictly inside the ROI and pairwise distinct
        roi: Rectangular region of interest
        owners: Sensor ids for the sites (defaults to 0..n-1)
        verbose: Enable verbose logging

    Returns:
        VoronoiDiagram with one convex cell per site, in input order

    Raises:
        InfeasibleDeploymentError: duplicate or out-of-ROI sites
    """
    pts = [Point2(float(s[0]), float(s[1])) for s in sites]
    _validate_sites(pts, roi)
    ids = list(owners) if owners is not None else list(range(len(pts)))
    if len(ids) != len(pts) or len(set(ids)) != len(ids):
        raise ValueError("owners must be unique and match the number of sites")

    cells = tuple(_build_cell(i, pts, ids, roi) for i in range(len(pts)))
    diagram = VoronoiDiagram(cells=cells, roi=roi)

    if verbose:
        print(
            f"[VORONOI] Built {len(cells)} cells; area sum {diagram.total_area():.6g} "
            f"of ROI {roi.area():.6g}"
        )
    return diagram


def cell_halfplanes(cell: VoronoiCell) -> List[HalfPlane]:
    """Bisector and active ROI-wall half-planes bounding the cell (interior: a.x <= b)."""
    return [h for _, h in cell.neighbor_edges]


def cell_vertices(cell: VoronoiCell) -> List[Point2]:
    """Counter-clockwise vertices of the clipped cell."""
    return list(cell.polygon.vertices)
