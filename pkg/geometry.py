"""
Planar geometry for ground-projected directional sensor footprints.

Provides points, annular sectors (the footprint of a tilted directional
sensor), convex polygons given by vertices plus half-planes, and the
arc-aware clipping engine that returns the exact area of a footprint
inside a convex cell.
"""

import math
from dataclasses import dataclass
from enum import IntEnum
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np


# Absolute tolerance for geometric predicates, in ground units.
EPSILON = 1e-9
TWO_PI = 2.0 * math.pi


class Point2(NamedTuple):
    x: float
    y: float


class HalfPlane(NamedTuple):
    """Closed half-plane {p : normal . p <= offset}; normal has unit length."""

    normal: Point2
    offset: float

    def signed_distance(self, p: Point2) -> float:
        return self.normal.x * p.x + self.normal.y * p.y - self.offset


class IntersectionCase(IntEnum):
    """Footprint/cell configurations, labelled by which boundary elements meet."""

    CONTAINED = 1
    OUTER_ARC_AND_SIDELINE = 2
    INNER_ARC_AND_SIDELINE = 3
    SIDELINES_FROM_INSIDE = 4
    SIDELINES_FROM_OUTSIDE = 5
    BOTH_ARCS = 6
    NO_INTERSECTION = 7


def _cross(ax: float, ay: float, bx: float, by: float) -> float:
    return ax * by - ay * bx


def _unit(theta: float) -> Point2:
    return Point2(math.cos(theta), math.sin(theta))


def distance(a: Point2, b: Point2) -> float:
    return math.hypot(a.x - b.x, a.y - b.y)


def normalize_angle(theta: float) -> float:
    """Reduce an angle to (-pi, pi]."""
    if not math.isfinite(theta):
        raise ValueError(f"Angle must be finite, got {theta!r}")
    r = math.remainder(theta, TWO_PI)
    if r <= -math.pi:
        r += TWO_PI
    return r


def unit_halfplane(normal: Tuple[float, float], offset: float) -> HalfPlane:
    """Build a half-plane from an arbitrary non-zero normal, rescaling to unit length."""
    length = math.hypot(normal[0], normal[1])
    if length == 0.0 or not math.isfinite(length):
        raise ValueError("Half-plane normal must be a finite non-zero vector")
    return HalfPlane(Point2(normal[0] / length, normal[1] / length), offset / length)


@dataclass(frozen=True)
class AnnularSector:
    """
    Ground footprint of a directional sensor.

    Points between r_inner and r_outer from the apex whose bearing lies
    within half_angle of the orientation. half_angle equal to pi is the full
    annulus.
    """

    apex: Point2
    r_inner: float
    r_outer: float
    half_angle: float
    orientation: float

    def __post_init__(self):
        if not (math.isfinite(self.apex.x) and math.isfinite(self.apex.y)):
            raise ValueError("Sector apex must have finite coordinates")
        if not (0.0 <= self.r_inner < self.r_outer) or not math.isfinite(self.r_outer):
            raise ValueError(
                f"Sector radii must satisfy 0 <= r_inner < r_outer, "
                f"got r_inner={self.r_inner}, r_outer={self.r_outer}"
            )
        if not (0.0 < self.half_angle <= math.pi + EPSILON):
            raise ValueError(f"half_angle must lie in (0, pi], got {self.half_angle}")
        object.__setattr__(self, "half_angle", min(self.half_angle, math.pi))
        object.__setattr__(self, "orientation", normalize_angle(self.orientation))

    @classmethod
    def from_view(
        cls,
        apex: Point2,
        r_inner: float,
        r_outer: float,
        theta_h: float,
        orientation: float,
    ) -> "AnnularSector":
        """Build a sector from the full horizontal view angle theta_h."""
        return cls(Point2(*apex), r_inner, r_outer, theta_h / 2.0, orientation)

    @property
    def theta_h(self) -> float:
        return 2.0 * self.half_angle

    @property
    def is_full(self) -> bool:
        return self.half_angle >= math.pi

    def sideline_angle(self, side: str) -> float:
        if side == "plus":
            return self.orientation + self.half_angle
        if side == "minus":
            return self.orientation - self.half_angle
        raise ValueError(f"side must be 'plus' or 'minus', got {side!r}")

    def bounding_box(self) -> Tuple[Point2, Point2]:
        """Axis-aligned box of the outer disc; used for sampling."""
        return (
            Point2(self.apex.x - self.r_outer, self.apex.y - self.r_outer),
            Point2(self.apex.x + self.r_outer, self.apex.y + self.r_outer),
        )


@dataclass(frozen=True)
class ConvexPolygon:
    """
    Convex polygon with counter-clockwise vertices.

    halfplanes[i] supports the edge from vertices[i] to vertices[i + 1], so
    every vertex lies on the boundary of two consecutive half-planes.
    """

    vertices: Tuple[Point2, ...]
    halfplanes: Tuple[HalfPlane, ...]

    def __post_init__(self):
        if len(self.vertices) < 3:
            raise ValueError(f"Polygon needs at least 3 vertices, got {len(self.vertices)}")
        if len(self.halfplanes) != len(self.vertices):
            raise ValueError("Polygon needs exactly one half-plane per edge")
        if self.area() <= 0.0:
            raise ValueError("Polygon vertices must be in counter-clockwise order")

    @classmethod
    def from_vertices(cls, vertices: Sequence[Tuple[float, float]]) -> "ConvexPolygon":
        pts = tuple(Point2(float(v[0]), float(v[1])) for v in vertices)
        planes = []
        n = len(pts)
        for i in range(n):
            a, b = pts[i], pts[(i + 1) % n]
            # Outward normal of a CCW edge is the edge direction rotated clockwise.
            planes.append(unit_halfplane((b.y - a.y, a.x - b.x), (b.y - a.y) * a.x + (a.x - b.x) * a.y))
        return cls(pts, tuple(planes))

    def edges(self) -> List[Tuple[Point2, Point2]]:
        n = len(self.vertices)
        return [(self.vertices[i], self.vertices[(i + 1) % n]) for i in range(n)]

    def area(self) -> float:
        total = 0.0
        n = len(self.vertices)
        for i in range(n):
            a, b = self.vertices[i], self.vertices[(i + 1) % n]
            total += _cross(a.x, a.y, b.x, b.y)
        return 0.5 * total

    def centroid(self) -> Point2:
        cx = cy = 0.0
        n = len(self.vertices)
        for i in range(n):
            a, b = self.vertices[i], self.vertices[(i + 1) % n]
            w = _cross(a.x, a.y, b.x, b.y)
            cx += (a.x + b.x) * w
            cy += (a.y + b.y) * w
        six_area = 6.0 * self.area()
        return Point2(cx / six_area, cy / six_area)

    def contains(self, p: Point2, tol: float = EPSILON) -> bool:
        return all(h.signed_distance(p) <= tol for h in self.halfplanes)

    def contains_points(self, xy: np.ndarray, tol: float = EPSILON) -> np.ndarray:
        """Vectorized membership for an (N, 2) array of points."""
        inside = np.ones(xy.shape[0], dtype=bool)
        for h in self.halfplanes:
            inside &= xy[:, 0] * h.normal.x + xy[:, 1] * h.normal.y - h.offset <= tol
        return inside

    def with_halfplane(self, extra: HalfPlane) -> Optional["ConvexPolygon"]:
        """Intersect with one more half-plane; None when nothing of positive area remains."""
        verts, planes = clip_convex_polygon(list(self.vertices), list(self.halfplanes), extra, extra)
        if len(verts) < 3:
            return None
        try:
            return ConvexPolygon(tuple(verts), tuple(planes))
        except ValueError:
            return None


def clip_convex_polygon(
    vertices: List[Point2],
    labels: List,
    halfplane: HalfPlane,
    label,
) -> Tuple[List[Point2], List]:
    """
    Clip a convex polygon against a half-plane (Sutherland-Hodgman).

    labels[i] tags the edge leaving vertices[i]; edges created along the
    clipping line get `label`. Returns the clipped vertices and their edge
    labels with near-coincident vertices merged.
    """
    n = len(vertices)
    out_v: List[Point2] = []
    out_l: List = []
    for i in range(n):
        a, b = vertices[i], vertices[(i + 1) % n]
        da, db = halfplane.signed_distance(a), halfplane.signed_distance(b)
        a_in, b_in = da <= EPSILON, db <= EPSILON
        if a_in:
            out_v.append(a)
            out_l.append(labels[i])
            if not b_in:
                t = da / (da - db)
                out_v.append(Point2(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)))
                out_l.append(label)
        elif b_in:
            t = da / (da - db)
            out_v.append(Point2(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)))
            out_l.append(labels[i])

    # A zero-length edge carries no boundary; drop its start vertex.
    merged_v: List[Point2] = []
    merged_l: List = []
    m = len(out_v)
    for i in range(m):
        nxt = out_v[(i + 1) % m]
        if m > 1 and distance(out_v[i], nxt) <= EPSILON:
            continue
        merged_v.append(out_v[i])
        merged_l.append(out_l[i])
    return merged_v, merged_l


# ---------------------------------------------------------------------------
# Point coverage
# ---------------------------------------------------------------------------

def covers_point(sector: AnnularSector, p: Point2) -> bool:
    """True when p lies in the closed footprint."""
    dx, dy = p.x - sector.apex.x, p.y - sector.apex.y
    dist = math.hypot(dx, dy)
    if dist < sector.r_inner - EPSILON or dist > sector.r_outer + EPSILON:
        return False
    if dist <= EPSILON:
        return sector.r_inner <= EPSILON
    if sector.is_full:
        return True
    u = _unit(sector.orientation)
    angle = abs(math.atan2(_cross(u.x, u.y, dx, dy), u.x * dx + u.y * dy))
    return angle <= sector.half_angle + EPSILON


def covers_points(sector: AnnularSector, xy: np.ndarray) -> np.ndarray:
    """Vectorized covers_point over an (N, 2) array."""
    dx = xy[:, 0] - sector.apex.x
    dy = xy[:, 1] - sector.apex.y
    dist = np.hypot(dx, dy)
    in_range = (dist >= sector.r_inner - EPSILON) & (dist <= sector.r_outer + EPSILON)
    if sector.is_full:
        return in_range
    u = _unit(sector.orientation)
    angle = np.abs(np.arctan2(u.x * dy - u.y * dx, u.x * dx + u.y * dy))
    return in_range & (angle <= sector.half_angle + EPSILON)


# ---------------------------------------------------------------------------
# Closed-form areas
# ---------------------------------------------------------------------------

def annular_sector_area(sector: AnnularSector) -> float:
    return sector.half_angle * (sector.r_outer ** 2 - sector.r_inner ** 2)


def radial_difference_area(sector: AnnularSector) -> float:
    """(theta_h / 2) * (R - r)^2, kept only to demonstrate that it fails the sampling oracle."""
    return sector.half_angle * (sector.r_outer - sector.r_inner) ** 2


def circular_segment_area(radius: float, subtended_angle: float) -> float:
    """Area between a chord and its arc."""
    if radius <= 0.0:
        raise ValueError(f"radius must be positive, got {radius}")
    return 0.5 * radius * radius * (subtended_angle - math.sin(subtended_angle))


def triangle_area_heron(e1: float, e2: float, e3: float) -> float:
    """
    Triangle area from its three edge lengths.

    Evaluates Heron's product with the edges sorted so that every factor is
    formed without cancellation; tiny negative radicands from roundoff are
    clamped to zero.

    Raises:
        ValueError: negative edge or triangle inequality violated beyond tolerance
    """
    if min(e1, e2, e3) < 0.0:
        raise ValueError("Edge lengths must be non-negative")
    a, b, c = sorted((e1, e2, e3), reverse=True)
    tol = EPSILON * max(1.0, a)
    if a > b + c + tol:
        raise ValueError(f"Edges ({e1}, {e2}, {e3}) violate the triangle inequality")
    radicand = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c))
    if radicand <= 0.0:
        return 0.0
    return 0.25 * math.sqrt(radicand)


def fan_area_heron(vertices: Sequence[Point2], hub: Point2) -> float:
    """Area of a convex polygon as a fan of triangles around an interior hub."""
    total = 0.0
    n = len(vertices)
    for i in range(n):
        a, b = vertices[i], vertices[(i + 1) % n]
        total += triangle_area_heron(distance(hub, a), distance(hub, b), distance(a, b))
    return total


# ---------------------------------------------------------------------------
# Boundary intersections
# ---------------------------------------------------------------------------

def segment_circle_intersections(
    a: Point2, b: Point2, center: Point2, radius: float
) -> List[Point2]:
    """Points of segment [a, b] at distance `radius` from `center`, ordered along the segment."""
    dx, dy = b.x - a.x, b.y - a.y
    fx, fy = a.x - center.x, a.y - center.y
    qa = dx * dx + dy * dy
    if qa == 0.0:
        raise ValueError("Segment endpoints must differ")
    qb = 2.0 * (fx * dx + fy * dy)
    qc = fx * fx + fy * fy - radius * radius
    disc = qb * qb - 4.0 * qa * qc
    scale = qb * qb + abs(4.0 * qa * qc)
    if disc < -1e-12 * scale:
        return []
    if disc <= 1e-12 * scale:
        roots = [-qb / (2.0 * qa)]
    else:
        root = math.sqrt(disc)
        roots = [(-qb - root) / (2.0 * qa), (-qb + root) / (2.0 * qa)]
    t_tol = EPSILON / math.sqrt(qa)
    points = []
    for t in roots:
        if -t_tol <= t <= 1.0 + t_tol:
            t = min(max(t, 0.0), 1.0)
            points.append(Point2(a.x + t * dx, a.y + t * dy))
    return points


def _ray_parameter(a: Point2, b: Point2, apex: Point2, u: Point2) -> Optional[Tuple[float, float]]:
    """(segment t, ray s) where segment [a, b] crosses the ray apex + s*u; None if parallel."""
    dx, dy = b.x - a.x, b.y - a.y
    denom = _cross(dx, dy, u.x, u.y)
    if abs(denom) <= EPSILON * math.hypot(dx, dy):
        return None
    wx, wy = apex.x - a.x, apex.y - a.y
    t = _cross(wx, wy, u.x, u.y) / denom
    s = _cross(wx, wy, dx, dy) / denom
    return t, s


def segment_sideline_intersection(
    a: Point2, b: Point2, sector: AnnularSector, side: str
) -> Optional[Point2]:
    """
    Where segment [a, b] meets one radial side of the footprint.

    The side is the ray from the apex at orientation +/- half_angle, limited
    to radial distances [r_inner, r_outer]. A segment lying along the ray
    resolves to the overlap point nearest the apex.
    """
    if a == b:
        raise ValueError("Segment endpoints must differ")
    u = _unit(sector.sideline_angle(side))
    apex = sector.apex
    seg_len = distance(a, b)
    hit = _ray_parameter(a, b, apex, u)
    if hit is None:
        # Parallel: only a collinear overlap can meet the side.
        if abs(_cross(a.x - apex.x, a.y - apex.y, u.x, u.y)) > EPSILON:
            return None
        s_a = (a.x - apex.x) * u.x + (a.y - apex.y) * u.y
        s_b = (b.x - apex.x) * u.x + (b.y - apex.y) * u.y
        lo = max(min(s_a, s_b), sector.r_inner)
        hi = min(max(s_a, s_b), sector.r_outer)
        if lo > hi + EPSILON:
            return None
        if lo == min(s_a, s_b):
            return a if s_a <= s_b else b
        return Point2(apex.x + lo * u.x, apex.y + lo * u.y)
    t, s = hit
    t_tol = EPSILON / seg_len
    if not (-t_tol <= t <= 1.0 + t_tol):
        return None
    if s < sector.r_inner - EPSILON or s > sector.r_outer + EPSILON:
        return None
    t = min(max(t, 0.0), 1.0)
    return Point2(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y))


def _angle_in_window(sector: AnnularSector, p: Point2) -> bool:
    if sector.is_full:
        return True
    u = _unit(sector.orientation)
    dx, dy = p.x - sector.apex.x, p.y - sector.apex.y
    if math.hypot(dx, dy) <= EPSILON:
        return True
    angle = abs(math.atan2(_cross(u.x, u.y, dx, dy), u.x * dx + u.y * dy))
    return angle <= sector.half_angle + EPSILON


def _arc_hits(sector: AnnularSector, cell: ConvexPolygon, radius: float) -> bool:
    for a, b in cell.edges():
        for p in segment_circle_intersections(a, b, sector.apex, radius):
            if _angle_in_window(sector, p):
                return True
    return False


def _support(sector: AnnularSector, nx: float, ny: float) -> float:
    """max of (nx, ny) . p over the footprint, in apex-local coordinates."""
    phi = math.atan2(ny, nx)
    best = sector.r_outer if sector.is_full else -math.inf
    if not sector.is_full:
        for theta in (sector.orientation - sector.half_angle, sector.orientation + sector.half_angle):
            for r in (sector.r_inner, sector.r_outer):
                best = max(best, r * (nx * math.cos(theta) + ny * math.sin(theta)))
        if abs(normalize_angle(phi - sector.orientation)) <= sector.half_angle:
            best = max(best, sector.r_outer * math.hypot(nx, ny))
    return best


def footprint_inside(sector: AnnularSector, cell: ConvexPolygon, tol: float = EPSILON) -> bool:
    """True when the whole footprint lies in the cell."""
    for h in cell.halfplanes:
        local_offset = h.offset - (h.normal.x * sector.apex.x + h.normal.y * sector.apex.y)
        if _support(sector, h.normal.x, h.normal.y) > local_offset + tol:
            return False
    return True


def _footprint_outside(sector: AnnularSector, cell: ConvexPolygon) -> bool:
    """True when some cell half-plane excludes the whole footprint."""
    for h in cell.halfplanes:
        local_offset = h.offset - (h.normal.x * sector.apex.x + h.normal.y * sector.apex.y)
        if -_support(sector, -h.normal.x, -h.normal.y) > local_offset + EPSILON:
            return True
    return False


def classify_intersection_case(sector: AnnularSector, cell: ConvexPolygon) -> IntersectionCase:
    """
    Label the footprint/cell configuration by the boundary elements the cell edges cross.

    Diagnostic only: the covered area always comes from the clipping engine.
    """
    outer = _arc_hits(sector, cell, sector.r_outer)
    inner = sector.r_inner > 0.0 and _arc_hits(sector, cell, sector.r_inner)
    sides = False
    if not sector.is_full:
        for a, b in cell.edges():
            if any(segment_sideline_intersection(a, b, sector, s) is not None for s in ("plus", "minus")):
                sides = True
                break

    if outer and inner:
        return IntersectionCase.BOTH_ARCS
    if outer:
        return IntersectionCase.OUTER_ARC_AND_SIDELINE
    if inner:
        return IntersectionCase.INNER_ARC_AND_SIDELINE
    if sides:
        for a, b in cell.edges():
            for side in ("plus", "minus"):
                hit = _ray_parameter(a, b, sector.apex, _unit(sector.sideline_angle(side)))
                if hit is None:
                    continue
                t, s = hit
                if 0.0 <= t <= 1.0 and 0.0 <= s < sector.r_inner:
                    return IntersectionCase.SIDELINES_FROM_INSIDE
        return IntersectionCase.SIDELINES_FROM_OUTSIDE
    if footprint_inside(sector, cell):
        return IntersectionCase.CONTAINED
    return IntersectionCase.NO_INTERSECTION


# ---------------------------------------------------------------------------
# Arc-aware clipping engine
# ---------------------------------------------------------------------------
#
# The footprint boundary is kept as a list of oriented pieces in
# apex-local coordinates: straight segments and arcs centred on the apex.
# Clipping by a half-plane keeps the part of every piece on the inner side
# and closes the boundary with chords along the clipping line. Area is the
# Green's-theorem integral over the pieces, so holes (the inner arc of a
# full annulus) and non-convex footprints need no special handling.

class _Segment(NamedTuple):
    a: Point2
    b: Point2


class _Arc(NamedTuple):
    radius: float
    start: float
    sweep: float

    def point(self, theta: float) -> Point2:
        return Point2(self.radius * math.cos(theta), self.radius * math.sin(theta))

    @property
    def first(self) -> Point2:
        return self.point(self.start)

    @property
    def last(self) -> Point2:
        return self.point(self.start + self.sweep)


def _initial_pieces(sector: AnnularSector) -> list:
    R, r = sector.r_outer, sector.r_inner
    if sector.is_full:
        pieces = [_Arc(R, sector.orientation, TWO_PI)]
        if r > 0.0:
            pieces.append(_Arc(r, sector.orientation, -TWO_PI))
        return pieces
    lo = sector.orientation - sector.half_angle
    hi = sector.orientation + sector.half_angle
    u_lo, u_hi = _unit(lo), _unit(hi)
    outer = _Arc(R, lo, hi - lo)
    pieces = [outer, _Segment(outer.last, Point2(r * u_hi.x, r * u_hi.y))]
    if r > 0.0:
        pieces.append(_Arc(r, hi, lo - hi))
    pieces.append(_Segment(Point2(r * u_lo.x, r * u_lo.y), outer.first))
    return pieces


def _clip_arc(arc: _Arc, nx: float, ny: float, c: float) -> list:
    k = c / arc.radius
    if k >= 1.0:
        return [arc]
    if k <= -1.0:
        return []
    phi = math.atan2(ny, nx)
    half_gap = math.acos(k)
    if arc.sweep >= 0.0:
        s, length = arc.start, arc.sweep
    else:
        s, length = arc.start + arc.sweep, -arc.sweep
    pieces = []
    for wrap in (-2, -1, 0, 1, 2):
        lo = max(s, phi + half_gap + wrap * TWO_PI)
        hi = min(s + length, phi + TWO_PI - half_gap + wrap * TWO_PI)
        if hi > lo:
            if arc.sweep >= 0.0:
                pieces.append(_Arc(arc.radius, lo, hi - lo))
            else:
                pieces.append(_Arc(arc.radius, hi, lo - hi))
    return pieces


def _clip_segment(seg: _Segment, nx: float, ny: float, c: float) -> list:
    a, b = seg
    da = nx * a.x + ny * a.y - c
    db = nx * b.x + ny * b.y - c
    a_in, b_in = da <= EPSILON, db <= EPSILON
    if a_in and b_in:
        return [seg]
    if not a_in and not b_in:
        return []
    t = da / (da - db)
    mid = Point2(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y))
    return [_Segment(a, mid)] if a_in else [_Segment(mid, b)]


def _endpoints(piece) -> Tuple[Point2, Point2]:
    if isinstance(piece, _Arc):
        return piece.first, piece.last
    return piece.a, piece.b


def _clip_pieces(pieces: list, nx: float, ny: float, c: float) -> list:
    kept = []
    for piece in pieces:
        if isinstance(piece, _Arc):
            kept.extend(_clip_arc(piece, nx, ny, c))
        else:
            kept.extend(_clip_segment(piece, nx, ny, c))

    # Boundary points left on the clipping line: pieces ending there exit the
    # region, pieces starting there enter it. Chords run exit -> entry.
    exits: List[Point2] = []
    entries: List[Point2] = []
    for piece in kept:
        first, last = _endpoints(piece)
        if abs(nx * first.x + ny * first.y - c) <= EPSILON:
            entries.append(first)
        if abs(nx * last.x + ny * last.y - c) <= EPSILON:
            exits.append(last)
    for p in list(exits):
        for q in entries:
            if distance(p, q) <= EPSILON:
                exits.remove(p)
                entries.remove(q)
                break

    along = lambda p: -ny * p.x + nx * p.y  # noqa: E731
    exits.sort(key=along)
    entries.sort(key=along)
    for p, q in zip(exits, entries):
        kept.append(_Segment(p, q))
    return kept


def _piece_area(piece) -> float:
    first, last = _endpoints(piece)
    chord = 0.5 * _cross(first.x, first.y, last.x, last.y)
    if isinstance(piece, _Segment):
        return chord
    correction = circular_segment_area(piece.radius, abs(piece.sweep))
    return chord + correction if piece.sweep >= 0.0 else chord - correction


def sector_polygon_intersection_area(sector: AnnularSector, cell: ConvexPolygon) -> float:
    """
    Exact area of footprint intersected with a convex cell.

    Returns annular_sector_area exactly when the footprint lies inside the
    cell, 0 when a cell half-plane excludes it, and otherwise the clipped
    boundary integral (chord shoelace terms plus circular-segment terms).
    """
    full_area = annular_sector_area(sector)
    if footprint_inside(sector, cell):
        return full_area
    if _footprint_outside(sector, cell):
        return 0.0

    pieces = _initial_pieces(sector)
    ax, ay = sector.apex
    for h in cell.halfplanes:
        c = h.offset - (h.normal.x * ax + h.normal.y * ay)
        pieces = _clip_pieces(pieces, h.normal.x, h.normal.y, c)
        if not pieces:
            return 0.0

    area = sum(_piece_area(p) for p in pieces)
    return min(max(area, 0.0), full_area, cell.area())
