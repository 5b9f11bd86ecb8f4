"""
Orientation planning for directional sensors inside their Voronoi cells.

Each sensor considers the directions toward its cell vertices, evaluates the
covered area of its footprint at a (possibly shifted) location, and picks
the best one. Three models differ only in that shift:

    nominal             shift 0
    robust counterpart  shift = the sensor's own RRF (capped by alpha / rho_max)
    robustified         shift = rho_min, used when the RRF is not above rho_min

A cooperative pass then moves overlapping sensors to their next-best vertex.
"""

import functools
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Dict, List, NamedTuple, Optional, Sequence, Set, Tuple

import numpy as np

from geometry import (
    EPSILON,
    AnnularSector,
    Point2,
    distance,
    normalize_angle,
    sector_polygon_intersection_area,
)
from robust import (
    RrfReport,
    min_network_rrf,
    network_rrf_reports,
    worst_case_location,
)
from voronoi import Roi, VoronoiCell, VoronoiDiagram, build_clipped_voronoi, cell_vertices


class ModelKind(str, Enum):
    NOMINAL = "nominal"
    ROBUST_COUNTERPART = "robust_counterpart"
    ROBUSTIFIED = "robustified"


class SensorState(str, Enum):
    ORIENTED = "oriented"
    SLEEP = "sleep"
    RANDOM = "random"


BRANCH_RC = "RC"
BRANCH_ROBUSTIFIED = "Robustified"

RC_SHIFT_POLICIES = ("rho", "alpha", "rho_min")
FALLBACK_POLICIES = ("sleep", "random")
OVERLAP_RULES = ("shared_vertex", "literal")


@dataclass(frozen=True)
class Sensor:
    id: int
    nominal: Point2
    r_inner: float
    r_outer: float
    theta_h: float

    def __post_init__(self):
        object.__setattr__(self, "nominal", Point2(float(self.nominal[0]), float(self.nominal[1])))
        if not (0.0 <= self.r_inner < self.r_outer):
            raise ValueError(
                f"Sensor {self.id}: radii must satisfy 0 <= r_inner < r_outer "
                f"(got {self.r_inner}, {self.r_outer})"
            )
        if not (0.0 < self.theta_h <= 2.0 * math.pi + EPSILON):
            raise ValueError(f"Sensor {self.id}: theta_h must lie in (0, 2*pi], got {self.theta_h}")

    def footprint(self, apex: Point2, direction: float) -> AnnularSector:
        return AnnularSector.from_view(apex, self.r_inner, self.r_outer, self.theta_h, direction)


@dataclass(frozen=True)
class AlgoParams:
    """Thresholds of the integrated algorithm; all lengths/areas in ground units."""

    epsilon: float = 1.0
    delta: float = 1.0
    lambda_area: float = 1.0
    rho_min: float = 10.0
    max_iterations: int = 100
    alpha: float = math.inf
    rho_max: float = math.inf
    rc_shift: str = "rho"
    fallback: str = "sleep"
    fallback_seed: int = 0
    overlap_rule: str = "shared_vertex"

    def __post_init__(self):
        for name in ("epsilon", "delta", "lambda_area", "rho_min", "alpha", "rho_max"):
            value = getattr(self, name)
            if math.isnan(value) or value < 0.0:
                raise ValueError(f"{name} must be non-negative, got {value}")
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be at least 1, got {self.max_iterations}")
        if self.rc_shift not in RC_SHIFT_POLICIES:
            raise ValueError(f"rc_shift must be one of {RC_SHIFT_POLICIES}, got {self.rc_shift!r}")
        if self.rc_shift == "alpha" and not math.isfinite(self.alpha):
            raise ValueError("rc_shift 'alpha' needs a finite alpha")
        if self.fallback not in FALLBACK_POLICIES:
            raise ValueError(f"fallback must be one of {FALLBACK_POLICIES}, got {self.fallback!r}")
        if self.overlap_rule not in OVERLAP_RULES:
            raise ValueError(f"overlap_rule must be one of {OVERLAP_RULES}, got {self.overlap_rule!r}")

    def robust_counterpart_shift(self, rho: float) -> float:
        if self.rc_shift == "rho_min":
            base = self.rho_min
        elif self.rc_shift == "alpha":
            base = self.alpha
        else:
            base = min(rho, self.alpha)
        return min(base, self.rho_max)


class Candidate(NamedTuple):
    index: int
    vertex: Point2
    direction: float
    area: float
    effective_location: Point2


@dataclass(frozen=True)
class OrientationAssignment:
    sensor: int
    state: SensorState
    direction: Optional[float]
    target_vertex: Optional[Point2]
    effective_location: Optional[Point2]
    covered_area: float
    candidate_ranking: Tuple[Candidate, ...]
    rank_index: Optional[int] = None
    shift: float = 0.0
    model: ModelKind = ModelKind.NOMINAL
    branch: Optional[str] = None
    rrf_violation: bool = False


@dataclass(frozen=True)
class OrientationSolution:
    assignments: Tuple[OrientationAssignment, ...]
    model: ModelKind
    total_area: float
    iterations: int
    rrf_reports: Tuple[RrfReport, ...]
    branch_taken: Optional[str]
    sensors: Tuple[Sensor, ...] = field(default=(), compare=False)

    def assignment_for(self, sensor_id: int) -> OrientationAssignment:
        for a in self.assignments:
            if a.sensor == sensor_id:
                return a
        raise KeyError(f"No assignment for sensor {sensor_id}")

    def report_for(self, sensor_id: int) -> Optional[RrfReport]:
        for r in self.rrf_reports:
            if r.sensor == sensor_id:
                return r
        return None


def _total(assignments: Sequence[OrientationAssignment]) -> float:
    return math.fsum(a.covered_area for a in assignments)


# ---------------------------------------------------------------------------
# Candidates and per-sensor selection
# ---------------------------------------------------------------------------

def candidate_directions(sensor: Sensor, cell: VoronoiCell) -> List[Tuple[Point2, float]]:
    """One (vertex, direction) per cell vertex, skipping vertices at the nominal location."""
    candidates = []
    for v in cell_vertices(cell):
        dx, dy = v.x - sensor.nominal.x, v.y - sensor.nominal.y
        if math.hypot(dx, dy) < EPSILON:
            continue
        candidates.append((v, normalize_angle(math.atan2(dy, dx))))
    return candidates


def evaluate_candidate(
    sensor: Sensor,
    cell: VoronoiCell,
    direction: float,
    model: ModelKind,
    shift: float,
) -> Tuple[Point2, float]:
    """
    Covered area of the footprint pointed along `direction`, apex shifted by `shift`.

    The area is clipped to the owner's cell (already clipped to the ROI), so
    the cell, sensing-region and boundary constraints hold by construction.
    """
    if model == ModelKind.NOMINAL and shift != 0.0:
        raise ValueError("The nominal model evaluates at shift 0")
    if shift > 0.0:
        location = worst_case_location(sensor.nominal, (math.cos(direction), math.sin(direction)), shift)
    else:
        location = sensor.nominal
    area = sector_polygon_intersection_area(sensor.footprint(location, direction), cell.polygon)
    return location, area


def _compare_candidates(a: Candidate, b: Candidate) -> int:
    if not math.isclose(a.area, b.area, rel_tol=1e-9, abs_tol=1e-9):
        return -1 if a.area > b.area else 1
    if a.direction != b.direction:
        return -1 if a.direction < b.direction else 1
    return a.index - b.index


def rank_candidates(
    sensor: Sensor, cell: VoronoiCell, model: ModelKind, shift: float
) -> List[Candidate]:
    """All vertex candidates, best first (area, then smaller angle, then vertex index)."""
    ranked = []
    for index, (vertex, direction) in enumerate(candidate_directions(sensor, cell)):
        location, area = evaluate_candidate(sensor, cell, direction, model, shift)
        ranked.append(Candidate(index, vertex, direction, area, location))
    ranked.sort(key=functools.cmp_to_key(_compare_candidates))
    return ranked


def _sensor_stream(seed: int, sensor_id: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, sensor_id])))


def _oriented(base: OrientationAssignment, candidate: Candidate, rank_index: int) -> OrientationAssignment:
    return replace(
        base,
        state=SensorState.ORIENTED,
        direction=candidate.direction,
        target_vertex=candidate.vertex,
        effective_location=candidate.effective_location,
        covered_area=candidate.area,
        rank_index=rank_index,
    )


def _asleep(base: OrientationAssignment) -> OrientationAssignment:
    return replace(
        base,
        state=SensorState.SLEEP,
        direction=None,
        target_vertex=None,
        effective_location=None,
        covered_area=0.0,
        rank_index=None,
    )


def select_orientation(
    sensor: Sensor,
    cell: VoronoiCell,
    model: ModelKind,
    params: AlgoParams,
    shift: float,
    branch: Optional[str] = None,
    rrf: Optional[float] = None,
) -> OrientationAssignment:
    """
    Point the sensor at its best contributory vertex.

    Candidates covering less than params.lambda_area are discarded. With no
    candidate left the sensor sleeps, or takes a seeded random direction
    when params.fallback is "random". A robustified sensor whose RRF is below
    rho_min and has no candidate left sleeps and is flagged.
    """
    contributory = tuple(c for c in rank_candidates(sensor, cell, model, shift) if c.area >= params.lambda_area)
    base = OrientationAssignment(
        sensor=sensor.id,
        state=SensorState.SLEEP,
        direction=None,
        target_vertex=None,
        effective_location=None,
        covered_area=0.0,
        candidate_ranking=contributory,
        shift=shift,
        model=model,
        branch=branch,
    )
    if contributory:
        return _oriented(base, contributory[0], 0)

    if model == ModelKind.ROBUSTIFIED:
        violated = rrf is not None and rrf < params.rho_min
        return replace(base, rrf_violation=violated)
    if params.fallback == "random":
        rng = _sensor_stream(params.fallback_seed, sensor.id)
        direction = normalize_angle(float(rng.uniform(-math.pi, math.pi)))
        location, area = evaluate_candidate(sensor, cell, direction, model, shift)
        return replace(
            base,
            state=SensorState.RANDOM,
            direction=direction,
            effective_location=location,
            covered_area=area,
        )
    return base


# ---------------------------------------------------------------------------
# Cooperative recalibration
# ---------------------------------------------------------------------------

def pairwise_overlap_trigger(
    sensor_a: Sensor,
    rrf_a: RrfReport,
    sensor_b: Sensor,
    rrf_b: RrfReport,
    epsilon: float,
) -> bool:
    """rho_a + rho_b + R_a + R_b - d_ab > epsilon."""
    d_ab = distance(sensor_a.nominal, sensor_b.nominal)
    return rrf_a.rrf + rrf_b.rrf + sensor_a.r_outer + sensor_b.r_outer - d_ab > epsilon


def _same_target(a: OrientationAssignment, b: OrientationAssignment) -> bool:
    if a.target_vertex is None or b.target_vertex is None:
        return False
    return distance(a.target_vertex, b.target_vertex) <= EPSILON


def _smaller(a: OrientationAssignment, b: OrientationAssignment) -> OrientationAssignment:
    """The assignment that yields; equal areas make the larger sensor id yield."""
    if math.isclose(a.covered_area, b.covered_area, rel_tol=1e-12, abs_tol=1e-12):
        return a if a.sensor > b.sensor else b
    return a if a.covered_area < b.covered_area else b


def _next_best(assignment: OrientationAssignment, used: Set[int]) -> OrientationAssignment:
    for k, candidate in enumerate(assignment.candidate_ranking):
        if k not in used:
            used.add(k)
            return _oriented(assignment, candidate, k)
    return _asleep(assignment)


def cooperative_recalibration(
    solution: OrientationSolution,
    diagram: VoronoiDiagram,
    params: AlgoParams,
    verbose: bool = False,
) -> OrientationSolution:
    """
    Resolve overlaps between vertex-sharing neighbours.

    Each sweep visits the pairs in ascending id order; for a pair whose
    overlap trigger fires (and, under the "shared_vertex" rule, whose
    sensors aim at the same vertex) the sensor with less coverage moves to
    its next unused candidate, or sleeps when none is left. Sweeps stop when
    the total changes by less than delta, nothing moved, or max_iterations
    is reached.
    """
    sensors = {s.id: s for s in solution.sensors}
    reports = {r.sensor: r for r in solution.rrf_reports}
    current: Dict[int, OrientationAssignment] = {a.sensor: a for a in solution.assignments}
    used: Dict[int, Set[int]] = {
        a.sensor: ({a.rank_index} if a.rank_index is not None else set()) for a in solution.assignments
    }
    pairs = diagram.vertex_sharing_pairs()

    previous_total = solution.total_area
    iterations = 0
    moves = 0
    while iterations < params.max_iterations:
        iterations += 1
        moved = False
        for i, j in pairs:
            a, b = current[i], current[j]
            if not pairwise_overlap_trigger(sensors[i], reports[i], sensors[j], reports[j], params.epsilon):
                continue
            if params.overlap_rule == "shared_vertex" and not _same_target(a, b):
                continue
            loser = _smaller(a, b)
            if loser.state != SensorState.ORIENTED:
                continue
            current[loser.sensor] = _next_best(loser, used[loser.sensor])
            moved = True
            moves += 1
        total = _total(list(current.values()))
        if not moved or abs(total - previous_total) < params.delta:
            break
        previous_total = total

    ordered = tuple(current[a.sensor] for a in solution.assignments)
    if verbose:
        print(f"[ORIENT] Recalibration: {iterations} sweep(s), {moves} reorientation(s)")
    return replace(solution, assignments=ordered, total_area=_total(ordered), iterations=iterations)


# ---------------------------------------------------------------------------
# Model solves and the integrated algorithm
# ---------------------------------------------------------------------------

def _solve_sensor(
    sensor: Sensor, cell: VoronoiCell, rho: float, model: ModelKind, params: AlgoParams
) -> OrientationAssignment:
    if model == ModelKind.NOMINAL:
        shift, branch = 0.0, None
    elif model == ModelKind.ROBUST_COUNTERPART:
        shift, branch = params.robust_counterpart_shift(rho), BRANCH_RC
    else:
        shift, branch = params.rho_min, BRANCH_ROBUSTIFIED
    return select_orientation(sensor, cell, model, params, shift, branch, rho)


def solve_model(
    sensors: Sequence[Sensor],
    diagram: VoronoiDiagram,
    reports: Sequence[RrfReport],
    params: AlgoParams,
    model: ModelKind,
) -> OrientationSolution:
    """Select every sensor's orientation under one model (no recalibration)."""
    by_sensor = {r.sensor: r for r in reports}
    assignments = tuple(
        _solve_sensor(sensor, diagram.cell_for(sensor.id), by_sensor[sensor.id].rrf, model, params)
        for sensor in sensors
    )
    return OrientationSolution(
        assignments=assignments,
        model=model,
        total_area=_total(assignments),
        iterations=0,
        rrf_reports=tuple(reports),
        branch_taken=None if model == ModelKind.NOMINAL else (
            BRANCH_RC if model == ModelKind.ROBUST_COUNTERPART else BRANCH_ROBUSTIFIED
        ),
        sensors=tuple(sensors),
    )


def build_sensor_diagram(sensors: Sequence[Sensor], roi: Roi, verbose: bool = False) -> VoronoiDiagram:
    return build_clipped_voronoi(
        [s.nominal for s in sensors], roi, owners=[s.id for s in sensors], verbose=verbose
    )


def run_integrated_algorithm(
    sensors: Sequence[Sensor],
    roi: Roi,
    params: AlgoParams,
    diagram: Optional[VoronoiDiagram] = None,
    verbose: bool = False,
) -> OrientationSolution:
    """
    Full pipeline: diagram, RRFs, per-sensor model choice, recalibration.

    A sensor whose RRF exceeds rho_min is solved under the robust
    counterpart; otherwise under the robustified model. The solution is
    labelled "RC" only when every sensor took the robust-counterpart branch.
    """
    if diagram is None:
        diagram = build_sensor_diagram(sensors, roi, verbose=verbose)
    reports = network_rrf_reports(diagram, verbose=verbose)
    rho_star = min_network_rrf(reports)
    by_sensor = {r.sensor: r for r in reports}

    assignments = []
    for sensor in sensors:
        rho = by_sensor[sensor.id].rrf
        # Flowchart branch: is the RRF above rho_min?
        model = ModelKind.ROBUST_COUNTERPART if rho > params.rho_min else ModelKind.ROBUSTIFIED
        assignments.append(_solve_sensor(sensor, diagram.cell_for(sensor.id), rho, model, params))

    all_rc = all(a.branch == BRANCH_RC for a in assignments)
    assignments = tuple(assignments)
    solution = OrientationSolution(
        assignments=assignments,
        model=ModelKind.ROBUST_COUNTERPART if all_rc else ModelKind.ROBUSTIFIED,
        total_area=_total(assignments),
        iterations=0,
        rrf_reports=tuple(reports),
        branch_taken=BRANCH_RC if all_rc else BRANCH_ROBUSTIFIED,
        sensors=tuple(sensors),
    )
    if verbose:
        robustified = sum(1 for a in assignments if a.branch == BRANCH_ROBUSTIFIED)
        print(
            f"[ORIENT] rho* = {rho_star:.6g}; {len(assignments) - robustified} sensor(s) on the "
            f"robust-counterpart branch, {robustified} robustified; initial total {solution.total_area:.6g}"
        )
    return cooperative_recalibration(solution, diagram, params, verbose=verbose)
