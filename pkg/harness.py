"""
Experiment harness: random deployments, baselines and seeded trial runs.

Every trial k draws its randomness from its own counter-based stream keyed
by (seed, k, purpose), so trials can run in any order or in parallel and
still produce the same records. Aggregates are summed over trials sorted by
index.
"""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from itertools import repeat
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from geometry import Point2, sector_polygon_intersection_area
from orientation import (
    AlgoParams,
    ModelKind,
    OrientationAssignment,
    OrientationSolution,
    Sensor,
    SensorState,
    build_sensor_diagram,
    cooperative_recalibration,
    evaluate_candidate,
    run_integrated_algorithm,
    solve_model,
)
from robust import network_rrf_reports, worst_case_location
from voronoi import MIN_SITE_SEPARATION, Roi, VoronoiDiagram


STRATEGIES = ("Random", "IDS", "Robustified")
CONDITIONS = ("nominal", "perturbed")
PERTURBATION_MODES = ("adversarial", "random")
SWEEP_PARAMETERS = ("m", "theta_h", "rho_max", "rho_min", "r_outer", "r_inner")

MAX_RESAMPLE_ATTEMPTS = 1000

# Stream purposes under (seed, trial).
_DEPLOYMENT = 0
_RANDOM_ORIENTATION = 1
_RANDOM_PERTURBATION = 2


@dataclass(frozen=True)
class ExperimentConfig:
    m: int = 150
    roi: Roi = Roi.square(1000.0)
    r_inner: float = 25.0
    r_outer: float = 80.0
    theta_h: float = math.pi / 3.0
    params: AlgoParams = AlgoParams()
    seed: int = 0
    trials: int = 100
    perturbation: Optional[float] = None
    perturbation_mode: str = "adversarial"
    margin: float = 1.0

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"m must be at least 1, got {self.m}")
        if self.trials < 1:
            raise ValueError(f"trials must be at least 1, got {self.trials}")
        if self.seed < 0:
            raise ValueError(f"seed must be non-negative, got {self.seed}")
        if self.perturbation is not None and not self.perturbation >= 0.0:
            raise ValueError(f"perturbation must be non-negative, got {self.perturbation}")
        if self.perturbation_mode not in PERTURBATION_MODES:
            raise ValueError(
                f"perturbation_mode must be one of {PERTURBATION_MODES}, got {self.perturbation_mode!r}"
            )
        if self.margin < 0.0 or 2.0 * self.margin >= min(self.roi.width, self.roi.height):
            raise ValueError(f"margin {self.margin} does not leave room inside the ROI")
        if not (0.0 <= self.r_inner < self.r_outer):
            raise ValueError(f"Radii must satisfy 0 <= r_inner < r_outer, got {self.r_inner}, {self.r_outer}")
        if not (0.0 < self.theta_h <= 2.0 * math.pi + 1e-9):
            raise ValueError(f"theta_h must lie in (0, 2*pi], got {self.theta_h}")


@dataclass(frozen=True)
class TrialRecord:
    """Totals of one trial per (strategy, condition), plus nominal per-cell areas per strategy."""

    trial: int
    totals: Dict[Tuple[str, str], float]
    cell_areas: Dict[str, Tuple[float, ...]]


@dataclass(frozen=True)
class ComparisonResult:
    config: ExperimentConfig
    records: Tuple[TrialRecord, ...]
    means: Dict[str, Dict[str, float]]
    cell_summary: Dict[str, Dict[str, float]]


@dataclass(frozen=True)
class SweepRow:
    parameter: str
    value: float
    mean_total: float
    trial_totals: Tuple[float, ...]


def _stream(seed: int, *keys: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, *keys])))


# ---------------------------------------------------------------------------
# Deployments and baselines
# ---------------------------------------------------------------------------

def random_deployment(
    m: int,
    roi: Roi,
    seed: int,
    margin: float = 1.0,
    r_inner: float = 25.0,
    r_outer: float = 80.0,
    theta_h: float = math.pi / 3.0,
    stream: Sequence[int] = (),
) -> List[Sensor]:
    """
    m identical sensors placed i.i.d. uniformly over the margin-inset ROI.

    A site that falls within MIN_SITE_SEPARATION of an earlier one (or on the
    ROI boundary) is redrawn, at most MAX_RESAMPLE_ATTEMPTS times.
    """
    if m < 1:
        raise ValueError(f"m must be at least 1, got {m}")
    if margin < 0.0:
        raise ValueError(f"margin must be non-negative, got {margin}")
    box = roi.inset(margin)
    rng = _stream(seed, *stream)
    lo = np.array(box.min_corner)
    hi = np.array(box.max_corner)
    xy = rng.uniform(lo, hi, size=(m, 2))

    for i in range(m):
        attempts = 0
        while not _acceptable(xy, i, roi):
            attempts += 1
            if attempts > MAX_RESAMPLE_ATTEMPTS:
                raise RuntimeError(f"Could not place site {i} after {MAX_RESAMPLE_ATTEMPTS} attempts")
            xy[i] = rng.uniform(lo, hi)

    return [
        Sensor(id=i, nominal=Point2(float(x), float(y)), r_inner=r_inner, r_outer=r_outer, theta_h=theta_h)
        for i, (x, y) in enumerate(xy)
    ]


def _acceptable(xy: np.ndarray, i: int, roi: Roi) -> bool:
    if not roi.strictly_contains(Point2(float(xy[i, 0]), float(xy[i, 1]))):
        return False
    if i == 0:
        return True
    gaps = np.hypot(xy[:i, 0] - xy[i, 0], xy[:i, 1] - xy[i, 1])
    return bool(gaps.min() > MIN_SITE_SEPARATION)


def ids_orientation(
    sensors: Sequence[Sensor],
    roi: Roi,
    params: AlgoParams,
    diagram: Optional[VoronoiDiagram] = None,
    verbose: bool = False,
) -> OrientationSolution:
    """Vertex greedy at nominal locations followed by cooperative recalibration."""
    if diagram is None:
        diagram = build_sensor_diagram(sensors, roi, verbose=verbose)
    reports = network_rrf_reports(diagram)
    solution = solve_model(sensors, diagram, reports, params, ModelKind.NOMINAL)
    return cooperative_recalibration(solution, diagram, params, verbose=verbose)


def random_orientation(
    sensors: Sequence[Sensor],
    roi: Roi,
    seed: int,
    diagram: Optional[VoronoiDiagram] = None,
    stream: Sequence[int] = (),
) -> OrientationSolution:
    """Every sensor pointed in an i.i.d. uniform direction; areas at nominal locations."""
    if diagram is None:
        diagram = build_sensor_diagram(sensors, roi)
    reports = network_rrf_reports(diagram)
    assignments = []
    for sensor in sensors:
        rng = _stream(seed, *stream, sensor.id)
        # uniform() draws from [0, 2*pi), so this lands in (-pi, pi].
        direction = math.pi - float(rng.uniform(0.0, 2.0 * math.pi))
        location, area = evaluate_candidate(sensor, diagram.cell_for(sensor.id), direction, ModelKind.NOMINAL, 0.0)
        assignments.append(
            OrientationAssignment(
                sensor=sensor.id,
                state=SensorState.RANDOM,
                direction=direction,
                target_vertex=None,
                effective_location=location,
                covered_area=area,
                candidate_ranking=(),
            )
        )
    assignments = tuple(assignments)
    return OrientationSolution(
        assignments=assignments,
        model=ModelKind.NOMINAL,
        total_area=math.fsum(a.covered_area for a in assignments),
        iterations=0,
        rrf_reports=tuple(reports),
        branch_taken=None,
        sensors=tuple(sensors),
    )


# ---------------------------------------------------------------------------
# Perturbed evaluation
# ---------------------------------------------------------------------------

def perturbed_cell_areas(
    sensors: Sequence[Sensor],
    solution: OrientationSolution,
    diagram: VoronoiDiagram,
    magnitude: Optional[float] = None,
    mode: str = "adversarial",
    seed: int = 0,
    stream: Sequence[int] = (),
) -> List[float]:
    """
    Covered area of every sensor after displacing it from its nominal site.

    Orientations and cells stay fixed. In "adversarial" mode the displacement
    runs along the sensing direction; in "random" mode along an i.i.d.
    uniform direction. A magnitude of None uses each sensor's own RRF.
    """
    if magnitude is not None and magnitude < 0.0:
        raise ValueError(f"magnitude must be non-negative, got {magnitude}")
    if mode not in PERTURBATION_MODES:
        raise ValueError(f"mode must be one of {PERTURBATION_MODES}, got {mode!r}")

    areas = []
    for sensor in sensors:
        assignment = solution.assignment_for(sensor.id)
        if assignment.direction is None:
            areas.append(0.0)
            continue
        if magnitude is None:
            report = solution.report_for(sensor.id)
            shift = report.rrf if report is not None else 0.0
        else:
            shift = magnitude
        if mode == "adversarial":
            towards = (math.cos(assignment.direction), math.sin(assignment.direction))
        else:
            angle = float(_stream(seed, *stream, sensor.id).uniform(0.0, 2.0 * math.pi))
            towards = (math.cos(angle), math.sin(angle))
        location = worst_case_location(sensor.nominal, towards, shift) if shift > 0.0 else sensor.nominal
        footprint = sensor.footprint(location, assignment.direction)
        areas.append(sector_polygon_intersection_area(footprint, diagram.cell_for(sensor.id).polygon))
    return areas


def perturbed_evaluation(
    sensors: Sequence[Sensor],
    solution: OrientationSolution,
    diagram: VoronoiDiagram,
    magnitude: Optional[float] = None,
    mode: str = "adversarial",
    seed: int = 0,
    stream: Sequence[int] = (),
) -> float:
    """Total of perturbed_cell_areas."""
    return math.fsum(perturbed_cell_areas(sensors, solution, diagram, magnitude, mode, seed, stream))


# ---------------------------------------------------------------------------
# Comparison runs and sweeps
# ---------------------------------------------------------------------------

def trial_sensors(config: ExperimentConfig, trial: int) -> List[Sensor]:
    return random_deployment(
        config.m,
        config.roi,
        config.seed,
        margin=config.margin,
        r_inner=config.r_inner,
        r_outer=config.r_outer,
        theta_h=config.theta_h,
        stream=(trial, _DEPLOYMENT),
    )


def run_trial(config: ExperimentConfig, trial: int) -> TrialRecord:
    """Deploy, solve with all three strategies and evaluate both conditions."""
    sensors = trial_sensors(config, trial)
    diagram = build_sensor_diagram(sensors, config.roi)
    solutions = {
        "Random": random_orientation(
            sensors, config.roi, config.seed, diagram=diagram, stream=(trial, _RANDOM_ORIENTATION)
        ),
        "IDS": ids_orientation(sensors, config.roi, config.params, diagram=diagram),
        "Robustified": run_integrated_algorithm(sensors, config.roi, config.params, diagram=diagram),
    }

    totals: Dict[Tuple[str, str], float] = {}
    cell_areas: Dict[str, Tuple[float, ...]] = {}
    for strategy in STRATEGIES:
        solution = solutions[strategy]
        nominal = perturbed_cell_areas(sensors, solution, diagram, magnitude=0.0)
        cell_areas[strategy] = tuple(nominal)
        totals[(strategy, "nominal")] = math.fsum(nominal)
        totals[(strategy, "perturbed")] = perturbed_evaluation(
            sensors,
            solution,
            diagram,
            magnitude=config.perturbation,
            mode=config.perturbation_mode,
            seed=config.seed,
            stream=(trial, _RANDOM_PERTURBATION),
        )
    return TrialRecord(trial=trial, totals=totals, cell_areas=cell_areas)


def _run_trials(
    worker: Callable[[ExperimentConfig, int], object],
    config: ExperimentConfig,
    threads: int,
) -> list:
    if threads <= 1 or config.trials == 1:
        return [worker(config, k) for k in range(config.trials)]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(worker, repeat(config), range(config.trials)))


def run_comparison(config: ExperimentConfig, threads: int = 1, verbose: bool = False) -> ComparisonResult:
    """
    Run config.trials seeded trials of the Random / IDS / Robustified comparison.

    Args:
        config: Experiment configuration
        threads: Worker processes; 1 runs in-process
        verbose: Enable verbose logging

    Returns:
        ComparisonResult with per-trial records sorted by trial index
    """
    if verbose:
        print(f"[HARNESS] Comparison: {config.trials} trial(s), m={config.m}, seed={config.seed}, threads={threads}")
    records = sorted(_run_trials(run_trial, config, threads), key=lambda r: r.trial)

    means = {
        strategy: {
            condition: math.fsum(r.totals[(strategy, condition)] for r in records) / len(records)
            for condition in CONDITIONS
        }
        for strategy in STRATEGIES
    }
    cell_summary = {}
    for strategy in STRATEGIES:
        cells = [area for r in records for area in r.cell_areas[strategy]]
        cell_summary[strategy] = {
            "mean": math.fsum(cells) / len(cells),
            "min": min(cells),
            "max": max(cells),
            "uncovered_fraction": sum(1 for area in cells if area == 0.0) / len(cells),
        }

    if verbose:
        for strategy in STRATEGIES:
            print(
                f"[HARNESS] {strategy:<12} nominal {means[strategy]['nominal']:.6g}  "
                f"perturbed {means[strategy]['perturbed']:.6g}"
            )
    return ComparisonResult(config=config, records=tuple(records), means=means, cell_summary=cell_summary)


def with_parameter(base: ExperimentConfig, parameter: str, value: float) -> ExperimentConfig:
    """Copy of `base` with one sweep parameter replaced (theta_h in radians)."""
    if parameter not in SWEEP_PARAMETERS:
        raise ValueError(f"Unknown sweep parameter {parameter!r}; expected one of {SWEEP_PARAMETERS}")
    if parameter == "m":
        if value != int(value):
            raise ValueError(f"m must be an integer, got {value}")
        return replace(base, m=int(value))
    if parameter in ("rho_max", "rho_min"):
        return replace(base, params=replace(base.params, **{parameter: float(value)}))
    return replace(base, **{parameter: float(value)})


def sweep_trial(config: ExperimentConfig, trial: int) -> Tuple[int, float]:
    sensors = trial_sensors(config, trial)
    solution = run_integrated_algorithm(sensors, config.roi, config.params)
    return trial, solution.total_area


def parametric_sweep(
    base: ExperimentConfig,
    parameter: str,
    values: Sequence[float],
    threads: int = 1,
    verbose: bool = False,
) -> List[SweepRow]:
    """
    Mean robustified total coverage for each value of one parameter.

    Every value reuses the same trial seeds, so differences between rows come
    from the parameter alone.
    """
    configs = [with_parameter(base, parameter, v) for v in values]
    rows = []
    for value, config in zip(values, configs):
        results = sorted(_run_trials(sweep_trial, config, threads))
        totals = tuple(total for _, total in results)
        row = SweepRow(parameter, float(value), math.fsum(totals) / len(totals), totals)
        rows.append(row)
        if verbose:
            print(f"[HARNESS] Sweep {parameter}={value:g}: mean total {row.mean_total:.6g}")
    return rows
