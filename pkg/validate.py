"""
Validation suites that check the exact engines against brute force.

Each suite generates seeded fixtures, runs the engine and the matching
oracle, and returns one CheckResult naming the tolerance it applied and the
worst value it observed. run_validation bundles all suites into a report.
"""

import math
from dataclasses import dataclass, field, replace
from typing import List, Tuple

import numpy as np

from geometry import (
    AnnularSector,
    ConvexPolygon,
    Point2,
    annular_sector_area,
    fan_area_heron,
    radial_difference_area,
    sector_polygon_intersection_area,
)
from oracle import brute_force_best_vertex, estimate_covered_area
from orientation import AlgoParams, ModelKind, Sensor, build_sensor_diagram, select_orientation
from robust import bisect_rrf, cell_rrf
from voronoi import Roi, cell_halfplanes


# Reference tolerance that --tolerance rescales.
BASE_REL_TOL = 0.01
BASE_N_SIGMA = 3.0


@dataclass(frozen=True)
class ValidationSettings:
    area_fixtures: int = 1000
    area_samples: int = 1_000_000
    case1_fixtures: int = 50
    rrf_deployments: int = 200
    rrf_n_dirs: int = 36000
    rrf_tol: float = 1e-5
    argmax_deployments: int = 20
    seed: int = 0
    rel_tol: float = BASE_REL_TOL
    n_sigma: float = BASE_N_SIGMA
    literal_case1: bool = False

    def with_tolerance(self, tolerance: float) -> "ValidationSettings":
        """Scale both Monte Carlo bands by tolerance / BASE_REL_TOL; 0 admits no noise at all."""
        if tolerance < 0.0:
            raise ValueError(f"tolerance must be non-negative, got {tolerance}")
        scale = tolerance / BASE_REL_TOL
        return replace(self, rel_tol=tolerance, n_sigma=BASE_N_SIGMA * scale)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    tolerance: str
    observed: float
    fixtures: int
    detail: str = ""


@dataclass
class ValidationReport:
    checks: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "checks": [
                {
                    "name": c.name,
                    "passed": c.passed,
                    "tolerance": c.tolerance,
                    "observed": c.observed,
                    "fixtures": c.fixtures,
                    "detail": c.detail,
                }
                for c in self.checks
            ],
        }


def _rng(seed: int, suite: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, suite])))


# ---------------------------------------------------------------------------
# Fixtures
# ---------------------------------------------------------------------------

def random_convex_polygon(rng: np.random.Generator) -> ConvexPolygon:
    """3 to 8 vertices on a random circle, in increasing angle order."""
    while True:
        k = int(rng.integers(3, 9))
        angles = np.sort(rng.uniform(-math.pi, math.pi, k))
        gaps = np.diff(np.append(angles, angles[0] + 2.0 * math.pi))
        if gaps.min() < 1e-2 or gaps.max() > math.pi - 1e-2:
            continue
        cx, cy = rng.uniform(-50.0, 50.0, 2)
        radius = rng.uniform(20.0, 150.0)
        return ConvexPolygon.from_vertices(
            [(cx + radius * math.cos(a), cy + radius * math.sin(a)) for a in angles]
        )


def random_sector(rng: np.random.Generator) -> AnnularSector:
    ax, ay = rng.uniform(-80.0, 80.0, 2)
    r_inner = 0.0 if rng.random() < 0.25 else float(rng.uniform(1.0, 40.0))
    r_outer = r_inner + float(rng.uniform(10.0, 120.0))
    theta_h = 2.0 * math.pi if rng.random() < 0.15 else float(rng.uniform(0.1, 2.0 * math.pi))
    orientation = float(rng.uniform(-math.pi, math.pi))
    return AnnularSector.from_view(Point2(ax, ay), r_inner, r_outer, theta_h, orientation)


def _within_band(exact: float, estimate, settings: ValidationSettings) -> Tuple[bool, float]:
    """(pass, |diff| as a multiple of the allowed band)."""
    diff = abs(exact - estimate.mean)
    band = max(settings.n_sigma * estimate.std_error, settings.rel_tol * exact)
    if band == 0.0:
        return diff == 0.0 and settings.n_sigma > 0.0, (math.inf if diff > 0.0 else 0.0)
    return diff <= band, diff / band


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------

def check_area_agreement(settings: ValidationSettings, verbose: bool = False) -> CheckResult:
    """Exact clipped areas against Monte Carlo on random sector/polygon pairs."""
    rng = _rng(settings.seed, 1)
    worst = 0.0
    failures = 0
    for k in range(settings.area_fixtures):
        sector, polygon = random_sector(rng), random_convex_polygon(rng)
        exact = sector_polygon_intersection_area(sector, polygon)
        estimate = estimate_covered_area(sector, polygon, settings.area_samples, settings.seed * 1_000_003 + k)
        ok, ratio = _within_band(exact, estimate, settings)
        worst = max(worst, ratio)
        if not ok:
            failures += 1
            if verbose:
                print(f"[VALIDATE] area fixture {k}: exact {exact:.6g}, estimate {estimate.mean:.6g} +/- {estimate.std_error:.3g}")
    return CheckResult(
        name="area_agreement",
        passed=failures == 0,
        tolerance=f"max({settings.n_sigma:g} std errors, {settings.rel_tol:g} relative)",
        observed=worst,
        fixtures=settings.area_fixtures,
        detail=f"{failures} fixture(s) outside the band; observed is the worst |diff| / band",
    )


def check_contained_closed_form(settings: ValidationSettings, verbose: bool = False) -> CheckResult:
    """
    Footprints wholly inside a square cell: engine vs closed form vs Monte Carlo.

    With literal_case1 set, the literal (theta_h / 2)(R - r)^2 value is
    what gets compared against the sampler; it fails whenever r > 0.
    """
    rng = _rng(settings.seed, 2)
    worst = 0.0
    failures = 0
    cell = ConvexPolygon.from_vertices([(-500.0, -500.0), (500.0, -500.0), (500.0, 500.0), (-500.0, 500.0)])
    for k in range(settings.case1_fixtures):
        r_inner = float(rng.uniform(5.0, 40.0))
        sector = AnnularSector.from_view(
            Point2(*rng.uniform(-100.0, 100.0, 2)),
            r_inner,
            r_inner + float(rng.uniform(20.0, 100.0)),
            float(rng.uniform(0.2, 2.0 * math.pi)),
            float(rng.uniform(-math.pi, math.pi)),
        )
        closed = annular_sector_area(sector)
        engine = sector_polygon_intersection_area(sector, cell)
        if abs(engine - closed) > 1e-9 * max(1.0, closed):
            failures += 1
            if verbose:
                print(f"[VALIDATE] contained fixture {k}: engine {engine!r} != closed form {closed!r}")
            continue
        claimed = radial_difference_area(sector) if settings.literal_case1 else closed
        estimate = estimate_covered_area(sector, cell, settings.area_samples, settings.seed * 7_000_001 + k)
        ok, ratio = _within_band(claimed, estimate, settings)
        worst = max(worst, ratio)
        if not ok:
            failures += 1
    label = "literal (theta_h/2)(R-r)^2" if settings.literal_case1 else "(theta_h/2)(R^2-r^2)"
    return CheckResult(
        name="contained_closed_form",
        passed=failures == 0,
        tolerance=f"engine to 1e-9; {label} within max({settings.n_sigma:g} std errors, {settings.rel_tol:g} relative)",
        observed=worst,
        fixtures=settings.case1_fixtures,
        detail=f"{failures} fixture(s) failed",
    )


def check_polygon_area_decomposition(settings: ValidationSettings) -> CheckResult:
    """Shoelace cell areas against the Heron triangle fan around the site."""
    rng = _rng(settings.seed, 3)
    roi = Roi.square(1000.0)
    worst = 0.0
    cells = 0
    for _ in range(max(1, settings.argmax_deployments)):
        m = int(rng.integers(5, 51))
        sites = rng.uniform(1.0, 999.0, size=(m, 2))
        diagram = build_sensor_diagram(_sensors_at(sites), roi)
        for cell in diagram.cells:
            shoelace = cell.polygon.area()
            fan = fan_area_heron(cell.polygon.vertices, cell.site)
            worst = max(worst, abs(shoelace - fan) / shoelace)
            cells += 1
    return CheckResult(
        name="polygon_area_decomposition",
        passed=worst <= 1e-9,
        tolerance="1e-9 relative",
        observed=worst,
        fixtures=cells,
    )


def check_rrf_bisection(settings: ValidationSettings, verbose: bool = False) -> CheckResult:
    """Closed-form RRF against bisection over the sampled-circle oracle."""
    rng = _rng(settings.seed, 4)
    roi = Roi.square(1000.0)
    worst = 0.0
    checked = 0
    for _ in range(settings.rrf_deployments):
        m = int(rng.integers(5, 51))
        sites = rng.uniform(1.0, 999.0, size=(m, 2))
        diagram = build_sensor_diagram(_sensors_at(sites), roi)
        cell = diagram.cells[int(rng.integers(0, m))]
        exact = cell_rrf(cell).rrf
        bracketed = bisect_rrf(cell.site, cell_halfplanes(cell), n_dirs=settings.rrf_n_dirs, tol=1e-7)
        worst = max(worst, abs(exact - bracketed))
        checked += 1
    if verbose:
        print(f"[VALIDATE] RRF bisection: worst gap {worst:.3g} over {checked} cell(s)")
    return CheckResult(
        name="rrf_bisection",
        passed=worst <= settings.rrf_tol,
        tolerance=f"{settings.rrf_tol:g} absolute",
        observed=worst,
        fixtures=checked,
    )


def check_vertex_argmax(settings: ValidationSettings, verbose: bool = False) -> CheckResult:
    """select_orientation's choice against exhaustive vertex re-evaluation, under all three models."""
    rng = _rng(settings.seed, 5)
    roi = Roi.square(1000.0)
    params = AlgoParams(lambda_area=0.0)
    mismatches = 0
    checked = 0
    for _ in range(settings.argmax_deployments):
        m = int(rng.integers(5, 31))
        theta_h = float(rng.uniform(0.3, 2.0 * math.pi))
        sites = rng.uniform(1.0, 999.0, size=(m, 2))
        sensors = _sensors_at(sites, theta_h=theta_h)
        diagram = build_sensor_diagram(sensors, roi)
        for sensor in sensors:
            cell = diagram.cell_for(sensor.id)
            rho = cell_rrf(cell).rrf
            for model, shift in (
                (ModelKind.NOMINAL, 0.0),
                (ModelKind.ROBUST_COUNTERPART, rho),
                (ModelKind.ROBUSTIFIED, params.rho_min),
            ):
                chosen = select_orientation(sensor, cell, model, params, shift)
                oracle = brute_force_best_vertex(sensor, cell, model, shift).best_vertex
                checked += 1
                if oracle is None or chosen.target_vertex != oracle.vertex:
                    mismatches += 1
                    if verbose:
                        print(f"[VALIDATE] argmax mismatch for sensor {sensor.id} under {model.value}")
    return CheckResult(
        name="vertex_argmax",
        passed=mismatches == 0,
        tolerance="exact",
        observed=float(mismatches),
        fixtures=checked,
    )


def _sensors_at(sites: np.ndarray, theta_h: float = math.pi / 3.0) -> List[Sensor]:
    return [
        Sensor(id=i, nominal=Point2(float(x), float(y)), r_inner=25.0, r_outer=80.0, theta_h=theta_h)
        for i, (x, y) in enumerate(sites)
    ]


def run_validation(settings: ValidationSettings, verbose: bool = False) -> ValidationReport:
    report = ValidationReport()
    suites = (
        lambda: check_area_agreement(settings, verbose),
        lambda: check_contained_closed_form(settings, verbose),
        lambda: check_polygon_area_decomposition(settings),
        lambda: check_rrf_bisection(settings, verbose),
        lambda: check_vertex_argmax(settings, verbose),
    )
    for suite in suites:
        result = suite()
        report.checks.append(result)
        if verbose:
            status = "PASS" if result.passed else "FAIL"
            print(f"[VALIDATE] {status} {result.name}: observed {result.observed:.6g} ({result.tolerance})")
    return report
