"""
Unit tests for the robust module.
Tests worst-case shifts, RRF computation and the sampled RRF oracle.
"""

import math
import sys
import unittest
from pathlib import Path

import numpy as np

# Add parent directory to path to import modules
sys.path.insert(0, str(Path(__file__).parent.parent))

from geometry import HalfPlane, Point2, unit_halfplane
from robust import (
    RrfReport,
    UncertaintyBall,
    bisect_rrf,
    cell_rrf,
    min_network_rrf,
    network_rrf_reports,
    rrf_oracle,
    sensor_rrf,
    worst_case_location,
)
from voronoi import InfeasibleDeploymentError, Roi, build_clipped_voronoi, cell_halfplanes


class TestWorstCaseLocation(unittest.TestCase):
    """Test worst_case_location."""

    def test_shift_along_unnormalized_direction(self):
        p = worst_case_location(Point2(0, 0), (3, 4), 5.0)
        self.assertAlmostEqual(p.x, 3.0)
        self.assertAlmostEqual(p.y, 4.0)

    def test_zero_shift_is_nominal(self):
        self.assertEqual(worst_case_location(Point2(1, 2), (1, 0), 0.0), Point2(1, 2))

    def test_invalid_arguments(self):
        with self.assertRaises(ValueError):
            worst_case_location(Point2(0, 0), (0, 0), 1.0)
        with self.assertRaises(ValueError):
            worst_case_location(Point2(0, 0), (1, 0), -1.0)


class TestUncertaintyBall(unittest.TestCase):
    """Test UncertaintyBall."""

    def test_negative_radius_rejected(self):
        with self.assertRaises(ValueError):
            UncertaintyBall(Point2(0, 0), -1.0)

    def test_boundary_points_on_circle(self):
        pts = UncertaintyBall(Point2(1, 1), 2.0).boundary_points(16)
        self.assertEqual(pts.shape, (16, 2))
        np.testing.assert_allclose(np.hypot(pts[:, 0] - 1, pts[:, 1] - 1), 2.0)


class TestSensorRrf(unittest.TestCase):
    """Test sensor_rrf and cell_rrf."""

    def test_two_site_rrf(self):
        """Sites at x=250 and x=750 are 250 away from the bisector and the side walls."""
        diagram = build_clipped_voronoi([(250, 500), (750, 500)], Roi.square(1000))
        reports = network_rrf_reports(diagram)
        self.assertEqual([r.rrf for r in reports], [250.0, 250.0])
        self.assertIn(reports[0].binding_constraint, (1, "wall:left"))
        self.assertEqual(min_network_rrf(reports), 250.0)

    def test_binding_constraint_is_nearest_wall(self):
        diagram = build_clipped_voronoi([(100, 500)], Roi.square(1000))
        report = cell_rrf(diagram.cells[0])
        self.assertEqual(report.rrf, 100.0)
        self.assertEqual(report.binding_constraint, "wall:left")
        self.assertEqual(len(report.slacks), 4)

    def test_unnormalized_halfplanes_are_rescaled(self):
        report = sensor_rrf(Point2(0, 0), [HalfPlane(Point2(2.0, 0.0), 4.0)])
        self.assertEqual(report.rrf, 2.0)

    def test_infeasible_nominal_raises(self):
        with self.assertRaises(InfeasibleDeploymentError):
            sensor_rrf(Point2(1, 0), [unit_halfplane((1, 0), 0.0)])

    def test_no_halfplanes_raises(self):
        with self.assertRaises(ValueError):
            sensor_rrf(Point2(0, 0), [])

    def test_empty_network_raises(self):
        with self.assertRaises(ValueError):
            min_network_rrf([])

    def test_report_is_comparable(self):
        a = RrfReport(0, 1.0, "wall:left", (("wall:left", 1.0),))
        b = RrfReport(0, 1.0, "wall:left", (("wall:left", 1.0),))
        self.assertEqual(a, b)

    def test_scaling_the_scene_scales_rrf(self):
        rng = np.random.default_rng(13)
        sites = rng.uniform(1, 999, size=(25, 2))
        k = 2.5
        base = network_rrf_reports(build_clipped_voronoi(sites, Roi.square(1000)))
        scaled = network_rrf_reports(build_clipped_voronoi(sites * k, Roi.square(1000 * k)))
        for a, b in zip(base, scaled):
            self.assertAlmostEqual(b.rrf, k * a.rrf, delta=1e-6)

    def test_extra_constraint_never_increases_rrf(self):
        rng = np.random.default_rng(14)
        diagram = build_clipped_voronoi(rng.uniform(1, 999, size=(15, 2)), Roi.square(1000))
        for cell in diagram.cells:
            planes = cell_halfplanes(cell)
            rho = sensor_rrf(cell.site, planes).rrf
            for _ in range(10):
                angle = rng.uniform(-math.pi, math.pi)
                normal = (math.cos(angle), math.sin(angle))
                offset = normal[0] * cell.site.x + normal[1] * cell.site.y + rng.uniform(0.0, 300.0)
                extra = unit_halfplane(normal, offset)
                self.assertLessEqual(sensor_rrf(cell.site, planes + [extra]).rrf, rho)

    def test_displacements_inside_ball_stay_feasible(self):
        rng = np.random.default_rng(15)
        diagram = build_clipped_voronoi(rng.uniform(1, 999, size=(15, 2)), Roi.square(1000))
        for cell in diagram.cells:
            planes = cell_halfplanes(cell)
            report = cell_rrf(cell)
            radii = report.rrf * np.sqrt(rng.uniform(0.0, 1.0, 500))
            angles = rng.uniform(-math.pi, math.pi, 500)
            for r, a in zip(radii, angles):
                p = Point2(cell.site.x + r * math.cos(a), cell.site.y + r * math.sin(a))
                self.assertTrue(all(h.signed_distance(p) <= 1e-9 for h in planes))
            binding = next(h for src, h in cell.neighbor_edges if src == report.binding_constraint)
            beyond = worst_case_location(cell.site, binding.normal, 1.001 * report.rrf)
            self.assertGreater(binding.signed_distance(beyond), 0.0)


class TestRrfOracle(unittest.TestCase):
    """Test the sampled RRF oracle and its bisection."""

    def test_oracle_threshold(self):
        planes = [unit_halfplane((1, 0), 1.0)]
        self.assertTrue(rrf_oracle(Point2(0, 0), planes, 0.99, 360))
        self.assertFalse(rrf_oracle(Point2(0, 0), planes, 1.01, 360))

    def test_oracle_needs_enough_directions(self):
        with self.assertRaises(ValueError):
            rrf_oracle(Point2(0, 0), [unit_halfplane((1, 0), 1.0)], 0.5, 4)

    def test_bisection_matches_closed_form(self):
        rng = np.random.default_rng(9)
        sites = rng.uniform(1, 999, size=(20, 2))
        diagram = build_clipped_voronoi(sites, Roi.square(1000))
        for cell in diagram.cells[:5]:
            exact = cell_rrf(cell).rrf
            sampled = bisect_rrf(cell.site, cell_halfplanes(cell), n_dirs=36000, tol=1e-7)
            self.assertAlmostEqual(sampled, exact, delta=1e-5)

    def test_bisection_rejects_infeasible_nominal(self):
        with self.assertRaises(InfeasibleDeploymentError):
            bisect_rrf(Point2(2, 0), [unit_halfplane((1, 0), 1.0)])

    def test_unbounded_region_has_infinite_rrf(self):
        self.assertEqual(bisect_rrf(Point2(0, 0), [unit_halfplane((1, 0), math.inf)], n_dirs=8), math.inf)


if __name__ == "__main__":
    unittest.main()
