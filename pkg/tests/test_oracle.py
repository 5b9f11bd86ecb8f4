"""
Unit tests for the oracle module.
Tests the Monte Carlo area estimator and the brute-force orientation check.
"""

import math
import sys
import unittest
from pathlib import Path

import numpy as np

# Add parent directory to path to import modules
sys.path.insert(0, str(Path(__file__).parent.parent))

from geometry import AnnularSector, ConvexPolygon, Point2, annular_sector_area, sector_polygon_intersection_area
from oracle import (
    AreaEstimate,
    brute_force_best_vertex,
    estimate_covered_area,
    footprint_sampling_box,
    monte_carlo_area,
)
from orientation import AlgoParams, ModelKind, Sensor, build_sensor_diagram, select_orientation
from validate import random_convex_polygon, random_sector
from voronoi import Roi


UNIT_BOX = Roi(Point2(-1, -1), Point2(1, 1))


def unit_disc(xy):
    return xy[:, 0] ** 2 + xy[:, 1] ** 2 <= 1.0


class TestMonteCarloArea(unittest.TestCase):
    """Test monte_carlo_area."""

    def test_unit_disc(self):
        estimate = monte_carlo_area(unit_disc, UNIT_BOX, 1_000_000, seed=0)
        self.assertEqual(estimate.samples, 1_000_000)
        self.assertLess(abs(estimate.mean - math.pi), 4 * estimate.std_error)

    def test_empty_and_full_regions(self):
        empty = monte_carlo_area(lambda xy: np.zeros(len(xy), dtype=bool), UNIT_BOX, 5000, seed=1)
        full = monte_carlo_area(lambda xy: np.ones(len(xy), dtype=bool), UNIT_BOX, 5000, seed=1)
        self.assertEqual(empty.mean, 0.0)
        self.assertEqual(full.mean, 4.0)
        self.assertEqual(empty.std_error, 0.0)
        self.assertEqual(full.std_error, 0.0)

    def test_same_seed_same_estimate(self):
        a = monte_carlo_area(unit_disc, UNIT_BOX, 20000, seed=5, chunk_size=3000)
        b = monte_carlo_area(unit_disc, UNIT_BOX, 20000, seed=5, chunk_size=3000)
        self.assertEqual(a, b)

    def test_doubling_samples_shrinks_error(self):
        small = monte_carlo_area(unit_disc, UNIT_BOX, 100_000, seed=2)
        large = monte_carlo_area(unit_disc, UNIT_BOX, 200_000, seed=2)
        self.assertAlmostEqual(small.std_error / large.std_error, math.sqrt(2), delta=0.1 * math.sqrt(2))

    def test_too_few_samples(self):
        with self.assertRaises(ValueError):
            monte_carlo_area(unit_disc, UNIT_BOX, 999, seed=0)

    def test_estimate_validation(self):
        with self.assertRaises(ValueError):
            AreaEstimate(1.0, -0.1, 10)


class TestCoveredAreaEstimate(unittest.TestCase):
    """Test the footprint sampler against the exact engine."""

    def test_sampling_box_miss(self):
        sector = AnnularSector.from_view(Point2(0, 0), 0.0, 1.0, 1.0, 0.0)
        cell = ConvexPolygon.from_vertices([(5, 5), (6, 5), (6, 6), (5, 6)])
        self.assertIsNone(footprint_sampling_box(sector, cell))
        self.assertEqual(estimate_covered_area(sector, cell, 1000, seed=0).mean, 0.0)

    def test_contained_sector(self):
        sector = AnnularSector.from_view(Point2(0, 0), 25.0, 80.0, math.pi / 3, 0.4)
        cell = ConvexPolygon.from_vertices([(-500, -500), (500, -500), (500, 500), (-500, 500)])
        estimate = estimate_covered_area(sector, cell, 400_000, seed=3)
        self.assertLess(abs(estimate.mean - annular_sector_area(sector)), 4.5 * estimate.std_error)

    def test_engine_agrees_on_random_fixtures(self):
        rng = np.random.default_rng(17)
        for k in range(20):
            sector, polygon = random_sector(rng), random_convex_polygon(rng)
            exact = sector_polygon_intersection_area(sector, polygon)
            estimate = estimate_covered_area(sector, polygon, 100_000, seed=k)
            band = max(5 * estimate.std_error, 0.02 * exact)
            self.assertLessEqual(abs(exact - estimate.mean), band, f"fixture {k}")


class TestBruteForceBestVertex(unittest.TestCase):
    """Test brute_force_best_vertex."""

    def setUp(self):
        self.roi = Roi.square(1000)

    def test_matches_planner_choice(self):
        rng = np.random.default_rng(4)
        sites = rng.uniform(1, 999, size=(12, 2))
        sensors = [Sensor(i, Point2(x, y), 25.0, 80.0, math.pi / 3) for i, (x, y) in enumerate(sites)]
        diagram = build_sensor_diagram(sensors, self.roi)
        params = AlgoParams(lambda_area=0.0)
        for sensor in sensors:
            cell = diagram.cell_for(sensor.id)
            chosen = select_orientation(sensor, cell, ModelKind.NOMINAL, params, 0.0)
            report = brute_force_best_vertex(sensor, cell, ModelKind.NOMINAL, 0.0)
            self.assertEqual(chosen.target_vertex, report.best_vertex.vertex)
            self.assertGreaterEqual(report.gap, 0.0)

    def test_omnidirectional_sensor_has_no_gap(self):
        sensor = Sensor(0, Point2(300, 600), 10.0, 80.0, 2 * math.pi)
        cell = build_sensor_diagram([sensor], self.roi).cell_for(0)
        report = brute_force_best_vertex(sensor, cell, ModelKind.NOMINAL, 0.0)
        self.assertAlmostEqual(report.gap, 0.0, places=6)

    def test_dense_scan_can_beat_vertices(self):
        """Near a wall every vertex direction is clipped; straight away from it is not."""
        sensor = Sensor(0, Point2(500, 30), 0.0, 80.0, math.pi / 3)
        others = [Sensor(1, Point2(500, 700), 0.0, 80.0, math.pi / 3)]
        diagram = build_sensor_diagram([sensor] + others, self.roi)
        report = brute_force_best_vertex(sensor, diagram.cell_for(0), ModelKind.NOMINAL, 0.0)
        self.assertGreaterEqual(report.best_dense_area, report.best_vertex.area)
        self.assertGreaterEqual(report.gap, 0.0)

    def test_resolution_floor(self):
        sensor = Sensor(0, Point2(500, 500), 0.0, 80.0, math.pi / 3)
        cell = build_sensor_diagram([sensor], self.roi).cell_for(0)
        with self.assertRaises(ValueError):
            brute_force_best_vertex(sensor, cell, ModelKind.NOMINAL, 0.0, angular_resolution=90)


if __name__ == "__main__":
    unittest.main()
