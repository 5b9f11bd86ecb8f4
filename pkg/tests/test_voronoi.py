"""
Unit tests for the voronoi module.
Tests ROI handling, clipped cells, edge labels and vertex sharing.
"""

import math
import sys
import unittest
from pathlib import Path

import numpy as np

# Add parent directory to path to import modules
sys.path.insert(0, str(Path(__file__).parent.parent))

from geometry import Point2
from voronoi import (
    WALL_LEFT,
    InfeasibleDeploymentError,
    Roi,
    bisector_halfplane,
    build_clipped_voronoi,
    cell_halfplanes,
    cell_vertices,
)


class TestRoi(unittest.TestCase):
    """Test the Roi rectangle."""

    def test_square(self):
        roi = Roi.square(1000)
        self.assertEqual(roi.width, 1000.0)
        self.assertEqual(roi.area(), 1e6)

    def test_inverted_corners_rejected(self):
        with self.assertRaises(ValueError):
            Roi(Point2(10, 0), Point2(0, 10))

    def test_strict_containment(self):
        roi = Roi.square(10)
        self.assertTrue(roi.strictly_contains(Point2(5, 5)))
        self.assertFalse(roi.strictly_contains(Point2(0, 5)))

    def test_inset(self):
        inner = Roi.square(10).inset(1.0)
        self.assertEqual(tuple(inner.min_corner), (1.0, 1.0))
        self.assertEqual(tuple(inner.max_corner), (9.0, 9.0))


class TestBisector(unittest.TestCase):
    """Test bisector_halfplane."""

    def test_midpoint_on_boundary(self):
        h = bisector_halfplane(Point2(0, 0), Point2(4, 0))
        self.assertAlmostEqual(h.signed_distance(Point2(2, 7)), 0.0)
        self.assertLess(h.signed_distance(Point2(0, 0)), 0.0)
        self.assertGreater(h.signed_distance(Point2(4, 0)), 0.0)


class TestBuildClippedVoronoi(unittest.TestCase):
    """Test build_clipped_voronoi."""

    def setUp(self):
        self.roi = Roi.square(1000)

    def test_single_site_owns_roi(self):
        diagram = build_clipped_voronoi([(500, 500)], self.roi)
        self.assertEqual(len(diagram.cells), 1)
        cell = diagram.cells[0]
        self.assertAlmostEqual(cell.polygon.area(), 1e6)
        self.assertEqual(cell.neighbor_ids(), [])
        self.assertEqual(len(cell_halfplanes(cell)), 4)

    def test_two_sites_split_along_bisector(self):
        diagram = build_clipped_voronoi([(250, 500), (750, 500)], self.roi)
        left = diagram.cell_for(0)
        right = diagram.cell_for(1)
        self.assertAlmostEqual(left.polygon.area(), 5e5)
        self.assertAlmostEqual(right.polygon.area(), 5e5)
        self.assertEqual(left.neighbor_ids(), [1])
        self.assertEqual(right.neighbor_ids(), [0])
        xs = sorted({round(v.x, 9) for v in cell_vertices(left)})
        self.assertEqual(xs, [0.0, 500.0])
        self.assertEqual(diagram.vertex_sharing_pairs(), [(0, 1)])

    def test_owner_ids_are_kept(self):
        diagram = build_clipped_voronoi([(250, 500), (750, 500)], self.roi, owners=[7, 3])
        self.assertEqual([c.owner for c in diagram.cells], [7, 3])
        self.assertEqual(diagram.cell_for(7).neighbor_ids(), [3])
        self.assertEqual(diagram.vertex_sharing_pairs(), [(3, 7)])

    def test_wall_labels(self):
        diagram = build_clipped_voronoi([(250, 500), (750, 500)], self.roi)
        labels = [src for src, _ in diagram.cell_for(0).neighbor_edges]
        self.assertIn(WALL_LEFT, labels)
        self.assertIn(1, labels)

    def test_cells_partition_roi(self):
        rng = np.random.default_rng(5)
        sites = rng.uniform(1, 999, size=(60, 2))
        diagram = build_clipped_voronoi(sites, self.roi)
        self.assertAlmostEqual(diagram.total_area(), self.roi.area(), delta=1e-6)

    def test_random_points_belong_to_nearest_site(self):
        rng = np.random.default_rng(11)
        sites = rng.uniform(1, 999, size=(40, 2))
        points = rng.uniform(0, 1000, size=(10_000, 2))
        nearest = np.argmin(
            np.hypot(points[:, None, 0] - sites[None, :, 0], points[:, None, 1] - sites[None, :, 1]), axis=1
        )
        diagram = build_clipped_voronoi(sites, self.roi)
        for cell in diagram.cells:
            mine = points[nearest == cell.owner]
            self.assertTrue(np.all(cell.polygon.contains_points(mine, tol=1e-7)))

    def test_cocircular_sites_tile_roi(self):
        sites = [(400, 500), (600, 500), (500, 400), (500, 600)]
        diagram = build_clipped_voronoi(sites, self.roi)
        self.assertAlmostEqual(diagram.total_area(), self.roi.area(), delta=1e-6)
        for cell in diagram.cells:
            self.assertAlmostEqual(cell.polygon.area(), 2.5e5, delta=1e-6)
            self.assertTrue(any(math.hypot(v.x - 500, v.y - 500) < 1e-6 for v in cell_vertices(cell)))

    def test_neighbors_share_flipped_bisector(self):
        rng = np.random.default_rng(12)
        diagram = build_clipped_voronoi(rng.uniform(1, 999, size=(30, 2)), self.roi)
        for cell in diagram.cells:
            for source, h in cell.neighbor_edges:
                if not isinstance(source, int):
                    continue
                twins = [g for s, g in diagram.cell_for(source).neighbor_edges if s == cell.owner]
                self.assertEqual(len(twins), 1)
                twin = twins[0]
                self.assertAlmostEqual(twin.normal.x, -h.normal.x, places=12)
                self.assertAlmostEqual(twin.normal.y, -h.normal.y, places=12)
                self.assertAlmostEqual(twin.offset, -h.offset, places=9)

    def test_sites_satisfy_their_constraints(self):
        rng = np.random.default_rng(6)
        sites = rng.uniform(1, 999, size=(40, 2))
        diagram = build_clipped_voronoi(sites, self.roi)
        for cell in diagram.cells:
            self.assertTrue(cell.polygon.contains(cell.site))
            for h in cell_halfplanes(cell):
                self.assertLess(h.signed_distance(cell.site), 0.0)
                for v in cell_vertices(cell):
                    self.assertLessEqual(h.signed_distance(v), 1e-6)

    def test_duplicate_sites_rejected(self):
        with self.assertRaises(InfeasibleDeploymentError):
            build_clipped_voronoi([(100, 100), (100, 100)], self.roi)

    def test_site_on_boundary_rejected(self):
        with self.assertRaises(InfeasibleDeploymentError):
            build_clipped_voronoi([(0, 500)], self.roi)

    def test_site_outside_rejected(self):
        with self.assertRaises(InfeasibleDeploymentError):
            build_clipped_voronoi([(500, 500), (1500, 500)], self.roi)

    def test_mismatched_owners_rejected(self):
        with self.assertRaises(ValueError):
            build_clipped_voronoi([(100, 100), (200, 200)], self.roi, owners=[1, 1])

    def test_missing_cell_lookup(self):
        diagram = build_clipped_voronoi([(500, 500)], self.roi)
        with self.assertRaises(KeyError):
            diagram.cell_for(42)


if __name__ == "__main__":
    unittest.main()
