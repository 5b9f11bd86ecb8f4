"""
Unit tests for the validate module.
Runs every suite on reduced fixture counts.
"""

import math
import sys
import unittest
from pathlib import Path

import numpy as np

# Add parent directory to path to import modules
sys.path.insert(0, str(Path(__file__).parent.parent))

from validate import (
    ValidationSettings,
    check_area_agreement,
    check_contained_closed_form,
    check_polygon_area_decomposition,
    check_rrf_bisection,
    check_vertex_argmax,
    random_convex_polygon,
    random_sector,
    run_validation,
)


def small_settings(**overrides):
    values = dict(
        area_fixtures=6,
        area_samples=100_000,
        case1_fixtures=10,
        rrf_deployments=3,
        argmax_deployments=2,
        seed=0,
        rel_tol=0.03,
        n_sigma=5.0,
    )
    values.update(overrides)
    return ValidationSettings(**values)


class TestValidationSettings(unittest.TestCase):
    """Test ValidationSettings."""

    def test_defaults(self):
        settings = ValidationSettings()
        self.assertEqual(settings.area_fixtures, 1000)
        self.assertEqual(settings.area_samples, 1_000_000)
        self.assertEqual(settings.rel_tol, 0.01)
        self.assertEqual(settings.n_sigma, 3.0)

    def test_with_tolerance_scales_both_bands(self):
        settings = ValidationSettings().with_tolerance(0.02)
        self.assertEqual(settings.rel_tol, 0.02)
        self.assertAlmostEqual(settings.n_sigma, 6.0)

    def test_negative_tolerance_rejected(self):
        with self.assertRaises(ValueError):
            ValidationSettings().with_tolerance(-0.1)


class TestFixtures(unittest.TestCase):
    """Test the random fixture generators."""

    def test_random_polygon_is_valid(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            poly = random_convex_polygon(rng)
            self.assertGreaterEqual(len(poly.vertices), 3)
            self.assertLessEqual(len(poly.vertices), 8)
            self.assertGreater(poly.area(), 0.0)

    def test_random_sector_is_valid(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            sector = random_sector(rng)
            self.assertLess(sector.r_inner, sector.r_outer)
            self.assertTrue(0.0 < sector.half_angle <= math.pi)


class TestSuites(unittest.TestCase):
    """Test each suite on small settings."""

    def test_area_agreement(self):
        result = check_area_agreement(small_settings())
        self.assertTrue(result.passed, result.detail)
        self.assertEqual(result.fixtures, 6)

    def test_contained_closed_form(self):
        self.assertTrue(check_contained_closed_form(small_settings()).passed)

    def test_literal_closed_form_fails(self):
        result = check_contained_closed_form(small_settings(literal_case1=True))
        self.assertFalse(result.passed)
        self.assertIn("literal", result.tolerance)

    def test_polygon_area_decomposition(self):
        result = check_polygon_area_decomposition(small_settings())
        self.assertTrue(result.passed)
        self.assertLessEqual(result.observed, 1e-9)

    def test_rrf_bisection(self):
        result = check_rrf_bisection(small_settings())
        self.assertTrue(result.passed)
        self.assertEqual(result.fixtures, 3)

    def test_vertex_argmax(self):
        result = check_vertex_argmax(small_settings())
        self.assertTrue(result.passed)
        self.assertEqual(result.observed, 0.0)

    def test_zero_tolerance_fails_sampling_checks(self):
        settings = small_settings().with_tolerance(0.0)
        self.assertFalse(check_area_agreement(settings).passed)


class TestRunValidation(unittest.TestCase):
    """Test run_validation."""

    def test_report(self):
        report = run_validation(small_settings())
        self.assertTrue(report.passed)
        data = report.to_dict()
        self.assertTrue(data["passed"])
        self.assertEqual(
            [c["name"] for c in data["checks"]],
            [
                "area_agreement",
                "contained_closed_form",
                "polygon_area_decomposition",
                "rrf_bisection",
                "vertex_argmax",
            ],
        )

    def test_literal_flag_fails_report(self):
        report = run_validation(small_settings(literal_case1=True, area_fixtures=2))
        self.assertFalse(report.passed)
        failed = [c.name for c in report.checks if not c.passed]
        self.assertEqual(failed, ["contained_closed_form"])


if __name__ == "__main__":
    unittest.main()
