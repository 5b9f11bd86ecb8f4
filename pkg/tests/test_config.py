"""
Unit tests for the config module.
Tests document parsing, error locations and the RC_THREADS override.
"""

import json
import math
import os
import shutil
import sys
import tempfile
import unittest
from pathlib import Path
from unittest.mock import patch

# Add parent directory to path to import modules
sys.path.insert(0, str(Path(__file__).parent.parent))

from config import THREADS_ENV_VAR, ConfigError, default_threads, load_config, parse_config
from orientation import FALLBACK_POLICIES, OVERLAP_RULES, RC_SHIFT_POLICIES, AlgoParams


DATA_DIR = Path(__file__).parent / "e2e_test_data"
SCHEMA_PATH = Path(__file__).parent.parent / "docs" / "config_schema.json"

ROI = {"min": [0, 0], "max": [1000, 1000]}
SENSOR = {"id": 0, "x": 500, "y": 500, "r_inner": 25, "r_outer": 80, "theta_h": 60}


class TestParseConfig(unittest.TestCase):
    """Test parse_config."""

    def test_explicit_sensors(self):
        run = parse_config({"roi": ROI, "sensors": [SENSOR]})
        self.assertFalse(run.has_deployment)
        self.assertEqual(len(run.sensors), 1)
        self.assertAlmostEqual(run.sensors[0].theta_h, math.pi / 3)
        self.assertEqual(run.roi.area(), 1e6)

    def test_deployment_defaults(self):
        run = parse_config({"roi": ROI, "deployment": {"m": 12}})
        self.assertTrue(run.has_deployment)
        self.assertEqual(run.experiment.m, 12)
        self.assertEqual(run.experiment.r_outer, 80.0)
        self.assertEqual(run.experiment.trials, 100)

    def test_missing_roi_names_field(self):
        with self.assertRaises(ConfigError) as ctx:
            parse_config({"deployment": {"m": 10}})
        self.assertEqual(ctx.exception.field, "roi")
        self.assertIn("roi", str(ctx.exception))

    def test_sensors_and_deployment_exclusive(self):
        with self.assertRaises(ConfigError):
            parse_config({"roi": ROI, "sensors": [SENSOR], "deployment": {"m": 3}})

    def test_one_of_sensors_or_deployment_required(self):
        with self.assertRaises(ConfigError):
            parse_config({"roi": ROI})

    def test_unknown_keys_rejected(self):
        with self.assertRaises(ConfigError) as ctx:
            parse_config({"roi": ROI, "sensors": [SENSOR], "params": {"gamma": 1}})
        self.assertEqual(ctx.exception.field, "params.gamma")
        with self.assertRaises(ConfigError):
            parse_config({"roi": ROI, "sensors": [SENSOR], "extra": True})

    def test_params_mapping(self):
        run = parse_config({
            "roi": ROI,
            "sensors": [SENSOR],
            "params": {"lambda": 2.5, "rho_max": None, "alpha": 40, "overlap_rule": "literal"},
        })
        self.assertEqual(run.params.lambda_area, 2.5)
        self.assertEqual(run.params.rho_max, math.inf)
        self.assertEqual(run.params.alpha, 40.0)
        self.assertEqual(run.params.overlap_rule, "literal")

    def test_invalid_param_value(self):
        with self.assertRaises(ConfigError) as ctx:
            parse_config({"roi": ROI, "sensors": [SENSOR], "params": {"epsilon": "one"}})
        self.assertEqual(ctx.exception.field, "params.epsilon")
        with self.assertRaises(ConfigError):
            parse_config({"roi": ROI, "sensors": [SENSOR], "params": {"rc_shift": "nope"}})

    def test_sensor_field_errors(self):
        broken = dict(SENSOR)
        del broken["r_outer"]
        with self.assertRaises(ConfigError) as ctx:
            parse_config({"roi": ROI, "sensors": [broken]})
        self.assertEqual(ctx.exception.field, "sensors[0].r_outer")

    def test_duplicate_sensor_ids(self):
        with self.assertRaises(ConfigError):
            parse_config({"roi": ROI, "sensors": [SENSOR, dict(SENSOR, x=100)]})

    def test_inverted_roi(self):
        with self.assertRaises(ConfigError) as ctx:
            parse_config({"roi": {"min": [10, 10], "max": [0, 0]}, "sensors": [SENSOR]})
        self.assertEqual(ctx.exception.field, "roi")

    def test_experiment_and_validation(self):
        run = parse_config({
            "roi": ROI,
            "deployment": {"m": 5, "theta_h": 90},
            "experiment": {"seed": 4, "trials": 3, "perturbation": 12.5, "perturbation_mode": "random"},
            "validation": {"area_fixtures": 7, "rel_tol": 0.05, "literal_case1": True},
        })
        self.assertAlmostEqual(run.experiment.theta_h, math.pi / 2)
        self.assertEqual(run.experiment.seed, 4)
        self.assertEqual(run.experiment.perturbation, 12.5)
        self.assertEqual(run.experiment.perturbation_mode, "random")
        self.assertEqual(run.validation.area_fixtures, 7)
        self.assertEqual(run.validation.rel_tol, 0.05)
        self.assertTrue(run.validation.literal_case1)
        self.assertEqual(run.validation.seed, 4)

    def test_bad_perturbation_mode(self):
        with self.assertRaises(ConfigError) as ctx:
            parse_config({"roi": ROI, "deployment": {}, "experiment": {"perturbation_mode": "sideways"}})
        self.assertEqual(ctx.exception.field, "experiment.perturbation_mode")

    def test_non_object_document(self):
        with self.assertRaises(ConfigError):
            parse_config([1, 2, 3])


class TestLoadConfig(unittest.TestCase):
    """Test load_config on files."""

    def setUp(self):
        """Set up a temporary directory for config files."""
        self.test_dir = tempfile.mkdtemp()

    def tearDown(self):
        """Clean up the temporary directory."""
        shutil.rmtree(self.test_dir)

    def _write(self, name, text):
        path = Path(self.test_dir) / name
        path.write_text(text, encoding="utf-8")
        return str(path)

    def test_fixture_files(self):
        run = load_config(str(DATA_DIR / "two_site.json"))
        self.assertEqual([s.id for s in run.sensors], [0, 1])
        run = load_config(str(DATA_DIR / "small_experiment.json"))
        self.assertEqual(run.experiment.m, 20)
        self.assertEqual(run.validation.case1_fixtures, 10)

    def test_syntax_error_reports_line(self):
        path = self._write("bad.json", '{\n  "roi": ,\n  "sensors": []\n}\n')
        with self.assertRaises(ConfigError) as ctx:
            load_config(path)
        self.assertEqual(ctx.exception.line, 2)
        self.assertIn("line 2", str(ctx.exception))

    def test_missing_file(self):
        with self.assertRaises(ConfigError):
            load_config(str(Path(self.test_dir) / "absent.json"))

    def test_document_kept_for_manifest(self):
        document = {"roi": ROI, "sensors": [SENSOR]}
        run = load_config(self._write("ok.json", json.dumps(document)))
        self.assertEqual(run.document, document)


class TestConfigSchema(unittest.TestCase):
    """Test that docs/config_schema.json matches the parameter defaults."""

    @classmethod
    def setUpClass(cls):
        with open(SCHEMA_PATH, encoding="utf-8") as f:
            cls.params = json.load(f)["properties"]["params"]["properties"]

    def test_policy_enums_match(self):
        self.assertEqual(tuple(self.params["overlap_rule"]["enum"]), OVERLAP_RULES)
        self.assertEqual(tuple(self.params["fallback"]["enum"]), FALLBACK_POLICIES)
        self.assertEqual(tuple(self.params["rc_shift"]["enum"]), RC_SHIFT_POLICIES)

    def test_policy_defaults_match(self):
        defaults = AlgoParams()
        self.assertEqual(self.params["overlap_rule"]["default"], defaults.overlap_rule)
        self.assertEqual(self.params["fallback"]["default"], defaults.fallback)
        self.assertEqual(self.params["rc_shift"]["default"], defaults.rc_shift)

    def test_overlap_rules_described(self):
        description = self.params["overlap_rule"]["description"]
        for rule in OVERLAP_RULES:
            self.assertIn(f"{rule}:", description)


class TestDefaultThreads(unittest.TestCase):
    """Test default_threads."""

    def test_unset_is_one(self):
        with patch.dict(os.environ, {}, clear=True):
            self.assertEqual(default_threads(), 1)

    def test_env_override(self):
        with patch.dict(os.environ, {THREADS_ENV_VAR: "3"}):
            self.assertEqual(default_threads(), 3)

    def test_invalid_env(self):
        with patch.dict(os.environ, {THREADS_ENV_VAR: "many"}):
            with self.assertRaises(ConfigError):
                default_threads()
        with patch.dict(os.environ, {THREADS_ENV_VAR: "0"}):
            with self.assertRaises(ConfigError):
                default_threads()


if __name__ == "__main__":
    unittest.main()
