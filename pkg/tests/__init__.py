"""
Tests for the robust sensor orientation simulator.

Test modules:
- test_geometry, test_voronoi, test_robust: exact geometry and robustness radius
- test_orientation, test_harness: orientation models, recalibration, experiments
- test_oracle, test_validate: Monte Carlo and brute-force cross-checks
- test_config, test_persist, test_render, test_main, test_e2e: I/O and command line
"""
