"""Verification suites, grouped by the layer they exercise."""
