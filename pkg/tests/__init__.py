"""Tests for PDBench."""
