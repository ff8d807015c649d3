"""Unit tests for PDBench."""
