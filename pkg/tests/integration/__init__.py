"""Integration tests for PDBench."""
