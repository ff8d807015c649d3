"""End-to-end tests for PDBench."""
