"""Finite classical groups: formed spaces, enumerated tables, parabolics, dual pairs."""
