"""Core types and utilities for ThetaBench."""
