"""Exact arithmetic: finite fields, cyclotomic numbers, quadratic forms."""
