"""Exact character tables, class functions, induction and Jacquet restriction."""
