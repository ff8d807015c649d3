"""Weyl-group and torus combinatorics, Deligne-Lusztig characters and Pan's formula."""
