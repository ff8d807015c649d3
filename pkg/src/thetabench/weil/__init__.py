"""The Weil representation in the Schroedinger model and theta correspondence data."""
