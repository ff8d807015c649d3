"""Suite registry, suite context and the verification runner."""
