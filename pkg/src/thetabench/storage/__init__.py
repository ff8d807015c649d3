"""On-disk cache, artifact schema and report writer."""
