"""Common utilities shared across the package (logging, artifact files)."""
