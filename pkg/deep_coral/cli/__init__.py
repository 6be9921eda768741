"""Command-line interface for deep_coral."""
