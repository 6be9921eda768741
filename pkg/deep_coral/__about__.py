"""Project metadata for deep_coral.

Keep this module small and dependency-free.
"""

__version__ = "0.1.0"

__all__ = ["__version__"]
