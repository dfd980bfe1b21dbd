"""Tree spaces, partition lattices and the Lie representations."""

__version__ = "0.1.0"
