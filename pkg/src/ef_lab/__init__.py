"""Game-based comparison laboratory for finite graphs and matrix algebras."""

__version__ = "0.1.0"
