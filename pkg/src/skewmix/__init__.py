"""Two-component skew normal mixtures with one known component."""
__version__ = "0.1.0"
