"""Stationary densities of shot-noise and triggered shot-noise processes."""

__version__ = "0.1.0"
