"""Cylindrical contact homology of subcritical Stein-fillable contact manifolds."""

__version__ = "0.1.0"
