"""Representations of double quivers: moment maps at a point, Q-bar bundles
over the projective line, and torus fixed points."""

from .quiver import DoubleQuiver, Edge, Label, Quiver, ValidationError, double, validate

__all__ = ["DoubleQuiver", "Edge", "Label", "Quiver", "ValidationError", "double", "validate"]
__version__ = "0.1.0"
