"""Exact verification toolkit for torus-orbit closures in the Grassmannian."""

__version__ = "0.1.0"
