"""Lie point symmetry verification laboratory for plasma equilibrium equations."""
__version__ = "0.1.0"
