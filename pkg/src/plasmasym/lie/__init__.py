"""Jet-space machinery: prolongation, on-manifold symmetry checks, commutators."""
from .checks import (
    conditional_symmetry_check,
    consistency_report,
    evaluate_on_manifold,
    flow_orbit_check,
    identity_check,
    infinitesimal_symmetry_check,
    partial_symmetry_check,
    prolonged_equations,
)
from .generator import GeneratorField, apply_prolonged, characteristic, commutator, prolong
from .jet import JetBox, JetSpace, bracket, coord_name, laplacian_jet, small_abs, small_radius
from .report import ResidualReport, combine, worst
from .system import Equation, EquationSystem, SolveRule, scaled
