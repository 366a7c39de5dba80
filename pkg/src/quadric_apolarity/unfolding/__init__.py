"""Syzygy-unfolding deformations of tautological apolar schemes.

The two cases share one engine: a parametric family J(a) of generators
obtained by adding extension generators with fresh coefficients, a
syzygy extension H(b) = H(0) + t*B in the distinguished variable t, a
triangular solve of the equations linear in t for b = l(a), and the
residual coefficient ideal in the a-parameters after substitution.
"""

from .cases import (
    UnfoldCase,
    SyzygyExtension,
    UnfoldResult,
    ternary_case,
    quaternary_case,
    tautological_ideal,
    linear_syzygies,
    build_and_eliminate,
)
from .components import verify_components
from .ternary import ternary_geometry_checks
from .quaternary import isotropy_checks
from .equivariance import equivariance_checks

__all__ = [
    "UnfoldCase",
    "SyzygyExtension",
    "UnfoldResult",
    "ternary_case",
    "quaternary_case",
    "tautological_ideal",
    "linear_syzygies",
    "build_and_eliminate",
    "verify_components",
    "ternary_geometry_checks",
    "isotropy_checks",
    "equivariance_checks",
]
