"""Exact-arithmetic toolkit for apolarity of powers of quadrics.

Library + CLI that verifies catalecticant ranks, tautological apolar
schemes, syzygy-unfolding deformation systems and their component
geometry, higher-order polarity and rank-eleven certificates, and the
Grassmann-bundle degree computations, all over QQ or a prime field.
"""

__version__ = "0.1.0"
