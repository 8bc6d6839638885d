"""Spectral toolkit for holomorphic-in-time extension of inviscid fluid models.

Pseudospectral Galerkin dynamics on the periodic box, Gevrey-class norm
tracking, complex-time ray integration with certified analyticity regions,
and numerical verification of the underlying a-priori inequalities.
"""

__version__ = "0.1.0"
