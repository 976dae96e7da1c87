"""Anisotropic space-time fractional viscoelastic waves: special functions, kernels, Green functions."""

__version__ = "0.1.0"
