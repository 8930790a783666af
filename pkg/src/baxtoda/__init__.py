"""Numerical toolkit for Baxter Q-operators of quantum Toda chains and the
special functions behind their eigenvalues: Gamma and zeta-regularized
determinants, q-Gamma and double sine functions, Whittaker functions,
lattice characters, Fock-space traces and Schur polynomials.
"""
from __future__ import annotations

from . import baxter, errors, fock_schur, gamma_zeta, numerics, qspecial, whittaker

__all__ = ["baxter", "errors", "fock_schur", "gamma_zeta", "numerics", "qspecial", "whittaker"]
__version__ = "0.1.0"
