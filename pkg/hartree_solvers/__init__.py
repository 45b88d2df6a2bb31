"""
Spectral solver and verification suite for the stationary pseudo-relativistic Hartree equation on a box.
"""

__version__ = '1.0.0'
