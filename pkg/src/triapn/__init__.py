"""Exact differential analysis of the trivariate family C_u over F_{2^m}^3.

Subpackages by layer: gf2m (field arithmetic), mpoly (sparse polynomials
and resultants), identities (exact verification of the elimination chain),
derivative (kernel spectra, APN verdicts, witness certificates), geometry
(surface points and the counting bound), cli (JSON command line).
"""

__version__ = "0.1.0"
