"""Locally repairable codes built on skew polynomial evaluation.

Layers, bottom to top:

- galois: GF(q^m) arithmetic, Frobenius, truncated norms
- skew: skew polynomials, sigma-Vandermonde systems, exact linear algebra
- lrs: the outer evaluation code (locators, encoding, erasure decoding)
- mrlrc: local MDS layering, global codewords, recoverability checker
- dss: storage-system state, failures, repair schemes, transcripts
- secrecy: eavesdropper views, rank/entropy oracles, closed-form dimensions
- scenario / cli: config files, simulation and sweep entry points
"""

from .errors import ConstraintError, SelectionError, UnrecoverableError

__all__ = ["ConstraintError", "SelectionError", "UnrecoverableError"]

__version__ = "0.1.0"
