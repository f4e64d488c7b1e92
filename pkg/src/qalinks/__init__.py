"""Exact combinatorics for knots and links written in Conway notation.

The package parses Conway symbols (rational, Montesinos, polyhedral),
builds planar diagrams, evaluates exact invariants (Kauffman bracket,
Jones polynomial, determinant, signature), computes Khovanov homology
over F2, and searches for quasi-alternating certificates.
"""

from qalinks import conway

__all__ = ["conway"]
__version__ = "0.1.0"
