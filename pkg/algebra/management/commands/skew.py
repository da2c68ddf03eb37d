"""
Django Management Command: Skew Polynomials
===========================================
Annihilators, right division, the norm condition and matrix representations
of sigma-polynomials.

Location: algebra/management/commands/skew.py
"""

from ._group import GroupCommand


class Command(GroupCommand):
    help = 'Sigma-polynomial computations over Galois rings'
    group = 'skew'
    title = 'SKEW POLYNOMIALS'
