"""
Django Management Command: Galois Rings
=======================================
Builds GR(p^k, n), lifts residues to Teichmüller representatives and expands
elements into Teichmüller digits.

Location: algebra/management/commands/ring.py
"""

from ._group import GroupCommand


class Command(GroupCommand):
    help = 'Galois ring construction, Teichmüller lifts and digit expansions'
    group = 'ring'
    title = 'GALOIS RINGS'
