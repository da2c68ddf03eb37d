"""
Django Management Command: Bruhat-Tits Building
===============================================
Canonical forms, adjacency, convex hulls and neighbourhoods of lattice classes.

Location: algebra/management/commands/bt.py
"""

from ._group import GroupCommand


class Command(GroupCommand):
    help = 'Lattice classes in the Bruhat-Tits building'
    group = 'bt'
    title = 'BRUHAT-TITS BUILDING'
