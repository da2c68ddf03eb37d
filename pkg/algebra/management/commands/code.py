"""
Django Management Command: Rank-Metric Codes
============================================
Filtration sequences, minimum distances and Singleton checks for Gabidulin,
twisted Gabidulin and custom codes.

Location: algebra/management/commands/code.py
"""

from ._group import GroupCommand


class Command(GroupCommand):
    help = 'Parameters of rank-metric codes over Galois rings'
    group = 'code'
    title = 'RANK-METRIC CODES'
