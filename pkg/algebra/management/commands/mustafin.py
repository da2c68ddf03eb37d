"""
Django Management Command: Mustafin Fibers
==========================================
Component classification over the convex hull and the hull criterion for
matrix codes.

Location: algebra/management/commands/mustafin.py
"""

from ._group import GroupCommand


class Command(GroupCommand):
    help = 'Special fibers of Mustafin varieties and matrix-code closures'
    group = 'mustafin'
    title = 'MUSTAFIN FIBERS'
