"""Clustered-graph reduction toolkit.

Reduces clustered planarity instances to flat and independent-flat form,
transfers combinatorial c-planar drawings across the reduction steps in both
directions, and ships a brute-force c-planarity oracle for small instances.
"""

from .model import ClusteredGraph, Edge, InclusionTree, NodeClass, canon_edge

__all__ = [
    "ClusteredGraph",
    "Edge",
    "InclusionTree",
    "NodeClass",
    "canon_edge",
]
