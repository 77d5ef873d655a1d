"""Core model: inclusion trees and clustered graphs.

All ids are opaque strings. Instances are value-like: construct once, never
mutate; every reduction builds a fresh instance. Children lists are ordered
so that iteration (and therefore every reduction trace) is reproducible.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import InvalidInstanceError, UnknownNodeError

Edge = tuple[str, str]


def canon_edge(u: str, v: str) -> Edge:
    """Canonical (sorted) form of an undirected edge."""
    if u == v:
        raise InvalidInstanceError(f"self-loop at {u!r}")
    return (u, v) if u < v else (v, u)


def edge_id(e: Edge) -> str:
    return f"{e[0]}~{e[1]}"


class NodeClass(enum.Enum):
    LEAF = "leaf"
    LOWER = "lower"
    HIGHER = "higher"


@dataclass(frozen=True)
class InclusionTree:
    """Rooted tree whose leaves carry the vertices of the underlying graph.

    ``children`` maps every node id to an ordered tuple of child ids (empty
    for leaves), ``leaf_of`` maps each leaf node to the vertex it represents.
    A childless root with empty ``leaf_of`` encodes the empty instance.
    """

    root: str
    children: Mapping[str, tuple[str, ...]]
    leaf_of: Mapping[str, str]

    def __post_init__(self) -> None:
        children = {n: tuple(cs) for n, cs in self.children.items()}
        object.__setattr__(self, "children", children)
        object.__setattr__(self, "leaf_of", dict(self.leaf_of))
        self._validate()

    def _validate(self) -> None:
        if self.root not in self.children:
            raise InvalidInstanceError(f"root {self.root!r} missing from children map")
        seen: set[str] = set()
        stack = [self.root]
        while stack:
            node = stack.pop()
            if node in seen:
                raise InvalidInstanceError(f"node {node!r} reached twice (cycle or duplicate)")
            seen.add(node)
            if node not in self.children:
                raise InvalidInstanceError(f"node {node!r} has no children entry")
            stack.extend(self.children[node])
        if seen != set(self.children):
            orphans = set(self.children) - seen
            raise InvalidInstanceError(f"unreachable nodes: {sorted(orphans)}")
        for node, cs in self.children.items():
            if not cs and node != self.root and node not in self.leaf_of:
                raise InvalidInstanceError(f"childless internal node {node!r}")
            if cs and node in self.leaf_of:
                raise InvalidInstanceError(f"leaf {node!r} has children")
        if self.root in self.leaf_of:
            raise InvalidInstanceError("root cannot be a leaf")
        values = list(self.leaf_of.values())
        if len(set(values)) != len(values):
            raise InvalidInstanceError("two leaves map to the same vertex")

    @staticmethod
    def from_children(root: str, children: Mapping[str, Sequence[str]],
                      leaf_of: Mapping[str, str] | None = None) -> InclusionTree:
        """Build a tree from a children map; nodes absent from the map are leaves.

        When ``leaf_of`` is omitted each leaf node id doubles as its vertex id.
        """
        full: dict[str, tuple[str, ...]] = {}
        referenced: set[str] = {root}
        for n, cs in children.items():
            full[n] = tuple(cs)
            referenced.update(cs)
        for n in referenced:
            full.setdefault(n, ())
        if leaf_of is None:
            leaf_of = {n: n for n, cs in full.items() if not cs and n != root}
        return InclusionTree(root=root, children=full, leaf_of=leaf_of)

    # ------------------------------------------------------------------
    # Derived structure
    # ------------------------------------------------------------------

    @cached_property
    def parent(self) -> dict[str, str]:
        out: dict[str, str] = {}
        for node, cs in self.children.items():
            for c in cs:
                out[c] = node
        return out

    @cached_property
    def nodes(self) -> frozenset[str]:
        return frozenset(self.children)

    @cached_property
    def leaves(self) -> frozenset[str]:
        return frozenset(self.leaf_of)

    @cached_property
    def internal_nodes(self) -> frozenset[str]:
        return self.nodes - self.leaves

    @cached_property
    def _depths(self) -> dict[str, int]:
        out = {self.root: 0}
        stack = [self.root]
        while stack:
            node = stack.pop()
            for c in self.children[node]:
                out[c] = out[node] + 1
                stack.append(c)
        return out

    def _require(self, node: str) -> None:
        if node not in self.children:
            raise UnknownNodeError(node)

    # ------------------------------------------------------------------
    # Queries
    # ------------------------------------------------------------------

    def depth(self, node: str) -> int:
        """Number of edges on the root-to-node path."""
        self._require(node)
        return self._depths[node]

    def height(self) -> int:
        """Maximum depth over all nodes."""
        return max(self._depths.values())

    def classify(self, node: str) -> NodeClass:
        """Leaf / lower (all children leaves) / higher (some internal child)."""
        self._require(node)
        if node in self.leaf_of:
            return NodeClass.LEAF
        if all(c in self.leaf_of for c in self.children[node]):
            return NodeClass.LOWER
        return NodeClass.HIGHER

    def is_homogeneous(self) -> bool:
        """True iff every node's children are all leaves or all internal."""
        for node in self.internal_nodes:
            kinds = {c in self.leaf_of for c in self.children[node]}
            if len(kinds) > 1:
                return False
        return True

    def is_flat(self) -> bool:
        """True iff every leaf has depth exactly 2."""
        return all(self._depths[l] == 2 for l in self.leaf_of)

    def size(self) -> int:
        """Number of higher nodes other than the root."""
        return sum(
            1
            for node in self.internal_nodes
            if node != self.root and self.classify(node) is NodeClass.HIGHER
        )

    def subtree_nodes(self, node: str) -> list[str]:
        """All nodes of the subtree rooted at ``node``, preorder."""
        self._require(node)
        out: list[str] = []
        stack = [node]
        while stack:
            n = stack.pop()
            out.append(n)
            stack.extend(reversed(self.children[n]))
        return out

    def subtree_is_flat(self, node: str) -> bool:
        """True iff every leaf below ``node`` sits exactly two levels down."""
        self._require(node)
        base = self._depths[node]
        return all(
            self._depths[n] - base == 2
            for n in self.subtree_nodes(node)
            if n in self.leaf_of
        ) and any(n in self.leaf_of for n in self.subtree_nodes(node))

    def strict_ancestors(self, node: str) -> list[str]:
        """Ancestors of ``node`` excluding the node itself, deepest first."""
        self._require(node)
        out = []
        cur = node
        while cur != self.root:
            cur = self.parent[cur]
            out.append(cur)
        return out


@dataclass(frozen=True)
class ClusteredGraph:
    """A simple graph plus an inclusion tree whose leaves are its vertices."""

    vertices: frozenset[str]
    edges: frozenset[Edge]
    tree: InclusionTree
    _skip_validation: bool = field(default=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", frozenset(self.vertices))
        object.__setattr__(self, "edges", frozenset(self.edges))
        if not self._skip_validation:
            self._validate()

    def _validate(self) -> None:
        leaf_vertices = frozenset(self.tree.leaf_of.values())
        if leaf_vertices != self.vertices:
            raise InvalidInstanceError(
                "tree leaves and vertex set differ: "
                f"{sorted(leaf_vertices ^ self.vertices)}"
            )
        for e in self.edges:
            if e != canon_edge(*e):
                raise InvalidInstanceError(f"edge {e} not in canonical order")
            for end in e:
                if end not in self.vertices:
                    raise InvalidInstanceError(f"edge {e} has unknown endpoint {end!r}")

    @staticmethod
    def create(vertices: Iterable[str], edges: Iterable[tuple[str, str]],
               tree: InclusionTree) -> ClusteredGraph:
        return ClusteredGraph(
            vertices=frozenset(vertices),
            edges=frozenset(canon_edge(u, v) for u, v in edges),
            tree=tree,
        )

    # ------------------------------------------------------------------
    # Cluster membership (computed from the tree, memoized)
    # ------------------------------------------------------------------

    @cached_property
    def membership(self) -> dict[str, frozenset[str]]:
        """Vertex set of every internal node's subtree."""
        out: dict[str, frozenset[str]] = {}
        order = self.tree.subtree_nodes(self.tree.root)
        for node in reversed(order):
            if node in self.tree.leaf_of:
                continue
            acc: set[str] = set()
            for c in self.tree.children[node]:
                if c in self.tree.leaf_of:
                    acc.add(self.tree.leaf_of[c])
                else:
                    acc.update(out[c])
            out[node] = frozenset(acc)
        return out

    @cached_property
    def adjacency(self) -> dict[str, tuple[str, ...]]:
        adj: dict[str, list[str]] = {v: [] for v in sorted(self.vertices)}
        for u, v in sorted(self.edges):
            adj[u].append(v)
            adj[v].append(u)
        return {v: tuple(sorted(ns)) for v, ns in adj.items()}

    def degree(self, v: str) -> int:
        return len(self.adjacency[v])

    def _require_cluster(self, cluster: str) -> None:
        self.tree._require(cluster)
        if cluster in self.tree.leaf_of:
            raise UnknownNodeError(f"{cluster!r} is a leaf, not a cluster")

    def clusters(self) -> list[str]:
        """Internal nodes of the tree, root included, in sorted order."""
        return sorted(self.tree.internal_nodes)

    def cluster_vertices(self, cluster: str) -> frozenset[str]:
        """Vertices below ``cluster``; walks only that subtree."""
        self._require_cluster(cluster)
        leaf_of = self.tree.leaf_of
        return frozenset(
            leaf_of[n] for n in self.tree.subtree_nodes(cluster) if n in leaf_of
        )

    def inter_cluster_edges(self, cluster: str) -> list[Edge]:
        """Edges with exactly one endpoint inside ``cluster``, sorted."""
        inside = self.cluster_vertices(cluster)
        return sorted(e for e in self.edges if (e[0] in inside) != (e[1] in inside))

    def internal_edges(self, cluster: str) -> list[Edge]:
        """Edges with both endpoints inside ``cluster``, sorted."""
        inside = self.cluster_vertices(cluster)
        return sorted(e for e in self.edges if e[0] in inside and e[1] in inside)

    def is_independent(self, cluster: str) -> bool:
        """True iff no edge joins two vertices of ``cluster``."""
        self._require_cluster(cluster)
        return not self.internal_edges(cluster)

    def is_flat(self) -> bool:
        return self.tree.is_flat()

    def components(self) -> list[frozenset[str]]:
        """Connected components of the underlying graph, sorted by min vertex."""
        seen: set[str] = set()
        comps: list[frozenset[str]] = []
        for start in sorted(self.vertices):
            if start in seen:
                continue
            comp = {start}
            stack = [start]
            while stack:
                v = stack.pop()
                for w in self.adjacency[v]:
                    if w not in comp:
                        comp.add(w)
                        stack.append(w)
            seen |= comp
            comps.append(frozenset(comp))
        return comps

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def induced_components(self, vertex_set: frozenset[str]) -> list[frozenset[str]]:
        """Connected components of the subgraph induced by ``vertex_set``."""
        seen: set[str] = set()
        comps: list[frozenset[str]] = []
        for start in sorted(vertex_set):
            if start in seen:
                continue
            comp = {start}
            stack = [start]
            while stack:
                v = stack.pop()
                for w in self.adjacency[v]:
                    if w in vertex_set and w not in comp:
                        comp.add(w)
                        stack.append(w)
            seen |= comp
            comps.append(frozenset(comp))
        return comps

    def cluster_of_vertex(self, v: str) -> str:
        """Parent cluster of vertex ``v`` (its leaf's parent node)."""
        leaf = self.leaf_node_of(v)
        return self.tree.parent[leaf]

    @cached_property
    def _vertex_to_leaf(self) -> dict[str, str]:
        return {vtx: leaf for leaf, vtx in self.tree.leaf_of.items()}

    def leaf_node_of(self, v: str) -> str:
        try:
            return self._vertex_to_leaf[v]
        except KeyError:
            raise UnknownNodeError(v) from None

    def separating_clusters(self, e: Edge) -> list[str]:
        """Clusters crossed by ``e``, ordered along the edge from e[0] to e[1].

        A cluster is crossed iff it contains exactly one endpoint. The order
        is: ancestors of e[0] deepest-first, then ancestors of e[1]
        shallowest-first, matching the nesting of regions along the curve.
        """
        u, v = e
        anc_u = [a for a in self.tree.strict_ancestors(self.leaf_node_of(u))
                 if a != self.tree.root and v not in self.membership[a]]
        anc_v = [a for a in self.tree.strict_ancestors(self.leaf_node_of(v))
                 if a != self.tree.root and u not in self.membership[a]]
        return anc_u + list(reversed(anc_v))


def canonical_tree_shape(cg: ClusteredGraph) -> tuple:
    """Shape of the inclusion tree with internal ids erased.

    Leaves keep their vertex ids, internal nodes become sorted tuples of
    child shapes. Two normalization outputs that differ only in fresh node
    naming compare equal.
    """

    def shape(node: str) -> tuple:
        if node in cg.tree.leaf_of:
            return ("v", cg.tree.leaf_of[node])
        return ("c", tuple(sorted(shape(c) for c in cg.tree.children[node])))

    return shape(cg.tree.root)
