"""Preprocessing that makes an instance ready for flattening.

Three linear passes over the inclusion tree:

* ``collapse_chains`` removes every internal node with a single child, so all
  surviving internal nodes have >= 2 children and the height drops to at
  most n-1 (n >= 2).
* ``homogenize`` wraps each leaf child of a mixed node in a fresh singleton
  lower cluster, so every node's children are all leaves or all internal.
* ``normalize`` composes them: it collapses only when the root has a single
  child or the height bound is violated, homogenizes if needed, and finally
  wraps the root's leaf children (which, after homogenizing, only happens
  when *all* of them are leaves) so that the root never owns vertices
  directly and a size-0 tree is genuinely flat.

All passes leave the underlying graph untouched and preserve c-planarity:
dropping a single-child cluster's boundary, or drawing a tiny boundary
around one vertex, converts a c-planar drawing in either direction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .model import ClusteredGraph, InclusionTree


@dataclass(frozen=True)
class NormalizationReport:
    """What a normalization pass did.

    ``inserted_singletons`` lists (new cluster id, wrapped leaf node);
    ``collapsed_chains`` lists (removed node ids top-down, surviving node).
    """

    inserted_singletons: tuple[tuple[str, str], ...] = ()
    collapsed_chains: tuple[tuple[tuple[str, ...], str], ...] = ()
    resulting_height: int = 0
    resulting_cluster_count: int = 0

    def merged_with(self, other: NormalizationReport) -> NormalizationReport:
        return NormalizationReport(
            inserted_singletons=self.inserted_singletons + other.inserted_singletons,
            collapsed_chains=self.collapsed_chains + other.collapsed_chains,
            resulting_height=other.resulting_height,
            resulting_cluster_count=other.resulting_cluster_count,
        )


def _report_tail(cg: ClusteredGraph) -> dict:
    return {
        "resulting_height": cg.tree.height(),
        "resulting_cluster_count": len(cg.tree.internal_nodes),
    }


def _fresh_wrapper_id(existing: set[str], leaf: str, counter: list[int]) -> str:
    while True:
        candidate = f"{leaf}#w{counter[0]}"
        counter[0] += 1
        if candidate not in existing:
            existing.add(candidate)
            return candidate


def _wrap_leaves(cg: ClusteredGraph, targets: list[tuple[str, str]],
                 counter: list[int]) -> tuple[ClusteredGraph, tuple[tuple[str, str], ...]]:
    """Insert a singleton lower cluster between each (parent, leaf) pair."""
    tree = cg.tree
    children = {n: list(cs) for n, cs in tree.children.items()}
    existing = set(tree.nodes)
    inserted: list[tuple[str, str]] = []
    for parent, leaf in targets:
        wrapper = _fresh_wrapper_id(existing, leaf, counter)
        idx = children[parent].index(leaf)
        children[parent][idx] = wrapper
        children[wrapper] = [leaf]
        inserted.append((wrapper, leaf))
    new_tree = InclusionTree(
        root=tree.root,
        children={n: tuple(cs) for n, cs in children.items()},
        leaf_of=tree.leaf_of,
    )
    out = ClusteredGraph(vertices=cg.vertices, edges=cg.edges, tree=new_tree)
    return out, tuple(inserted)


def homogenize(cg: ClusteredGraph) -> tuple[ClusteredGraph, NormalizationReport]:
    """Wrap every leaf child of a mixed node in a singleton lower cluster.

    Already-homogeneous instances come back unchanged. The height of the
    tree never grows: the parent of a deepest leaf cannot be mixed, since an
    internal sibling of that leaf would have strictly deeper descendants.
    """
    tree = cg.tree
    targets: list[tuple[str, str]] = []
    for node in sorted(tree.internal_nodes):
        cs = tree.children[node]
        leaf_children = [c for c in cs if c in tree.leaf_of]
        if leaf_children and len(leaf_children) < len(cs):
            targets.extend((node, leaf) for leaf in leaf_children)
    if not targets:
        return cg, NormalizationReport(**_report_tail(cg))
    counter = [0]
    out, inserted = _wrap_leaves(cg, targets, counter)
    return out, NormalizationReport(inserted_singletons=inserted, **_report_tail(out))


def collapse_chains(cg: ClusteredGraph) -> tuple[ClusteredGraph, NormalizationReport]:
    """Replace every internal node that has a single child with that child.

    Chains of such nodes vanish entirely; if the chain starts at the root the
    lowest multi-child node becomes the new root. With one vertex the last
    cluster above the leaf survives, since a tree cannot be a bare vertex.
    """
    tree = cg.tree
    single = {
        n for n in tree.internal_nodes
        if len(tree.children[n]) == 1
    }
    # A chain heading straight into a lone leaf keeps its last cluster.
    for n in sorted(single):
        (child,) = tree.children[n]
        if child in tree.leaf_of and (n == tree.root or tree.parent[n] in single):
            chain_alive = n == tree.root or all(
                len(tree.children[a]) == 1 for a in tree.strict_ancestors(n)
            )
            if chain_alive:
                single.discard(n)
    if not single:
        return cg, NormalizationReport(**_report_tail(cg))

    def survivor(node: str) -> str:
        while node in single:
            (node,) = tree.children[node]
        return node

    chains: list[tuple[tuple[str, ...], str]] = []
    consumed: set[str] = set()
    for n in sorted(single):
        if n in consumed or (n != tree.root and tree.parent[n] in single):
            continue
        removed = []
        cur = n
        while cur in single:
            removed.append(cur)
            consumed.add(cur)
            (cur,) = tree.children[cur]
        chains.append((tuple(removed), cur))

    new_root = survivor(tree.root)
    children: dict[str, tuple[str, ...]] = {}
    stack = [new_root]
    while stack:
        node = stack.pop()
        kept = tuple(survivor(c) for c in tree.children[node])
        children[node] = kept
        stack.extend(c for c in kept if c not in tree.leaf_of)
    leaf_of = {l: v for l, v in tree.leaf_of.items()}
    new_tree = InclusionTree(root=new_root, children=children, leaf_of=leaf_of)
    out = ClusteredGraph(vertices=cg.vertices, edges=cg.edges, tree=new_tree)
    return out, NormalizationReport(collapsed_chains=tuple(chains), **_report_tail(out))


def normalize(cg: ClusteredGraph) -> tuple[ClusteredGraph, NormalizationReport]:
    """Make an instance flatten-ready in O(n + c).

    Postconditions: homogeneous tree; the root has >= 2 children unless the
    graph has <= 1 vertex; no vertex hangs directly off the root; height at
    most n-1 for n >= 3 (a 2-vertex instance whose clusters all collapse
    ends at height 2, the minimum at which flatness is expressible).
    """
    n = len(cg.vertices)
    out = cg
    report = NormalizationReport(**_report_tail(cg))

    if n >= 2 and (
        len(out.tree.children[out.tree.root]) == 1
        or out.tree.height() > n - 1
    ):
        out, report = collapse_chains(out)

    if not out.tree.is_homogeneous():
        out, hom_report = homogenize(out)
        report = report.merged_with(hom_report)

    root = out.tree.root
    root_leaf_children = [
        (root, c) for c in out.tree.children[root] if c in out.tree.leaf_of
    ]
    if root_leaf_children:
        counter = [0]
        out, inserted = _wrap_leaves(out, root_leaf_children, counter)
        report = report.merged_with(
            NormalizationReport(inserted_singletons=inserted, **_report_tail(out))
        )

    report = NormalizationReport(
        inserted_singletons=report.inserted_singletons,
        collapsed_chains=report.collapsed_chains,
        **_report_tail(out),
    )
    return out, report


def is_normalized(cg: ClusteredGraph) -> bool:
    """Check the postconditions ``normalize`` guarantees (height bound aside)."""
    tree = cg.tree
    n = len(cg.vertices)
    if not tree.is_homogeneous():
        return False
    root_children = tree.children[tree.root]
    if n >= 2 and len(root_children) < 2:
        return False
    if n >= 1 and any(c in tree.leaf_of for c in root_children):
        return False
    return True
