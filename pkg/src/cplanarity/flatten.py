"""Reduction from clustered to flat clustered instances.

Each step picks a non-root node whose subtree is flat, routes its
inter-cluster edges through two fresh sibling clusters chi and phi, and
promotes its children. The tree size (number of non-root higher nodes)
drops by exactly one per step, so a normalized instance flattens in
size-many steps.
"""

from __future__ import annotations

from .errors import (
    InternalInvariantError,
    NoFlattenableNodeError,
    PreconditionError,
)
from .model import ClusteredGraph, Edge, InclusionTree, canon_edge, edge_id
from .normalize import is_normalized
from .trace import EdgeSubdivision, FlattenStep, ReductionTrace


def select_flat_subtree(tree: InclusionTree) -> str:
    """Pick the node to remove next: the grandparent of a deepest leaf.

    Deterministic: among grandparents of maximum-depth leaves, the smallest
    id wins. Raises when the tree is already flat (size 0).
    """
    if not tree.is_homogeneous():
        raise PreconditionError("tree must be homogeneous")
    if tree.size() == 0:
        raise NoFlattenableNodeError("tree has size 0; nothing to flatten")
    h = tree.height()
    if h < 3:
        raise InternalInvariantError("positive size implies height >= 3")
    candidates = set()
    for leaf in tree.leaf_of:
        if tree.depth(leaf) == h:
            candidates.add(tree.parent[tree.parent[leaf]])
    chosen = min(candidates)
    if not tree.subtree_is_flat(chosen):
        raise InternalInvariantError(f"selected node {chosen!r} has a non-flat subtree")
    return chosen


def _unique_id(taken: set[str], base: str) -> str:
    candidate = base
    bump = 0
    while candidate in taken:
        bump += 1
        candidate = f"{base}.{bump}"
    taken.add(candidate)
    return candidate


def flatten_step(cg: ClusteredGraph, mu_star: str,
                 step_index: int = 1) -> tuple[ClusteredGraph, FlattenStep]:
    """Remove ``mu_star`` (a node with a flat subtree), rerouting its edges.

    Every inter-cluster edge (u, v) of ``mu_star`` with u inside becomes the
    path u - e_chi - e_phi - v; the e_chi vertices form the new cluster chi,
    the e_phi vertices the new cluster phi, both children of mu_star's
    parent. When mu_star has no inter-cluster edges, chi and phi would be
    empty clusters, so they are skipped and the children are just promoted.
    """
    tree = cg.tree
    if mu_star == tree.root:
        raise PreconditionError("cannot flatten at the root")
    tree._require(mu_star)
    if mu_star in tree.leaf_of or not tree.subtree_is_flat(mu_star):
        raise PreconditionError(f"subtree of {mu_star!r} is not flat")

    nu = tree.parent[mu_star]
    inside = cg.cluster_vertices(mu_star)
    ice = cg.inter_cluster_edges(mu_star)

    taken = set(tree.nodes) | set(cg.vertices)
    subdivisions: dict[Edge, EdgeSubdivision] = {}
    new_edges = set(cg.edges)
    new_vertices = set(cg.vertices)
    chi_leaves: list[str] = []
    phi_leaves: list[str] = []
    for e in ice:
        u = e[0] if e[0] in inside else e[1]
        v = e[1] if u == e[0] else e[0]
        e_chi = _unique_id(taken, f"{edge_id(e)}@chi{step_index}")
        e_phi = _unique_id(taken, f"{edge_id(e)}@phi{step_index}")
        new_edges.remove(e)
        new_edges.update(
            (canon_edge(u, e_chi), canon_edge(e_chi, e_phi), canon_edge(e_phi, v))
        )
        new_vertices.update((e_chi, e_phi))
        chi_leaves.append(e_chi)
        phi_leaves.append(e_phi)
        subdivisions[e] = EdgeSubdivision(
            e_chi=e_chi,
            e_phi=e_phi,
            path=(e[0], e_chi, e_phi, e[1]) if u == e[0] else (e[0], e_phi, e_chi, e[1]),
        )

    children = {n: list(cs) for n, cs in tree.children.items()}
    promoted = tuple(children.pop(mu_star))
    slot = children[nu].index(mu_star)
    children[nu][slot:slot + 1] = list(promoted)

    chi_id: str | None = None
    phi_id: str | None = None
    leaf_of = dict(tree.leaf_of)
    if ice:
        chi_id = _unique_id(taken, f"{mu_star}@chi")
        phi_id = _unique_id(taken, f"{mu_star}@phi")
        children[nu].extend([chi_id, phi_id])
        children[chi_id] = sorted(chi_leaves)
        children[phi_id] = sorted(phi_leaves)
        for x in chi_leaves + phi_leaves:
            children[x] = []
            leaf_of[x] = x

    new_tree = InclusionTree(
        root=tree.root,
        children={n: tuple(cs) for n, cs in children.items()},
        leaf_of=leaf_of,
    )
    out = ClusteredGraph(vertices=frozenset(new_vertices),
                         edges=frozenset(new_edges), tree=new_tree)
    step = FlattenStep(
        mu_star=mu_star,
        parent_nu=nu,
        chi=chi_id,
        phi=phi_id,
        edge_subdivisions=subdivisions,
        promoted_children=promoted,
    )
    return out, step


def flatten(cg: ClusteredGraph) -> tuple[ClusteredGraph, ReductionTrace]:
    """Flatten a normalized instance in exactly size(T) steps."""
    if not is_normalized(cg):
        raise PreconditionError("flatten requires a normalized instance")
    trace = ReductionTrace(original=cg)
    current = cg
    step_index = 0
    size = current.tree.size()
    while size > 0:
        step_index += 1
        mu = select_flat_subtree(current.tree)
        current, step = flatten_step(current, mu, step_index)
        trace.record(step)
        new_size = current.tree.size()
        if new_size != size - 1:
            raise InternalInvariantError(
                f"size went {size} -> {new_size} in one step"
            )
        if not current.tree.is_homogeneous():
            raise InternalInvariantError("flatten step broke homogeneity")
        size = new_size
    if not current.tree.is_flat() and len(current.vertices) > 0:
        raise InternalInvariantError("flattened instance is not flat")
    return current, trace
