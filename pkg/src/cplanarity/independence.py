"""Reduction from flat to independent flat clustered instances.

Every processed cluster is replaced by one singleton cluster per vertex plus
the chi/phi pair threaded through its inter-cluster edges, exactly as in the
flattening step. ``make_independent`` processes the non-independent
clusters; ``make_independent_typed`` additionally processes independent
multi-vertex clusters containing a vertex whose degree is not two, after
which every non-root cluster is either a single vertex of arbitrary degree
(type 1) or a set of degree-two vertices (type 2).

``make_independent`` builds the result in a single pass (the steps touch
pairwise-distinct edge ends, so their net effect is order-free), which keeps
the whole reduction linear; the recorded steps are nevertheless identical to
running ``independence_step`` sequentially in ascending cluster-id order.
"""

from __future__ import annotations

import enum

from .errors import InternalInvariantError, PreconditionError
from .model import ClusteredGraph, Edge, InclusionTree, canon_edge, edge_id
from .trace import EdgeSubdivision, IndependenceStep, ReductionTrace


class ClusterType(enum.Enum):
    TYPE1 = "type1"
    TYPE2 = "type2"


def _unique_id(taken: set[str], base: str) -> str:
    candidate = base
    bump = 0
    while candidate in taken:
        bump += 1
        candidate = f"{base}.{bump}"
    taken.add(candidate)
    return candidate


def _require_flat(cg: ClusteredGraph) -> None:
    if not cg.tree.is_flat() and len(cg.vertices) > 0:
        raise PreconditionError("input must be a flat instance")


def _bulk_replace(cg: ClusteredGraph,
                  processed: list[str]) -> tuple[ClusteredGraph, ReductionTrace]:
    """Replace every cluster in ``processed`` (ascending id order) at once."""
    tree = cg.tree
    trace = ReductionTrace(original=cg)
    if not processed:
        return cg, trace

    taken = set(tree.nodes) | set(cg.vertices)
    order = {mu: i + 1 for i, mu in enumerate(processed)}
    processed_set = set(processed)

    # Evolving vertex path per original edge, plus which flat cluster owns
    # each endpoint. Subdivisions happen at the ends only.
    paths: dict[Edge, list[str]] = {e: [e[0], e[1]] for e in sorted(cg.edges)}
    step_subs: dict[str, dict[Edge, EdgeSubdivision]] = {mu: {} for mu in processed}
    cluster_of = {v: cg.cluster_of_vertex(v) for v in cg.vertices}
    chi_leaves: dict[str, list[str]] = {mu: [] for mu in processed}
    phi_leaves: dict[str, list[str]] = {mu: [] for mu in processed}

    for e in sorted(cg.edges):
        a, b = e
        ca, cb = cluster_of[a], cluster_of[b]
        if ca == cb:
            continue
        sides = []
        if ca in processed_set:
            sides.append((order[ca], ca, a))
        if cb in processed_set:
            sides.append((order[cb], cb, b))
        sides.sort()
        for step_no, mu, endpoint in sides:
            path = paths[e]
            if endpoint == a:
                seg = canon_edge(path[0], path[1])
                e_chi = _unique_id(taken, f"{edge_id(seg)}@chi{step_no}")
                e_phi = _unique_id(taken, f"{edge_id(seg)}@phi{step_no}")
                sub_path = (
                    (a, e_chi, e_phi, path[1])
                    if seg[0] == a
                    else (path[1], e_phi, e_chi, a)
                )
                path[1:1] = [e_chi, e_phi]
            else:
                seg = canon_edge(path[-2], path[-1])
                e_chi = _unique_id(taken, f"{edge_id(seg)}@chi{step_no}")
                e_phi = _unique_id(taken, f"{edge_id(seg)}@phi{step_no}")
                sub_path = (
                    (b, e_chi, e_phi, path[-2])
                    if seg[0] == b
                    else (path[-2], e_phi, e_chi, b)
                )
                path[-1:-1] = [e_phi, e_chi]
            step_subs[mu][seg] = EdgeSubdivision(e_chi=e_chi, e_phi=e_phi, path=sub_path)
            chi_leaves[mu].append(e_chi)
            phi_leaves[mu].append(e_phi)

    # Tree surgery, reproducing the sequential child-list evolution: each
    # step replaces mu in place with its singletons and appends chi, phi.
    children = {n: list(cs) for n, cs in tree.children.items()}
    leaf_of = dict(tree.leaf_of)
    root_children = children[tree.root]
    singleton_maps: dict[str, dict[str, str]] = {}
    chi_ids: dict[str, str | None] = {}
    phi_ids: dict[str, str | None] = {}
    for mu in processed:
        members = sorted(cg.membership[mu])
        singles: dict[str, str] = {}
        new_slots: list[str] = []
        for v in members:
            nu_id = _unique_id(taken, f"{v}@nu")
            singles[v] = nu_id
            new_slots.append(nu_id)
            children[nu_id] = [cg.leaf_node_of(v)]
        singleton_maps[mu] = singles
        slot = root_children.index(mu)
        root_children[slot:slot + 1] = new_slots
        del children[mu]
        if chi_leaves[mu]:
            chi_id = _unique_id(taken, f"{mu}@chi")
            phi_id = _unique_id(taken, f"{mu}@phi")
            children[chi_id] = sorted(chi_leaves[mu])
            children[phi_id] = sorted(phi_leaves[mu])
            root_children.extend([chi_id, phi_id])
            for x in chi_leaves[mu] + phi_leaves[mu]:
                children[x] = []
                leaf_of[x] = x
            chi_ids[mu], phi_ids[mu] = chi_id, phi_id
        else:
            chi_ids[mu] = phi_ids[mu] = None

    new_edges: set[Edge] = set()
    new_vertices = set(cg.vertices)
    for e in sorted(cg.edges):
        path = paths[e]
        new_vertices.update(path[1:-1])
        for x, y in zip(path, path[1:]):
            new_edges.add(canon_edge(x, y))

    new_tree = InclusionTree(
        root=tree.root,
        children={n: tuple(cs) for n, cs in children.items()},
        leaf_of=leaf_of,
    )
    out = ClusteredGraph(vertices=frozenset(new_vertices),
                         edges=frozenset(new_edges), tree=new_tree)
    for mu in processed:
        trace.record(IndependenceStep(
            mu_star=mu,
            singletons=singleton_maps[mu],
            chi=chi_ids[mu],
            phi=phi_ids[mu],
            edge_subdivisions=step_subs[mu],
        ))
    return out, trace


def independence_step(cg: ClusteredGraph, mu_star: str,
                      step_index: int = 1) -> tuple[ClusteredGraph, IndependenceStep]:
    """Replace one cluster of a flat instance by singletons plus chi/phi."""
    _require_flat(cg)
    tree = cg.tree
    if mu_star == tree.root:
        raise PreconditionError("cannot process the root")
    tree._require(mu_star)
    if mu_star in tree.leaf_of:
        raise PreconditionError(f"{mu_star!r} is a leaf")

    out, trace = _bulk_replace(cg, [mu_star])
    step = trace.steps[0]
    if step_index != 1:
        # Re-mint subdivision vertex names with the caller's step number.
        renames: dict[str, str] = {}
        subs: dict[Edge, EdgeSubdivision] = {}
        taken = set(cg.tree.nodes) | set(cg.vertices)
        for seg, sub in sorted(step.edge_subdivisions.items()):
            e_chi = _unique_id(taken, f"{edge_id(seg)}@chi{step_index}")
            e_phi = _unique_id(taken, f"{edge_id(seg)}@phi{step_index}")
            renames[sub.e_chi] = e_chi
            renames[sub.e_phi] = e_phi
            subs[seg] = EdgeSubdivision(
                e_chi=e_chi, e_phi=e_phi,
                path=tuple(renames.get(x, x) for x in sub.path),
            )
        out = _rename_vertices(out, renames)
        step = IndependenceStep(
            mu_star=step.mu_star, singletons=step.singletons,
            chi=step.chi, phi=step.phi, edge_subdivisions=subs,
        )
    if not out.tree.is_flat():
        raise InternalInvariantError("independence step broke flatness")
    return out, step


def _rename_vertices(cg: ClusteredGraph, renames: dict[str, str]) -> ClusteredGraph:
    def r(x: str) -> str:
        return renames.get(x, x)

    tree = cg.tree
    new_tree = InclusionTree(
        root=r(tree.root),
        children={r(n): tuple(r(c) for c in cs) for n, cs in tree.children.items()},
        leaf_of={r(l): r(v) for l, v in tree.leaf_of.items()},
    )
    return ClusteredGraph(
        vertices=frozenset(r(v) for v in cg.vertices),
        edges=frozenset(canon_edge(r(u), r(v)) for u, v in cg.edges),
        tree=new_tree,
    )


def _dependent_clusters(cg: ClusteredGraph) -> set[str]:
    """Non-root clusters of a flat instance with at least one internal edge."""
    out: set[str] = set()
    for u, v in cg.edges:
        cu = cg.cluster_of_vertex(u)
        if cu == cg.cluster_of_vertex(v):
            out.add(cu)
    out.discard(cg.tree.root)
    return out


def make_independent(cg: ClusteredGraph) -> tuple[ClusteredGraph, ReductionTrace]:
    """Make every non-root cluster of a flat instance independent. O(n)."""
    _require_flat(cg)
    processed = sorted(_dependent_clusters(cg))
    out, trace = _bulk_replace(cg, processed)
    if _dependent_clusters(out):
        raise InternalInvariantError("some cluster is still not independent")
    return out, trace


def make_independent_typed(
    cg: ClusteredGraph,
) -> tuple[ClusteredGraph, ReductionTrace, dict[str, ClusterType]]:
    """Reach the type 1 / type 2 normal form of a flat instance.

    Processes the non-independent clusters and also every independent
    multi-vertex cluster containing a vertex of degree other than two (the
    degree > 2 case forces it; degree < 2 vertices would otherwise leave a
    multi-vertex cluster that fits neither type).
    """
    _require_flat(cg)
    dependent = _dependent_clusters(cg)

    def needs_processing(mu: str) -> bool:
        if mu in dependent:
            return True
        members = cg.membership[mu]
        return len(members) > 1 and any(cg.degree(v) != 2 for v in members)

    processed = sorted(
        mu for mu in cg.tree.internal_nodes
        if mu != cg.tree.root and needs_processing(mu)
    )
    out, trace = _bulk_replace(cg, processed)

    tags: dict[str, ClusterType] = {}
    for mu in sorted(out.tree.internal_nodes):
        if mu == out.tree.root:
            continue
        members = out.membership[mu]
        if len(members) == 1:
            tags[mu] = ClusterType.TYPE1
        else:
            bad = [v for v in members if out.degree(v) != 2]
            if bad:
                raise InternalInvariantError(
                    f"cluster {mu!r} has multiple vertices incl. {bad[0]!r} "
                    f"of degree {out.degree(bad[0])}"
                )
            tags[mu] = ClusterType.TYPE2
    return out, trace, tags
