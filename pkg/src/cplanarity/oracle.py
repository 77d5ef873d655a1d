"""Exhaustive c-planarity decision for desk-scale instances.

The procedure searches for an augmenting edge set F over non-edges that
makes every cluster (root included) induce a connected subgraph, together
with a rotation system of G u F that face-traces to a planar embedding in
which, for every cluster, all outside vertices share a single face of the
cluster's induced embedding. That characterization comes from the classical
c-connected clustered-planarity literature, not from the reductions this
package implements, so the oracle is an independent referee for them.

Augmentations are not enumerated blindly: cluster components are merged
bottom-up by inserting edges only between co-facial vertices of the current
embedding (any workable F can be inserted that way, one edge at a time), so
the search stays within planarity-viable candidates. Rotation systems are
enumerated lexicographically with the first neighbor pinned; the first
witness found under this canonical order is returned, so verdicts are
deterministic. On acceptance a frame drawing is synthesized from the
accepting embedding, validated, and returned.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from itertools import permutations, product

from .drawing import (
    CPlanarDrawing,
    Layout,
    build_drawing,
    choose_legal_outer,
    validate_drawing,
)
from .embedding import DisjointSets, is_planar_rotation, trace_faces_simple
from .errors import BudgetExceededError, InternalInvariantError
from .model import ClusteredGraph, Edge, canon_edge


@dataclass(frozen=True)
class SearchBudget:
    max_vertices: int = 8
    max_edges: int = 12
    max_clusters: int = 5
    max_seconds: float = 60.0


@dataclass(frozen=True)
class OracleVerdict:
    c_planar: bool
    witness: CPlanarDrawing | None
    embeddings_examined: int
    augmentations_examined: int
    elapsed_seconds: float


class _Search:
    def __init__(self, cg: ClusteredGraph, budget: SearchBudget):
        self.cg = cg
        self.budget = budget
        self.deadline = time.monotonic() + budget.max_seconds
        self.t0 = time.monotonic()
        self.embeddings = 0
        self.augmentations = 0

        self.verts = sorted(cg.vertices)
        self.vid = {v: i for i, v in enumerate(self.verts)}
        self.n = len(self.verts)
        self.adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in sorted(cg.edges):
            self.adj[self.vid[u]].append(self.vid[v])
            self.adj[self.vid[v]].append(self.vid[u])
        for ns in self.adj:
            ns.sort()

        tree = cg.tree
        order = sorted(
            tree.internal_nodes,
            key=lambda m: (-tree.depth(m), m),
        )
        self.clusters = [
            (m, frozenset(self.vid[v] for v in cg.cluster_vertices(m)))
            for m in order
        ]
        self.connected = cg.is_connected()

    def _tick(self) -> None:
        if time.monotonic() > self.deadline:
            raise BudgetExceededError(
                f"wall clock limit of {self.budget.max_seconds}s exceeded"
            )

    # -- embedding bookkeeping -------------------------------------------

    @staticmethod
    def _components(rot: dict[int, list[int]], members: frozenset[int] | None = None):
        universe = sorted(members) if members is not None else sorted(rot)
        allowed = set(universe)
        seen: set[int] = set()
        comps: list[list[int]] = []
        for s in universe:
            if s in seen:
                continue
            comp = [s]
            seen.add(s)
            stack = [s]
            while stack:
                v = stack.pop()
                for w in rot[v]:
                    if w in allowed and w not in seen:
                        seen.add(w)
                        comp.append(w)
                        stack.append(w)
            comps.append(sorted(comp))
        return comps

    def _fce_ok(self, rot, faces, face_of_dart, members: frozenset[int]) -> bool:
        """All outside vertices in one face of the induced embedding."""
        ds = DisjointSets(range(len(faces)))
        for v, ns in rot.items():
            v_in = v in members
            for w in ns:
                if v < w and not (v_in and w in members):
                    ds.union(face_of_dart[(v, w)], face_of_dart[(w, v)])
        target = None
        for v in rot:
            if v in members or not rot[v]:
                continue
            cls = ds.find(face_of_dart[(v, rot[v][0])])
            if target is None:
                target = cls
            elif cls != target:
                return False
        return True

    def _outside_class(self, rot, faces, face_of_dart, members: frozenset[int]):
        ds = DisjointSets(range(len(faces)))
        for v, ns in rot.items():
            v_in = v in members
            for w in ns:
                if v < w and not (v_in and w in members):
                    ds.union(face_of_dart[(v, w)], face_of_dart[(w, v)])
        for v in sorted(rot):
            if v not in members and rot[v]:
                return ds, ds.find(face_of_dart[(v, rot[v][0])])
        return ds, None

    # -- augmentation search ---------------------------------------------

    def _merge_clusters(self, k: int, rot: dict[int, list[int]]):
        self._tick()
        if k == len(self.clusters):
            self.augmentations += 1
            faces = trace_faces_simple(rot)
            if not is_planar_rotation(rot, faces):
                return None
            face_of_dart = {}
            for i, face in enumerate(faces):
                for d in face:
                    face_of_dart[d] = i
            for _, members in self.clusters:
                if len(self._components(rot, members)) != 1:
                    raise InternalInvariantError("merge left a cluster disconnected")
                if not self._fce_ok(rot, faces, face_of_dart, members):
                    return None
            return rot
        _, members = self.clusters[k]
        comps = self._components(rot, members)
        if len(comps) == 1:
            return self._merge_clusters(k + 1, rot)

        target = comps[0]
        target_set = set(target)
        graph_comps = self._components(rot)
        comp_of = {}
        for comp in graph_comps:
            for v in comp:
                comp_of[v] = comp[0]

        faces = trace_faces_simple(rot)
        darts_at: dict[int, list[tuple[int, int]]] = {}
        for fi, face in enumerate(faces):
            for pi, (u, _w) in enumerate(face):
                darts_at.setdefault(u, []).append((fi, pi))

        for other in comps[1:]:
            for a in target:
                for b in other:
                    if comp_of.get(a) == comp_of.get(b) and a in comp_of:
                        spots_a = darts_at.get(a, [])
                        spots_b = darts_at.get(b, [])
                        for fa, pa in spots_a:
                            for fb, pb in spots_b:
                                if fa != fb:
                                    continue
                                new_rot = {v: list(ns) for v, ns in rot.items()}
                                face = faces[fa]
                                a_next = face[pa][1]
                                b_next = face[pb][1]
                                new_rot[a].insert(new_rot[a].index(a_next), b)
                                new_rot[b].insert(new_rot[b].index(b_next), a)
                                res = self._merge_clusters(k, new_rot)
                                if res is not None:
                                    return res
                    else:
                        la = max(len(rot[a]), 1)
                        lb = max(len(rot[b]), 1)
                        for ia in range(la):
                            for ib in range(lb):
                                new_rot = {v: list(ns) for v, ns in rot.items()}
                                new_rot[a].insert(ia, b)
                                new_rot[b].insert(ib, a)
                                res = self._merge_clusters(k, new_rot)
                                if res is not None:
                                    return res
        return None

    def run(self):
        """Yield the first accepting (rotation, F) or None."""
        options = []
        for v in range(self.n):
            ns = self.adj[v]
            if len(ns) <= 2:
                options.append([tuple(ns)])
            else:
                options.append([(ns[0],) + p for p in permutations(ns[1:])])
        for combo in product(*options):
            self._tick()
            self.embeddings += 1
            rot = {v: list(combo[v]) for v in range(self.n)}
            faces = trace_faces_simple(rot)
            if not is_planar_rotation(rot, faces):
                continue
            if self.connected:
                face_of_dart = {}
                for i, face in enumerate(faces):
                    for d in face:
                        face_of_dart[d] = i
                # Added edges only refine induced faces, so a cluster whose
                # outside is already split can never be repaired by F.
                if any(
                    not self._fce_ok(rot, faces, face_of_dart, members)
                    for _, members in self.clusters
                ):
                    continue
            res = self._merge_clusters(0, rot)
            if res is not None:
                return res
        return None


def is_c_planar_brute_force(
    cg: ClusteredGraph, budget: SearchBudget | None = None
) -> OracleVerdict:
    """Decide c-planarity exhaustively; emit a validated witness if positive."""
    budget = budget or SearchBudget()
    n = len(cg.vertices)
    e = len(cg.edges)
    non_root = len(cg.tree.internal_nodes) - 1
    if n > budget.max_vertices:
        raise BudgetExceededError(f"{n} vertices exceed cap {budget.max_vertices}")
    if e > budget.max_edges:
        raise BudgetExceededError(f"{e} edges exceed cap {budget.max_edges}")
    if non_root > budget.max_clusters:
        raise BudgetExceededError(
            f"{non_root} non-root clusters exceed cap {budget.max_clusters}"
        )

    t0 = time.monotonic()
    if e == 0:
        witness = CPlanarDrawing(
            frame_vertices=frozenset(cg.vertices),
            frame_edges={},
            rotation={v: () for v in cg.vertices},
            outer_face=None,
            boundary_cycle={},
            host_face={},
            component_host={},
        )
        report = validate_drawing(cg, witness)
        if not report.ok:
            raise InternalInvariantError(f"degenerate witness invalid: {report}")
        return OracleVerdict(True, witness, 0, 0, time.monotonic() - t0)

    if n >= 3 and e > 3 * n - 6:
        return OracleVerdict(False, None, 0, 0, time.monotonic() - t0)

    search = _Search(cg, budget)
    rot = search.run()
    elapsed = time.monotonic() - t0
    if rot is None:
        return OracleVerdict(
            False, None, search.embeddings, search.augmentations, elapsed
        )
    witness = _synthesize_witness(cg, search, rot)
    return OracleVerdict(
        True, witness, search.embeddings, search.augmentations, elapsed
    )


# ---------------------------------------------------------------------------
# Witness synthesis: thread cluster boundaries through the embedding
# ---------------------------------------------------------------------------


def _cluster_cycle(search: _Search, rot: dict[int, list[int]],
                   faces, face_of_dart, members: frozenset[int]) -> list[Edge]:
    """Crossing order around one cluster, walking its outward face."""
    verts = search.verts
    pos = {}
    for v, ns in rot.items():
        for i, w in enumerate(ns):
            pos[(v, w)] = i

    if len(members) == 1:
        (v,) = members
        return [canon_edge(verts[v], verts[w]) for w in rot[v]]

    induced = {v: [w for w in rot[v] if w in members] for v in members}
    ds, outside = search._outside_class(rot, faces, face_of_dart, members)
    if outside is None:
        raise InternalInvariantError("cluster with no outside vertex was threaded")
    orbits = trace_faces_simple(induced)
    walk = None
    for orbit in orbits:
        u, w = orbit[0]
        if ds.find(face_of_dart[(u, w)]) == outside:
            walk = orbit
            break
    if walk is None:
        raise InternalInvariantError("no induced face opens to the outside")

    cycle: list[Edge] = []
    L = len(walk)
    for i in range(L):
        u, v = walk[i]
        _, w = walk[(i + 1) % L]
        ns = rot[v]
        j = (pos[(v, u)] + 1) % len(ns)
        while ns[j] != w:
            nbr = ns[j]
            if nbr in members:
                raise InternalInvariantError("member dart inside an outward sector")
            cycle.append(canon_edge(verts[v], verts[nbr]))
            j = (j + 1) % len(ns)
    return cycle


def _synthesize_witness(cg: ClusteredGraph, search: _Search,
                        rot: dict[int, list[int]]) -> CPlanarDrawing:
    verts = search.verts
    aug_edges = set(cg.edges)
    for v, ns in rot.items():
        for w in ns:
            aug_edges.add(canon_edge(verts[v], verts[w]))
    f_edges = aug_edges - cg.edges
    cg_aug = ClusteredGraph(vertices=cg.vertices, edges=frozenset(aug_edges),
                            tree=cg.tree)

    faces = trace_faces_simple(rot)
    face_of_dart = {}
    for i, face in enumerate(faces):
        for d in face:
            face_of_dart[d] = i

    cycles: dict[str, tuple[Edge, ...]] = {}
    for mu in sorted(cg_aug.tree.internal_nodes):
        if mu == cg_aug.tree.root:
            continue
        members = frozenset(search.vid[v] for v in cg_aug.cluster_vertices(mu))
        if not cg_aug.inter_cluster_edges(mu):
            continue
        cyc = _cluster_cycle(search, rot, faces, face_of_dart, members)
        cycles[mu] = tuple(reversed(cyc))

    vertex_rotation = {
        verts[v]: tuple(canon_edge(verts[v], verts[w]) for w in rot[v])
        for v in range(search.n)
    }
    layout = Layout(vertex_rotation=vertex_rotation, cycle_order=cycles)
    d_aug = build_drawing(cg_aug, layout)
    outer = choose_legal_outer(cg_aug, d_aug)
    from dataclasses import replace

    d_aug = replace(d_aug, outer_face=outer)
    report = validate_drawing(cg_aug, d_aug)
    if not report.ok:
        raise InternalInvariantError(f"augmented witness invalid:\n{report}")

    if not f_edges:
        return d_aug

    final_rotation = {
        v: tuple(e for e in es if e not in f_edges)
        for v, es in vertex_rotation.items()
    }
    final_cycles: dict[str, tuple[Edge, ...]] = {}
    for mu, order in cycles.items():
        kept = tuple(e for e in order if e not in f_edges)
        if kept:
            final_cycles[mu] = kept
    layout_final = Layout(vertex_rotation=final_rotation, cycle_order=final_cycles)
    d_final = build_drawing(cg, layout_final)
    d_final = replace(d_final, outer_face=choose_legal_outer(cg, d_final))
    report = validate_drawing(cg, d_final)
    if not report.ok:
        raise InternalInvariantError(f"witness invalid after dropping F:\n{report}")
    return d_final
