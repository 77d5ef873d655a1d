"""Combinatorial c-planar drawings (frame graphs) of clustered instances.

A drawing is encoded as a planar multigraph, the *frame*: graph edges are
subdivided by one crossing vertex per (edge, separating cluster) pair, and
each crossed cluster contributes a cycle of boundary edges through its
crossing vertices. A rotation system plus an outer-face marker pins the
embedding; clusters and components that touch no boundary are placed by
explicit host-face assignments.

The compact form of a drawing is a :class:`Layout`: a cyclic edge order per
graph vertex and a cyclic crossing order per crossed cluster. The frame is
derived from it deterministically, so reductions transfer drawings by
rewriting layouts and rebuilding.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .embedding import Dart, DisjointSets, FaceStructure, other_end
from .errors import DrawingError
from .model import ClusteredGraph, Edge, canon_edge, edge_id


@dataclass(frozen=True)
class CPlanarDrawing:
    """Frame graph plus embedding and placement data."""

    frame_vertices: frozenset[str]
    frame_edges: dict[str, tuple[str, str]]
    rotation: dict[str, tuple[str, ...]]
    outer_face: Dart | None
    boundary_cycle: dict[str, tuple[str, ...]]
    host_face: dict[str, Dart] = field(default_factory=dict)
    component_host: dict[str, Dart] = field(default_factory=dict)

    def face_structure(self) -> FaceStructure:
        return FaceStructure(self.frame_edges, self.rotation)


@dataclass
class Layout:
    """Compact drawing data: everything the frame is derived from."""

    vertex_rotation: dict[str, tuple[Edge, ...]]
    cycle_order: dict[str, tuple[Edge, ...]]
    outer_face: Dart | None = None
    host_face: dict[str, Dart] = field(default_factory=dict)
    component_host: dict[str, Dart] = field(default_factory=dict)


# ---------------------------------------------------------------------------
# Skeleton: the frame structure an instance plus cycle data determines
# ---------------------------------------------------------------------------


def crossing_id(e: Edge, cluster: str) -> str:
    return f"x:{edge_id(e)}:{cluster}"


def segment_id(e: Edge, index: int) -> str:
    return f"s:{edge_id(e)}:{index}"


def boundary_id(cluster: str, index: int) -> str:
    return f"b:{cluster}:{index}"


class Skeleton:
    """Derived frame structure for one instance and one cycle assignment."""

    def __init__(self, cg: ClusteredGraph, cycle_order: dict[str, tuple[Edge, ...]]):
        self.cg = cg
        self.cycle_order = cycle_order
        self.stations: dict[Edge, list[str]] = {}
        self.crossed: dict[str, list[Edge]] = {}
        for e in sorted(cg.edges):
            seps = cg.separating_clusters(e)
            self.stations[e] = seps
            for mu in seps:
                self.crossed.setdefault(mu, []).append(e)

        expected = {mu: sorted(es) for mu, es in self.crossed.items()}
        given = {mu: sorted(es) for mu, es in cycle_order.items()}
        if expected != given:
            raise DrawingError(
                "cycle data does not list each separating edge exactly once per "
                f"cluster; expected {expected}, got {given}"
            )

        self.segments: dict[Edge, list[str]] = {}
        self.frame_edges: dict[str, tuple[str, str]] = {}
        self.vertices: set[str] = set(cg.vertices)
        self.seg_of_edge_end: dict[tuple[Edge, str], str] = {}
        self.graph_edge_of_segment: dict[str, Edge] = {}
        for e in sorted(cg.edges):
            seps = self.stations[e]
            points = [e[0]] + [crossing_id(e, mu) for mu in seps] + [e[1]]
            self.vertices.update(points)
            seg_ids = []
            for i in range(len(points) - 1):
                sid = segment_id(e, i)
                seg_ids.append(sid)
                self.frame_edges[sid] = (points[i], points[i + 1])
                self.graph_edge_of_segment[sid] = e
            self.segments[e] = seg_ids
            self.seg_of_edge_end[(e, e[0])] = seg_ids[0]
            self.seg_of_edge_end[(e, e[1])] = seg_ids[-1]

        self.boundary_edges: dict[str, list[str]] = {}
        self.cluster_of_boundary: dict[str, str] = {}
        for mu, order in sorted(cycle_order.items()):
            xs = [crossing_id(e, mu) for e in order]
            if len(xs) >= 2:
                bids = []
                for i in range(len(xs)):
                    bid = boundary_id(mu, i)
                    bids.append(bid)
                    self.frame_edges[bid] = (xs[i], xs[(i + 1) % len(xs)])
                    self.cluster_of_boundary[bid] = mu
                self.boundary_edges[mu] = bids
            else:
                self.boundary_edges[mu] = []

    def crossing_rotation(self, e: Edge, mu: str) -> tuple[str, ...]:
        """Wheel at a crossing: inside segment, next/prev boundary, outside."""
        seps = self.stations[e]
        j = seps.index(mu)
        seg_before = self.segments[e][j]
        seg_after = self.segments[e][j + 1]
        inside = self.cg.cluster_vertices(mu)
        seg_in, seg_out = (
            (seg_before, seg_after) if e[0] in inside else (seg_after, seg_before)
        )
        order = self.cycle_order[mu]
        if len(order) == 1:
            return (seg_in, seg_out)
        p = order.index(e)
        k = len(order)
        b_next = boundary_id(mu, p)
        b_prev = boundary_id(mu, (p - 1) % k)
        return (seg_in, b_next, seg_out, b_prev)


def build_drawing(cg: ClusteredGraph, layout: Layout) -> CPlanarDrawing:
    """Derive the full frame drawing from a layout."""
    crossed_clusters = {
        mu for mu in cg.tree.internal_nodes
        if mu != cg.tree.root and cg.inter_cluster_edges(mu)
    }
    if set(layout.cycle_order) != crossed_clusters:
        raise DrawingError(
            f"cycle data must cover exactly the crossed clusters; "
            f"missing {sorted(crossed_clusters - set(layout.cycle_order))}, "
            f"extra {sorted(set(layout.cycle_order) - crossed_clusters)}"
        )
    sk = Skeleton(cg, layout.cycle_order)

    rotation: dict[str, tuple[str, ...]] = {}
    if set(layout.vertex_rotation) != set(cg.vertices):
        raise DrawingError("vertex rotations must cover exactly the vertices")
    incident: dict[str, set[Edge]] = {v: set() for v in cg.vertices}
    for e in cg.edges:
        incident[e[0]].add(e)
        incident[e[1]].add(e)
    for v in sorted(cg.vertices):
        edges_at_v = layout.vertex_rotation[v]
        if set(edges_at_v) != incident[v] or len(edges_at_v) != len(incident[v]):
            raise DrawingError(f"rotation at {v!r} is not a permutation of its edges")
        rotation[v] = tuple(sk.seg_of_edge_end[(e, v)] for e in edges_at_v)

    for mu, order in sorted(layout.cycle_order.items()):
        for e in order:
            rotation[crossing_id(e, mu)] = sk.crossing_rotation(e, mu)

    boundary_cycle = {
        mu: tuple(crossing_id(e, mu) for e in order)
        for mu, order in layout.cycle_order.items()
    }
    return CPlanarDrawing(
        frame_vertices=frozenset(sk.vertices),
        frame_edges=dict(sk.frame_edges),
        rotation=rotation,
        outer_face=layout.outer_face,
        boundary_cycle=boundary_cycle,
        host_face=dict(layout.host_face),
        component_host=dict(layout.component_host),
    )


def extract_layout(cg: ClusteredGraph, d: CPlanarDrawing) -> Layout:
    """Recover the compact layout from a frame drawing."""
    cycle_order: dict[str, tuple[Edge, ...]] = {}
    for mu, xs in d.boundary_cycle.items():
        back: dict[str, Edge] = {}
        for e in cg.inter_cluster_edges(mu):
            back[crossing_id(e, mu)] = e
        try:
            cycle_order[mu] = tuple(back[x] for x in xs)
        except KeyError as exc:
            raise DrawingError(f"unknown crossing vertex {exc} in cycle of {mu!r}")
    sk = Skeleton(cg, cycle_order)
    vertex_rotation: dict[str, tuple[Edge, ...]] = {}
    for v in sorted(cg.vertices):
        try:
            vertex_rotation[v] = tuple(
                sk.graph_edge_of_segment[sid] for sid in d.rotation[v]
            )
        except KeyError as exc:
            raise DrawingError(f"rotation of {v!r} references unknown segment {exc}")
    return Layout(
        vertex_rotation=vertex_rotation,
        cycle_order=cycle_order,
        outer_face=d.outer_face,
        host_face=dict(d.host_face),
        component_host=dict(d.component_host),
    )


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


@dataclass
class Violation:
    condition: str
    entity: str
    message: str

    def __str__(self) -> str:
        return f"[{self.condition}] {self.entity}: {self.message}"


@dataclass
class ValidationReport:
    violations: list[Violation]

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        if self.ok:
            return "valid"
        return "\n".join(str(v) for v in self.violations)


class _FrameAnalysis:
    """Face structure plus per-cluster side classifications of a frame."""

    def __init__(self, cg: ClusteredGraph, d: CPlanarDrawing, sk: Skeleton):
        self.cg = cg
        self.d = d
        self.sk = sk
        self.faces = FaceStructure(d.frame_edges, d.rotation)
        self.components = self._components()
        self.comp_of: dict[str, str] = {}
        for rep, members in self.components.items():
            for v in members:
                self.comp_of[v] = rep

    def _components(self) -> dict[str, list[str]]:
        ds = DisjointSets(self.d.frame_vertices)
        for u, v in self.d.frame_edges.values():
            ds.union(u, v)
        out: dict[str, list[str]] = {}
        for v in self.d.frame_vertices:
            out.setdefault(ds.find(v), []).append(v)
        return {min(ms): sorted(ms) for ms in out.values()}

    def expected_inside(self, mu: str) -> set[str]:
        """Frame vertices that must sit strictly inside R(mu)."""
        inside = set(self.cg.cluster_vertices(mu))
        strict_desc = {
            n for n in self.cg.tree.subtree_nodes(mu)
            if n != mu and n in self.cg.tree.internal_nodes
        }
        out = set(inside)
        for e, seps in self.sk.stations.items():
            for nu in seps:
                if nu in strict_desc:
                    out.add(crossing_id(e, nu))
        return out

    def side_classes(self, mu: str) -> tuple[dict[int, int], int] | None:
        """For a cluster with >= 2 crossings: face -> class, and inside class.

        Returns None when the boundary cycle fails to separate its component
        in two (itself a containment violation).
        """
        bids = set(self.sk.boundary_edges[mu])
        ds = DisjointSets(range(len(self.faces.faces)))
        for eid in self.d.frame_edges:
            if eid in bids:
                continue
            f1, f2 = self.faces.faces_of_edge(eid)
            ds.union(f1, f2)
        comp = self.comp_of[self.d.boundary_cycle[mu][0]]
        classes = {
            f for f in range(len(self.faces.faces))
            if self.comp_of[self.faces.faces[f][0][1]] == comp
        }
        reps = {ds.find(f) for f in classes}
        if len(reps) != 2:
            return None
        inside_vertices = self.cg.cluster_vertices(mu)
        inside_class = None
        for v in sorted(inside_vertices):
            fs = self.faces.faces_at_vertex(v)
            if fs:
                inside_class = ds.find(next(iter(fs)))
                break
        if inside_class is None:
            return None
        return {f: ds.find(f) for f in classes}, inside_class

    def hanging_piece(self, mu: str) -> set[str]:
        """For a unique-crossing cluster: frame vertices inside the loop."""
        (e,) = self.sk.cycle_order[mu]
        x = crossing_id(e, mu)
        seps = self.sk.stations[e]
        j = seps.index(mu)
        inside_cluster = self.cg.cluster_vertices(mu)
        seg_in = (
            self.sk.segments[e][j] if e[0] in inside_cluster
            else self.sk.segments[e][j + 1]
        )
        start = other_end(self.d.frame_edges, seg_in, x)
        piece: set[str] = set()
        stack = [start]
        while stack:
            v = stack.pop()
            if v in piece or v == x:
                continue
            piece.add(v)
            for eid in self.d.rotation.get(v, ()):
                stack.append(other_end(self.d.frame_edges, eid, v))
        return piece

    def face_is_fully_inside(self, face_index: int, piece: set[str]) -> bool:
        return all(tail in piece for _, tail in self.faces.faces[face_index])

    def side_machinery(self, mu: str):
        """(kind, data) for region tests: face classes or a hanging piece."""
        if len(self.sk.cycle_order[mu]) == 1:
            piece = self.hanging_piece(mu)
            return ("piece", (piece, set(self.d.boundary_cycle[mu])))
        return ("classes", self.side_classes(mu))

    def face_inside_region(self, face_index: int, mu: str, machinery) -> bool | None:
        kind, data = machinery
        if kind == "piece":
            piece, xs = data
            return self.face_is_fully_inside(face_index, data[0] | xs)
        if data is None:
            return None
        face_class, inside_class = data
        cls = face_class.get(face_index)
        if cls is None:
            return None
        return cls == inside_class

    def effective_face_inside(self, comp_rep: str, mu: str, mu_comp: str,
                              machinery) -> bool | None:
        """Is a floating component inside R(mu), following host chains?

        Returns None on broken chains (cycles, dangling darts).
        """
        cur = comp_rep
        hops = 0
        while True:
            hops += 1
            if hops > len(self.components) + 1:
                return None
            dart = self.d.component_host.get(cur)
            if dart is None:
                return False  # reached the anchor without entering R(mu)
            dart = tuple(dart)
            f = self.faces.face_of_dart.get(dart)
            if f is None:
                return None
            owner = self.comp_of[dart[1]]
            if owner == mu_comp:
                return self.face_inside_region(f, mu, machinery)
            cur = owner


def _euler_ok(analysis: _FrameAnalysis) -> list[str]:
    """Per-component Euler check; returns the failing component reps."""
    bad = []
    for rep, members in analysis.components.items():
        nv = len(members)
        ne = sum(
            1 for u, v in analysis.d.frame_edges.values()
            if analysis.comp_of[u] == rep
        )
        nf = sum(
            1 for face in analysis.faces.faces
            if analysis.comp_of[face[0][1]] == rep
        )
        if ne == 0:
            continue
        if nv - ne + nf != 2:
            bad.append(rep)
    return bad


def validate_drawing(cg: ClusteredGraph, d: CPlanarDrawing) -> ValidationReport:
    """Check a drawing against the c-planarity conditions.

    Structural problems (dangling references, malformed rotations) raise
    :class:`DrawingError`. Semantic failures come back as a report listing
    every violated condition with the offending entity.
    """
    violations: list[Violation] = []

    crossed_expected = {
        mu for mu in cg.tree.internal_nodes
        if mu != cg.tree.root and cg.inter_cluster_edges(mu)
    }

    # Interpret the boundary cycles; anything not mapping back to a known
    # (edge, cluster) pair is structural, duplicates are condition (iii).
    cycle_order: dict[str, tuple[Edge, ...]] = {}
    for mu, xs in sorted(d.boundary_cycle.items()):
        if mu not in cg.tree.internal_nodes or mu == cg.tree.root:
            raise DrawingError(f"boundary cycle for unknown cluster {mu!r}")
        back = {crossing_id(e, mu): e for e in cg.inter_cluster_edges(mu)}
        order: list[Edge] = []
        seen: set[str] = set()
        for x in xs:
            if x not in back:
                raise DrawingError(f"cycle of {mu!r} lists unknown crossing {x!r}")
            if x in seen:
                violations.append(Violation(
                    "condition-iii", mu,
                    f"edge crosses the boundary of {mu!r} more than once ({x})",
                ))
            seen.add(x)
            order.append(back[x])
        missing = set(back) - seen
        if missing:
            violations.append(Violation(
                "condition-i", mu,
                f"separating edges never cross the boundary: {sorted(missing)}",
            ))
        cycle_order[mu] = tuple(order)
    for mu in sorted(crossed_expected - set(d.boundary_cycle)):
        if mu in d.host_face:
            violations.append(Violation(
                "condition-i", mu,
                "cluster with inter-cluster edges has a host face, not a boundary",
            ))
        else:
            violations.append(Violation(
                "condition-i", mu, "crossed cluster has no boundary cycle",
            ))
    if violations:
        return ValidationReport(violations)

    sk = Skeleton(cg, cycle_order)
    if frozenset(sk.vertices) != d.frame_vertices:
        raise DrawingError("frame vertices do not match the derived skeleton")
    if set(sk.frame_edges) != set(d.frame_edges) or any(
        set(sk.frame_edges[k]) != set(d.frame_edges[k]) for k in sk.frame_edges
    ):
        raise DrawingError("frame edges do not match the derived skeleton")
    incident: dict[str, set[str]] = {v: set() for v in d.frame_vertices}
    for eid, (u, v) in d.frame_edges.items():
        incident[u].add(eid)
        incident[v].add(eid)
    for v in d.frame_vertices:
        rot = d.rotation.get(v, ())
        if set(rot) != incident[v] or len(rot) != len(incident[v]):
            raise DrawingError(f"rotation at {v!r} is not a permutation of incident edges")

    analysis = _FrameAnalysis(cg, d, sk)

    for rep in _euler_ok(analysis):
        violations.append(Violation(
            "planarity", rep, "component fails V - E + F = 2 under face tracing",
        ))
    if violations:
        return ValidationReport(violations)

    # Condition (i): every cluster's region contains exactly its own stuff.
    piece_cache: dict[str, set[str]] = {}
    for mu in sorted(cycle_order):
        expected = analysis.expected_inside(mu)
        comp = analysis.comp_of[d.boundary_cycle[mu][0]]
        in_comp = set(analysis.components[comp])
        if len(cycle_order[mu]) == 1:
            piece = analysis.hanging_piece(mu)
            piece_cache[mu] = piece
            wanted = expected & in_comp
            if piece != wanted:
                violations.append(Violation(
                    "condition-i", mu,
                    f"region holds {sorted(piece ^ wanted)} wrongly",
                ))
            stray = expected - in_comp
            for v in sorted(stray):
                host = _resolve_component_host(analysis, v)
                if host is None:
                    violations.append(Violation(
                        "hosting", mu,
                        f"{v!r} must lie inside {mu!r} but floats unhosted",
                    ))
        else:
            sides = analysis.side_classes(mu)
            if sides is None:
                violations.append(Violation(
                    "condition-i", mu, "boundary cycle does not bound a region",
                ))
                continue
            face_class, inside_class = sides
            cycle_vertices = set(d.boundary_cycle[mu])
            for v in sorted(in_comp - cycle_vertices):
                fs = analysis.faces.faces_at_vertex(v)
                if not fs:
                    continue
                cls = {face_class[f] for f in fs}
                if len(cls) > 1:
                    violations.append(Violation(
                        "condition-ii", mu,
                        f"{v!r} touches both sides of the boundary of {mu!r}",
                    ))
                    continue
                is_inside = cls.pop() == inside_class
                if is_inside != (v in expected):
                    where = "inside" if is_inside else "outside"
                    violations.append(Violation(
                        "condition-i", mu, f"{v!r} drawn {where} R({mu})",
                    ))

    # Hosted placement of crossing-free clusters and floating components.
    for mu in sorted(cg.tree.internal_nodes):
        if mu == cg.tree.root or mu in cycle_order:
            continue
        if cg.inter_cluster_edges(mu):
            continue  # already reported above
        if len(cg.vertices) and mu not in d.host_face:
            violations.append(Violation(
                "hosting", mu, "crossing-free cluster has no host face",
            ))

    # Outer face legality: not inside any region.
    has_edges = bool(d.frame_edges)
    if has_edges and d.outer_face is None:
        violations.append(Violation("outer-face", "-", "no outer face designated"))
    elif d.outer_face is not None:
        f = analysis.faces.face_of_dart.get(tuple(d.outer_face))
        if f is None:
            raise DrawingError(f"outer face dart {d.outer_face} not in frame")
        for mu in sorted(cycle_order):
            if len(cycle_order[mu]) == 1:
                piece = piece_cache.get(mu, analysis.hanging_piece(mu))
                if analysis.face_is_fully_inside(f, piece | {d.boundary_cycle[mu][0]}):
                    violations.append(Violation(
                        "outer-face", mu, "outer face lies inside R({})".format(mu),
                    ))
            else:
                sides = analysis.side_classes(mu)
                if sides is None:
                    continue
                face_class, inside_class = sides
                if face_class.get(f) == inside_class:
                    violations.append(Violation(
                        "outer-face", mu, f"outer face lies inside R({mu})",
                    ))
    return ValidationReport(violations)


def _resolve_component_host(analysis: _FrameAnalysis, v: str) -> Dart | None:
    rep = analysis.comp_of.get(v)
    if rep is None:
        return None
    return analysis.d.component_host.get(rep)


def choose_legal_outer(cg: ClusteredGraph, d: CPlanarDrawing) -> Dart | None:
    """Pick the canonically first face that no cluster region encloses."""
    if not d.frame_edges:
        return None
    layout_cycles: dict[str, tuple[Edge, ...]] = {}
    for mu, xs in d.boundary_cycle.items():
        back = {crossing_id(e, mu): e for e in cg.inter_cluster_edges(mu)}
        layout_cycles[mu] = tuple(back[x] for x in xs)
    sk = Skeleton(cg, layout_cycles)
    analysis = _FrameAnalysis(cg, d, sk)
    sides = {}
    pieces = {}
    for mu in layout_cycles:
        if len(layout_cycles[mu]) == 1:
            pieces[mu] = analysis.hanging_piece(mu)
        else:
            sides[mu] = analysis.side_classes(mu)
    for f in range(len(analysis.faces.faces)):
        ok = True
        for mu, s in sides.items():
            if s is None:
                continue
            face_class, inside_class = s
            if face_class.get(f) == inside_class:
                ok = False
                break
        if ok:
            for mu, piece in pieces.items():
                x = analysis.d.boundary_cycle[mu][0]
                if analysis.face_is_fully_inside(f, piece | {x}):
                    ok = False
                    break
        if ok:
            return analysis.faces.canonical_dart(f)
    return None
