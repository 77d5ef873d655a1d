"""Low-level combinatorial-map helpers.

Two flavors of face tracing live here: one over simple graphs whose darts
are (tail, head) vertex pairs (the oracle's hot path), and one over
multigraphs with explicit edge ids (frame graphs, which contain parallel
boundary edges). Both use the same convention: the dart following (u, v) in
its face leaves v along the rotation successor of the edge that arrived.
"""

from __future__ import annotations

from typing import Hashable, Iterable, Sequence


class DisjointSets:
    def __init__(self, items: Iterable[Hashable] = ()):  # noqa: D107
        self.parent: dict = {x: x for x in items}

    def add(self, x: Hashable) -> None:
        self.parent.setdefault(x, x)

    def find(self, x: Hashable):
        p = self.parent
        root = x
        while p[root] != root:
            root = p[root]
        while p[x] != root:
            p[x], x = root, p[x]
        return root

    def union(self, a: Hashable, b: Hashable) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra

    def classes(self) -> dict:
        out: dict = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return out


# ---------------------------------------------------------------------------
# Simple-graph rotation systems (darts are ordered vertex pairs)
# ---------------------------------------------------------------------------


def trace_faces_simple(rotation: dict[int, Sequence[int]]) -> list[tuple[tuple[int, int], ...]]:
    """Faces of a rotation system over a simple graph.

    ``rotation[v]`` is the cyclic neighbor order at v. Returns each face as
    a tuple of darts (u, v). Isolated vertices contribute no faces.
    """
    pos: dict[tuple[int, int], int] = {}
    for v, nbrs in rotation.items():
        for i, w in enumerate(nbrs):
            pos[(v, w)] = i
    faces = []
    seen: set[tuple[int, int]] = set()
    for start in sorted(pos):
        if start in seen:
            continue
        face = []
        d = start
        while True:
            face.append(d)
            seen.add(d)
            u, v = d
            nbrs = rotation[v]
            d = (v, nbrs[(pos[(v, u)] + 1) % len(nbrs)])
            if d == start:
                break
        faces.append(tuple(face))
    return faces


def is_planar_rotation(rotation: dict[int, Sequence[int]],
                       faces: list[tuple[tuple[int, int], ...]] | None = None) -> bool:
    """Genus-0 check per connected component: V - E + F == 2."""
    if faces is None:
        faces = trace_faces_simple(rotation)
    comp = DisjointSets(rotation.keys())
    for v, nbrs in rotation.items():
        for w in nbrs:
            comp.union(v, w)
    by_comp_v: dict = {}
    by_comp_e: dict = {}
    by_comp_f: dict = {}
    for v, nbrs in rotation.items():
        root = comp.find(v)
        by_comp_v[root] = by_comp_v.get(root, 0) + 1
        by_comp_e[root] = by_comp_e.get(root, 0) + len(nbrs)
    for face in faces:
        root = comp.find(face[0][0])
        by_comp_f[root] = by_comp_f.get(root, 0) + 1
    for root, nv in by_comp_v.items():
        ne = by_comp_e.get(root, 0) // 2
        if ne == 0:
            continue
        if nv - ne + by_comp_f.get(root, 0) != 2:
            return False
    return True


def insert_edge_simple(rotation: dict[int, list[int]], face: Sequence[tuple[int, int]],
                       pa: int, pb: int) -> None:
    """Insert an edge between two darts of one face, in place.

    ``face[pa]`` must leave vertex a, ``face[pb]`` vertex b. The new edge is
    wedged immediately before each of those darts in the rotations, which
    splits the face in two and preserves planarity.
    """
    a, a_next = face[pa]
    b, b_next = face[pb]
    ia = rotation[a].index(a_next)
    rotation[a].insert(ia, b)
    ib = rotation[b].index(b_next)
    rotation[b].insert(ib, a)


# ---------------------------------------------------------------------------
# Multigraph rotation systems (darts are (edge id, tail vertex))
# ---------------------------------------------------------------------------

Dart = tuple[str, str]


def other_end(edges: dict[str, tuple[str, str]], eid: str, v: str) -> str:
    u, w = edges[eid]
    return w if v == u else u


def trace_faces_multi(edges: dict[str, tuple[str, str]],
                      rotation: dict[str, Sequence[str]]) -> list[tuple[Dart, ...]]:
    """Faces of a frame rotation system; darts are (edge id, tail vertex)."""
    pos: dict[Dart, int] = {}
    for v, eids in rotation.items():
        for i, eid in enumerate(eids):
            pos[(eid, v)] = i
    faces = []
    seen: set[Dart] = set()
    for start in sorted(pos):
        if start in seen:
            continue
        face = []
        d = start
        while True:
            face.append(d)
            seen.add(d)
            eid, tail = d
            head = other_end(edges, eid, tail)
            eids = rotation[head]
            nxt = eids[(pos[(eid, head)] + 1) % len(eids)]
            d = (nxt, head)
            if d == start:
                break
        faces.append(tuple(face))
    return faces


class FaceStructure:
    """Traced faces of a frame with lookup maps."""

    def __init__(self, edges: dict[str, tuple[str, str]],
                 rotation: dict[str, Sequence[str]]):
        self.edges = edges
        self.rotation = rotation
        self.faces = trace_faces_multi(edges, rotation)
        self.face_of_dart: dict[Dart, int] = {}
        for i, face in enumerate(self.faces):
            for d in face:
                self.face_of_dart[d] = i

    def faces_of_edge(self, eid: str) -> tuple[int, int]:
        u, v = self.edges[eid]
        return self.face_of_dart[(eid, u)], self.face_of_dart[(eid, v)]

    def faces_at_vertex(self, v: str) -> set[int]:
        return {self.face_of_dart[(eid, v)] for eid in self.rotation.get(v, ())}

    def canonical_dart(self, face_index: int) -> Dart:
        return min(self.faces[face_index])
