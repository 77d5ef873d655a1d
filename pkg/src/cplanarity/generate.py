"""Seeded random instances with planar underlying graphs.

Graphs come from subsampling a random stacked triangulation, keeping a
spanning tree when connectivity is requested, so they are always planar.
The inclusion tree is grown to an exact height with a spine of nested
clusters plus randomly attached extra clusters and leaves.
"""

from __future__ import annotations

import random

from .errors import InfeasibleParametersError
from .model import ClusteredGraph, Edge, InclusionTree, canon_edge


def _triangulation_edges(n: int, rng: random.Random) -> set[tuple[int, int]]:
    edges = {(0, 1), (0, 2), (1, 2)}
    faces = [(0, 1, 2), (0, 1, 2)]  # both sides of the starting triangle
    for k in range(3, n):
        fi = rng.randrange(len(faces))
        a, b, c = faces.pop(fi)
        for x in (a, b, c):
            edges.add((min(x, k), max(x, k)))
        faces.extend([(a, b, k), (b, c, k), (a, c, k)])
    return edges


def generate_random_instance(
    n: int,
    clusters: int,
    height: int,
    edge_density: float = 0.5,
    seed: int = 0,
    connected: bool = True,
) -> ClusteredGraph:
    """Build a random clustered graph; the same seed reproduces it exactly.

    ``clusters`` counts internal tree nodes including the root, ``height``
    is the exact tree height. Infeasible combinations raise.
    """
    if n < 0 or clusters < 1 or height < 0:
        raise InfeasibleParametersError("all parameters must be non-negative")
    if not 0.0 <= edge_density <= 1.0:
        raise InfeasibleParametersError("edge density must lie in [0, 1]")
    if n == 0:
        if clusters != 1 or height != 0:
            raise InfeasibleParametersError("empty graph forces clusters=1, height=0")
        return ClusteredGraph.create(
            [], [], InclusionTree.from_children("root", {"root": []})
        )
    if height < 1:
        raise InfeasibleParametersError("a graph with vertices needs height >= 1")
    if height == 1 and clusters != 1:
        raise InfeasibleParametersError("height 1 admits only the root cluster")
    if clusters < height:
        raise InfeasibleParametersError(
            f"height {height} needs at least {height} clusters"
        )

    rng = random.Random(seed)

    # Cluster skeleton: a spine reaching depth height-1, extras anywhere
    # shallow enough to still own a leaf within the height budget.
    names = ["root"] + [f"c{i}" for i in range(1, clusters)]
    children: dict[str, list[str]] = {m: [] for m in names}
    depth = {"root": 0}
    spine = ["root"]
    for d in range(1, height):
        node = names[d]
        children[spine[-1]].append(node)
        depth[node] = d
        spine.append(node)
    for i in range(height, clusters):
        node = names[i]
        hosts = [m for m in names[:i] if depth[m] <= height - 2]
        host = rng.choice(hosts)
        children[host].append(node)
        depth[node] = depth[host] + 1

    childless = [m for m in names if not children[m]]
    if n < len(childless):
        raise InfeasibleParametersError(
            f"{len(childless)} leafless clusters need at least that many vertices"
        )

    vertices = [f"v{i}" for i in range(n)]
    slots = list(vertices)
    rng.shuffle(slots)
    for m in childless:
        children[m].append(slots.pop())
    for v in slots:
        host = rng.choice(names)
        children[host].append(v)

    tree = InclusionTree.from_children("root", children)

    edges: set[Edge] = set()
    if n == 2:
        if connected or rng.random() < edge_density:
            edges.add(canon_edge("v0", "v1"))
    elif n >= 3:
        tri = sorted(_triangulation_edges(n, rng))
        rng.shuffle(tri)
        parent = list(range(n))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for i, j in tri:
            ri, rj = find(i), find(j)
            keep = rng.random() < edge_density
            if connected and ri != rj:
                keep = True
            if keep:
                parent[ri] = rj
                edges.add(canon_edge(f"v{i}", f"v{j}"))

    return ClusteredGraph.create(vertices, edges, tree)
