"""Reduction steps and the trace that strings them together.

The trace keeps, for every edge of the instance it started from, the vertex
path that currently replaces it. Each step also records its own per-edge
subdivisions keyed by the edge identity *at the time of the step*, which is
what drawing transfer consumes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InternalInvariantError
from .model import ClusteredGraph, Edge, canon_edge


@dataclass(frozen=True)
class EdgeSubdivision:
    """One edge replaced by a 3-edge path.

    ``path`` runs from ``edge[0]`` to ``edge[1]`` of the canonical edge key;
    ``e_chi`` is always the new vertex adjacent to the endpoint inside the
    removed cluster.
    """

    e_chi: str
    e_phi: str
    path: tuple[str, str, str, str]

    @property
    def inside_endpoint(self) -> str:
        return self.path[0] if self.path[1] == self.e_chi else self.path[3]


@dataclass(frozen=True)
class FlattenStep:
    mu_star: str
    parent_nu: str
    chi: str | None
    phi: str | None
    edge_subdivisions: dict[Edge, EdgeSubdivision]
    promoted_children: tuple[str, ...]

    kind = "flatten"


@dataclass(frozen=True)
class IndependenceStep:
    mu_star: str
    singletons: dict[str, str]
    chi: str | None
    phi: str | None
    edge_subdivisions: dict[Edge, EdgeSubdivision]

    kind = "independence"


Step = FlattenStep | IndependenceStep


@dataclass
class ReductionTrace:
    """Ordered log of reduction steps over one instance."""

    original: ClusteredGraph
    steps: list[Step] = field(default_factory=list)
    edge_path_map: dict[Edge, tuple[str, ...]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.edge_path_map:
            self.edge_path_map = {e: (e[0], e[1]) for e in sorted(self.original.edges)}
        self._segment_owner: dict[Edge, Edge] = {}
        for orig, path in self.edge_path_map.items():
            for a, b in zip(path, path[1:]):
                self._segment_owner[canon_edge(a, b)] = orig

    def record(self, step: Step) -> None:
        """Append a step and splice its subdivisions into the path map."""
        self.steps.append(step)
        for seg, sub in sorted(step.edge_subdivisions.items()):
            owner = self._segment_owner.pop(seg, None)
            if owner is None:
                raise InternalInvariantError(f"step subdivides unknown segment {seg}")
            path = list(self.edge_path_map[owner])
            spliced = False
            for i in range(len(path) - 1):
                if canon_edge(path[i], path[i + 1]) == seg:
                    middle = sub.path[1:3]
                    if path[i] != sub.path[0]:
                        middle = (sub.path[2], sub.path[1])
                    path[i + 1:i + 1] = middle
                    spliced = True
                    break
            if not spliced:
                raise InternalInvariantError(f"segment {seg} not on its owner path")
            new_path = tuple(path)
            self.edge_path_map[owner] = new_path
            for a, b in zip(sub.path, sub.path[1:]):
                self._segment_owner[canon_edge(a, b)] = owner

    def inserted_vertices(self, original_edge: Edge) -> int:
        """Subdivision vertices currently sitting on an original edge."""
        return len(self.edge_path_map[original_edge]) - 2


def recompose_path_map(trace: ReductionTrace) -> dict[Edge, tuple[str, ...]]:
    """Re-derive the path map from the per-step subdivisions alone."""
    fresh = ReductionTrace(original=trace.original)
    for step in trace.steps:
        fresh.record(step)
    return fresh.edge_path_map


def composed_path_map(
    first: dict[Edge, tuple[str, ...]], second: dict[Edge, tuple[str, ...]]
) -> dict[Edge, tuple[str, ...]]:
    """Map edges through two consecutive path maps.

    ``first`` sends original edges to paths in a mid instance; ``second``
    sends mid-instance edges to paths in the final one.
    """
    out: dict[Edge, tuple[str, ...]] = {}
    for orig, path in first.items():
        full: list[str] = [path[0]]
        for a, b in zip(path, path[1:]):
            seg = canon_edge(a, b)
            sub = second.get(seg, seg)
            if sub[0] != a:
                sub = tuple(reversed(sub))
            full.extend(sub[1:])
        out[orig] = tuple(full)
    return out
