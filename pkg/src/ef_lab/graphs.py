"""Finite simple graphs and the predicates the games are judged by."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Graph",
    "PartialMap",
    "InvalidMapError",
    "cycle_graph",
    "complete_graph",
    "empty_graph",
    "random_graph",
    "distance",
    "is_partial_isomorphism",
    "graph_to_json",
    "graph_from_json",
]


class InvalidMapError(ValueError):
    """A partial map repeats a vertex on one of its sides."""


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph on vertices 0..m-1.

    Edges are unordered pairs, stored as (u, v) tuples with u < v.
    """

    m: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.m < 0:
            raise ValueError("vertex count must be nonnegative")
        for e in self.edges:
            u, v = e
            if u == v:
                raise ValueError(f"loop edge {e} not allowed in a simple graph")
            if not (0 <= u < v < self.m):
                raise ValueError(f"edge {e} out of range or not canonically ordered")

    @staticmethod
    def from_edges(m, pairs):
        canon = set()
        for u, v in pairs:
            if u == v:
                raise ValueError(f"loop edge ({u},{v}) not allowed")
            canon.add((min(u, v), max(u, v)))
        return Graph(m, frozenset(canon))

    def adjacent(self, u, v):
        if u > v:
            u, v = v, u
        return (u, v) in self.edges

    def neighbors(self, v):
        return [u for u in range(self.m) if u != v and self.adjacent(u, v)]

    def degree(self, v):
        return sum(1 for e in self.edges if v in e)

    def edge_list(self):
        """Edges as sorted [u, v] lists with u < v (canonical order)."""
        return sorted([u, v] for (u, v) in self.edges)

    def __repr__(self):
        return f"Graph(m={self.m}, edges={len(self.edges)})"


@dataclass(frozen=True)
class PartialMap:
    """An ordered list of (vertex in g1, vertex in g2) pairs.

    Both coordinate lists must be duplicate-free; the games' repeat rule
    makes every map that can arise injective.
    """

    pairs: tuple

    def __post_init__(self):
        left = [a for a, _ in self.pairs]
        right = [b for _, b in self.pairs]
        if len(set(left)) != len(left) or len(set(right)) != len(right):
            raise InvalidMapError(f"repeated vertex in partial map {self.pairs}")

    @staticmethod
    def of(*pairs):
        return PartialMap(tuple(pairs))

    def __len__(self):
        return len(self.pairs)


def cycle_graph(m):
    """The cycle on m >= 3 vertices: i ~ i+1 and 0 ~ m-1."""
    if m < 3:
        raise ValueError(f"cycle graph needs at least 3 vertices, got {m}")
    edges = {(i, i + 1) for i in range(m - 1)}
    edges.add((0, m - 1))
    return Graph(m, frozenset(edges))


def complete_graph(m):
    return Graph(m, frozenset((i, j) for i in range(m) for j in range(i + 1, m)))


def empty_graph(m):
    return Graph(m, frozenset())


def random_graph(m, p, seed):
    """G(m, p): each of the C(m,2) pairs is an edge independently with probability p.

    Pairs are visited in lexicographic (i, j) order, i < j, consuming one
    uniform draw from a PCG64 generator seeded with `seed`; the same seed
    always yields the same graph.
    """
    if not (0.0 <= p <= 1.0):
        raise ValueError(f"edge probability must lie in [0, 1], got {p}")
    rng = np.random.default_rng(seed)
    edges = set()
    for i in range(m):
        for j in range(i + 1, m):
            if rng.random() < p:
                edges.add((i, j))
    return Graph(m, frozenset(edges))


def distance(g, u, v):
    """Shortest-path length between u and v; math.inf when disconnected."""
    if not (0 <= u < g.m and 0 <= v < g.m):
        raise ValueError(f"vertex out of range: {u}, {v} in graph of size {g.m}")
    if u == v:
        return 0
    seen = {u}
    frontier = [u]
    steps = 0
    while frontier:
        steps += 1
        nxt = []
        for w in frontier:
            for x in g.neighbors(w):
                if x == v:
                    return steps
                if x not in seen:
                    seen.add(x)
                    nxt.append(x)
        frontier = nxt
    return math.inf


def is_partial_isomorphism(g1, g2, pmap):
    """True iff the pairs preserve and reflect adjacency between the two graphs."""
    pairs = pmap.pairs if isinstance(pmap, PartialMap) else tuple(pmap)
    left = [a for a, _ in pairs]
    right = [b for _, b in pairs]
    if len(set(left)) != len(left) or len(set(right)) != len(right):
        raise InvalidMapError(f"repeated vertex in partial map {pairs}")
    for a in left:
        if not 0 <= a < g1.m:
            raise ValueError(f"vertex {a} out of range for first graph")
    for b in right:
        if not 0 <= b < g2.m:
            raise ValueError(f"vertex {b} out of range for second graph")
    n = len(pairs)
    for i in range(n):
        for j in range(i + 1, n):
            if g1.adjacent(pairs[i][0], pairs[j][0]) != g2.adjacent(pairs[i][1], pairs[j][1]):
                return False
    return True


def graph_to_json(g):
    return {"m": g.m, "edges": g.edge_list()}


def graph_from_json(obj):
    if isinstance(obj, str):
        obj = json.loads(obj)
    return Graph.from_edges(int(obj["m"]), [(int(u), int(v)) for u, v in obj["edges"]])
