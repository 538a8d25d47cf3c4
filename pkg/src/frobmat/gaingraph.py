"""Multigraphs with group-valued gains: switching, walks, cycles, quotients.

Each edge stores one reference orientation (tail -> head) and a gain; the
reverse orientation carries the inverse gain and is never stored. Loops have
tail == head. Edge ids are stable: minors drop ids but never renumber them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import LimitExceeded
from .groups import FiniteGroup, QuotientMap, make_inversion_extension

DEFAULT_CYCLE_EDGE_LIMIT = 40
DEFAULT_CYCLE_COUNT_LIMIT = 10**6


@dataclass(frozen=True)
class Edge:
    id: int
    tail: int
    head: int
    gain: int

    @property
    def is_loop(self) -> bool:
        return self.tail == self.head


@dataclass(frozen=True)
class Walk:
    """A start vertex plus (edge id, forward?) steps; forward means tail->head."""

    start: int
    steps: tuple[tuple[int, bool], ...]


class GainGraph:
    """Immutable gain graph over a FiniteGroup."""

    def __init__(self, group: FiniteGroup, vertex_count: int, edges: Iterable[Edge]):
        self.group = group
        self.vertex_count = vertex_count
        self.edges: tuple[Edge, ...] = tuple(edges)
        self._by_id = {e.id: e for e in self.edges}
        if len(self._by_id) != len(self.edges):
            raise ValueError("duplicate edge ids")
        for e in self.edges:
            if not (0 <= e.tail < vertex_count and 0 <= e.head < vertex_count):
                raise ValueError(f"edge {e.id} has an endpoint out of range")
            if not 0 <= e.gain < group.order:
                raise ValueError(f"edge {e.id} has gain out of range")

    @classmethod
    def from_triples(
        cls,
        group: FiniteGroup,
        vertex_count: int,
        triples: Sequence[tuple[int, int, int]],
    ) -> "GainGraph":
        """Edges as (tail, head, gain); edge id = position."""
        return cls(
            group,
            vertex_count,
            (Edge(i, t, h, g) for i, (t, h, g) in enumerate(triples)),
        )

    def edge(self, eid: int) -> Edge:
        try:
            return self._by_id[eid]
        except KeyError:
            raise ValueError(f"no edge {eid}") from None

    def edge_ids(self) -> tuple[int, ...]:
        return tuple(e.id for e in self.edges)

    def gain_from(self, eid: int, u: int) -> int:
        """Gain of the orientation leaving u; loops return the stored gain."""
        e = self._by_id[eid]
        if u == e.tail:
            return e.gain
        if u == e.head:
            return self.group.inv(e.gain)
        raise ValueError(f"vertex {u} is not an end of edge {eid}")

    def other_end(self, eid: int, u: int) -> int:
        e = self._by_id[eid]
        if u == e.tail:
            return e.head
        if u == e.head:
            return e.tail
        raise ValueError(f"vertex {u} is not an end of edge {eid}")

    def with_edges(self, edges: Iterable[Edge], vertex_count: Optional[int] = None) -> "GainGraph":
        return GainGraph(
            self.group,
            self.vertex_count if vertex_count is None else vertex_count,
            edges,
        )

    def __repr__(self) -> str:
        return f"GainGraph(|V|={self.vertex_count}, |E|={len(self.edges)})"


def gain_set(g: GainGraph, eid: int) -> frozenset[int]:
    """The one- or two-element set {gain, gain^-1} of an edge."""
    gain = g.edge(eid).gain
    return frozenset((gain, g.group.inv(gain)))


def gain_of_walk(g: GainGraph, walk: Walk) -> int:
    """Ordered product of oriented gains along the walk."""
    group = g.group
    value = 0
    at = walk.start
    for eid, forward in walk.steps:
        e = g.edge(eid)
        u, v = (e.tail, e.head) if forward else (e.head, e.tail)
        if u != at:
            raise ValueError(f"walk step {eid} does not start at vertex {at}")
        value = group.mul(value, e.gain if forward else group.inv(e.gain))
        at = v
    return value


def apply_switching(g: GainGraph, eta: Sequence[int]) -> GainGraph:
    """New gains eta(u)^-1 ∘ gain ∘ eta(v) on every stored orientation."""
    if len(eta) != g.vertex_count:
        raise ValueError("switching function length must equal the vertex count")
    grp = g.group
    return g.with_edges(
        Edge(e.id, e.tail, e.head, grp.mul(grp.mul(grp.inv(eta[e.tail]), e.gain), eta[e.head]))
        for e in g.edges
    )


def normalize_forest(g: GainGraph, forest: Iterable[int], root: int) -> list[int]:
    """A switching function with eta(root) = identity that normalizes the forest.

    Every forest edge has identity gain after apply_switching; forests spanning
    several components are rooted at their least vertex (or at ``root``).
    """
    ids = sorted(set(forest))
    grp = g.group
    adj: dict[int, list[int]] = {}
    for eid in ids:
        e = g.edge(eid)
        if e.is_loop:
            raise ValueError(f"edge {eid} is a loop, not a forest edge")
        adj.setdefault(e.tail, []).append(eid)
        adj.setdefault(e.head, []).append(eid)
    eta = [0] * g.vertex_count
    seen: set[int] = set()
    components = 0
    for r in [root] + sorted(adj):
        if r in seen or r not in adj:
            continue
        components += 1
        seen.add(r)
        stack = [r]
        while stack:
            u = stack.pop()
            for eid in adj[u]:
                v = g.other_end(eid, u)
                if v in seen:
                    continue
                # solve eta(u)^-1 ∘ gain ∘ eta(v) = identity
                eta[v] = grp.mul(grp.inv(g.gain_from(eid, u)), eta[u])
                seen.add(v)
                stack.append(v)
    if len(ids) != len(adj) - components:
        raise ValueError("forest contains a cycle")
    return eta


def _check_cycle(g: GainGraph, cycle: Iterable[int]) -> list[Edge]:
    edges = [g.edge(i) for i in sorted(set(cycle))]
    if not edges:
        raise ValueError("empty edge set is not a cycle")
    deg: dict[int, int] = {}
    for e in edges:
        deg[e.tail] = deg.get(e.tail, 0) + 1
        deg[e.head] = deg.get(e.head, 0) + 1
    if any(d != 2 for d in deg.values()):
        raise ValueError("edge set is not a vertex-simple cycle")
    # connectivity
    verts = set(deg)
    reach = {edges[0].tail}
    changed = True
    while changed:
        changed = False
        for e in edges:
            if (e.tail in reach) != (e.head in reach):
                reach.update((e.tail, e.head))
                changed = True
    if reach != verts:
        raise ValueError("edge set is not connected")
    return edges


def cycle_walk(g: GainGraph, cycle: Iterable[int]) -> Walk:
    """A simple closed walk traversing the cycle once, from its least vertex."""
    edges = _check_cycle(g, cycle)
    if len(edges) == 1 and edges[0].is_loop:
        return Walk(edges[0].tail, ((edges[0].id, True),))
    start = min(min(e.tail, e.head) for e in edges)
    unused = {e.id for e in edges}
    at = start
    steps: list[tuple[int, bool]] = []
    while unused:
        eid = min(i for i in unused if at in (g.edge(i).tail, g.edge(i).head))
        e = g.edge(eid)
        steps.append((eid, at == e.tail))
        at = g.other_end(eid, at)
        unused.discard(eid)
    if at != start:
        raise ValueError("edge set is not a closed cycle")
    return Walk(start, tuple(steps))


def is_balanced_cycle(g: GainGraph, cycle: Iterable[int]) -> bool:
    """True iff a simple closed walk on the cycle has identity gain."""
    return gain_of_walk(g, cycle_walk(g, cycle)) == 0


def enumerate_cycles(
    g: GainGraph,
    max_edges: int = DEFAULT_CYCLE_EDGE_LIMIT,
    max_cycles: int = DEFAULT_CYCLE_COUNT_LIMIT,
) -> list[tuple[int, ...]]:
    """All vertex-simple cycles (loops and digons included) as sorted id tuples.

    Each cycle is found once: its minimal vertex starts the search and the
    first edge id is smaller than the closing edge id.
    """
    if len(g.edges) > max_edges:
        raise LimitExceeded(f"cycle enumeration capped at {max_edges} edges")
    out: list[tuple[int, ...]] = []
    adj: dict[int, list[Edge]] = {}
    for e in g.edges:
        if e.is_loop:
            out.append((e.id,))
            continue
        adj.setdefault(e.tail, []).append(e)
        adj.setdefault(e.head, []).append(e)
    for lst in adj.values():
        lst.sort(key=lambda e: e.id)

    def grow(start: int, at: int, used_vertices: set[int], path: list[int]):
        for e in adj.get(at, ()):
            other = e.head if at == e.tail else e.tail
            if other == start:
                if len(path) >= 1 and e.id > path[0]:
                    out.append(tuple(sorted(path + [e.id])))
                    if len(out) > max_cycles:
                        raise LimitExceeded(f"more than {max_cycles} cycles")
                continue
            if other < start or other in used_vertices:
                continue
            used_vertices.add(other)
            path.append(e.id)
            grow(start, other, used_vertices, path)
            path.pop()
            used_vertices.remove(other)

    for s in sorted(adj):
        grow(s, s, {s}, [])
    return sorted(out)


def quotient_gains(g: GainGraph, qm: QuotientMap) -> GainGraph:
    """Same structure over the quotient group, gains projected."""
    if qm.source is not g.group:
        raise ValueError("quotient map source differs from the graph's group")
    return GainGraph(
        qm.quotient,
        g.vertex_count,
        (Edge(e.id, e.tail, e.head, qm.projection[e.gain]) for e in g.edges),
    )


def complete_gain_graph(group: FiniteGroup, n: int) -> GainGraph:
    """K_n over the group: one edge per vertex pair per element.

    For i < j the edge (i, j, alpha) is oriented i -> j with gain alpha; ids
    are lexicographic in (i, j, alpha).
    """
    if n < 2:
        raise ValueError("complete gain graph needs at least 2 vertices")
    edges = []
    eid = 0
    for i in range(n):
        for j in range(i + 1, n):
            for alpha in group.elements():
                edges.append(Edge(eid, i, j, alpha))
                eid += 1
    return GainGraph(group, n, edges)


def complete_edge_id(group: FiniteGroup, n: int, i: int, j: int, alpha: int) -> int:
    """Edge id of (i, j, alpha) in complete_gain_graph(group, n); needs i < j."""
    if not 0 <= i < j < n:
        raise ValueError("need 0 <= i < j < n")
    pair_index = i * n - i * (i + 1) // 2 + (j - i - 1)
    return pair_index * group.order + alpha


def from_signed_gains(
    base: FiniteGroup,
    vertex_count: int,
    edges: Sequence[tuple[int, int, int, int]],
) -> GainGraph:
    """Gain graph over base ⋊ {1,-1} from (tail, head, base-gain, sign) records.

    Signs are +1 or -1; the pair (a, s) becomes the element indexed 2a + [s<0].
    """
    group = make_inversion_extension(base)
    triples = []
    for (t, h, a, s) in edges:
        if s not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {s}")
        triples.append((t, h, 2 * a + (1 if s == -1 else 0)))
    return GainGraph.from_triples(group, vertex_count, triples)
