"""Biased graphs and their matroids: frame/lift rank oracles, circuit families,
the theta property, linear classes, and the elementary-lift rank construction.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

from .errors import LimitExceeded
from .gaingraph import GainGraph, enumerate_cycles, is_balanced_cycle

DEFAULT_GROUND_LIMIT = 20
DEFAULT_AXIOM_LIMIT = 16


@dataclass(frozen=True)
class ComponentScan:
    """One connected component of a restriction, with a normalized BFS tree.

    ``nontree`` holds (edge id, reduced gain): the gain the edge would carry
    after switching by the tree-normalizing function.
    """

    vertices: tuple[int, ...]
    edge_ids: tuple[int, ...]
    tree_ids: frozenset[int]
    nontree: tuple[tuple[int, int], ...]


def scan_components(g: GainGraph, subset: Iterable[int]) -> list[ComponentScan]:
    """Deterministic BFS decomposition of the restriction to ``subset``.

    Trees are rooted at the least vertex of each component and grown in edge id
    order.
    """
    ids = sorted(set(subset))
    edges = [g.edge(i) for i in ids]
    grp = g.group
    adj: dict[int, list] = {}
    for e in edges:
        adj.setdefault(e.tail, [])
        adj.setdefault(e.head, [])
        if not e.is_loop:
            adj[e.tail].append(e)
            adj[e.head].append(e)
    for lst in adj.values():
        lst.sort(key=lambda e: e.id)
    eta: dict[int, int] = {}
    comp_of: dict[int, int] = {}
    comps: list[list[int]] = []
    tree: set[int] = set()
    for v0 in sorted(adj):
        if v0 in eta:
            continue
        comp = len(comps)
        comps.append([v0])
        eta[v0] = 0
        comp_of[v0] = comp
        queue = deque([v0])
        while queue:
            u = queue.popleft()
            for e in adj[u]:
                w = e.head if u == e.tail else e.tail
                if w in eta:
                    continue
                gain_uw = e.gain if u == e.tail else grp.inv(e.gain)
                eta[w] = grp.mul(grp.inv(gain_uw), eta[u])
                comp_of[w] = comp
                comps[comp].append(w)
                tree.add(e.id)
                queue.append(w)
    out = []
    edges_by_comp: dict[int, list] = {i: [] for i in range(len(comps))}
    for e in edges:
        edges_by_comp[comp_of[e.tail]].append(e)
    for i, verts in enumerate(comps):
        nontree = []
        for e in edges_by_comp[i]:
            if e.id in tree:
                continue
            reduced = grp.mul(grp.mul(grp.inv(eta[e.tail]), e.gain), eta[e.head])
            nontree.append((e.id, reduced))
        out.append(
            ComponentScan(
                vertices=tuple(verts),
                edge_ids=tuple(e.id for e in edges_by_comp[i]),
                tree_ids=frozenset(e.id for e in edges_by_comp[i] if e.id in tree),
                nontree=tuple(nontree),
            )
        )
    return out


class BiasedGraph:
    """A multigraph plus its set of balanced cycles.

    Balance is either derived from the carried gain function or given as an
    explicit cycle set (used to exercise classes that no gain function
    produces).
    """

    def __init__(self, graph: GainGraph, balanced: Optional[Iterable[Iterable[int]]]):
        self.graph = graph
        self.balanced: Optional[frozenset[frozenset[int]]] = (
            None
            if balanced is None
            else frozenset(frozenset(c) for c in balanced)
        )

    @classmethod
    def from_gain_graph(cls, graph: GainGraph) -> "BiasedGraph":
        return cls(graph, None)

    @classmethod
    def from_balanced_set(
        cls, graph: GainGraph, balanced: Iterable[Iterable[int]]
    ) -> "BiasedGraph":
        return cls(graph, balanced)

    @property
    def gain_derived(self) -> bool:
        return self.balanced is None

    def cycle_is_balanced(self, cycle: Iterable[int]) -> bool:
        if self.balanced is None:
            return is_balanced_cycle(self.graph, cycle)
        return frozenset(cycle) in self.balanced

    def restrict(self, subset: Iterable[int]) -> "BiasedGraph":
        keep = set(subset)
        sub = self.graph.with_edges(e for e in self.graph.edges if e.id in keep)
        if self.balanced is None:
            return BiasedGraph(sub, None)
        return BiasedGraph(sub, (c for c in self.balanced if c <= keep))

    def component_balanced(self, scan: ComponentScan) -> bool:
        """All cycles of the component balanced."""
        if self.balanced is None:
            return all(red == 0 for _, red in scan.nontree)
        if not scan.nontree:
            return True
        sub = self.graph.with_edges(self.graph.edge(i) for i in scan.edge_ids)
        return all(
            frozenset(c) in self.balanced for c in enumerate_cycles(sub)
        )


class RankOracle:
    """A ground set of edge ids plus a rank function on id subsets."""

    ground: tuple[int, ...]

    def rank(self, subset: Iterable[int]) -> int:
        raise NotImplementedError

    def full_rank(self) -> int:
        return self.rank(self.ground)


class FuncOracle(RankOracle):
    def __init__(self, ground: Iterable[int], fn: Callable[[frozenset[int]], int]):
        self.ground = tuple(sorted(ground))
        self._fn = fn

    def rank(self, subset: Iterable[int]) -> int:
        return self._fn(frozenset(subset))


def frame_rank(b: BiasedGraph, subset: Iterable[int]) -> int:
    """|V(G[X])| minus the number of balanced components."""
    total = 0
    for sc in scan_components(b.graph, subset):
        total += len(sc.vertices)
        if b.component_balanced(sc):
            total -= 1
    return total


def graphic_rank(g: GainGraph, subset: Iterable[int]) -> int:
    total = 0
    for sc in scan_components(g, subset):
        total += len(sc.vertices) - 1
    return total


def lift_rank(b: BiasedGraph, subset: Iterable[int]) -> int:
    """Graphic rank, plus one iff the restriction has an unbalanced cycle."""
    total = 0
    lifted = 0
    for sc in scan_components(b.graph, subset):
        total += len(sc.vertices) - 1
        if not b.component_balanced(sc):
            lifted = 1
    return total + lifted


class FrameOracle(RankOracle):
    def __init__(self, biased: BiasedGraph):
        self.biased = biased
        self.ground = tuple(sorted(e.id for e in biased.graph.edges))

    def rank(self, subset: Iterable[int]) -> int:
        return frame_rank(self.biased, subset)


class LiftOracle(RankOracle):
    def __init__(self, biased: BiasedGraph):
        self.biased = biased
        self.ground = tuple(sorted(e.id for e in biased.graph.edges))

    def rank(self, subset: Iterable[int]) -> int:
        return lift_rank(self.biased, subset)


class GraphicOracle(RankOracle):
    def __init__(self, graph: GainGraph):
        self.graph = graph
        self.ground = tuple(sorted(e.id for e in graph.edges))

    def rank(self, subset: Iterable[int]) -> int:
        return graphic_rank(self.graph, subset)


class ClassLiftOracle(RankOracle):
    """Elementary lift of a frame matroid given by an explicit linear class.

    The lift term inspects only the circuits of the restriction, so rank
    queries stay local; the class set must list every member as a sorted edge
    id collection.
    """

    def __init__(self, biased: BiasedGraph, members: Iterable[Iterable[int]]):
        self.biased = biased
        self.members = frozenset(frozenset(c) for c in members)
        self.ground = tuple(sorted(e.id for e in biased.graph.edges))

    def rank(self, subset: Iterable[int]) -> int:
        sub = self.biased.restrict(subset)
        base = 0
        lifted = 0
        for sc in scan_components(sub.graph, [e.id for e in sub.graph.edges]):
            base += len(sc.vertices)
            if sub.component_balanced(sc):
                base -= 1
        if any(
            frozenset(c) not in self.members
            for c in frame_circuits(sub)
        ):
            lifted = 1
        return base + lifted


def _vertices_of(g: GainGraph, ids: Iterable[int]) -> frozenset[int]:
    verts = set()
    for i in ids:
        e = g.edge(i)
        verts.add(e.tail)
        verts.add(e.head)
    return frozenset(verts)


def _connecting_paths(
    g: GainGraph,
    avoid_edges: frozenset[int],
    v1: frozenset[int],
    v2: frozenset[int],
) -> list[tuple[int, ...]]:
    """Simple paths from v1 to v2 meeting them only at the endpoints."""
    adj: dict[int, list] = {}
    for e in g.edges:
        if e.id in avoid_edges or e.is_loop:
            continue
        adj.setdefault(e.tail, []).append(e)
        adj.setdefault(e.head, []).append(e)
    for lst in adj.values():
        lst.sort(key=lambda e: e.id)
    paths: list[tuple[int, ...]] = []

    def grow(at: int, interior: set[int], path: list[int]):
        for e in adj.get(at, ()):
            other = e.head if at == e.tail else e.tail
            if other in v1 or other in interior:
                continue
            if other in v2:
                paths.append(tuple(sorted(path + [e.id])))
                continue
            interior.add(other)
            path.append(e.id)
            grow(other, interior, path)
            path.pop()
            interior.remove(other)

    for s in sorted(v1):
        grow(s, set(), [])
    return paths


def _thetas(
    b: BiasedGraph, cycles: Sequence[tuple[int, ...]]
) -> list[tuple[frozenset[int], tuple[frozenset[int], frozenset[int], frozenset[int]]]]:
    """All theta subgraphs as (edge union, three constituent cycles)."""
    sets = [frozenset(c) for c in cycles]
    members = set(sets)
    seen: set[frozenset[int]] = set()
    out = []
    for c1, c2 in itertools.combinations(sets, 2):
        if not (c1 & c2):
            continue
        union = c1 | c2
        if union in seen:
            continue
        if len(union) != len(_vertices_of(b.graph, union)) + 1:
            continue
        third = c1 ^ c2
        if third not in members:
            continue
        seen.add(union)
        out.append((union, (c1, c2, third)))
    return out


def theta_property_check(b: BiasedGraph, max_edges: int = 40):
    """(True, None), or (False, witness) with a theta holding exactly two
    balanced cycles."""
    cycles = enumerate_cycles(b.graph, max_edges=max_edges)
    for union, triple in _thetas(b, cycles):
        flags = [b.cycle_is_balanced(c) for c in triple]
        if sum(flags) == 2:
            return False, tuple(sorted(tuple(sorted(c)) for c in triple))
    return True, None


def _circuit_families(b: BiasedGraph, loose_mode: str, max_edges: int):
    """Balanced cycles plus the unbalanced-pair families.

    ``loose_mode`` picks the fourth family: "paths" gives loose handcuffs
    (frame), "disjoint" gives vertex-disjoint pairs (lift).
    """
    cycles = enumerate_cycles(b.graph, max_edges=max_edges)
    balanced = {frozenset(c) for c in cycles if b.cycle_is_balanced(c)}
    circuits: set[frozenset[int]] = set(balanced)
    unbalanced = [frozenset(c) for c in cycles if frozenset(c) not in balanced]
    vsets = {c: _vertices_of(b.graph, c) for c in unbalanced}
    for c1, c2 in itertools.combinations(unbalanced, 2):
        shared_edges = c1 & c2
        if shared_edges:
            union = c1 | c2
            if len(union) != len(_vertices_of(b.graph, union)) + 1:
                continue
            third = c1 ^ c2
            if third in balanced:
                continue
            circuits.add(union)
            continue
        common = vsets[c1] & vsets[c2]
        if len(common) == 1:
            circuits.add(c1 | c2)
        elif not common:
            if loose_mode == "disjoint":
                circuits.add(c1 | c2)
            else:
                for path in _connecting_paths(b.graph, c1 | c2, vsets[c1], vsets[c2]):
                    circuits.add(c1 | c2 | frozenset(path))
    return sorted(tuple(sorted(c)) for c in circuits)


def frame_circuits(b: BiasedGraph, max_edges: int = 40) -> list[tuple[int, ...]]:
    """Balanced cycles, unbalanced tight/loose handcuffs, unbalanced thetas."""
    return _circuit_families(b, "paths", max_edges)


def lift_circuits(b: BiasedGraph, max_edges: int = 40) -> list[tuple[int, ...]]:
    """Like frame circuits, with vertex-disjoint unbalanced pairs instead of
    loose handcuffs."""
    return _circuit_families(b, "disjoint", max_edges)


def is_linear_class(
    host: RankOracle,
    host_circuits: Iterable[Iterable[int]],
    cand: Iterable[Iterable[int]],
):
    """Check the modular-pair closure; returns (ok, witness).

    The witness is (C1, C2, C): a modular pair from the candidate class and a
    host circuit in its union that the class misses.
    """
    circuits = sorted({frozenset(c) for c in host_circuits}, key=sorted)
    circuit_set = set(circuits)
    members = {frozenset(c) for c in cand}
    for c in members:
        if c not in circuit_set:
            raise ValueError(f"candidate {sorted(c)} is not a circuit of the host")
    mem_list = sorted(members, key=sorted)
    for c1, c2 in itertools.combinations(mem_list, 2):
        union = c1 | c2
        if len(union) - host.rank(union) != 2:
            continue
        for c in circuits:
            if c <= union and c not in members:
                return False, (tuple(sorted(c1)), tuple(sorted(c2)), tuple(sorted(c)))
    return True, None


def brylawski_lift(
    host: RankOracle,
    host_circuits: Iterable[Iterable[int]],
    linear_class: Iterable[Iterable[int]],
) -> RankOracle:
    """Rank oracle of the elementary lift defined by a linear class.

    rank(X) = host rank, plus one unless every host circuit inside X belongs
    to the class. Rejects classes that fail the modular-pair condition.
    """
    circuits = [frozenset(c) for c in host_circuits]
    members = {frozenset(c) for c in linear_class}
    ok, witness = is_linear_class(host, circuits, members)
    if not ok:
        raise ValueError(f"not a linear class; modular-pair witness {witness}")

    def rank(x: frozenset[int]) -> int:
        extra = 0
        for c in circuits:
            if c <= x and c not in members:
                extra = 1
                break
        return host.rank(x) + extra

    return FuncOracle(host.ground, rank)


def minimal_dependent_sets(
    oracle: RankOracle, limit: int = DEFAULT_GROUND_LIMIT
) -> list[tuple[int, ...]]:
    """All inclusion-minimal X with rank(X) < |X|, by exhaustive search."""
    ground = oracle.ground
    if len(ground) > limit:
        raise LimitExceeded(f"ground set larger than {limit}")
    found: list[frozenset[int]] = []
    for size in range(1, len(ground) + 1):
        for combo in itertools.combinations(ground, size):
            s = frozenset(combo)
            if any(c <= s for c in found):
                continue
            if oracle.rank(combo) < size:
                found.append(s)
    return sorted(tuple(sorted(c)) for c in found)


def rank_table(oracle: RankOracle, limit: int = DEFAULT_AXIOM_LIMIT) -> dict[int, int]:
    """Rank of every subset, keyed by bitmask over the sorted ground set."""
    ground = oracle.ground
    m = len(ground)
    if m > limit:
        raise LimitExceeded(f"ground set larger than {limit}")
    table: dict[int, int] = {}
    for mask in range(1 << m):
        subset = [ground[i] for i in range(m) if mask >> i & 1]
        table[mask] = oracle.rank(subset)
    return table


def matroid_axiom_check(oracle: RankOracle, limit: int = DEFAULT_AXIOM_LIMIT):
    """Verify r(∅)=0, unit increase, and local submodularity on all subsets.

    Returns (True, None) or (False, witness) where the witness names the first
    violated axiom and the subset involved.
    """
    ground = oracle.ground
    m = len(ground)
    table = rank_table(oracle, limit=limit)
    if table[0] != 0:
        return False, ("empty", (), table[0])
    for mask in range(1 << m):
        r = table[mask]
        for i in range(m):
            if mask >> i & 1:
                continue
            step = table[mask | 1 << i] - r
            if step < 0 or step > 1:
                return False, (
                    "unit",
                    tuple(ground[k] for k in range(m) if mask >> k & 1),
                    ground[i],
                )
    for mask in range(1 << m):
        r = table[mask]
        free = [i for i in range(m) if not mask >> i & 1]
        for a, b in itertools.combinations(free, 2):
            if (
                table[mask | 1 << a] + table[mask | 1 << b]
                < table[mask | 1 << a | 1 << b] + r
            ):
                return False, (
                    "submodular",
                    tuple(ground[k] for k in range(m) if mask >> k & 1),
                    (ground[a], ground[b]),
                )
    return True, None
