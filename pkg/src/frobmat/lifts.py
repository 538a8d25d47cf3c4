"""The central construction: a linear class of frame-matroid circuits from a
Frobenius partition, the elementary lift it defines, minors, and spikes.

Throughout, a gain graph over a group with partition {kernel} ∪ complements
induces the frame matroid N of its quotient gains, and the matroid here is the
elementary lift of N picked out by the class of circuits whose gains sit, up to
switching, inside a single part.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence

from .biased import (
    BiasedGraph,
    RankOracle,
    _vertices_of,
    frame_circuits,
    is_linear_class,
    minimal_dependent_sets,
    scan_components,
)
from .errors import LimitExceeded
from .gaingraph import (
    Edge,
    GainGraph,
    Walk,
    apply_switching,
    cycle_walk,
    enumerate_cycles,
    gain_of_walk,
    is_balanced_cycle,
    normalize_forest,
    quotient_gains,
)
from .groups import (
    FiniteGroup,
    FrobeniusPartition,
    QuotientMap,
    find_isomorphism,
    quotient,
    subgroup_as_group,
    validate_partition,
)

IDENTITY_PART = -2
KERNEL_PART = -1


class FrobeniusContext:
    """A group with a fixed Frobenius partition and fast part lookup.

    ``part_of[x]`` is IDENTITY_PART for the identity, KERNEL_PART for other
    kernel elements, and the complement index otherwise.
    """

    def __init__(self, group: FiniteGroup, partition: FrobeniusPartition, validate: bool = True):
        if validate:
            validate_partition(group, partition)
        self.group = group
        self.partition = partition
        part = [KERNEL_PART if x in partition.kernel else -3 for x in group.elements()]
        part[0] = IDENTITY_PART
        for i, comp in enumerate(partition.complements):
            for x in comp.elements:
                if x != 0:
                    part[x] = i
        if any(p == -3 for p in part):
            raise ValueError("partition does not cover the group")
        self.part_of = tuple(part)

    def part(self, x: int) -> int:
        return self.part_of[x]

    def in_kernel(self, x: int) -> bool:
        return self.part_of[x] < 0

    @cached_property
    def quotient(self) -> QuotientMap:
        return quotient(self.group, self.partition.kernel)

    def __repr__(self) -> str:
        return (
            f"FrobeniusContext(order={self.group.order}, "
            f"kernel={self.partition.kernel.order}, "
            f"complements={len(self.partition.complements)})"
        )


def _component_flags(ctx: FrobeniusContext, scan) -> tuple[bool, bool]:
    """(quotient-balanced, lift-free) flags of one scanned component.

    A component adds nothing to the lift term exactly when its normalized
    non-tree gains are all the identity, or all fall in one complement part.
    """
    balanced = True
    lift_free = True
    seen_part: Optional[int] = None
    for _, red in scan.nontree:
        p = ctx.part_of[red]
        if p == IDENTITY_PART:
            continue
        balanced = balanced and p == KERNEL_PART
        if p == KERNEL_PART:
            lift_free = False
        elif seen_part is None:
            seen_part = p
        elif p != seen_part:
            lift_free = False
    return balanced, lift_free


class LiftedMatroid(RankOracle):
    """Rank oracle of the constructed elementary lift.

    rank(X) = |V(G[X])| - b(X) + l(X) with b counting quotient-balanced
    components and l the lift bit.
    """

    def __init__(self, ctx: FrobeniusContext, graph: GainGraph):
        if graph.group is not ctx.group:
            raise ValueError("graph group differs from the context group")
        self.ctx = ctx
        self.graph = graph
        self.ground = tuple(sorted(e.id for e in graph.edges))

    def rank(self, subset: Iterable[int]) -> int:
        total = 0
        lifted = 0
        for sc in scan_components(self.graph, subset):
            total += len(sc.vertices)
            balanced, lift_free = _component_flags(self.ctx, sc)
            if balanced:
                total -= 1
            if not lift_free:
                lifted = 1
        return total + lifted

    def underlying_rank(self, subset: Iterable[int]) -> int:
        """Rank in the frame matroid of the quotient gain graph."""
        total = 0
        for sc in scan_components(self.graph, subset):
            total += len(sc.vertices)
            balanced, _ = _component_flags(self.ctx, sc)
            if balanced:
                total -= 1
        return total

    @cached_property
    def quotient_biased(self) -> BiasedGraph:
        return BiasedGraph.from_gain_graph(quotient_gains(self.graph, self.ctx.quotient))

    @cached_property
    def linear_class(self) -> tuple[tuple[int, ...], ...]:
        return tuple(linear_class(self.ctx, self.graph))

    def underlying_oracle(self) -> RankOracle:
        outer = self

        class _Frame(RankOracle):
            ground = outer.ground

            def rank(self, subset):
                return outer.underlying_rank(subset)

        return _Frame()


def matroid_rank(ctx: FrobeniusContext, g: GainGraph, subset: Iterable[int]) -> int:
    return LiftedMatroid(ctx, g).rank(subset)


# ---------------------------------------------------------------------------
# circuit classification and class membership


@dataclass(frozen=True)
class _CircuitShape:
    kind: str  # "cycle" | "theta" | "tight" | "loose"
    cycles: tuple[frozenset[int], ...]
    path: frozenset[int]  # connecting path of a loose handcuff, else empty


def _classify_circuit(ctx: FrobeniusContext, g: GainGraph, circuit: Iterable[int]) -> _CircuitShape:
    ids = sorted(set(circuit))
    scans = scan_components(g, ids)
    if len(scans) != 1:
        raise ValueError("not a frame circuit: restriction is disconnected")
    sub = g.with_edges(g.edge(i) for i in ids)
    cycles = enumerate_cycles(sub)
    deg: dict[int, int] = {}
    for i in ids:
        e = g.edge(i)
        deg[e.tail] = deg.get(e.tail, 0) + 1
        deg[e.head] = deg.get(e.head, 0) + 1
    if any(d < 2 for d in deg.values()):
        raise ValueError("not a frame circuit: a vertex has degree one")
    nullity = len(ids) - len(scans[0].vertices) + 1
    qbal = []
    for c in cycles:
        walk = cycle_walk(g, c)
        qbal.append(ctx.in_kernel(gain_of_walk(g, walk)))
    if nullity == 1:
        if len(cycles) != 1 or set(cycles[0]) != set(ids):
            raise ValueError("not a frame circuit")
        if not qbal[0]:
            raise ValueError("not a frame circuit: unbalanced cycle")
        return _CircuitShape("cycle", (frozenset(ids),), frozenset())
    if nullity != 2:
        raise ValueError("not a frame circuit: nullity is not 1 or 2")
    if any(qbal):
        raise ValueError("not a frame circuit: contains a balanced cycle")
    csets = [frozenset(c) for c in cycles]
    if len(csets) == 3:
        return _CircuitShape("theta", tuple(csets), frozenset())
    if len(csets) != 2:
        raise ValueError("not a frame circuit")
    c1, c2 = csets
    rest = frozenset(ids) - c1 - c2
    if rest:
        if _vertices_of(g, c1) & _vertices_of(g, c2):
            raise ValueError("not a frame circuit")
        return _CircuitShape("loose", (c1, c2), rest)
    if len(_vertices_of(g, c1) & _vertices_of(g, c2)) != 1:
        raise ValueError("not a frame circuit")
    return _CircuitShape("tight", (c1, c2), frozenset())


def class_member(
    ctx: FrobeniusContext,
    g: GainGraph,
    circuit: Iterable[int],
    validate: bool = True,
) -> bool:
    """Whether a circuit of the underlying frame matroid is in the linear class.

    Cycles must be balanced outright; thetas and handcuffs are accepted when,
    after normalizing a spanning tree of the circuit, both leftover gains land
    in the same complement part.
    """
    ids = sorted(set(circuit))
    if validate:
        shape = _classify_circuit(ctx, g, ids)
        if shape.kind == "cycle":
            return is_balanced_cycle(g, ids)
    scans = scan_components(g, ids)
    sc = scans[0]
    if len(sc.nontree) == 1:
        return sc.nontree[0][1] == 0
    parts = [ctx.part_of[red] for _, red in sc.nontree]
    if any(p < 0 for p in parts):
        return False
    return parts[0] == parts[1]


def _walk_around(g: GainGraph, cycle: frozenset[int], start: int) -> Walk:
    """Simple closed walk on a cycle, rebased to start at a given vertex."""
    w = cycle_walk(g, cycle)
    if w.start == start:
        return w
    order = []
    at = w.start
    for eid, forward in w.steps:
        order.append((at, eid, forward))
        at = g.other_end(eid, at)
    pos = next(i for i, (v, _, _) in enumerate(order) if v == start)
    rotated = order[pos:] + order[:pos]
    return Walk(start, tuple((eid, fwd) for _, eid, fwd in rotated))


def _path_walk(g: GainGraph, path: frozenset[int], start: int) -> Walk:
    """Traverse a path edge set beginning at one of its endpoints."""
    remaining = set(path)
    at = start
    steps = []
    while remaining:
        eid = min(
            i for i in remaining if at in (g.edge(i).tail, g.edge(i).head)
        )
        e = g.edge(eid)
        steps.append((eid, at == e.tail))
        at = g.other_end(eid, at)
        remaining.discard(eid)
    return Walk(start, tuple(steps))


def _reverse_walk(g: GainGraph, w: Walk) -> Walk:
    at = w.start
    for eid, _ in w.steps:
        at = g.other_end(eid, at)
    return Walk(at, tuple((eid, not fwd) for eid, fwd in reversed(w.steps)))


def _concat(w1: Walk, w2: Walk) -> Walk:
    return Walk(w1.start, w1.steps + w2.steps)


def _theta_paths(cycles: tuple[frozenset[int], ...]) -> tuple[frozenset[int], ...]:
    c1, c2, c3 = cycles
    return (c1 & c2, c1 & c3, c2 & c3)


def class_member_walks(
    ctx: FrobeniusContext, g: GainGraph, circuit: Iterable[int]
) -> bool:
    """Class membership decided through one cyclic covering pair of walks."""
    w1, w2 = cyclic_covering_pair(ctx, g, circuit)
    counts: dict[int, int] = {}
    for eid, _ in w1.steps + w2.steps:
        counts[eid] = counts.get(eid, 0) + 1
    ids = set(circuit)
    if set(counts) != ids or any(c not in (1, 2) for c in counts.values()):
        raise AssertionError("walk pair does not cover each edge once or twice")
    v1, v2 = gain_of_walk(g, w1), gain_of_walk(g, w2)
    p1, p2 = ctx.part_of[v1], ctx.part_of[v2]
    if p1 < 0 or p2 < 0:
        return False
    return p1 == p2


def cyclic_covering_pair(
    ctx: FrobeniusContext, g: GainGraph, circuit: Iterable[int]
) -> tuple[Walk, Walk]:
    """Two closed walks from a shared vertex, one around each chosen cycle,
    jointly traversing every edge of the circuit once or twice."""
    shape = _classify_circuit(ctx, g, circuit)
    if shape.kind == "cycle":
        raise ValueError("cyclic covering pairs exist only for thetas and handcuffs")
    if shape.kind == "tight":
        c1, c2 = shape.cycles
        shared = _vertices_of(g, c1) & _vertices_of(g, c2)
        v = min(shared)
        return _walk_around(g, c1, v), _walk_around(g, c2, v)
    if shape.kind == "loose":
        c1, c2 = shape.cycles
        pverts = _vertices_of(g, shape.path)
        u = min(pverts & _vertices_of(g, c1))
        w = min(pverts & _vertices_of(g, c2))
        forth = _path_walk(g, shape.path, u)
        return (
            _walk_around(g, c1, u),
            _concat(_concat(forth, _walk_around(g, c2, w)), _reverse_walk(g, forth)),
        )
    p12, p13, p23 = _theta_paths(shape.cycles)
    branch = _vertices_of(g, p12) & _vertices_of(g, p13) & _vertices_of(g, p23)
    u = min(branch)
    walk12 = _path_walk(g, p12, u)
    walk13 = _path_walk(g, p13, u)
    walk23 = _path_walk(g, p23, u)
    w1 = _concat(walk12, _reverse_walk(g, walk13))
    w2 = _concat(walk13, _reverse_walk(g, walk23))
    return w1, w2


def linear_class(
    ctx: FrobeniusContext, g: GainGraph, max_edges: int = 40
) -> list[tuple[int, ...]]:
    """All frame-matroid circuits of the quotient graph admitted by the class."""
    biased = BiasedGraph.from_gain_graph(quotient_gains(g, ctx.quotient))
    out = []
    for circuit in frame_circuits(biased, max_edges=max_edges):
        if class_member(ctx, g, circuit, validate=False):
            out.append(circuit)
    return out


# ---------------------------------------------------------------------------
# bases and circuits


def bases(ctx: FrobeniusContext, g: GainGraph) -> list[tuple[int, ...]]:
    """Bases per the spanning characterization over the underlying frame
    matroid."""
    oracle = LiftedMatroid(ctx, g)
    ground = oracle.ground
    n_rank = oracle.underlying_rank(ground)
    lifted = oracle.rank(ground) - n_rank
    circuits = [frozenset(c) for c in frame_circuits(oracle.quotient_biased)]
    members = {frozenset(c) for c in oracle.linear_class}
    out = []
    if lifted == 0:
        for combo in itertools.combinations(ground, n_rank):
            s = frozenset(combo)
            if oracle.underlying_rank(combo) == n_rank and not any(
                c <= s for c in circuits
            ):
                out.append(combo)
        return out
    for combo in itertools.combinations(ground, n_rank + 1):
        s = frozenset(combo)
        if oracle.underlying_rank(combo) != n_rank:
            continue
        inside = [c for c in circuits if c <= s]
        if len(inside) == 1 and inside[0] not in members:
            out.append(combo)
    return out


def circuits(ctx: FrobeniusContext, g: GainGraph) -> list[tuple[int, ...]]:
    """Circuits: the linear class, plus minimal nullity-two sets avoiding it."""
    oracle = LiftedMatroid(ctx, g)
    n_circuits = [frozenset(c) for c in frame_circuits(oracle.quotient_biased)]
    members = {frozenset(c) for c in oracle.linear_class}
    unions = set()
    for c1, c2 in itertools.combinations(n_circuits, 2):
        u = c1 | c2
        if len(u) - oracle.underlying_rank(u) == 2:
            unions.add(u)
    minimal = [
        u for u in unions if not any(v < u for v in unions)
    ]
    extras = [
        u for u in minimal if not any(c <= u for c in members)
    ]
    out = {tuple(sorted(c)) for c in members} | {tuple(sorted(u)) for u in extras}
    return sorted(out)


# ---------------------------------------------------------------------------
# minors


def delete(ctx: FrobeniusContext, g: GainGraph, eid: int) -> LiftedMatroid:
    """Deletion: drop the edge, ids and vertices untouched."""
    if eid not in {e.id for e in g.edges}:
        raise ValueError(f"no edge {eid}")
    return LiftedMatroid(ctx, g.with_edges(e for e in g.edges if e.id != eid))


def contract_nonloop(ctx: FrobeniusContext, g: GainGraph, eid: int) -> LiftedMatroid:
    """Contraction of a non-loop: switch it to the identity, then merge ends."""
    e = g.edge(eid)
    if e.is_loop:
        raise ValueError(f"edge {eid} is a loop")
    eta = normalize_forest(g, [eid], root=e.tail)
    g2 = apply_switching(g, eta)
    keep, drop = min(e.tail, e.head), max(e.tail, e.head)

    def remap(v: int) -> int:
        if v == drop:
            return keep
        return v - 1 if v > drop else v

    edges = [
        Edge(f.id, remap(f.tail), remap(f.head), f.gain)
        for f in g2.edges
        if f.id != eid
    ]
    return LiftedMatroid(ctx, GainGraph(g.group, g.vertex_count - 1, edges))


def contract_unbalanced_loop(
    ctx: FrobeniusContext, g: GainGraph, eid: int
) -> LiftedMatroid:
    """Contraction of a loop whose gain sits in a complement part.

    Neighbours of the loop's vertex turn into conjugated loops at their other
    end; same-part loops become identity loops; other loops at the vertex get
    the least non-identity kernel element. An identity loop is a matroid loop,
    so it falls back to deletion.
    """
    e = g.edge(eid)
    if not e.is_loop:
        raise ValueError(f"edge {eid} is not a loop")
    if e.gain == 0:
        return delete(ctx, g, eid)
    if ctx.in_kernel(e.gain):
        raise ValueError("loop gain lies in the kernel; use contract_kernel_loop")
    grp = g.group
    v = e.tail
    part = ctx.part(e.gain)
    part_set = ctx.partition.complements[part].element_set
    kernel_rest = [x for x in ctx.partition.kernel.elements if x != 0]
    new_edges = []
    for f in g.edges:
        if f.id == eid:
            continue
        if v not in (f.tail, f.head):
            new_edges.append(f)
        elif not f.is_loop:
            w = f.head if f.tail == v else f.tail
            d = g.gain_from(f.id, v)  # gain of the orientation v -> w
            new_edges.append(Edge(f.id, w, w, grp.mul(grp.mul(grp.inv(d), e.gain), d)))
        elif f.gain in part_set:
            new_edges.append(Edge(f.id, v, v, 0))
        else:
            if not kernel_rest:
                raise ValueError(
                    "loop outside the contracted part needs a non-identity kernel element"
                )
            new_edges.append(Edge(f.id, v, v, kernel_rest[0]))
    return LiftedMatroid(ctx, g.with_edges(new_edges))


def contract_kernel_loop(ctx: FrobeniusContext, g: GainGraph, eid: int) -> LiftedMatroid:
    """Contraction of a non-identity kernel loop.

    Drops the loop and replaces every gain by its quotient image, re-embedded
    into the group through an isomorphism from the quotient onto a complement
    (the identity map when the quotient is trivial).
    """
    e = g.edge(eid)
    if not e.is_loop:
        raise ValueError(f"edge {eid} is not a loop")
    if e.gain == 0 or not ctx.in_kernel(e.gain):
        raise ValueError("loop gain must be a non-identity kernel element")
    qm = ctx.quotient
    if qm.quotient.order == 1:
        embed = [0]
    else:
        embed = None
        for comp in ctx.partition.complements:
            sub = subgroup_as_group(ctx.group, comp)
            iso = find_isomorphism(qm.quotient, sub)
            if iso is not None:
                embed = [comp.elements[iso[x]] for x in qm.quotient.elements()]
                break
        if embed is None:
            raise ValueError(
                "no complement is isomorphic to the quotient; cannot contract"
            )
    new_edges = [
        Edge(f.id, f.tail, f.head, embed[qm.projection[f.gain]])
        for f in g.edges
        if f.id != eid
    ]
    return LiftedMatroid(ctx, g.with_edges(new_edges))


# ---------------------------------------------------------------------------
# spikes, elementary-lift recognition, switching invariance


def build_spike_graph(ctx: FrobeniusContext, r: int) -> tuple[GainGraph, LiftedMatroid]:
    """A doubled r-cycle plus one loop whose lift is an r-spike.

    Each parallel pair holds gains identity and the least non-identity kernel
    element, so every 2-cycle and the loop are unbalanced.
    """
    if r < 3:
        raise ValueError("spikes need r >= 3")
    kernel_rest = [x for x in ctx.partition.kernel.elements if x != 0]
    if not kernel_rest:
        raise ValueError("spike construction needs a nontrivial kernel")
    alpha = kernel_rest[0]
    triples = []
    for i in range(r):
        j = (i + 1) % r
        triples.append((i, j, 0))
        triples.append((i, j, alpha))
    triples.append((0, 0, alpha))
    graph = GainGraph.from_triples(ctx.group, r, triples)
    oracle = LiftedMatroid(ctx, graph)
    ok, _tips = verify_spike(oracle, r)
    if not ok:
        raise AssertionError("constructed graph failed the spike predicate")
    return graph, oracle


def verify_spike(oracle: RankOracle, r: int) -> tuple[bool, tuple[int, ...]]:
    """Check: rank r, 2r+1 elements, simple, and a tip on r three-point lines.

    Returns every element that works as a tip, i.e. pairs the remaining 2r
    elements into r rank-two triples.
    """
    ground = oracle.ground
    if len(ground) != 2 * r + 1 or oracle.full_rank() != r:
        return False, ()
    for x in ground:
        if oracle.rank([x]) != 1:
            return False, ()
    for x, y in itertools.combinations(ground, 2):
        if oracle.rank([x, y]) != 2:
            return False, ()
    tips = []
    for tip in ground:
        rest = [x for x in ground if x != tip]
        partner: dict[int, set[int]] = {x: set() for x in rest}
        for x, y in itertools.combinations(rest, 2):
            if oracle.rank([tip, x, y]) == 2:
                partner[x].add(y)
                partner[y].add(x)
        if all(len(p) == 1 for p in partner.values()):
            tips.append(tip)
    return bool(tips), tuple(tips)


def is_elementary_lift(
    m: RankOracle, host: RankOracle, limit: int = 16
) -> tuple[bool, object]:
    """Decide whether m is an elementary lift of host; recover its class.

    On success returns (True, class); on failure (False, witness) where the
    witness is either a linear-class violation or a subset whose rank the
    two-case formula cannot reproduce.
    """
    if tuple(m.ground) != tuple(host.ground):
        raise ValueError("ground sets differ")
    if len(m.ground) > limit:
        raise LimitExceeded(f"ground set larger than {limit}")
    host_circuits = [frozenset(c) for c in minimal_dependent_sets(host, limit=limit)]
    recovered = {c for c in host_circuits if m.rank(c) == len(c) - 1}
    ok, witness = is_linear_class(host, host_circuits, recovered)
    if not ok:
        return False, witness
    ground = m.ground
    n = len(ground)
    for mask in range(1 << n):
        subset = frozenset(ground[i] for i in range(n) if mask >> i & 1)
        extra = 0
        for c in host_circuits:
            if c <= subset and c not in recovered:
                extra = 1
                break
        if m.rank(subset) != host.rank(subset) + extra:
            return False, tuple(sorted(subset))
    return True, sorted(tuple(sorted(c)) for c in recovered)


def switch_invariance_check(
    ctx: FrobeniusContext, g: GainGraph, eta: Sequence[int]
) -> bool:
    """The linear class is untouched by switching (edge ids are stable)."""
    before = set(linear_class(ctx, g))
    after = set(linear_class(ctx, apply_switching(g, eta)))
    return before == after
