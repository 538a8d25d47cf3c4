"""Finite-field incidence matrices for gain graphs over GF(q)+ ⋊ GF(q)*.

Columns follow edge id order; rows are the extra row (index 0) then the
vertices. Entries are reduced residues mod q.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .biased import RankOracle
from .gaingraph import Edge, GainGraph, apply_switching
from .groups import FiniteGroup
from .lifts import FrobeniusContext, LiftedMatroid


@dataclass(frozen=True)
class AffinePair:
    """An element a + bx of the affine group over GF(q); b is never 0."""

    a: int
    b: int

    def __post_init__(self):
        if self.b == 0:
            raise ValueError("the multiplier of an affine pair cannot be 0")


def affine_modulus(group: FiniteGroup) -> int:
    q = group.affine_modulus
    if q is None:
        raise ValueError("group was not built by make_field_affine")
    return q


def affine_pair(group: FiniteGroup, element: int) -> AffinePair:
    q = affine_modulus(group)
    a, b = divmod(element, q - 1)
    return AffinePair(a, b + 1)


def affine_index(group: FiniteGroup, a: int, b: int) -> int:
    q = affine_modulus(group)
    if not 0 < b % q:
        raise ValueError("multiplier must be nonzero mod q")
    return (a % q) * (q - 1) + (b % q) - 1


@dataclass(frozen=True)
class FieldMatrix:
    """Dense matrix over the prime field GF(q), row-major reduced entries."""

    q: int
    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    @classmethod
    def build(cls, q: int, data: Sequence[Sequence[int]]) -> "FieldMatrix":
        rows = len(data)
        cols = len(data[0]) if rows else 0
        ent = []
        for row in data:
            if len(row) != cols:
                raise ValueError("ragged matrix")
            ent.append(tuple(x % q for x in row))
        return cls(q, rows, cols, tuple(ent))

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.entries)

    def scale_column(self, j: int, c: int) -> "FieldMatrix":
        return FieldMatrix.build(
            self.q,
            [
                [x * c if k == j else x for k, x in enumerate(row)]
                for row in self.entries
            ],
        )

    def scale_row(self, i: int, c: int) -> "FieldMatrix":
        data = [list(row) for row in self.entries]
        data[i] = [x * c for x in data[i]]
        return FieldMatrix.build(self.q, data)

    def add_row_multiple(self, target: int, source: int, c: int) -> "FieldMatrix":
        data = [list(row) for row in self.entries]
        data[target] = [x + c * y for x, y in zip(data[target], data[source])]
        return FieldMatrix.build(self.q, data)

    def to_text(self) -> str:
        lines = [f"{self.q} {self.rows} {self.cols}"]
        if self.cols:
            lines.extend(" ".join(str(x) for x in row) for row in self.entries)
        return "\n".join(lines) + "\n"


def incidence_matrix(g: GainGraph) -> FieldMatrix:
    """(|V|+1) x |E| matrix over GF(q) for an affine-group gain graph.

    A non-loop v->w with gain (a, b) gets a in row 0, 1 at v, -b at w; a loop
    gets a in row 0 and 1-b at its vertex.
    """
    q = affine_modulus(g.group)
    edges = sorted(g.edges, key=lambda e: e.id)
    data = [[0] * len(edges) for _ in range(g.vertex_count + 1)]
    for j, e in enumerate(edges):
        pair = affine_pair(g.group, e.gain)
        data[0][j] = pair.a
        if e.is_loop:
            data[1 + e.tail][j] = 1 - pair.b
        else:
            data[1 + e.tail][j] = 1
            data[1 + e.head][j] = -pair.b
    return FieldMatrix.build(q, data)


def matrix_rank_gf(m: FieldMatrix, columns: Optional[Iterable[int]] = None) -> int:
    """Rank of (a column subset of) the matrix by Gaussian elimination mod q."""
    cols = sorted(columns) if columns is not None else list(range(m.cols))
    q = m.q
    work = [[m.entries[i][j] for j in cols] for i in range(m.rows)]
    rank = 0
    for c in range(len(cols)):
        pivot = next((i for i in range(rank, m.rows) if work[i][c] % q), None)
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        inv = pow(work[rank][c], q - 2, q)
        work[rank] = [(x * inv) % q for x in work[rank]]
        for i in range(m.rows):
            if i != rank and work[i][c] % q:
                f = work[i][c]
                work[i] = [(x - f * y) % q for x, y in zip(work[i], work[rank])]
        rank += 1
        if rank == m.rows:
            break
    return rank


class VectorOracle(RankOracle):
    """Rank oracle of a column matroid; ground ids are column indices."""

    def __init__(self, matrix: FieldMatrix, ids: Optional[Sequence[int]] = None):
        self.matrix = matrix
        ids = list(ids) if ids is not None else list(range(matrix.cols))
        if len(ids) != matrix.cols:
            raise ValueError("one ground id per column required")
        self._col_of = {eid: j for j, eid in enumerate(ids)}
        self.ground = tuple(sorted(ids))

    def rank(self, subset: Iterable[int]) -> int:
        return matrix_rank_gf(self.matrix, [self._col_of[i] for i in subset])


def verify_representation(
    ctx: FrobeniusContext,
    g: GainGraph,
    exhaustive_limit: int = 16,
    samples: int = 2000,
    seed: int = 0,
):
    """Compare matrix rank and matroid rank on all (or sampled) subsets.

    Returns (True, None) or (False, witness subset).
    """
    matrix = incidence_matrix(g)
    ids = sorted(e.id for e in g.edges)
    vec = VectorOracle(matrix, ids)
    m = LiftedMatroid(ctx, g)
    if len(ids) <= exhaustive_limit:
        pools: Iterable[tuple[int, ...]] = (
            combo
            for r in range(len(ids) + 1)
            for combo in itertools.combinations(ids, r)
        )
    else:
        rng = random.Random(seed)
        pools = (
            tuple(i for i in ids if rng.random() < 0.5) for _ in range(samples)
        )
    for subset in pools:
        if vec.rank(subset) != m.rank(subset):
            return False, subset
    return True, None


def reorient_edge(g: GainGraph, eid: int) -> GainGraph:
    """Flip the stored orientation of a non-loop; the gain inverts."""
    e = g.edge(eid)
    if e.is_loop:
        raise ValueError("loops have no orientation to flip")
    return g.with_edges(
        Edge(f.id, f.head, f.tail, g.group.inv(f.gain)) if f.id == eid else f
        for f in g.edges
    )


def reorientation_check(g: GainGraph, eid: int) -> bool:
    """Column of the reoriented matrix is -1/b times the original column."""
    q = affine_modulus(g.group)
    before = incidence_matrix(g)
    after = incidence_matrix(reorient_edge(g, eid))
    order = sorted(e.id for e in g.edges)
    j = order.index(eid)
    b = affine_pair(g.group, g.edge(eid).gain).b
    factor = (-pow(b, q - 2, q)) % q
    want = tuple((factor * x) % q for x in before.column(j))
    return after.column(j) == want and all(
        after.column(k) == before.column(k) for k in range(len(order)) if k != j
    )


def scale_gains(g: GainGraph, c: int) -> GainGraph:
    """Replace every gain (a, b) by (ac, b)."""
    q = affine_modulus(g.group)
    if c % q == 0:
        raise ValueError("scale factor must be nonzero mod q")
    out = []
    for e in g.edges:
        pair = affine_pair(g.group, e.gain)
        out.append(Edge(e.id, e.tail, e.head, affine_index(g.group, pair.a * c, pair.b)))
    return g.with_edges(out)


def switching_projective_check(g: GainGraph, eta: Sequence[int]) -> bool:
    """Row/column operations turn A(D, psi) into A(D, switched psi) exactly.

    Per switched vertex v with value (c, d): add -c times row v to row 0,
    multiply row v by d, then scale by d^-1 the columns of loops at v and of
    non-loops oriented away from v.
    """
    q = affine_modulus(g.group)
    matrix = incidence_matrix(g)
    order = sorted(e.id for e in g.edges)
    for v, el in enumerate(eta):
        pair = affine_pair(g.group, el)
        if pair.a == 0 and pair.b == 1:
            continue
        c, d = pair.a, pair.b
        matrix = matrix.add_row_multiple(0, 1 + v, -c)
        matrix = matrix.scale_row(1 + v, d)
        dinv = pow(d, q - 2, q)
        for j, eid in enumerate(order):
            if g.edge(eid).tail == v:
                matrix = matrix.scale_column(j, dinv)
    return matrix == incidence_matrix(apply_switching(g, eta))


def same_affine_part(q: int, p: AffinePair, r: AffinePair) -> bool:
    """Whether two non-translations fix the same point: a(1-d) = c(1-b) mod q."""
    if p.b % q == 1 or r.b % q == 1:
        raise ValueError("translations do not fix a point")
    return (p.a * (1 - r.b)) % q == (r.a * (1 - p.b)) % q
