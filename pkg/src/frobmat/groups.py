"""Finite groups as Cayley tables: constructors, subgroups, Frobenius partitions.

Elements are always the integers 0..order-1 and 0 is the identity; constructors
relabel their natural element sets to keep that invariant.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import LimitExceeded

DEFAULT_GROUP_LIMIT = 96


class FiniteGroup:
    """Immutable group given by its multiplication table.

    ``table[a][b]`` is the product a∘b, ``inverse[a]`` the inverse of a.
    ``affine_modulus`` is set only by :func:`make_field_affine`; it records the
    prime q for which elements decode as pairs (a, b) with b in GF(q)*.
    """

    __slots__ = ("order", "table", "inverse", "labels", "affine_modulus", "_abelian")

    def __init__(
        self,
        table: Sequence[Sequence[int]],
        labels: Optional[Sequence[str]] = None,
        affine_modulus: Optional[int] = None,
    ):
        self.table: tuple[tuple[int, ...], ...] = tuple(tuple(row) for row in table)
        self.order = len(self.table)
        self.inverse: tuple[int, ...] = _inverses_from_table(self.table)
        self.labels = tuple(labels) if labels is not None else None
        self.affine_modulus = affine_modulus
        self._abelian: Optional[bool] = None

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def conjugate(self, g: int, a: int) -> int:
        """Return g^-1 ∘ a ∘ g."""
        t = self.table
        return t[t[self.inverse[g]][a]][g]

    def elements(self) -> range:
        return range(self.order)

    def label(self, a: int) -> str:
        return self.labels[a] if self.labels is not None else str(a)

    def element_order(self, a: int) -> int:
        x, k = a, 1
        while x != 0:
            x = self.table[x][a]
            k += 1
        return k

    @property
    def is_abelian(self) -> bool:
        if self._abelian is None:
            t = self.table
            self._abelian = all(
                t[a][b] == t[b][a] for a in range(self.order) for b in range(a)
            )
        return self._abelian

    def order_profile(self) -> tuple[int, ...]:
        """Sorted element orders; a cheap isomorphism fingerprint."""
        return tuple(sorted(self.element_order(a) for a in self.elements()))

    def __repr__(self) -> str:
        return f"FiniteGroup(order={self.order})"


@dataclass(frozen=True, order=True)
class Subgroup:
    """Strictly increasing element indices, always containing 0."""

    elements: tuple[int, ...]

    def __post_init__(self):
        if not self.elements or self.elements[0] != 0:
            raise ValueError("subgroup must contain the identity 0")
        if list(self.elements) != sorted(set(self.elements)):
            raise ValueError("subgroup elements must be strictly increasing")

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, a: int) -> bool:
        return a in self.element_set

    @property
    def element_set(self) -> frozenset[int]:
        return frozenset(self.elements)


@dataclass(frozen=True)
class FrobeniusPartition:
    """A normal kernel plus a conjugation-closed family of malnormal subgroups.

    Every non-identity group element lies in exactly one of kernel or the
    complements.
    """

    kernel: Subgroup
    complements: tuple[Subgroup, ...]

    def is_nontrivial(self, group_order: int) -> bool:
        nontrivial = (self.kernel.order > 1) + sum(
            1 for a in self.complements if a.order > 1
        )
        return nontrivial >= 2 and self.kernel.order < group_order

    def describe(self, group: FiniteGroup) -> str:
        comp = ",".join(str(a.order) for a in self.complements) or "none"
        return f"kernel size {self.kernel.order}; complement sizes: {comp}"


@dataclass(frozen=True)
class QuotientMap:
    """Projection onto Γ/N with coset-minimum representatives as section."""

    source: FiniteGroup
    normal: Subgroup
    quotient: FiniteGroup
    projection: tuple[int, ...]
    section: tuple[int, ...]


def _inverses_from_table(table: tuple[tuple[int, ...], ...]) -> tuple[int, ...]:
    n = len(table)
    inv = []
    for a in range(n):
        b = table[a].index(0)
        if table[b][a] != 0:
            raise ValueError(f"element {a} has no two-sided inverse")
        inv.append(b)
    return tuple(inv)


def _build(mul, n: int, labels=None, affine_modulus=None) -> FiniteGroup:
    table = [[mul(a, b) for b in range(n)] for a in range(n)]
    return FiniteGroup(table, labels=labels, affine_modulus=affine_modulus)


def make_cyclic(n: int) -> FiniteGroup:
    """Z/n with addition mod n."""
    if n < 1:
        raise ValueError("cyclic group order must be positive")
    return _build(lambda a, b: (a + b) % n, n)


def make_dihedral(two_n: int) -> FiniteGroup:
    """Dihedral group of order 2n; indices 0..n-1 are r^i, n..2n-1 are r^i s.

    Multiplication uses s r = r^-1 s.
    """
    if two_n < 2 or two_n % 2:
        raise ValueError("dihedral order must be a positive even integer")
    n = two_n // 2

    def mul(x: int, y: int) -> int:
        i, p = x % n, x >= n
        j, q = y % n, y >= n
        # r^i s ∘ r^j (s^q) = r^(i-j) s^(1+q); r^i ∘ r^j s^q = r^(i+j) s^q
        k = (i - j) % n if p else (i + j) % n
        return k + (0 if p == q else n)

    labels = [f"r^{i}" for i in range(n)] + [f"r^{i}s" for i in range(n)]
    return _build(mul, two_n, labels=labels)


def _pair_labels(g1: FiniteGroup, g2: FiniteGroup) -> list[str]:
    return [
        f"({g1.label(a)},{g2.label(b)})"
        for a in g1.elements()
        for b in g2.elements()
    ]


def make_direct_product(g1: FiniteGroup, g2: FiniteGroup) -> FiniteGroup:
    """Componentwise product on pairs, indexed lexicographically."""
    trivial = [list(g1.elements())] * g2.order
    return make_semidirect(g1, g2, trivial)


def make_semidirect(
    g1: FiniteGroup, g2: FiniteGroup, action: Sequence[Sequence[int]]
) -> FiniteGroup:
    """Outer semidirect product with (a,b)∘(c,d) = (a + φ_b(c), bd).

    ``action[b]`` is the permutation φ_b of g1's elements; the family must be a
    homomorphism from g2 into Aut(g1). Pairs (a,b) get index a*|g2| + b.
    """
    if len(action) != g2.order:
        raise ValueError("action must give one permutation per element of g2")
    phis = [tuple(p) for p in action]
    for b, phi in enumerate(phis):
        if sorted(phi) != list(g1.elements()):
            raise ValueError(f"action[{b}] is not a permutation of g1")
        if phi[0] != 0:
            raise ValueError(f"action[{b}] does not fix the identity")
        for x in g1.elements():
            for y in g1.elements():
                if phi[g1.mul(x, y)] != g1.mul(phi[x], phi[y]):
                    raise ValueError(
                        f"action[{b}] is not an automorphism: breaks ({b},{x},{y})"
                    )
    if phis[0] != tuple(g1.elements()):
        raise ValueError("action[0] must be the identity automorphism")
    for b in g2.elements():
        for d in g2.elements():
            comp = tuple(phis[b][phis[d][x]] for x in g1.elements())
            if comp != phis[g2.mul(b, d)]:
                raise ValueError(
                    f"action is not a homomorphism: breaks ({b},{d},{g2.mul(b, d)})"
                )

    n2 = g2.order

    def mul(x: int, y: int) -> int:
        a, b = divmod(x, n2)
        c, d = divmod(y, n2)
        return g1.mul(a, phis[b][c]) * n2 + g2.mul(b, d)

    return _build(mul, g1.order * g2.order, labels=_pair_labels(g1, g2))


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n**0.5) + 1))


def make_field_affine(q: int, max_q: int = 101) -> FiniteGroup:
    """GF(q)+ ⋊ GF(q)* with (a,b)∘(c,d) = (a + bc, bd) mod q.

    The pair (a,b) with a in 0..q-1, b in 1..q-1 gets index a*(q-1) + (b-1),
    so the identity (0,1) is index 0. The q cap keeps the dense Cayley table
    affordable.
    """
    if not is_prime(q) or q < 3:
        raise ValueError("field modulus must be a prime >= 3")
    if q > max_q:
        raise ValueError(f"field modulus {q} exceeds the cap {max_q}")

    def mul(x: int, y: int) -> int:
        a, b = divmod(x, q - 1)
        c, d = divmod(y, q - 1)
        b, d = b + 1, d + 1
        return ((a + b * c) % q) * (q - 1) + (b * d) % q - 1

    labels = [f"({a},{b})" for a in range(q) for b in range(1, q)]
    return _build(mul, q * (q - 1), labels=labels, affine_modulus=q)


def make_inversion_extension(g1: FiniteGroup) -> FiniteGroup:
    """g1 ⋊ {1,-1} where -1 acts by inversion; g1 must be abelian of odd order."""
    if g1.order % 2 == 0:
        raise ValueError("base group must have odd order")
    if not g1.is_abelian:
        raise ValueError("base group must be abelian")
    action = [list(g1.elements()), list(g1.inverse)]
    return make_semidirect(g1, make_cyclic(2), action)


def from_table(table: Sequence[Sequence[int]], labels=None) -> FiniteGroup:
    """Validate an arbitrary Cayley table, relabeling so the identity is 0.

    Reports the first violated axiom: closure, associativity, identity,
    inverses.
    """
    n = len(table)
    if n == 0:
        raise ValueError("empty table")
    rows = [list(r) for r in table]
    for i, row in enumerate(rows):
        if len(row) != n:
            raise ValueError(f"table is not square: row {i} has length {len(row)}")
        for x in row:
            if not isinstance(x, int) or not 0 <= x < n:
                raise ValueError(f"not closed: row {i} contains {x!r}")
    for a in range(n):
        for b in range(n):
            for c in range(n):
                if rows[rows[a][b]][c] != rows[a][rows[b][c]]:
                    raise ValueError(f"not associative at triple ({a},{b},{c})")
    ident = None
    for e in range(n):
        if rows[e] == list(range(n)) and all(rows[a][e] == a for a in range(n)):
            ident = e
            break
    if ident is None:
        raise ValueError("no identity element")
    if ident != 0:
        perm = list(range(n))
        perm[0], perm[ident] = ident, 0
        rows = [[perm[rows[perm[a]][perm[b]]] for b in range(n)] for a in range(n)]
        if labels is not None:
            labels = [labels[perm[a]] for a in range(n)]
    for a in range(n):
        if 0 not in rows[a]:
            raise ValueError(f"no inverse for {a}")
        b = rows[a].index(0)
        if rows[b][a] != 0:
            raise ValueError(f"no inverse for {a}")
    return FiniteGroup(rows, labels=labels)


def generated_subgroup(group: FiniteGroup, gens: Iterable[int]) -> Subgroup:
    """Closure of the generators under multiplication and inverse."""
    elems = {0}
    frontier = [0]
    for g in gens:
        if g not in elems:
            elems.add(g)
            frontier.append(g)
    while frontier:
        new = []
        for a in list(elems):
            for b in frontier:
                for c in (group.mul(a, b), group.mul(b, a)):
                    if c not in elems:
                        elems.add(c)
                        new.append(c)
        frontier = new
    return Subgroup(tuple(sorted(elems)))


def is_subgroup(group: FiniteGroup, elements: Iterable[int]) -> bool:
    s = frozenset(elements)
    if 0 not in s:
        return False
    return all(group.mul(a, b) in s for a in s for b in s)


def subgroups(group: FiniteGroup, limit: int = DEFAULT_GROUP_LIMIT) -> list[Subgroup]:
    """All subgroups, sorted by (size, elements)."""
    if group.order > limit:
        raise LimitExceeded(f"group order {group.order} exceeds limit {limit}")
    trivial = Subgroup((0,))
    found = {trivial.elements: trivial}
    frontier = [trivial]
    while frontier:
        h = frontier.pop()
        base = set(h.elements)
        for g in range(1, group.order):
            if g in base:
                continue
            k = generated_subgroup(group, base | {g})
            if k.elements not in found:
                found[k.elements] = k
                frontier.append(k)
    return sorted(found.values(), key=lambda s: (s.order, s.elements))


def conjugate_subgroup(group: FiniteGroup, h: Subgroup, g: int) -> Subgroup:
    return Subgroup(tuple(sorted(group.conjugate(g, a) for a in h.elements)))


def is_normal(group: FiniteGroup, h: Subgroup) -> bool:
    s = h.element_set
    return all(
        group.conjugate(g, a) in s for g in group.elements() for a in h.elements
    )


def is_malnormal(group: FiniteGroup, h: Subgroup) -> bool:
    """True iff every conjugate by an element outside h meets h only in 0."""
    s = h.element_set
    for g in group.elements():
        if g in s:
            continue
        for a in h.elements:
            if a != 0 and group.conjugate(g, a) in s:
                return False
    return True


def _exact_covers(
    target: frozenset[int], candidates: list[Subgroup]
) -> Iterable[tuple[Subgroup, ...]]:
    """Yield families of candidates whose non-identity parts partition target."""
    order = {e: i for i, e in enumerate(sorted(target))}
    parts = [(c, c.element_set - {0}) for c in candidates]

    def rec(uncovered: frozenset[int], start_chosen: tuple[Subgroup, ...]):
        if not uncovered:
            yield start_chosen
            return
        pivot = min(uncovered, key=order.__getitem__)
        for cand, body in parts:
            if pivot in body and body <= uncovered:
                yield from rec(uncovered - body, start_chosen + (cand,))

    yield from rec(target, ())


def _conjugation_closed(group: FiniteGroup, family: Sequence[Subgroup]) -> bool:
    members = {a.elements for a in family}
    return all(
        conjugate_subgroup(group, a, g).elements in members
        for a in family
        for g in group.elements()
    )


def frobenius_partitions(
    group: FiniteGroup, limit: int = DEFAULT_GROUP_LIMIT
) -> list[FrobeniusPartition]:
    """Every partition {kernel} ∪ complements satisfying the invariants.

    Order: the whole-group partition first, then the trivial-kernel one, then
    nontrivial partitions sorted by kernel elements.
    """
    subs = subgroups(group, limit=limit)
    malnormal = [a for a in subs if a.order > 1 and is_malnormal(group, a)]
    out = []
    for n in subs:
        if not is_normal(group, n):
            continue
        if n.order == group.order:
            out.append(FrobeniusPartition(n, ()))
            continue
        rest = frozenset(group.elements()) - n.element_set
        cands = [a for a in malnormal if (a.element_set - {0}) <= rest]
        for family in _exact_covers(rest, cands):
            if _conjugation_closed(group, family):
                out.append(
                    FrobeniusPartition(n, tuple(sorted(family, key=lambda s: s.elements)))
                )

    def key(p: FrobeniusPartition):
        if p.kernel.order == group.order:
            tier = 0
        elif p.kernel.order == 1:
            tier = 1
        else:
            tier = 2
        return (tier, p.kernel.elements)

    return sorted(out, key=key)


def validate_partition(group: FiniteGroup, part: FrobeniusPartition) -> None:
    """Raise ValueError if any FrobeniusPartition invariant fails."""
    if not is_subgroup(group, part.kernel.elements):
        raise ValueError("kernel is not a subgroup")
    if not is_normal(group, part.kernel):
        raise ValueError("kernel is not normal")
    seen: dict[int, int] = {}
    for i, a in enumerate(part.complements):
        if a.order < 2:
            raise ValueError("complements must be nontrivial")
        if not is_subgroup(group, a.elements):
            raise ValueError(f"complement {i} is not a subgroup")
        if not is_malnormal(group, a):
            raise ValueError(f"complement {i} is not malnormal")
        for e in a.elements:
            if e == 0:
                continue
            if e in seen or e in part.kernel:
                raise ValueError(f"element {e} covered twice")
            seen[e] = i
    covered = set(seen) | part.kernel.element_set
    if covered != set(group.elements()):
        missing = sorted(set(group.elements()) - covered)
        raise ValueError(f"elements not covered: {missing}")
    if not _conjugation_closed(group, part.complements):
        raise ValueError("complement family is not conjugation-closed")


def quotient(group: FiniteGroup, normal: Subgroup) -> QuotientMap:
    """Quotient by a normal subgroup with coset-minimum representatives."""
    if not is_normal(group, normal):
        raise ValueError("subgroup is not normal")
    rep = [-1] * group.order
    for a in group.elements():
        if rep[a] >= 0:
            continue
        coset = sorted(group.mul(a, x) for x in normal.elements)
        for c in coset:
            rep[c] = coset[0]
    reps = sorted(set(rep))
    index = {r: i for i, r in enumerate(reps)}
    projection = tuple(index[rep[a]] for a in group.elements())
    table = [
        [projection[group.mul(x, y)] for y in reps]
        for x in reps
    ]
    qgroup = FiniteGroup(table, labels=[group.label(r) for r in reps])
    return QuotientMap(
        source=group,
        normal=normal,
        quotient=qgroup,
        projection=projection,
        section=tuple(reps),
    )


def subgroup_as_group(group: FiniteGroup, sub: Subgroup) -> FiniteGroup:
    """The subgroup as a standalone FiniteGroup; element i is sub.elements[i]."""
    index = {e: i for i, e in enumerate(sub.elements)}
    table = [
        [index[group.mul(a, b)] for b in sub.elements] for a in sub.elements
    ]
    return FiniteGroup(table, labels=[group.label(e) for e in sub.elements])


def find_isomorphism(a: FiniteGroup, b: FiniteGroup) -> Optional[list[int]]:
    """An isomorphism a -> b as an image array, or None.

    Backtracks over images of a small generating sequence, propagating the
    products each choice forces.
    """
    if a.order != b.order:
        return None
    if a.order_profile() != b.order_profile():
        return None
    gens: list[int] = []
    span = {0}
    for x in a.elements():
        if x not in span:
            gens.append(x)
            span = set(generated_subgroup(a, gens).elements)
    by_order: dict[int, list[int]] = {}
    for y in b.elements():
        by_order.setdefault(b.element_order(y), []).append(y)

    def close(mapping: dict[int, int]) -> Optional[dict[int, int]]:
        used = set(mapping.values())
        if len(used) != len(mapping):
            return None
        work = list(mapping)
        known = list(mapping)
        while work:
            p = work.pop()
            for q in list(known):
                for (x, y) in ((p, q), (q, p)):
                    r = a.mul(x, y)
                    img = b.mul(mapping[x], mapping[y])
                    if r in mapping:
                        if mapping[r] != img:
                            return None
                    else:
                        if img in used:
                            return None
                        mapping[r] = img
                        used.add(img)
                        work.append(r)
                        known.append(r)
        return mapping

    def extend(mapping: dict[int, int], i: int) -> Optional[dict[int, int]]:
        if i == len(gens):
            return mapping if len(mapping) == a.order else None
        g = gens[i]
        if g in mapping:
            return extend(mapping, i + 1)
        for y in by_order[a.element_order(g)]:
            if y in mapping.values():
                continue
            nxt = close(dict(mapping) | {g: y})
            if nxt is None:
                continue
            res = extend(nxt, i + 1)
            if res is not None:
                return res
        return None

    full = extend({0: 0}, 0)
    if full is None:
        return None
    return [full[x] for x in a.elements()]


def is_isomorphic(a: FiniteGroup, b: FiniteGroup) -> bool:
    return find_isomorphism(a, b) is not None
