"""Brute-force finite abelian groups.

Elements are integer tuples reduced modulo ``moduli``.  Subgroups are
explicit element sets; nothing here knows about Hermite forms.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import prod
from typing import Iterable, Sequence

from sympy import factorint

from ..core import GroupShape

DEFAULT_BUDGET = 10**6

Element = tuple[int, ...]


class BudgetExceeded(RuntimeError):
    def __init__(self, needed: int, budget: int):
        self.needed = needed
        self.budget = budget
        super().__init__(f"budget exceeded: needs more than {budget} (at least {needed})")


@dataclass(frozen=True)
class FiniteAbelianGroup:
    moduli: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "moduli", tuple(int(m) for m in self.moduli))
        if any(m < 1 for m in self.moduli):
            raise ValueError("moduli must be positive")

    @classmethod
    def of_shape(cls, shape: GroupShape | Sequence[int]) -> FiniteAbelianGroup:
        return cls(tuple(shape))

    @property
    def order(self) -> int:
        return prod(self.moduli)

    @property
    def zero(self) -> Element:
        return (0,) * len(self.moduli)

    def elements(self) -> list[Element]:
        return list(itertools.product(*(range(m) for m in self.moduli)))

    def add(self, x: Element, y: Element) -> Element:
        return tuple((a + b) % m for a, b, m in zip(x, y, self.moduli))

    def neg(self, x: Element) -> Element:
        return tuple(-a % m for a, m in zip(x, self.moduli))

    def scale(self, k: int, x: Element) -> Element:
        return tuple(k * a % m for a, m in zip(x, self.moduli))

    def reduce(self, x: Sequence[int]) -> Element:
        return tuple(a % m for a, m in zip(x, self.moduli))

    def element_order(self, x: Element) -> int:
        n, y = 1, x
        while any(y):
            y = self.add(y, x)
            n += 1
        return n

    def span(self, gens: Iterable[Element]) -> frozenset[Element]:
        """Subgroup generated by ``gens``."""
        current = {self.zero}
        for g in gens:
            g = self.reduce(g)
            # S + <g> is the union of the cosets S + k g up to the first k g in S
            step, layer = g, list(current)
            while step not in current:
                shifted = [self.add(x, step) for x in layer]
                current.update(shifted)
                step = self.add(step, g)
        return frozenset(current)

    def multiples(self, n: int) -> frozenset[Element]:
        return frozenset(self.scale(n, x) for x in self.elements())

    def sumset(self, h: frozenset[Element], k: frozenset[Element]) -> frozenset[Element]:
        return frozenset(self.add(x, y) for x in h for y in k)


@dataclass(frozen=True)
class Subgroup:
    elements: frozenset[Element]
    generators: tuple[Element, ...]

    @property
    def order(self) -> int:
        return len(self.elements)


def greedy_generators(group: FiniteAbelianGroup, elements: frozenset[Element]) -> tuple[Element, ...]:
    """Canonical generating set: scan elements in order, keep each one not
    already in the span of those kept."""
    gens: list[Element] = []
    span = frozenset([group.zero])
    for x in sorted(elements):
        if x not in span:
            gens.append(x)
            span = group.span(gens)
            if len(span) == len(elements):
                break
    return tuple(gens)


def enumerate_subgroups(group: FiniteAbelianGroup, budget: int = DEFAULT_BUDGET) -> list[Subgroup]:
    """Every subgroup exactly once, ordered by size then element set.

    Cyclic subgroups are generated element by element; the rest come from
    repeatedly adding a cyclic subgroup to a known subgroup.  ``budget``
    bounds ``order * (number of subgroups)``.
    """
    n = group.order
    if n > budget:
        raise BudgetExceeded(n, budget)
    cyclic: dict[frozenset, Element] = {}
    for x in group.elements():
        s = group.span([x])
        cyclic.setdefault(s, x)
    found: set[frozenset] = set(cyclic)
    frontier = list(found)
    cyc = list(cyclic)
    while frontier:
        nxt = []
        for s in frontier:
            for c in cyc:
                if c <= s:
                    continue
                j = group.sumset(s, c)
                if j not in found:
                    found.add(j)
                    nxt.append(j)
                    if n * len(found) > budget:
                        raise BudgetExceeded(n * len(found), budget)
        frontier = nxt
    ordered = sorted(found, key=lambda s: (len(s), sorted(s)))
    return [Subgroup(s, greedy_generators(group, s)) for s in ordered]


def torsion_size(group: FiniteAbelianGroup, h: frozenset[Element], d: int) -> int:
    """|{x in G/H : d x = 0}|."""
    count = sum(1 for x in group.elements() if group.scale(d, x) in h)
    return count // len(h)


def quotient_shape(group: FiniteAbelianGroup, h: frozenset[Element]) -> GroupShape:
    """Invariant factors of G/H, from the sizes of its p^j-torsion."""
    q = group.order // len(h)
    cyclic: list[int] = []
    for p, e in factorint(q).items():
        prev = 1
        counts = []
        for j in range(1, e + 1):
            t = torsion_size(group, h, p**j)
            r = 0
            while prev * p**r < t:
                r += 1
            counts.append(r)  # number of cyclic factors of order >= p^j
            prev = t
            if t == _p_part(q, p):
                break
        counts.append(0)
        for j in range(len(counts) - 1):
            cyclic += [p ** (j + 1)] * (counts[j] - counts[j + 1])
    return GroupShape.of_cyclic(cyclic)


def _p_part(n: int, p: int) -> int:
    q = 1
    while n % p == 0:
        n //= p
        q *= p
    return q
