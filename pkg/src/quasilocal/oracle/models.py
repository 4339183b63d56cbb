"""Truncated finite models and element-set images of the package's values.

Per odd prime p the Galois side is ``(Z/p^K)^c(p)``; the multiplicative side
E*/D(E) adds a ``C2`` factor (key 2).  A subgroup of either model is a dict
prime -> frozenset of elements; subgroups of a product of groups of coprime
orders are the products of their primary parts.
"""

from __future__ import annotations

from itertools import product
from math import prod
from typing import Mapping

from ..core import FieldSpec, GroupShape
from ..lattice import FiniteExtension, PrimeComponent
from ..norms import NormSubgroup, NormSubgroupE1
from .groups import FiniteAbelianGroup, quotient_shape

Multi = dict[int, frozenset]


class OracleError(RuntimeError):
    pass


class Model:
    """``C2`` (optional) times ``(Z/p^K_p)^c(p)`` for every odd prime."""

    def __init__(self, spec: FieldSpec, levels: Mapping[int, int], with_two: bool = True):
        self.spec = spec
        self.levels = dict(levels)
        self.groups: dict[int, FiniteAbelianGroup] = {}
        self._cache: dict[PrimeComponent, frozenset] = {}
        self._gens: dict[tuple[int, frozenset], list] = {}
        self._shapes: dict[tuple[int, frozenset], GroupShape] = {}
        self._sums: dict[tuple[int, frozenset, frozenset], frozenset] = {}
        if with_two:
            self.groups[2] = FiniteAbelianGroup((2,))
        for p in sorted(spec.odd_primes):
            self.groups[p] = FiniteAbelianGroup((p ** self.levels[p],) * spec.rank(p))

    @property
    def order(self) -> int:
        return prod(g.order for g in self.groups.values())

    def full(self) -> Multi:
        return {p: frozenset(g.elements()) for p, g in self.groups.items()}

    def component_elements(self, comp: PrimeComponent) -> frozenset:
        """Image mod p^K of a component; refuses when the image is not
        faithful, i.e. when ``p^K Z_p^c`` is not inside the component."""
        if comp not in self._cache:
            self._cache[comp] = self._component_elements(comp)
        return self._cache[comp]

    def _component_elements(self, comp: PrimeComponent) -> frozenset:
        p, k = comp.p, self.levels[comp.p]
        q = p**k
        g = self.groups[p]
        if comp.rank == 1:
            if comp.a > k:
                raise OracleError(f"{comp} is not faithful mod {p}^{k}")
            return g.span([(p**comp.a,)])
        pa, pb = p**comp.a, p**comp.b
        if comp.a > k or comp.b > k or (q // pa * comp.c) % pb:
            raise OracleError(f"{comp} is not faithful mod {p}^{k}")
        return frozenset(
            ((i * pa) % q, (i * comp.c + j * pb) % q) for i in range(q) for j in range(q)
        )

    # Galois side: the subgroup H0 of the abelian part fixing the extension
    def galois_elements(self, ext: FiniteExtension) -> Multi:
        return {c.p: self.component_elements(c) for c in ext.components}

    # multiplicative side
    def norm_elements(self, u: NormSubgroup) -> Multi:
        out = {2: frozenset({(0,)}) if u.two_part == 2 else frozenset({(0,), (1,)})}
        for p in sorted(self.spec.pi1):
            out[p] = frozenset(self.groups[p].elements())
        for c in u.components:
            out[c.p] = self.component_elements(c)
        return out

    def norm_elements_e1(self, u: NormSubgroupE1) -> Multi:
        out = {p: frozenset(self.groups[p].elements()) for p in sorted(self.spec.pi1)}
        for c in u.components:
            out[c.p] = self.component_elements(c)
        return out

    def index(self, h: Multi) -> int:
        return prod(self.groups[p].order // len(s) for p, s in h.items())

    def quotient_shape(self, h: Multi) -> GroupShape:
        return GroupShape.product(*(self.prime_quotient_shape(p, s) for p, s in h.items()))

    def prime_quotient_shape(self, p: int, s: frozenset) -> GroupShape:
        if (p, s) not in self._shapes:
            self._shapes[p, s] = quotient_shape(self.groups[p], s)
        return self._shapes[p, s]

    def generators(self, p: int, s: frozenset) -> list:
        if (p, s) not in self._gens:
            self._gens[p, s] = _generators(self.groups[p], s)
        return self._gens[p, s]

    def intersection(self, h: Multi, k: Multi) -> Multi:
        return {p: h[p] & k[p] for p in h}

    def sum(self, h: Multi, k: Multi) -> Multi:
        return {p: self._sum(p, h[p], k[p]) for p in h}

    def _sum(self, p: int, h: frozenset, k: frozenset) -> frozenset:
        key = (p, h, k)
        if key not in self._sums:
            self._sums[key] = self.groups[p].span(self.generators(p, h) + self.generators(p, k))
        return self._sums[key]

    @staticmethod
    def subset(h: Multi, k: Multi) -> bool:
        return all(h[p] <= k[p] for p in h)

    @staticmethod
    def key(h: Multi):
        return tuple(sorted((p, s) for p, s in h.items()))

    # Galois group G_K = A_K ⋊ <s>, s acting by inversion
    def galois_degree(self, ext: FiniteExtension) -> int:
        h = self.galois_elements(ext)
        return (1 if ext.real else 2) * prod(self.groups[p].order // len(s) for p, s in h.items())

    def is_normal(self, ext: FiniteExtension) -> bool:
        """Conjugation test of the open subgroup fixing ``ext``."""
        h0 = self.galois_elements(ext)
        primes = sorted(h0)
        gens_g = []
        for p in primes:
            n = len(self.groups[p].moduli)
            for i in range(n):
                e = {q: self.groups[q].zero for q in primes}
                e[p] = tuple(1 if j == i else 0 for j in range(n))
                gens_g.append((e, 1))
        zero = {q: self.groups[q].zero for q in primes}
        gens_g.append((zero, -1))
        gens_h = []
        for p in primes:
            for x in self.generators(p, h0[p]):
                e = dict(zero)
                e[p] = x
                gens_h.append((e, 1))
        if ext.real:
            gens_h.append((zero, -1))

        def mul(x, y):
            (a, s), (b, t) = x, y
            return ({p: self.groups[p].add(a[p], b[p] if s == 1 else self.groups[p].neg(b[p])) for p in primes}, s * t)

        def inv(x):
            a, s = x
            return ({p: self.groups[p].neg(a[p]) if s == 1 else a[p] for p in primes}, s)

        def member(x):
            a, s = x
            return (s == 1 or ext.real) and all(a[p] in h0[p] for p in primes)

        return all(member(mul(mul(g, h), inv(g))) for g in gens_g for h in gens_h)


def _generators(group: FiniteAbelianGroup, elements: frozenset):
    gens, span = [], frozenset([group.zero])
    for x in sorted(elements):
        if x not in span:
            gens.append(x)
            span = group.span(gens)
    return gens


def product_subgroups(per_prime: Mapping[int, list[frozenset]]):
    """All subgroups of a product of coprime-order groups, as Multi dicts."""
    primes = sorted(per_prime)
    for combo in product(*(per_prime[p] for p in primes)):
        yield dict(zip(primes, combo))
