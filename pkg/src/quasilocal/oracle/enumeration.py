from __future__ import annotations

from ..lattice import PrimeComponent
from .groups import DEFAULT_BUDGET, BudgetExceeded, FiniteAbelianGroup, enumerate_subgroups
from .models import OracleError


def hnf_triples(p: int, rank: int, max_exp: int):
    """Raw Hermite data ``(a, b, c)`` with ``a + b <= max_exp``."""
    if rank == 1:
        for a in range(max_exp + 1):
            yield (a, 0, 0)
        return
    for e in range(max_exp + 1):
        for a in range(e, -1, -1):
            for c in range(p ** (e - a)):
                yield (a, e - a, c)


def _elements(group: FiniteAbelianGroup, p: int, rank: int, a: int, b: int, c: int) -> frozenset:
    if rank == 1:
        return group.span([(p**a,)])
    return group.span([(p**a, c), (0, p**b)])


def enumerate_submodules(p: int, rank: int, max_index_exponent: int, budget: int = DEFAULT_BUDGET) -> list[PrimeComponent]:
    """All submodules of ``Z_p^rank`` of index at most ``p^max_index_exponent``.

    Generated from Hermite triples, then checked three ways against the
    subgroups of ``(Z/p^k)^rank`` (k = max_index_exponent) of small index:
    no two triples give the same subgroup, every triple gives a subgroup of
    the right index, and every such subgroup is hit.
    """
    if p == 2 or p < 2:
        raise ValueError("p must be an odd prime")
    if rank not in (1, 2):
        raise ValueError("rank must be 1 or 2")
    k = max_index_exponent
    group = FiniteAbelianGroup((p**k,) * rank)
    triples = list(hnf_triples(p, rank, k))
    if group.order * len(triples) > budget:
        raise BudgetExceeded(group.order * len(triples), budget)
    images: dict[frozenset, tuple[int, int, int]] = {}
    for t in triples:
        s = _elements(group, p, rank, *t)
        if group.order // len(s) != p ** (t[0] + t[1]):
            raise OracleError(f"triple {t} has index {group.order // len(s)}")
        if s in images:
            raise OracleError(f"triples {images[s]} and {t} give the same submodule")
        images[s] = t
    small = {
        s.elements for s in enumerate_subgroups(group, budget)
        if group.order // s.order <= p**k
    }
    if small != set(images):
        raise OracleError(f"submodule enumeration disagrees with subgroup enumeration for p={p}")
    return [PrimeComponent(p, rank, a, b, c, k) for a, b, c in triples]
