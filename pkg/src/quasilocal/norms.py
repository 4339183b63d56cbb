"""Norm groups, class fields and the two-level correspondence between E and
E1 = E(sqrt(-1)).

A norm group is a finite-index subgroup of E*/D(E), where D(E) is the
maximal divisible subgroup.  That quotient is ``C2 x prod_{pi1} Z_p x
prod_{pi2} Z_p^2``; norm groups are full on every pi1 factor, so only the
2-part and the pi2 components are stored.  The pi2 component of N(R/E) is
identified with R's own submodule in the same coordinates.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import prod
from typing import Mapping

from sympy import factorint

from .core import FieldSpec, GroupShape, SpecError
from .lattice import (
    FiniteExtension,
    PrimeComponent,
    SigmaClass,
    component_contains,
    component_intersection,
    component_sum,
    check_levels,
    components_of_index,
    sigma_class,
)


def _full_pi2(spec: FieldSpec) -> tuple[PrimeComponent, ...]:
    return tuple(PrimeComponent.full(p, 2, spec.level[p]) for p in sorted(spec.pi2))


def _parse_components(spec: FieldSpec, data: Mapping) -> dict[int, PrimeComponent]:
    comps = {}
    for key, val in data.items():
        try:
            p = int(key)
        except ValueError:
            raise SpecError(f"component key {key!r} is not a prime") from None
        if p not in spec.pi2:
            raise SpecError(f"norm groups carry components only at pi2 primes, not {p}")
        comps[p] = PrimeComponent.from_json(spec, p, val)
    return comps


def _merge(spec: FieldSpec, comps: Mapping[int, PrimeComponent]) -> tuple[PrimeComponent, ...]:
    base = {c.p: c for c in _full_pi2(spec)}
    for p, c in comps.items():
        if p not in base:
            raise SpecError(f"prime {p} is not in pi2")
        base[p] = c
    return tuple(base.values())


def _check_pairs(u, v) -> None:
    if [c.p for c in u.components] != [c.p for c in v.components]:
        raise SpecError("norm groups are over different specs")


@dataclass(frozen=True)
class NormSubgroup:
    """An element of Nr(E)."""

    two_part: int
    components: tuple[PrimeComponent, ...] = ()

    def __post_init__(self):
        if self.two_part not in (1, 2):
            raise SpecError("two_part must be 1 or 2")
        comps = tuple(sorted(self.components, key=lambda c: c.p))
        if any(c.rank != 2 for c in comps):
            raise SpecError("norm group components must have rank 2")
        object.__setattr__(self, "components", comps)

    @classmethod
    def full(cls, spec: FieldSpec) -> NormSubgroup:
        return cls(1, _full_pi2(spec))

    @classmethod
    def build(cls, spec: FieldSpec, two_part: int, components: Mapping[int, PrimeComponent] | None = None):
        return cls(two_part, _merge(spec, components or {}))

    @property
    def sort_key(self):
        return (self.index, self.two_part, tuple((c.p,) + c.key for c in self.components))

    @property
    def index(self) -> int:
        return self.two_part * prod(c.index for c in self.components)

    def component(self, p: int) -> PrimeComponent:
        return next(c for c in self.components if c.p == p)

    def to_json(self) -> dict:
        return {
            "two_part": self.two_part,
            "components": {str(c.p): c.to_json() for c in self.components if not c.is_full},
        }

    @classmethod
    def from_json(cls, spec: FieldSpec, data: Mapping | str) -> NormSubgroup:
        if isinstance(data, str):
            data = json.loads(data)
        if not isinstance(data, Mapping) or "two_part" not in data or set(data) - {"two_part", "components"}:
            raise SpecError('norm subgroup must be {"two_part": 1|2, "components": {...}}')
        return cls.build(spec, data["two_part"], _parse_components(spec, data.get("components", {})))

    def __str__(self):
        parts = [str(c) for c in self.components if not c.is_full]
        return f"N[index {self.index}, 2-part {self.two_part}]" + (" " + " ".join(parts) if parts else "")


@dataclass(frozen=True)
class NormSubgroupE1:
    """A norm group of E1 = E(sqrt(-1)); E1 has no 2-part."""

    components: tuple[PrimeComponent, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(sorted(self.components, key=lambda c: c.p)))

    @classmethod
    def full(cls, spec: FieldSpec) -> NormSubgroupE1:
        return cls(_full_pi2(spec))

    @classmethod
    def build(cls, spec: FieldSpec, components: Mapping[int, PrimeComponent] | None = None):
        return cls(_merge(spec, components or {}))

    @property
    def index(self) -> int:
        return prod(c.index for c in self.components)

    @property
    def sort_key(self):
        return (self.index, tuple((c.p,) + c.key for c in self.components))

    def to_json(self) -> dict:
        return {"components": {str(c.p): c.to_json() for c in self.components if not c.is_full}}

    @classmethod
    def from_json(cls, spec: FieldSpec, data: Mapping | str) -> NormSubgroupE1:
        if isinstance(data, str):
            data = json.loads(data)
        if not isinstance(data, Mapping) or set(data) - {"components"}:
            raise SpecError('E1 norm subgroup must be {"components": {...}}')
        return cls.build(spec, _parse_components(spec, data.get("components", {})))


def norm_group(spec: FieldSpec, ext: FiniteExtension) -> NormSubgroup:
    """N(R/E).  Pi1 components do not contribute (norm limitation)."""
    comps = ext.component_map
    return NormSubgroup(1 if ext.real else 2, tuple(comps[p] for p in sorted(spec.pi2)))


def index(spec: FieldSpec, u: NormSubgroup) -> int:
    return u.index


def quotient_shape(spec: FieldSpec, u: NormSubgroup | NormSubgroupE1) -> GroupShape:
    """E*/u, or E1*/u for an E1-level group."""
    shapes = [c.quotient_shape() for c in u.components]
    two = getattr(u, "two_part", 1)
    return GroupShape.product(*shapes, GroupShape.of_cyclic([two]))


def meet(u: NormSubgroup, v: NormSubgroup) -> NormSubgroup:
    _check_pairs(u, v)
    return NormSubgroup(
        max(u.two_part, v.two_part),
        tuple(component_intersection(a, b) for a, b in zip(u.components, v.components)),
    )


def join(u: NormSubgroup, v: NormSubgroup) -> NormSubgroup:
    _check_pairs(u, v)
    return NormSubgroup(
        min(u.two_part, v.two_part),
        tuple(component_sum(a, b) for a, b in zip(u.components, v.components)),
    )


def contains(u: NormSubgroup, v: NormSubgroup) -> bool:
    """True iff ``v ⊆ u``."""
    _check_pairs(u, v)
    return u.two_part <= v.two_part and all(
        component_contains(a, b) for a, b in zip(u.components, v.components)
    )


def class_field_of(spec: FieldSpec, u: NormSubgroup) -> FiniteExtension:
    return FiniteExtension.build(spec, u.two_part == 1, {c.p: c for c in u.components})


def cl_of(spec: FieldSpec, ext: FiniteExtension) -> FiniteExtension:
    """cl(R/E): the class field inside R with the same norm group."""
    return class_field_of(spec, norm_group(spec, ext))


def is_class_field(spec: FieldSpec, ext: FiniteExtension) -> bool:
    return sigma_class(spec, ext) != SigmaClass.NEITHER


def cl_is_abelian_part(spec: FieldSpec, ext: FiniteExtension) -> bool:
    """Whether cl(R/E) = R ∩ E_Ab; holds iff no pi2 prime divides [R:E]."""
    return all(c.is_full for c in ext.components if c.p in spec.pi2)


class NormGroupList(list):
    """A list of norm groups; empty lists carry the ``reason``."""

    def __init__(self, items=(), reason: str | None = None):
        super().__init__(items)
        self.reason = reason


def norm_group_index_obstruction(spec: FieldSpec, n: int) -> str | None:
    if n < 1:
        return "index must be positive"
    f = factorint(n)
    for p, e in sorted(f.items()):
        if p == 2 and e > 1:
            return "index divisible by 4"
        if p in spec.pi1:
            return "index divisible by Π₁ prime"
        if p != 2 and p not in spec.pi2:
            return f"index divisible by prime {p} outside Π(E)"
        if p in spec.pi2 and e > spec.level[p]:
            return f"level for prime {p} must be >= {e}"
    return None


def norm_groups_of_index(spec: FieldSpec, n: int) -> NormGroupList:
    """All norm groups of index exactly ``n``, in canonical order."""
    reason = norm_group_index_obstruction(spec, n)
    if reason:
        return NormGroupList(reason=reason)
    f = factorint(n)
    per_prime = [list(components_of_index(p, 2, spec.level[p], f.get(p, 0))) for p in sorted(spec.pi2)]
    two = 2 if n % 2 == 0 else 1
    out = [NormSubgroup(two, combo) for combo in _product(per_prime)]
    out.sort(key=lambda u: u.sort_key)
    return NormGroupList(out)


def norm_groups_up_to(spec: FieldSpec, max_index: int) -> list[NormSubgroup]:
    check_levels(spec, max_index, spec.pi2)
    out = []
    for n in range(1, max_index + 1):
        out.extend(norm_groups_of_index(spec, n))
    return out


def _product(lists):
    if not lists:
        yield ()
        return
    for head in lists[0]:
        for rest in _product(lists[1:]):
            yield (head,) + rest


def norm_group_over_E1(spec: FieldSpec, ext: FiniteExtension) -> NormSubgroupE1:
    """N(R1/E1) for R1 = R(sqrt(-1))."""
    comps = ext.component_map
    return NormSubgroupE1(tuple(comps[p] for p in sorted(spec.pi2)))


def restrict_to_base(spec: FieldSpec, u1: NormSubgroupE1, nonreal: bool) -> NormSubgroup:
    """H1 -> H1 ∩ E*, on the fiber selected by ``nonreal``."""
    return NormSubgroup(2 if nonreal else 1, u1.components)


def extend_to_E1(spec: FieldSpec, u: NormSubgroup) -> NormSubgroupE1:
    return NormSubgroupE1(u.components)


def norm_groups_E1_up_to(spec: FieldSpec, max_index: int) -> list[NormSubgroupE1]:
    out = [extend_to_E1(spec, u) for u in norm_groups_up_to(spec, max_index) if u.two_part == 1]
    out.sort(key=lambda u: u.sort_key)
    return out


@dataclass(frozen=True)
class CorrespondenceReport:
    input: dict
    norm_group: NormSubgroup
    index: int
    quotient_shape: GroupShape
    class_field: FiniteExtension

    def to_json(self) -> dict:
        return {
            "input": self.input,
            "norm_group": self.norm_group.to_json(),
            "index": self.index,
            "quotient_shape": self.quotient_shape.to_json(),
            "class_field": self.class_field.to_json(),
        }


def correspondence(spec: FieldSpec, ext: FiniteExtension) -> CorrespondenceReport:
    u = norm_group(spec, ext)
    return CorrespondenceReport(ext.to_json(), u, u.index, quotient_shape(spec, u), class_field_of(spec, u))
