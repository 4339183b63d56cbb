"""Field specifications and the closed-form arithmetic of formally real
quasilocal fields.

A field E is described only by its Galois invariants: the odd primes of
cohomological dimension 1 (``pi1``) and 2 (``pi2``).  The prime 2 always
belongs to Pi(E).  Everything else in the package is derived from this data.
"""

from __future__ import annotations

import enum
import json
from collections import defaultdict
from dataclasses import dataclass, field
from math import prod
from typing import Iterable, Mapping

from sympy import factorint, isprime


class SpecError(ValueError):
    """Invalid field specification or operation input."""


class LevelError(SpecError):
    """A truncation level is too small for the requested computation."""

    def __init__(self, p: int, required: int, have: int | None = None, what: str = ""):
        self.p = p
        self.required = required
        self.have = have
        msg = f"level for prime {p} must be >= {required}"
        if have is not None:
            msg += f" (have {have})"
        if what:
            msg += f": {what}"
        super().__init__(msg)


class PrimeClass(enum.Enum):
    TWO = "TWO"
    PI1 = "PI1"
    PI2 = "PI2"
    OUTSIDE = "OUTSIDE"


def valuation(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of 0")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _check_positive(n: int) -> None:
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise SpecError(f"expected a positive integer, got {n!r}")


@dataclass(frozen=True)
class FieldSpec:
    pi1: frozenset[int]
    pi2: frozenset[int]
    level: Mapping[int, int] = field(hash=False)

    def __post_init__(self):
        object.__setattr__(self, "pi1", frozenset(self.pi1))
        object.__setattr__(self, "pi2", frozenset(self.pi2))
        object.__setattr__(self, "level", dict(sorted(self.level.items())))
        for name, primes in (("pi1", self.pi1), ("pi2", self.pi2)):
            for p in sorted(primes):
                if not isinstance(p, int) or p < 2 or not isprime(p):
                    raise SpecError(f"{name}: {p} is not a prime")
                if p == 2:
                    raise SpecError(f"{name}: prime 2 is not allowed")
        both = self.pi1 & self.pi2
        if both:
            raise SpecError(f"prime {min(both)} in both pi1 and pi2")
        for p in sorted(self.odd_primes):
            if p not in self.level:
                raise SpecError(f"missing level for prime {p}")
            k = self.level[p]
            if not isinstance(k, int) or k < 1:
                raise SpecError(f"level for prime {p} must be a positive integer, got {k!r}")
        extra = set(self.level) - self.odd_primes
        if extra:
            raise SpecError(f"level given for prime {min(extra)} outside pi1 and pi2")

    def __hash__(self):
        return hash((self.pi1, self.pi2, tuple(self.level.items())))

    def __eq__(self, other):
        if not isinstance(other, FieldSpec):
            return NotImplemented
        return (self.pi1, self.pi2, dict(self.level)) == (other.pi1, other.pi2, dict(other.level))

    @property
    def odd_primes(self) -> frozenset[int]:
        """P(E(sqrt(-1))) = pi1 | pi2."""
        return self.pi1 | self.pi2

    @property
    def primes(self) -> frozenset[int]:
        """Pi(E), which always contains 2."""
        return self.odd_primes | {2}

    def rank(self, p: int) -> int:
        """Cohomological p-dimension c(p) of the absolute Galois group."""
        if p in self.pi1:
            return 1
        if p in self.pi2:
            return 2
        raise SpecError(f"prime {p} is not in pi1 or pi2")

    def with_levels(self, levels: Mapping[int, int]) -> FieldSpec:
        """Copy with each level raised to at least ``levels[p]``."""
        new = dict(self.level)
        for p, k in levels.items():
            if p in new:
                new[p] = max(new[p], k)
        return FieldSpec(self.pi1, self.pi2, new)

    def to_json(self) -> dict:
        return {
            "pi1": sorted(self.pi1),
            "pi2": sorted(self.pi2),
            "level": {str(p): k for p, k in self.level.items()},
        }

    @classmethod
    def from_json(cls, data: dict | str) -> FieldSpec:
        if isinstance(data, str):
            data = json.loads(data)
        if not isinstance(data, dict):
            raise SpecError("field spec must be a JSON object")
        unknown = set(data) - {"pi1", "pi2", "level"}
        if unknown:
            raise SpecError(f"unknown field spec key {sorted(unknown)[0]!r}")
        try:
            pi1 = [int(p) for p in data.get("pi1", [])]
            pi2 = [int(p) for p in data.get("pi2", [])]
            level = {int(p): k for p, k in data.get("level", {}).items()}
        except (TypeError, ValueError, AttributeError) as exc:
            raise SpecError(f"malformed field spec: {exc}") from None
        return make_field_spec(pi1, pi2, level)


def make_field_spec(pi1: Iterable[int], pi2: Iterable[int], level: Mapping[int, int]) -> FieldSpec:
    pi1, pi2 = list(pi1), list(pi2)
    for name, primes in (("pi1", pi1), ("pi2", pi2)):
        if len(set(primes)) != len(primes):
            raise SpecError(f"{name} contains duplicates")
    return FieldSpec(frozenset(pi1), frozenset(pi2), dict(level))


def classify_prime(spec: FieldSpec, p: int) -> PrimeClass:
    if not isinstance(p, int) or p < 2 or not isprime(p):
        raise SpecError(f"{p!r} is not a prime")
    if p == 2:
        return PrimeClass.TWO
    if p in spec.pi1:
        return PrimeClass.PI1
    if p in spec.pi2:
        return PrimeClass.PI2
    return PrimeClass.OUTSIDE


@dataclass(frozen=True, order=True)
class GroupShape:
    """Finite abelian group in invariant-factor form ``C_d1 x ... x C_dr``,
    ascending, with ``d_i | d_{i+1}`` and no trivial factors."""

    factors: tuple[int, ...] = ()

    def __post_init__(self):
        f = tuple(int(d) for d in self.factors)
        object.__setattr__(self, "factors", f)
        if any(d < 2 for d in f):
            raise ValueError(f"invariant factors must be >= 2: {f}")
        if any(f[i + 1] % f[i] for i in range(len(f) - 1)):
            raise ValueError(f"not an invariant-factor chain: {f}")

    @classmethod
    def of_cyclic(cls, orders: Iterable[int]) -> GroupShape:
        """Normalize an arbitrary product of cyclic groups."""
        powers: dict[int, list[int]] = defaultdict(list)
        for m in orders:
            if m < 1:
                raise ValueError(f"cyclic order must be positive: {m}")
            for p, e in factorint(m).items():
                powers[p].append(p**e)
        if not powers:
            return cls(())
        r = max(len(v) for v in powers.values())
        cols = [1] * r
        for v in powers.values():
            v.sort(reverse=True)
            for i, q in enumerate(v):
                cols[i] *= q
        return cls(tuple(sorted(d for d in cols if d > 1)))

    @classmethod
    def product(cls, *shapes: GroupShape) -> GroupShape:
        return cls.of_cyclic(d for s in shapes for d in s.factors)

    @property
    def order(self) -> int:
        return prod(self.factors)

    @property
    def exponent(self) -> int:
        return self.factors[-1] if self.factors else 1

    @property
    def rank(self) -> int:
        return len(self.factors)

    def to_json(self) -> list[int]:
        return list(self.factors)

    def __iter__(self):
        return iter(self.factors)

    def __str__(self):
        return " x ".join(f"C{d}" for d in self.factors) or "trivial"


def greatest_admissible_pair(spec: FieldSpec, n: int) -> tuple[int, int]:
    """Return ``(n(E), n(E)_1)`` for ``n``.

    The greatest pair with ``n1 | nE | n``, ``4 ∤ nE``, ``2 ∤ n1``, no prime
    outside Pi(E) dividing ``nE`` and no pi1 prime dividing ``n1``.
    """
    _check_positive(n)
    ne = 2 if n % 2 == 0 else 1
    ne1 = 1
    for p in spec.odd_primes:
        q = p ** valuation(n, p)
        ne *= q
        if p in spec.pi2:
            ne1 *= q
    return ne, ne1


def power_collapse(spec: FieldSpec, n: int) -> int:
    """n(E): the exponent with E*^n = E*^n(E)."""
    return greatest_admissible_pair(spec, n)[0]


def unit_quotient_shape(spec: FieldSpec, n: int) -> GroupShape:
    """Shape of E*/E*^n, i.e. C_n(E) x C_n(E)_1."""
    return GroupShape.of_cyclic(greatest_admissible_pair(spec, n))


def is_strictly_quasilocal(spec: FieldSpec) -> bool:
    return not spec.pi1


@dataclass(frozen=True)
class BrauerDescriptor:
    kind: str  # "quasicyclic" or "exponent2"
    support: frozenset[int] = frozenset()

    def to_json(self) -> dict:
        return {"kind": self.kind, "support": sorted(self.support)}

    def __str__(self):
        if self.kind == "exponent2":
            return "exponent <= 2"
        if not self.support:
            return "trivial"
        return " + ".join(f"Z({p}^inf)" for p in sorted(self.support))


def brauer_descriptor(spec: FieldSpec, ext) -> BrauerDescriptor:
    """Brauer group support of a finite extension: a sum of quasicyclic
    p-groups over pi2 when nonreal, exponent at most 2 when formally real."""
    if ext.real:
        return BrauerDescriptor("exponent2")
    return BrauerDescriptor("quasicyclic", spec.pi2)


@dataclass(frozen=True)
class Invalid:
    """Returned by :func:`finite_index_shape_law` for an impossible (n, e)."""

    reason: str

    def __bool__(self):
        return False


def finite_index_shape_law(spec: FieldSpec, n: int, e: int) -> GroupShape | Invalid:
    """Shape of E*/H for a subgroup H of index ``n`` whose quotient has
    exponent ``e``, or :class:`Invalid` naming the first violated condition."""
    _check_positive(n)
    _check_positive(e)
    if n % e:
        return Invalid(f"exponent {e} does not divide index {n}")
    if (e * e) % n:
        return Invalid(f"index {n} does not divide {e}^2")
    m = n // e
    for p in sorted(spec.pi1 | {2}):
        if m % p == 0:
            return Invalid(f"n/e = {m} is divisible by {p}")
    ne = power_collapse(spec, n)
    if ne % e:
        return Invalid(f"exponent {e} does not divide n(E) = {ne}")
    return GroupShape.of_cyclic((m, e))
