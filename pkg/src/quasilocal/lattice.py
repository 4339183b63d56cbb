"""The lattice of finite extensions of E up to E-isomorphism.

The absolute Galois group is ``(prod_p Z_p^c(p)) ⋊ C2`` with the involution
acting by inversion.  An extension class is a reality flag plus one
finite-index submodule per odd prime of P(E(sqrt(-1))).  Submodules of
``Z_p^2`` are kept in Hermite form: rows ``(p^a, c)`` and ``(0, p^b)`` with
``0 <= c < p^b``.  Compositum is submodule intersection, intersection of
fields is submodule sum.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, prod
from typing import Iterable, Iterator, Mapping, Sequence

from .core import FieldSpec, GroupShape, LevelError, SpecError, valuation


# -- Hermite normal form over Z for rank <= 2 ------------------------------

def _hnf2(rows: Iterable[Sequence[int]]) -> tuple[int, int, int]:
    """Hermite form ``(g, y, h)`` of a full-rank lattice in Z^2 spanned by
    ``rows``: basis ``(g, y), (0, h)`` with ``g, h > 0`` and ``0 <= y < h``."""
    rows = [[int(r[0]), int(r[1])] for r in rows if r[0] or r[1]]
    while True:
        nz = [r for r in rows if r[0]]
        if len(nz) <= 1:
            break
        pivot = min(nz, key=lambda r: abs(r[0]))
        for r in nz:
            if r is not pivot:
                q = r[0] // pivot[0]
                r[0] -= q * pivot[0]
                r[1] -= q * pivot[1]
    nz = [r for r in rows if r[0]]
    if not nz:
        raise SpecError("lattice is not of full rank")
    g, y = nz[0]
    if g < 0:
        g, y = -g, -y
    h = 0
    for r in rows:
        if not r[0]:
            h = gcd(h, r[1])
    if h == 0:
        raise SpecError("lattice is not of full rank")
    return g, y % h, h


def _dual2(g: int, y: int, h: int) -> list[list[Fraction]]:
    # rows of (H^-1)^T for H = [[g, y], [0, h]]
    d = Fraction(1, g * h)
    return [[h * d, Fraction(0)], [-y * d, g * d]]


def _scaled_integer_rows(rows: list[list[Fraction]]) -> tuple[list[list[int]], int]:
    den = 1
    for r in rows:
        for x in r:
            den = den * x.denominator // gcd(den, x.denominator)
    return [[int(x * den) for x in r] for r in rows], den


# -- prime components --------------------------------------------------------

@dataclass(frozen=True, order=True)
class PrimeComponent:
    """A finite-index submodule of ``Z_p^rank`` at truncation level ``level``.

    Rank 1 uses only ``a`` (the submodule ``p^a Z_p``).  Rank 2 is the
    Hermite triple ``(a, b, c)``.
    """

    p: int
    rank: int
    a: int
    b: int = 0
    c: int = 0
    level: int = 0

    def __post_init__(self):
        if self.rank not in (1, 2):
            raise SpecError(f"rank must be 1 or 2, got {self.rank}")
        if self.a < 0 or self.b < 0:
            raise SpecError("negative exponent")
        if self.rank == 1 and (self.b or self.c):
            raise SpecError("rank-1 component has only an exponent")
        if self.rank == 2 and not 0 <= self.c < self.p**self.b:
            raise SpecError(f"c must satisfy 0 <= c < {self.p}^{self.b}")
        if self.exponent_of_index > self.level:
            raise LevelError(
                self.p, self.exponent_of_index, self.level,
                f"component of index {self.p}^{self.exponent_of_index}",
            )

    @classmethod
    def full(cls, p: int, rank: int, level: int) -> PrimeComponent:
        return cls(p, rank, 0, 0, 0, level)

    @property
    def exponent_of_index(self) -> int:
        return self.a + self.b

    @property
    def index(self) -> int:
        return self.p**self.exponent_of_index

    @property
    def is_full(self) -> bool:
        return self.a == 0 and self.b == 0

    @property
    def generators(self) -> tuple[tuple[int, ...], ...]:
        if self.rank == 1:
            return ((self.p**self.a,),)
        return ((self.p**self.a, self.c), (0, self.p**self.b))

    @property
    def key(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)

    def quotient_shape(self) -> GroupShape:
        """Invariant factors of ``Z_p^rank / self``."""
        p = self.p
        if self.rank == 1:
            return GroupShape.of_cyclic([p**self.a])
        # Smith form of [[p^a, c], [0, p^b]]: d1 = gcd of entries
        vc = valuation(self.c, p) if self.c else self.a + self.b
        d1 = p ** min(self.a, self.b, vc)
        return GroupShape.of_cyclic([d1, self.index // d1])

    def to_json(self) -> dict:
        if self.rank == 1:
            return {"exp": self.a}
        return {"a": self.a, "b": self.b, "c": self.c}

    @classmethod
    def from_json(cls, spec: FieldSpec, p: int, data: Mapping) -> PrimeComponent:
        rank = spec.rank(p)
        level = spec.level[p]
        if not isinstance(data, Mapping):
            raise SpecError(f"component for prime {p} must be an object")
        if rank == 1:
            if set(data) != {"exp"}:
                raise SpecError(f"component for pi1 prime {p} must be {{\"exp\": k}}")
            return cls(p, 1, _nonneg(data["exp"]), 0, 0, level)
        if set(data) != {"a", "b", "c"}:
            raise SpecError(f"component for pi2 prime {p} must have keys a, b, c")
        return cls(p, 2, _nonneg(data["a"]), _nonneg(data["b"]), _nonneg(data["c"]), level)

    def __str__(self):
        if self.rank == 1:
            return f"{self.p}^{self.a}Z_{self.p}"
        return f"<({self.p}^{self.a},{self.c}),(0,{self.p}^{self.b})>"


def _nonneg(x) -> int:
    if not isinstance(x, int) or isinstance(x, bool) or x < 0:
        raise SpecError(f"expected a non-negative integer, got {x!r}")
    return x


def _from_hnf(p: int, level: int, g: int, y: int, h: int) -> PrimeComponent:
    a, b = valuation(g, p), valuation(h, p)
    if g != p**a or h != p**b:
        raise SpecError(f"lattice index is not a power of {p}")
    return PrimeComponent(p, 2, a, b, y, level)


def canonical_component(spec: FieldSpec, p: int, generators: Iterable[Sequence[int]]) -> PrimeComponent:
    """Canonical form of the Z_p-submodule spanned by ``generators``."""
    rank = spec.rank(p)
    k = spec.level[p]
    gens = [tuple(int(x) for x in v) for v in generators]
    if any(len(v) != rank for v in gens):
        raise SpecError(f"generators for prime {p} must have length {rank}")
    if not any(any(v) for v in gens):
        raise SpecError(f"generators for prime {p} span the zero module (infinite index)")
    # one extra level detects index overflow; by Nakayama the module equals
    # its sum with p^(k+1) whenever that sum has index <= p^k
    mod = p ** (k + 1)
    if rank == 1:
        a = min(valuation(v[0], p) if v[0] else k + 1 for v in gens)
        if a > k:
            raise LevelError(p, a, k, "index exceeds truncation level")
        return PrimeComponent(p, 1, a, 0, 0, k)
    g, y, h = _hnf2(gens + [(mod, 0), (0, mod)])
    e = valuation(g, p) + valuation(h, p)
    if e > k:
        if _rational_rank(gens) < 2:
            raise SpecError(f"generators for prime {p} span an infinite-index submodule")
        raise LevelError(p, _exact_index_exponent(p, gens), k, "index exceeds truncation level")
    return _from_hnf(p, k, g, y, h)


def _rational_rank(gens: list[tuple[int, ...]]) -> int:
    nz = [v for v in gens if any(v)]
    if not nz:
        return 0
    for u, v in itertools.combinations(nz, 2):
        if u[0] * v[1] - u[1] * v[0]:
            return 2
    return 1


def _exact_index_exponent(p: int, gens: list[tuple[int, ...]]) -> int:
    # full rank: the index divides a nonzero 2x2 minor
    minor = next(
        abs(u[0] * v[1] - u[1] * v[0])
        for u, v in itertools.combinations(gens, 2)
        if u[0] * v[1] - u[1] * v[0]
    )
    mod = p ** (valuation(minor, p) + 1)
    g, _, h = _hnf2(list(gens) + [(mod, 0), (0, mod)])
    return valuation(g, p) + valuation(h, p)


def component_sum(x: PrimeComponent, y: PrimeComponent) -> PrimeComponent:
    _same_slot(x, y)
    if x.rank == 1:
        return PrimeComponent(x.p, 1, min(x.a, y.a), 0, 0, x.level)
    return _from_hnf(x.p, x.level, *_hnf2(list(x.generators) + list(y.generators)))


def component_intersection(x: PrimeComponent, y: PrimeComponent) -> PrimeComponent:
    _same_slot(x, y)
    if x.rank == 1:
        return PrimeComponent(x.p, 1, max(x.a, y.a), 0, 0, x.level)
    # (A ∩ B)* = A* + B*
    dual, den = _scaled_integer_rows(_dual2(*_hnf_of(x)) + _dual2(*_hnf_of(y)))
    g, yy, h = _hnf2(dual)
    back, den2 = _scaled_integer_rows(_dual2(g, yy, h))
    rows = [[v * den // den2 for v in r] for r in back]
    g, yy, h = _hnf2(rows)
    try:
        return _from_hnf(x.p, x.level, g, yy, h)
    except LevelError as exc:
        raise LevelError(x.p, exc.required, x.level, "compositum index exceeds truncation level") from None


def component_contains(x: PrimeComponent, y: PrimeComponent) -> bool:
    """True iff ``y ⊆ x``."""
    return component_sum(x, y) == x


def _hnf_of(c: PrimeComponent) -> tuple[int, int, int]:
    return (c.p**c.a, c.c, c.p**c.b)


def _same_slot(x: PrimeComponent, y: PrimeComponent) -> None:
    if (x.p, x.rank, x.level) != (y.p, y.rank, y.level):
        raise SpecError(f"incompatible components {x} and {y}")


def components_of_index(p: int, rank: int, level: int, e: int) -> Iterator[PrimeComponent]:
    """All components of index exactly ``p^e``, in canonical order."""
    if rank == 1:
        yield PrimeComponent(p, 1, e, 0, 0, level)
        return
    for a in range(e, -1, -1):
        b = e - a
        for c in range(p**b):
            yield PrimeComponent(p, 2, a, b, c, level)


def components_up_to(p: int, rank: int, level: int, max_index: int) -> list[PrimeComponent]:
    out = []
    e = 0
    while p**e <= max_index:
        out.extend(components_of_index(p, rank, level, e))
        e += 1
    return out


def max_exponent(p: int, bound: int) -> int:
    """Largest t with p^t <= bound (0 when bound < p)."""
    t = 0
    while p ** (t + 1) <= bound:
        t += 1
    return t


# -- extensions --------------------------------------------------------------

@dataclass(frozen=True)
class FiniteExtension:
    """An E-isomorphism class of finite extensions of E.

    ``components`` holds one :class:`PrimeComponent` for every prime in
    pi1 | pi2, sorted by prime.
    """

    real: bool
    components: tuple[PrimeComponent, ...] = ()

    def __post_init__(self):
        comps = tuple(sorted(self.components, key=lambda c: c.p))
        object.__setattr__(self, "components", comps)
        ps = [c.p for c in comps]
        if len(set(ps)) != len(ps):
            raise SpecError("duplicate prime component")

    @classmethod
    def base(cls, spec: FieldSpec, real: bool = True) -> FiniteExtension:
        """E itself, or E(sqrt(-1)) when ``real`` is false."""
        return cls(real, tuple(
            PrimeComponent.full(p, spec.rank(p), spec.level[p]) for p in sorted(spec.odd_primes)
        ))

    @classmethod
    def build(cls, spec: FieldSpec, real: bool, components: Mapping[int, PrimeComponent] | None = None):
        comps = {c.p: c for c in cls.base(spec).components}
        for p, c in (components or {}).items():
            if p not in comps:
                raise SpecError(f"prime {p} is not in pi1 or pi2")
            if (c.rank, c.level) != (comps[p].rank, comps[p].level):
                raise SpecError(f"component for prime {p} does not match the field spec")
            comps[p] = c
        return cls(real, tuple(comps.values()))

    @property
    def component_map(self) -> dict[int, PrimeComponent]:
        return {c.p: c for c in self.components}

    def component(self, p: int) -> PrimeComponent:
        return self.component_map[p]

    @property
    def sort_key(self):
        return (degree(self), not self.real, tuple((c.p,) + c.key for c in self.components))

    def to_json(self) -> dict:
        return {
            "real": self.real,
            "components": {str(c.p): c.to_json() for c in self.components if not c.is_full},
        }

    @classmethod
    def from_json(cls, spec: FieldSpec, data: Mapping | str) -> FiniteExtension:
        if isinstance(data, str):
            data = json.loads(data)
        if not isinstance(data, Mapping) or set(data) - {"real", "components"} or "real" not in data:
            raise SpecError('extension must be {"real": bool, "components": {...}}')
        if not isinstance(data["real"], bool):
            raise SpecError('"real" must be a boolean')
        comps = {}
        for key, val in data.get("components", {}).items():
            try:
                p = int(key)
            except ValueError:
                raise SpecError(f"component key {key!r} is not a prime") from None
            if p not in spec.odd_primes:
                raise SpecError(f"prime {p} is not in pi1 or pi2")
            comps[p] = PrimeComponent.from_json(spec, p, val)
        return cls.build(spec, data["real"], comps)

    def __str__(self):
        parts = [str(c) for c in self.components if not c.is_full]
        kind = "REAL" if self.real else "NONREAL"
        return f"{kind}[deg {degree(self)}]" + (" " + " ".join(parts) if parts else "")


def degree(ext: FiniteExtension) -> int:
    return (1 if ext.real else 2) * prod(c.index for c in ext.components)


def is_normal(ext: FiniteExtension) -> bool:
    return not ext.real or degree(ext) == 1


def _pairwise(x: FiniteExtension, y: FiniteExtension, op) -> tuple[PrimeComponent, ...]:
    if [c.p for c in x.components] != [c.p for c in y.components]:
        raise SpecError("extensions are over different specs")
    return tuple(op(a, b) for a, b in zip(x.components, y.components))


def compositum(x: FiniteExtension, y: FiniteExtension) -> FiniteExtension:
    return FiniteExtension(x.real and y.real, _pairwise(x, y, component_intersection))


def intersect(x: FiniteExtension, y: FiniteExtension) -> FiniteExtension:
    return FiniteExtension(x.real or y.real, _pairwise(x, y, component_sum))


def embeds(x: FiniteExtension, y: FiniteExtension) -> bool:
    """Whether ``x`` embeds in ``y`` over E."""
    if not x.real and y.real:
        return False
    return all(_pairwise(x, y, component_contains))


def adjoin_i(ext: FiniteExtension) -> FiniteExtension:
    return FiniteExtension(False, ext.components)


def odd_part(ext: FiniteExtension) -> FiniteExtension:
    """The maximal odd-degree subfield R0 (up to E-isomorphism)."""
    return FiniteExtension(True, ext.components)


def normal_closure(ext: FiniteExtension) -> FiniteExtension:
    return ext if degree(ext) == 1 else adjoin_i(ext)


def galois_shape(ext: FiniteExtension) -> GroupShape:
    """Shape of the abelian group Gal(R(sqrt(-1))/E(sqrt(-1)))."""
    return GroupShape.product(*(c.quotient_shape() for c in ext.components))


@dataclass(frozen=True)
class GaloisGroup:
    shape: GroupShape
    inversion: bool  # extended by C2 acting by inversion

    def to_json(self) -> dict:
        return {"shape": self.shape.to_json(), "inversion": self.inversion}


def galois_group(ext: FiniteExtension) -> GaloisGroup | None:
    """Gal(R/E) for normal R: the abelian part, extended by C2 when nonreal."""
    if not is_normal(ext):
        return None
    return GaloisGroup(galois_shape(ext), not ext.real)


def abelian_part(ext: FiniteExtension) -> FiniteExtension:
    """R ∩ E_Ab.  The maximal abelian extension of E is E(sqrt(-1)) because
    the commutator subgroup of the Galois group is the whole odd part."""
    return FiniteExtension(ext.real, tuple(
        PrimeComponent.full(c.p, c.rank, c.level) for c in ext.components
    ))


def required_levels(spec: FieldSpec, max_degree: int, primes: Iterable[int] | None = None) -> dict[int, int]:
    if primes is None:
        primes = spec.odd_primes
    return {p: max_exponent(p, max_degree) for p in primes}


def check_levels(spec: FieldSpec, max_degree: int, primes: Iterable[int] | None = None) -> None:
    for p, t in sorted(required_levels(spec, max_degree, primes).items()):
        if spec.level[p] < t:
            raise LevelError(p, t, spec.level[p], f"needed for degree bound {max_degree}")


def enumerate_extensions(spec: FieldSpec, max_degree: int, class_fields_only: bool = False) -> list[FiniteExtension]:
    """Every extension class of degree <= ``max_degree``, each once, sorted
    by degree and then by canonical data.

    With ``class_fields_only`` the pi1 components are kept full, so only the
    pi2 levels need to cover the bound.
    """
    if max_degree < 1:
        raise SpecError("max_degree must be >= 1")
    primes = sorted(spec.pi2 if class_fields_only else spec.odd_primes)
    check_levels(spec, max_degree, primes)
    base = FiniteExtension.base(spec)
    choices = []
    for c in base.components:
        if c.p in primes:
            choices.append(components_up_to(c.p, c.rank, c.level, max_degree))
        else:
            choices.append([c])
    out = []
    for real in (True, False):
        budget = max_degree if real else max_degree // 2
        if budget < 1:
            continue
        for combo in _bounded_products(choices, budget):
            out.append(FiniteExtension(real, combo))
    out.sort(key=lambda e: e.sort_key)
    return out


def _bounded_products(choices: list[list[PrimeComponent]], budget: int, i: int = 0):
    if i == len(choices):
        yield ()
        return
    for c in choices[i]:
        if c.index <= budget:
            for rest in _bounded_products(choices, budget // c.index, i + 1):
                yield (c,) + rest


class SigmaClass:
    SIGMA0 = "SIGMA0"
    SIGMA1 = "SIGMA1"
    NEITHER = "NEITHER"


def sigma_class(spec: FieldSpec, ext: FiniteExtension) -> str:
    if any(c.p in spec.pi1 and not c.is_full for c in ext.components):
        return SigmaClass.NEITHER
    return SigmaClass.SIGMA0 if ext.real else SigmaClass.SIGMA1
