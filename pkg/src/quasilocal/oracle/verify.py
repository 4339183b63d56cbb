"""Exhaustive verification sweeps.

Each verifier enumerates a finite instance universe determined by the field
spec and the bounds, and compares the closed-form modules against explicit
element-set computations in a truncated model.  Truncation levels are raised
to whatever the bounds require; the effective levels are part of the report.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import reduce
from itertools import combinations_with_replacement
from math import gcd, prod
from typing import Callable

from sympy import divisors, factorint

from ..core import (
    FieldSpec,
    GroupShape,
    finite_index_shape_law,
    greatest_admissible_pair,
    power_collapse,
    unit_quotient_shape,
    valuation,
)
from ..lattice import (
    FiniteExtension,
    PrimeComponent,
    SigmaClass,
    adjoin_i,
    compositum,
    degree,
    embeds,
    enumerate_extensions,
    galois_shape,
    intersect,
    is_normal,
    max_exponent,
    odd_part,
    sigma_class,
)
from ..norms import (
    NormSubgroup,
    class_field_of,
    cl_of,
    contains,
    extend_to_E1,
    join,
    meet,
    norm_group,
    norm_group_over_E1,
    norm_groups_E1_up_to,
    norm_groups_of_index,
    norm_groups_up_to,
    quotient_shape,
    restrict_to_base,
)
from .groups import DEFAULT_BUDGET, BudgetExceeded, FiniteAbelianGroup, enumerate_subgroups
from .groups import quotient_shape as brute_quotient_shape
from .models import Model, product_subgroups

THEOREMS = (
    "THM_1_1",
    "THM_1_2_I",
    "THM_1_2_II",
    "THM_1_2_III",
    "LEMMA_2_1",
    "LEMMA_2_2",
    "LEMMA_2_4_II",
    "LEMMA_2_4_III",
    "PROP_3_1",
    "STMT_3_1",
    "REMARK_3_2_I",
)

MAX_VIOLATIONS = 20


class BoundsRefused(ValueError):
    pass


@dataclass(frozen=True)
class Bounds:
    """Sweep bounds.  ``None`` fields take theorem defaults derived from
    ``max_degree`` and the field spec."""

    max_degree: int = 100
    pair_degree: int | None = None  # pairs, u-indices and coprime pairs
    e1_index: int | None = None  # E1-level norm groups for STMT_3_1
    n_modulus: int | None = None  # n ranges over divisors of this
    budget: int = DEFAULT_BUDGET

    @property
    def pairs(self) -> int:
        return self.pair_degree if self.pair_degree is not None else self.max_degree // 2

    @property
    def e1(self) -> int:
        return self.e1_index if self.e1_index is not None else self.max_degree // 4

    def to_json(self) -> dict:
        return {
            "max_degree": self.max_degree,
            "pair_degree": self.pairs,
            "e1_index": self.e1,
            "n_modulus": self.n_modulus,
            "budget": self.budget,
        }


@dataclass
class VerificationReport:
    theorem: str
    spec: FieldSpec
    bounds: Bounds
    levels: dict[int, int] = field(default_factory=dict)
    universe: str = ""
    instances: int = 0
    violations: list[dict] = field(default_factory=list)
    total_violations: int = 0
    elapsed_ms: float = 0.0

    @property
    def passed(self) -> bool:
        return self.total_violations == 0

    def check(self, instance: str, expected, actual) -> bool:
        self.instances += 1
        if expected == actual:
            return True
        self.total_violations += 1
        if len(self.violations) < MAX_VIOLATIONS:
            self.violations.append({"instance": instance, "expected": _show(expected), "actual": _show(actual)})
        return False

    def to_json(self, timing: bool = True) -> dict:
        out = {
            "theorem": self.theorem,
            "pass": self.passed,
            "instances": self.instances,
            "violations": self.violations,
            "total_violations": self.total_violations,
            "universe": self.universe,
            "spec": self.spec.to_json(),
            "bounds": self.bounds.to_json(),
            "levels": {str(p): k for p, k in sorted(self.levels.items())},
        }
        if timing:
            out["elapsed_ms"] = round(self.elapsed_ms, 1)
        return out


def _show(x):
    if hasattr(x, "to_json"):
        return x.to_json()
    if isinstance(x, (bool, int, type(None))):
        return x
    if isinstance(x, list):
        return [_show(v) for v in x]
    text = str(x)
    return text if len(text) <= 200 else text[:197] + "..."


def default_modulus(spec: FieldSpec, square_two: bool = True) -> int:
    two = 4 if square_two else 2
    return two * prod(p * p for p in spec.odd_primes)


def _lift(spec: FieldSpec, bound: int, pair_bound: int = 0) -> FieldSpec:
    """Raise levels so that every component of index <= bound, and every
    compositum of two components of index <= pair_bound, is representable."""
    need = {}
    for p in spec.odd_primes:
        t = max_exponent(p, bound)
        if pair_bound and p in spec.pi2:
            t = max(t, 2 * max_exponent(p, pair_bound))
        need[p] = max(t, 1)
    return spec.with_levels(need)


def _model(spec: FieldSpec, bound: int, budget: int, with_two: bool = True) -> Model:
    levels = {p: max(max_exponent(p, bound), 1) for p in spec.odd_primes}
    model = Model(spec, levels, with_two)
    for p, g in model.groups.items():
        if g.order > budget:
            raise BoundsRefused(f"truncated model at prime {p} has {g.order} elements; budget must be >= {g.order}")
    return model


def _oracle_norm_groups(model: Model, bound: int, budget: int) -> list[dict]:
    """All subgroups of the truncated E*/D(E) model of index <= bound."""
    per = {p: [s.elements for s in enumerate_subgroups(g, budget)] for p, g in model.groups.items()}
    return [h for h in product_subgroups(per) if model.index(h) <= bound]


def _divides_pi1(spec: FieldSpec, n: int) -> bool:
    return any(n % p == 0 for p in spec.pi1)


# -- verifiers ---------------------------------------------------------------

def _thm_1_1(spec: FieldSpec, b: Bounds, r: VerificationReport) -> None:
    B, U = b.max_degree, b.pairs
    s = _lift(spec, B)
    r.levels = dict(s.level)
    model = _model(s, B, b.budget)
    exts = enumerate_extensions(s, B)
    r.universe = f"{len(exts)} extension classes of degree <= {B}; norm groups of index <= {B}; pairs with index(U) <= {U}"
    norms = {e: norm_group(s, e) for e in exts}
    nelems = {e: Model.key(model.norm_elements(norms[e])) for e in exts}
    # (iii) class fields are exactly the extensions of degree prime to pi1
    for e in exts:
        r.check(f"class-field criterion {e}", not _divides_pi1(s, degree(e)), norms[e].index == degree(e))
    # (iii) Nr(E) is exactly the set of subgroups of index prime to pi1
    realized = {nelems[e] for e in exts}
    oracle = _oracle_norm_groups(model, B, b.budget)
    for h in oracle:
        n = model.index(h)
        r.check(f"subgroup of index {n} is a norm group", not _divides_pi1(s, n), Model.key(h) in realized)
    for n in range(1, B + 1):
        listed = {Model.key(model.norm_elements(u)) for u in norm_groups_of_index(s, n)}
        brute = {Model.key(h) for h in oracle if model.index(h) == n and not _divides_pi1(s, n)}
        r.check(f"number of norm groups of index {n}", len(brute), len(listed))
        r.check(f"norm groups of index {n}", True, brute == listed)
    # (i) each norm group has a unique class field
    class_fields = [e for e in exts if norms[e].index == degree(e)]
    for u in norm_groups_up_to(s, B):
        key = Model.key(model.norm_elements(u))
        hits = [e for e in class_fields if nelems[e] == key]
        r.check(f"unique class field for {u}", 1, len(hits))
        r.check(f"class_field_of {u}", hits[:1], [class_field_of(s, u)])
    # (ii) embedding criterion, plus uniqueness of cl(Psi) inside Psi
    gal = {e: model.galois_elements(e) for e in exts}
    for u in norm_groups_up_to(s, U):
        x = class_field_of(s, u)
        gx = model.galois_elements(x)
        ukey = model.norm_elements(u)
        for psi in exts:
            brute_norm = Model.subset(model.norm_elements(norms[psi]), ukey)
            r.check(f"contains({u}, N({psi}))", brute_norm, contains(u, norms[psi]))
            brute_embed = (x.real or not psi.real) and Model.subset(gal[psi], gx)
            r.check(f"embeds({x}, {psi})", brute_embed, embeds(x, psi))
            r.check(f"criterion ({u}, {psi})", brute_norm, embeds(x, psi))
    for psi in exts:
        inside = [x for x in class_fields if embeds(x, psi) and nelems[x] == nelems[psi]]
        r.check(f"unique copy of cl in {psi}", [cl_of(s, psi)], inside)


def _thm_1_2_i(spec: FieldSpec, b: Bounds, r: VerificationReport) -> None:
    B, P = b.max_degree, b.pairs
    s = _lift(spec, B, P)
    r.levels = dict(s.level)
    model = _model(s, B, b.budget)
    exts = enumerate_extensions(s, B)
    sigma = [e for e in exts if sigma_class(s, e) != SigmaClass.NEITHER]
    r.universe = f"{len(sigma)} Σ0∪Σ1 classes of degree <= {B}; pairs of degree <= {P}"
    for e in exts:
        r.check(f"Σ-membership vs class field {e}", norm_group(s, e).index == degree(e),
                sigma_class(s, e) != SigmaClass.NEITHER)
        if sigma_class(s, e) == SigmaClass.SIGMA1:
            r.check(f"Σ1 degree even {e}", 0, degree(e) % 2)
    # bijection onto the oracle's norm groups of index <= B
    images = [Model.key(model.norm_elements(norm_group(s, e))) for e in sigma]
    oracle = [h for h in _oracle_norm_groups(model, B, b.budget) if not _divides_pi1(s, model.index(h))]
    for h in oracle:
        r.check(f"preimages of norm group of index {model.index(h)}", 1, images.count(Model.key(h)))
    r.check("image size", len(oracle), len(set(images)))
    r.check("closed-form injectivity", len(sigma), len({norm_group(s, e) for e in sigma}))
    for d, real in ((5, True), (10, False)):
        if 5 in s.pi2:
            want = sum(1 for h in oracle if model.index(h) == d)
            got = sum(1 for e in sigma if degree(e) == d and e.real == real)
            r.check(f"class fields of degree {d}", want, got)
    # duality on pairs
    small = [e for e in sigma if degree(e) <= P]
    gal = {e: model.galois_elements(e) for e in small}
    nel = {e: model.norm_elements(norm_group(s, e)) for e in small}
    for x, y in combinations_with_replacement(small, 2):
        tag = f"({x}, {y})"
        c, i = compositum(x, y), intersect(x, y)
        r.check(f"compositum subgroup {tag}", Model.key(model.intersection(gal[x], gal[y])),
                Model.key(model.galois_elements(c)))
        r.check(f"intersection subgroup {tag}", Model.key(model.sum(gal[x], gal[y])),
                Model.key(model.galois_elements(i)))
        nx, ny = norm_group(s, x), norm_group(s, y)
        r.check(f"N(compositum) = meet {tag}", meet(nx, ny), norm_group(s, c))
        r.check(f"N(intersection) = join {tag}", join(nx, ny), norm_group(s, i))
        r.check(f"N(compositum) = ∩ by elements {tag}", Model.key(model.intersection(nel[x], nel[y])),
                Model.key(model.norm_elements(norm_group(s, c))))
        r.check(f"N(intersection) = product by elements {tag}", Model.key(model.sum(nel[x], nel[y])),
                Model.key(model.norm_elements(norm_group(s, i))))


def _brute_admissible_pair(spec: FieldSpec, n: int) -> tuple[int, int] | None:
    """Greatest (n(E), n(E)_1) by search over divisor pairs; None if the
    componentwise maximum is not attained."""
    outside = [p for p in factorint(n) if p != 2 and p not in spec.odd_primes]
    ok = []
    for a in divisors(n):
        if a % 4 == 0 or any(a % p == 0 for p in outside):
            continue
        for c in divisors(a):
            if c % 2 == 0 or any(c % p == 0 for p in spec.pi1):
                continue
            ok.append((a, c))
    best = (max(a for a, _ in ok), max(c for _, c in ok))
    return best if best in ok else None


def _thm_1_2_ii(spec: FieldSpec, b: Bounds, r: VerificationReport) -> None:
    N = b.n_modulus or default_modulus(spec)
    ns = divisors(N)
    r.universe = f"{len(ns)} divisors n of {N}"
    r.levels = dict(spec.level)
    for n in ns:
        pair = greatest_admissible_pair(spec, n)
        r.check(f"greatest admissible pair n={n}", _brute_admissible_pair(spec, n), pair)
        model = Model(spec, {p: valuation(n, p) + 1 if n % p == 0 else 1 for p in spec.odd_primes})
        for p, g in model.groups.items():
            if g.order > b.budget:
                raise BoundsRefused(f"model at prime {p} needs budget >= {g.order}")
        powers = {p: g.multiples(n) for p, g in model.groups.items()}
        collapsed = {p: g.multiples(power_collapse(spec, n)) for p, g in model.groups.items()}
        r.check(f"E*^n = E*^n(E) n={n}", Model.key(collapsed), Model.key(powers))
        shape = model.quotient_shape(powers)
        r.check(f"E*/E*^n shape n={n}", shape, unit_quotient_shape(spec, n))
        r.check(f"C_n(E) x C_n(E)1 n={n}", GroupShape.of_cyclic(pair), unit_quotient_shape(spec, n))
        r.check(f"index n(E)n(E)1 n={n}", pair[0] * pair[1], model.index(powers))
    for p in sorted(spec.primes):
        if N % p == 0:
            m = 1 if p == 2 else spec.rank(p)
            r.check(f"special n={p}", GroupShape.of_cyclic([p] * m), unit_quotient_shape(spec, p))


def _thm_1_2_iii(spec: FieldSpec, b: Bounds, r: VerificationReport) -> None:
    B = b.max_degree
    s = _lift(spec, B)
    r.levels = dict(s.level)
    model = _model(s, B, b.budget)
    exts = [e for e in enumerate_extensions(s, B) if all(c.is_full for c in e.components if c.p in s.pi1)]
    i_ext = FiniteExtension.base(s, real=False)
    r.universe = f"{len(exts)} extension classes of degree <= {B} inside Λ1"
    for e in exts:
        galois = model.is_normal(e)
        r.check(f"Σ1 = Galois & even degree {e}", galois and degree(e) % 2 == 0,
                sigma_class(s, e) == SigmaClass.SIGMA1)
        if sigma_class(s, e) == SigmaClass.SIGMA1:
            r.check(f"sqrt(-1) in {e}", True, embeds(i_ext, e))


def _lemma_2_1(spec: FieldSpec, b: Bounds, r: VerificationReport) -> None:
    P = b.pairs
    s = _lift(spec, P)
    r.levels = dict(s.level)
    model = _model(s, P, b.budget)
    exts = enumerate_extensions(s, P)
    pairs = [(x, y) for x, y in combinations_with_replacement(exts, 2) if gcd(degree(x), degree(y)) == 1]
    r.universe = f"{len(pairs)} coprime-degree pairs of degree <= {P}"
    for x, y in pairs:
        tag = f"({x}, {y})"
        c = compositum(x, y)
        r.check(f"degree of compositum {tag}", degree(x) * degree(y), model.galois_degree(c))
        nx, ny, nc = norm_group(s, x), norm_group(s, y), norm_group(s, c)
        r.check(f"N(L) = N(L1) ∩ N(L2) {tag}", meet(nx, ny), nc)
        ex, ey, ec = (model.norm_elements(u) for u in (nx, ny, nc))
        r.check(f"N(L) by elements {tag}", Model.key(model.intersection(ex, ey)), Model.key(ec))
        r.check(f"quotient product {tag}", GroupShape.product(quotient_shape(s, nx), quotient_shape(s, ny)),
                quotient_shape(s, nc))
        r.check(f"quotient product by elements {tag}",
                GroupShape.product(model.quotient_shape(ex), model.quotient_shape(ey)), model.quotient_shape(ec))


def _prime_parts(s: FieldSpec, m: FiniteExtension, real: bool) -> list[FiniteExtension]:
    """Single-prime subfields of ``m``: one per odd prime dividing [M:E1].

    With ``real`` these are the odd-degree p-parts and E(sqrt(-1)) is added
    for the prime 2; otherwise they are M ∩ E1(p) over E1.
    """
    parts = [FiniteExtension.build(s, real, {c.p: c}) for c in m.components if not c.is_full]
    if real:
        parts.insert(0, FiniteExtension.base(s, real=False))
    return parts or [FiniteExtension.base(s, real=False)]


def _lemma_2_2(spec: FieldSpec, b: Bounds, r: VerificationReport) -> None:
    B = b.max_degree
    s = _lift(spec, B)
    r.levels = dict(s.level)
    model = _model(s, B, b.budget)
    m1 = Model(s, model.levels, with_two=False)
    exts = [e for e in enumerate_extensions(s, B) if not e.real]
    r.universe = f"{len(exts)} nonreal extension classes of degree <= {B}"
    for m in exts:
        parts = _prime_parts(s, m, real=True)
        for part in parts:
            r.check(f"{part} is a subfield of {m}", True, embeds(part, m))
        nm = norm_group(s, m)
        ns = [norm_group(s, part) for part in parts]
        r.check(f"N(M) = ∩ N(M_p) {m}", reduce(meet, ns), nm)
        els = [model.norm_elements(u) for u in ns]
        r.check(f"N(M) by elements {m}", Model.key(reduce(model.intersection, els)),
                Model.key(model.norm_elements(nm)))
        r.check(f"E*/N(M) = prod E*/N(M_p) {m}", GroupShape.product(*(model.quotient_shape(e) for e in els)),
                quotient_shape(s, nm))
        # over E1, where M is abelian
        e1 = [m1.norm_elements_e1(norm_group_over_E1(s, part)) for part in _prime_parts(s, m, real=False)]
        whole = m1.norm_elements_e1(norm_group_over_E1(s, m))
        r.check(f"N(M/E1) = ∩ N(M_p/E1) {m}", Model.key(reduce(m1.intersection, e1)), Model.key(whole))
        r.check(f"E1*/N(M/E1) = prod {m}", GroupShape.product(*(m1.quotient_shape(e) for e in e1)),
                m1.quotient_shape(whole))
        r.check(f"E1*/N(M/E1) = G(cl(M)/E1) {m}", galois_shape(cl_of(s, m)), m1.quotient_shape(whole))


def _lemma_2_4_ii(spec: FieldSpec, b: Bounds, r: VerificationReport) -> None:
    N = b.n_modulus or default_modulus(spec)
    odd = [n for n in divisors(N) if n % 2]
    r.universe = f"{len(odd)} odd divisors n of {N}"
    r.levels = dict(spec.level)
    for n in odd:
        levels = {p: valuation(n, p) + 1 if n % p == 0 else 1 for p in spec.odd_primes}
        me, m1 = Model(spec, levels), Model(spec, levels, with_two=False)
        pe = {p: g.multiples(n) for p, g in me.groups.items()}
        p1 = {p: g.multiples(n) for p, g in m1.groups.items()}
        r.check(f"E*/E*^n = E1*/E1*^n n={n}", me.quotient_shape(pe), m1.quotient_shape(p1))
        r.check(f"E1*/E1*^n shape n={n}", unit_quotient_shape(spec, n), m1.quotient_shape(p1))
        # image of E* (2-part dies in E1) times E1*^n is all of E1*
        image = {p: frozenset(g.elements()) for p, g in m1.groups.items()}
        r.check(f"E1* = E* E1*^n n={n}", Model.key(m1.full()), Model.key(m1.sum(image, p1)))


def _lemma_2_4_iii(spec: FieldSpec, b: Bounds, r: VerificationReport) -> None:
    r.levels = dict(spec.level)
    r.universe = "p^k for p in pi1 ∪ pi2 and 1 <= k <= level"
    for p in sorted(spec.odd_primes):
        m = spec.rank(p)
        for k in range(1, spec.level[p] + 1):
            n = p**k
            want = GroupShape(tuple([n] * m))
            r.check(f"E*/E*^{p}^{k}", want, unit_quotient_shape(spec, n))
            g = FiniteAbelianGroup((p ** (k + 1),) * m)
            if g.order > b.budget:
                raise BoundsRefused(f"model at prime {p} needs budget >= {g.order}")
            r.check(f"model E*/E*^{p}^{k}", want, brute_quotient_shape(g, g.multiples(n)))


def _prop_3_1(spec: FieldSpec, b: Bounds, r: VerificationReport) -> None:
    B = b.max_degree
    s = _lift(spec, B)
    r.levels = dict(s.level)
    model = _model(s, B, b.budget)
    exts = [e for e in enumerate_extensions(s, B) if degree(e) > 1]
    r.universe = f"{len(exts)} extension classes R != E of degree <= {B}"
    for e in exts:
        r0 = odd_part(e)
        deg, deg0 = model.galois_degree(e), model.galois_degree(r0)
        r.check(f"[R0:E] odd part of [R:E] {e}", deg // (2 ** valuation(deg, 2)), deg0)
        r.check(f"R in {{R0, R1}} {e}", True, e in (r0, adjoin_i(r0)))
        brute_normal = model.is_normal(e)
        r.check(f"R = R1 iff normal {e}", e == adjoin_i(r0), brute_normal)
        r.check(f"is_normal {e}", brute_normal, is_normal(e))
        # (alpha) norm limitation
        rp = cl_of(s, e)
        stripped = FiniteExtension(e.real, tuple(
            c if c.p not in s.pi1 else PrimeComponent.full(c.p, c.rank, c.level) for c in e.components
        ))
        r.check(f"N(R') = N(R) {e}", norm_group(s, e), norm_group(s, rp))
        r.check(f"N(R) ignores pi1 {e}", norm_group(s, e), norm_group(s, stripped))
        r.check(f"R' embeds in R {e}", True, embeds(rp, e))
        r.check(f"[R':E] primes {e}", True, set(factorint(degree(rp))) <= set(s.pi2) | {2})
        r.check(f"[R:R'] primes {e}", True, set(factorint(degree(e) // degree(rp))) <= set(s.pi1))
        idx = norm_group(s, e).index
        r.check(f"i(R/E) | [R:E] {e}", 0, degree(e) % idx)
        r.check(f"i(R/E) = [R:E] iff Σ {e}", sigma_class(s, e) != SigmaClass.NEITHER, idx == degree(e))
        # (beta)
        delta = degree(e) // degree(r0)
        want = GroupShape.product(galois_shape(adjoin_i(rp)), GroupShape.of_cyclic([delta]))
        r.check(f"E*/N(R) = G(R'(i)/E1) x C_delta {e}", want,
                model.quotient_shape(model.norm_elements(norm_group(s, e))))
        r.check(f"quotient_shape {e}", want, quotient_shape(s, norm_group(s, e)))


def _stmt_3_1(spec: FieldSpec, b: Bounds, r: VerificationReport) -> None:
    U = b.e1
    s = _lift(spec, U)
    r.levels = dict(s.level)
    me = _model(s, U, b.budget)
    m1 = Model(s, me.levels, with_two=False)
    groups = norm_groups_E1_up_to(s, U)
    r.universe = f"{len(groups)} E1-level norm groups of index <= {U}, both reality flags"
    for u1 in groups:
        for nonreal in (False, True):
            u = restrict_to_base(s, u1, nonreal)
            r.check(f"extend(restrict({u1.to_json()}, {nonreal}))", u1, extend_to_E1(s, u))
            r.check(f"index {u1.to_json()} {nonreal}", u1.index * (2 if nonreal else 1), u.index)
        u = restrict_to_base(s, u1, False)
        h1 = m1.norm_elements_e1(u1)
        # H1 ∩ E*: preimage under E*/D -> E1*/D1, which kills the 2-part
        pre = {2: frozenset(me.groups[2].elements())}
        pre.update({p: frozenset(x for x in me.groups[p].elements() if x in h1[p]) for p in h1})
        r.check(f"N(R0/E) = E* ∩ N(R1/E1) {u1.to_json()}", Model.key(pre), Model.key(me.norm_elements(u)))
        r.check(f"E*/N(R0/E) = E1*/N(R1/E1) {u1.to_json()}", m1.quotient_shape(h1), me.quotient_shape(pre))
        r.check(f"closed-form quotient {u1.to_json()}", quotient_shape(s, u1), quotient_shape(s, u))
    image = [restrict_to_base(s, u1, False) for u1 in groups]
    target = [u for u in norm_groups_up_to(s, U) if u.two_part == 1]
    r.check("restriction is injective", len(groups), len(set(image)))
    r.check("restriction is onto", sorted(target, key=lambda u: u.sort_key), sorted(image, key=lambda u: u.sort_key))
    for e in enumerate_extensions(s, U):
        r.check(f"N(R1/E1) from N(R/E) {e}", extend_to_E1(s, norm_group(s, e)), norm_group_over_E1(s, e))


def _remark_3_2_i(spec: FieldSpec, b: Bounds, r: VerificationReport) -> None:
    N = b.n_modulus or default_modulus(spec, square_two=False)
    ns = divisors(N)
    r.universe = f"subgroups of E*/E*^n for the {len(ns)} divisors n of {N}"
    r.levels = dict(spec.level)
    bad = sorted(spec.pi1 | {2})
    for n in ns:
        levels = {p: valuation(n, p) + 1 if n % p == 0 else 1 for p in spec.odd_primes}
        model = Model(spec, levels)
        per = {}
        for p, g in model.groups.items():
            q = FiniteAbelianGroup(tuple(_shape_moduli(model, p, n)))
            if q.order == 1:
                continue
            per[p] = (q, [x.elements for x in enumerate_subgroups(q, b.budget)])
        shapes = {(p, h): brute_quotient_shape(q, h) for p, (q, subs) in per.items() for h in subs}
        for h in product_subgroups({p: subs for p, (_, subs) in per.items()}):
            shape = GroupShape.product(*(shapes[p, s] for p, s in h.items()))
            idx, e = shape.order, shape.exponent
            tag = f"n={n} index={idx} exponent={e}"
            r.check(f"at most two factors {tag}", True, shape.rank <= 2)
            r.check(f"index | e^2 {tag}", 0, (e * e) % idx)
            r.check(f"index/e prime to {bad} {tag}", True, all((idx // e) % p for p in bad))
            r.check(f"shape C_e x C_n/e {tag}", GroupShape.of_cyclic([e, idx // e]), shape)
            r.check(f"shape law {tag}", shape, finite_index_shape_law(spec, idx, e))


def _shape_moduli(model: Model, p: int, n: int) -> list[int]:
    """Moduli of the quotient G_p / n G_p, computed by brute force."""
    g = model.groups[p]
    return list(brute_quotient_shape(g, g.multiples(n)).factors)


_VERIFIERS: dict[str, Callable[[FieldSpec, Bounds, VerificationReport], None]] = {
    "THM_1_1": _thm_1_1,
    "THM_1_2_I": _thm_1_2_i,
    "THM_1_2_II": _thm_1_2_ii,
    "THM_1_2_III": _thm_1_2_iii,
    "LEMMA_2_1": _lemma_2_1,
    "LEMMA_2_2": _lemma_2_2,
    "LEMMA_2_4_II": _lemma_2_4_ii,
    "LEMMA_2_4_III": _lemma_2_4_iii,
    "PROP_3_1": _prop_3_1,
    "STMT_3_1": _stmt_3_1,
    "REMARK_3_2_I": _remark_3_2_i,
}


def verify(spec: FieldSpec, theorem: str, bounds: Bounds | None = None) -> VerificationReport:
    """Run one exhaustive sweep.  Raises :class:`BoundsRefused` when the
    bounds need a larger budget."""
    if theorem not in _VERIFIERS:
        raise ValueError(f"unknown theorem id {theorem!r}; expected one of {', '.join(THEOREMS)}")
    bounds = bounds or Bounds()
    if bounds.max_degree < 1:
        raise BoundsRefused("max_degree must be >= 1")
    report = VerificationReport(theorem, spec, bounds)
    start = time.perf_counter()
    try:
        _VERIFIERS[theorem](spec, bounds, report)
    except BudgetExceeded as exc:
        raise BoundsRefused(f"{theorem}: budget must be >= {exc.needed}") from None
    report.elapsed_ms = (time.perf_counter() - start) * 1000
    return report


def verify_all(spec: FieldSpec, bounds: Bounds | None = None) -> list[VerificationReport]:
    return [verify(spec, t, bounds) for t in THEOREMS]
