import itertools

import pytest
from hypothesis import given, settings, strategies as st

from quasilocal.core import GroupShape, LevelError, SpecError, make_field_spec
from quasilocal.lattice import (
    FiniteExtension,
    PrimeComponent,
    SigmaClass,
    abelian_part,
    adjoin_i,
    canonical_component,
    component_contains,
    component_intersection,
    component_sum,
    components_up_to,
    compositum,
    degree,
    embeds,
    enumerate_extensions,
    galois_group,
    galois_shape,
    intersect,
    is_normal,
    normal_closure,
    odd_part,
    sigma_class,
)

S = make_field_spec({3}, {5}, {3: 1, 5: 2})
S2 = make_field_spec({3}, {5}, {3: 2, 5: 2})
EMPTY = make_field_spec(set(), set(), {})


def comp5(a, b, c, spec=S):
    return PrimeComponent(5, 2, a, b, c, spec.level[5])


def comp3(e, spec=S):
    return PrimeComponent(3, 1, e, level=spec.level[3])


def ext(real, spec=S, **comps):
    return FiniteExtension.build(spec, real, {int(k[1:]): v for k, v in comps.items()})


E = FiniteExtension.base(S)
EI = FiniteExtension.base(S, real=False)
R3 = ext(True, p3=comp3(1))


def test_canonical_component_examples():
    assert canonical_component(S, 5, [(5, 0), (0, 1)]).key == (1, 0, 0)
    assert canonical_component(S, 5, [(5, 5), (0, 5)]).key == (1, 1, 0)
    for u in (1, 2, 4, 7, -1):
        assert canonical_component(S2, 3, [(9 * u,)]).a == 2


def test_canonical_component_errors():
    with pytest.raises(SpecError):
        canonical_component(S, 5, [(0, 0)])
    with pytest.raises(SpecError):
        canonical_component(S, 5, [(1, 2), (2, 4)])
    with pytest.raises(LevelError):
        canonical_component(S, 5, [(125, 0), (0, 1)])
    with pytest.raises(LevelError):
        canonical_component(S, 3, [(9,)])


def test_degree_examples():
    assert degree(E) == 1
    assert degree(ext(False, p3=comp3(1), p5=comp5(1, 0, 0))) == 30
    assert degree(ext(True, p5=comp5(1, 1, 0))) == 25


def test_normality_examples():
    assert not is_normal(R3)
    assert is_normal(ext(False, p3=comp3(1), p5=comp5(1, 0, 0)))
    assert is_normal(E)


def test_compositum_examples():
    x, y = ext(True, p5=comp5(1, 0, 0)), ext(True, p5=comp5(0, 1, 0))
    c = compositum(x, y)
    assert c == ext(True, p5=comp5(1, 1, 0)) and degree(c) == 25
    assert compositum(x, E) == x
    c = compositum(R3, EI)
    assert not c.real and degree(c) == 6


def test_intersect_examples():
    x, y = ext(True, p5=comp5(1, 0, 0)), ext(True, p5=comp5(0, 1, 0))
    assert intersect(x, y) == E
    assert intersect(x, x) == x
    assert intersect(EI, R3) == E


def test_embeds_examples():
    assert embeds(E, R3)
    assert not embeds(EI, R3)
    assert embeds(ext(True, p5=comp5(1, 0, 0)), ext(False, p5=comp5(1, 1, 0)))


def test_adjoin_i_and_odd_part_examples():
    assert adjoin_i(R3) == ext(False, p3=comp3(1)) and degree(adjoin_i(R3)) == 6
    n30 = ext(False, p3=comp3(1), p5=comp5(1, 0, 0))
    assert adjoin_i(n30) == n30
    assert adjoin_i(E) == EI and degree(EI) == 2
    assert odd_part(n30) == ext(True, p3=comp3(1), p5=comp5(1, 0, 0)) and degree(odd_part(n30)) == 15
    assert odd_part(R3) == R3
    assert odd_part(EI) == E
    assert normal_closure(R3) == adjoin_i(R3)


def test_galois_shape_examples():
    assert galois_shape(EI).to_json() == []
    assert galois_shape(ext(False, p5=comp5(1, 1, 0))).to_json() == [5, 5]
    assert galois_shape(ext(False, p3=comp3(2, S2), spec=S2)).to_json() == [9]
    g = galois_group(ext(False, p5=comp5(1, 1, 0)))
    assert g.shape == GroupShape((5, 5)) and g.inversion
    assert galois_group(R3) is None


def test_enumerate_examples():
    exts = enumerate_extensions(S, 5)
    assert len(exts) == 9
    assert exts[0] == E
    assert sum(1 for e in exts if degree(e) == 5) == 6
    assert enumerate_extensions(S, 1) == [E]
    assert enumerate_extensions(EMPTY, 100) == [FiniteExtension.base(EMPTY), FiniteExtension.base(EMPTY, False)]
    # sorted by degree, then canonical data
    assert exts == sorted(exts, key=lambda e: e.sort_key)


def test_enumerate_refuses_insufficient_level():
    with pytest.raises(LevelError, match="level for prime 3 must be >= 4"):
        enumerate_extensions(S, 125)
    with pytest.raises(LevelError, match="level for prime 5 must be >= 3"):
        enumerate_extensions(make_field_spec({3}, {5}, {3: 4, 5: 2}), 125)


def test_sigma_class_examples():
    assert sigma_class(S, ext(True, p5=comp5(1, 0, 0))) == SigmaClass.SIGMA0
    assert sigma_class(S, ext(False, p3=comp3(1))) == SigmaClass.NEITHER
    assert sigma_class(S, EI) == SigmaClass.SIGMA1


def test_extension_json_round_trip():
    for e in enumerate_extensions(S2, 10):
        assert FiniteExtension.from_json(S2, e.to_json()) == e
    data = {"real": True, "components": {"3": {"exp": 1}, "5": {"a": 1, "b": 0, "c": 0}}}
    assert FiniteExtension.from_json(S, data).to_json() == data


@pytest.mark.parametrize("bad", [
    {"real": True, "components": {"7": {"exp": 1}}},
    {"real": True, "components": {"5": {"a": 1, "b": 0, "c": 5}}},
    {"real": "yes", "components": {}},
    {"components": {}},
])
def test_extension_json_rejects(bad):
    with pytest.raises(SpecError):
        FiniteExtension.from_json(S, bad)


# -- laws over the desk-scale universe ---------------------------------------

WIDE = make_field_spec({3}, {5}, {3: 8, 5: 6})
UNIVERSE = enumerate_extensions(WIDE, 50)


def test_lattice_laws_on_all_pairs():
    for x, y in itertools.product(UNIVERSE, repeat=2):
        c, i = compositum(x, y), intersect(x, y)
        assert c == compositum(y, x) and i == intersect(y, x)
        assert compositum(x, i) == x and intersect(x, c) == x
        assert embeds(x, c) and embeds(i, x)
        assert embeds(x, y) == (compositum(x, y) == y)
    for x in UNIVERSE:
        assert compositum(x, x) == x == intersect(x, x)


def test_associativity_sample():
    sample = UNIVERSE[::4]
    for x, y, z in itertools.product(sample, repeat=3):
        assert compositum(compositum(x, y), z) == compositum(x, compositum(y, z))
        assert intersect(intersect(x, y), z) == intersect(x, intersect(y, z))


def test_embeds_is_partial_order():
    for x, y in itertools.product(UNIVERSE, repeat=2):
        if embeds(x, y) and embeds(y, x):
            assert x == y
        if embeds(x, y):
            assert degree(y) % degree(x) == 0


def test_normality_and_sqrt_minus_one():
    for x in UNIVERSE:
        assert is_normal(x) == (adjoin_i(x) == x or degree(x) == 1)
        if not x.real:
            assert embeds(FiniteExtension.base(WIDE, real=False), x)
        assert embeds(abelian_part(x), x) if not x.real else True


# -- component properties -----------------------------------------------------

COMPS = components_up_to(5, 2, 6, 125)


def unimodular(p=5):
    """Random 2x2 integer matrices with determinant a p-adic unit."""
    entries = st.tuples(*[st.integers(-30, 30)] * 4)
    return entries.filter(lambda m: (m[0] * m[3] - m[1] * m[2]) % p).map(lambda m: [m[:2], m[2:]])


@settings(max_examples=300)
@given(st.sampled_from(COMPS), unimodular(), st.lists(st.integers(-5, 5), min_size=2, max_size=2))
def test_canonical_form_is_presentation_invariant(comp, m, extra):
    spec = make_field_spec(set(), {5}, {5: 6})
    g = comp.generators
    rows = [[m[i][0] * g[0][j] + m[i][1] * g[1][j] for j in range(2)] for i in range(2)]
    # a redundant third generator inside the module
    rows.append([extra[0] * g[0][j] + extra[1] * g[1][j] for j in range(2)])
    assert canonical_component(spec, 5, rows) == comp


@given(st.sampled_from(COMPS), st.sampled_from(COMPS))
def test_second_isomorphism_index_law(x, y):
    s, i = component_sum(x, y), component_intersection(x, y)
    assert i.index * s.index == x.index * y.index
    assert component_contains(s, x) and component_contains(s, y)
    assert component_contains(x, i) and component_contains(y, i)


@given(st.sampled_from(COMPS))
def test_component_quotient_shape(x):
    shape = x.quotient_shape()
    assert shape.order == x.index
    assert shape.rank <= 2


def test_submodule_counts():
    assert len(components_up_to(5, 2, 2, 5)) == 7
    assert len(components_up_to(5, 2, 2, 25)) == 38
    assert len(components_up_to(3, 1, 2, 9)) == 3
