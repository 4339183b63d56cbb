import itertools

import pytest
from hypothesis import given, strategies as st

from quasilocal.core import SpecError, make_field_spec
from quasilocal.lattice import (
    FiniteExtension,
    PrimeComponent,
    SigmaClass,
    abelian_part,
    compositum,
    degree,
    embeds,
    enumerate_extensions,
    intersect,
    sigma_class,
)
from quasilocal.norms import (
    NormSubgroup,
    NormSubgroupE1,
    cl_is_abelian_part,
    cl_of,
    class_field_of,
    contains,
    correspondence,
    extend_to_E1,
    index,
    is_class_field,
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

S = make_field_spec({3}, {5}, {3: 1, 5: 2})
WIDE = make_field_spec({3}, {5}, {3: 4, 5: 4})


def comp5(a, b, c, spec=S):
    return PrimeComponent(5, 2, a, b, c, spec.level[5])


def comp3(e, spec=S):
    return PrimeComponent(3, 1, e, level=spec.level[3])


def ext(real, spec=S, **comps):
    return FiniteExtension.build(spec, real, {int(k[1:]): v for k, v in comps.items()})


def ng(two, comp=None, spec=S):
    return NormSubgroup.build(spec, two, {5: comp} if comp else {})


E = FiniteExtension.base(S)
EI = FiniteExtension.base(S, real=False)
FULL = NormSubgroup.full(S)


def test_norm_group_examples():
    assert norm_group(S, E) == FULL and FULL.index == 1
    u = norm_group(S, ext(False, p3=comp3(1), p5=comp5(1, 0, 0)))
    assert u == ng(2, comp5(1, 0, 0)) and u.index == 10
    spec2 = make_field_spec({3}, {5}, {3: 2, 5: 2})
    assert norm_group(spec2, ext(True, spec2, p3=comp3(2, spec2))) == NormSubgroup.full(spec2)


def test_index_examples():
    assert index(S, FULL) == 1
    assert index(S, ng(2, comp5(1, 1, 0))) == 50
    assert index(S, norm_group(S, ext(True, p5=comp5(1, 0, 0)))) == 5


def test_quotient_shape_examples():
    assert quotient_shape(S, norm_group(S, ext(False, p5=comp5(1, 1, 0)))).to_json() == [5, 10]
    assert quotient_shape(S, FULL).to_json() == []
    assert quotient_shape(S, norm_group(S, EI)).to_json() == [2]


def test_meet_join_examples():
    u, v = ng(1, comp5(1, 0, 0)), ng(1, comp5(0, 1, 0))
    assert meet(FULL, u) == u and join(FULL, u) == FULL
    m = meet(u, v)
    assert m == ng(1, comp5(1, 1, 0)) and m.index == 25
    assert join(u, v) == FULL


def test_contains_examples():
    u = ng(2, comp5(1, 0, 0))
    assert contains(FULL, u)
    assert contains(u, meet(u, ng(1, comp5(0, 1, 0))))
    cl = class_field_of(S, u)
    psi = compositum(cl, ext(True, p3=comp3(1)))
    assert embeds(cl, psi) and contains(norm_group(S, cl), norm_group(S, psi))


def test_class_field_of_examples():
    assert class_field_of(S, FULL) == E
    x = class_field_of(S, ng(2, comp5(1, 0, 0)))
    assert x == ext(False, p5=comp5(1, 0, 0)) and degree(x) == 10
    y = class_field_of(S, ng(1, comp5(1, 1, 0)))
    assert y.real and degree(y) == 25


def test_cl_of_examples():
    x = ext(False, p5=comp5(1, 0, 0))
    assert cl_of(S, x) == x
    assert cl_of(S, ext(False, p3=comp3(1), p5=comp5(1, 0, 0))) == x
    assert cl_of(S, ext(True, p3=comp3(1))) == E


def test_norm_groups_of_index_examples():
    assert norm_groups_of_index(S, 1) == [FULL]
    ten = norm_groups_of_index(S, 10)
    assert len(ten) == 6 and all(u.two_part == 2 for u in ten)
    three = norm_groups_of_index(S, 3)
    assert three == [] and three.reason == "index divisible by Π₁ prime"
    assert norm_groups_of_index(S, 4).reason == "index divisible by 4"
    assert norm_groups_of_index(S, 7) == []
    assert "level for prime 5" in norm_groups_of_index(S, 125).reason


def test_norm_group_over_e1_examples():
    assert norm_group_over_E1(S, E) == NormSubgroupE1.full(S)
    assert norm_group_over_E1(S, EI) == NormSubgroupE1.full(S)
    u1 = norm_group_over_E1(S, ext(True, p5=comp5(1, 1, 0)))
    assert u1 == NormSubgroupE1.build(S, {5: comp5(1, 1, 0)}) and u1.index == 25
    assert norm_group_over_E1(S, ext(False, p3=comp3(1))) == NormSubgroupE1.full(S)


def test_two_level_examples():
    full1 = NormSubgroupE1.full(S)
    for f in (False, True):
        assert extend_to_E1(S, restrict_to_base(S, full1, f)) == full1
    u1 = NormSubgroupE1.build(S, {5: comp5(1, 0, 0)})
    u = restrict_to_base(S, u1, False)
    assert u.index == 5
    assert quotient_shape(S, u).to_json() == [5] == quotient_shape(S, u1).to_json()
    assert restrict_to_base(S, u1, True).index == 10


def test_norm_subgroup_json_round_trip():
    for u in norm_groups_up_to(S, 50):
        assert NormSubgroup.from_json(S, u.to_json()) == u
    data = {"two_part": 2, "components": {"5": {"a": 1, "b": 0, "c": 0}}}
    assert NormSubgroup.from_json(S, data).to_json() == data


@pytest.mark.parametrize("bad", [
    {"two_part": 3, "components": {}},
    {"two_part": 1, "components": {"3": {"exp": 1}}},
    {"two_part": 1, "components": {"5": {"exp": 1}}},
])
def test_norm_subgroup_json_rejects(bad):
    with pytest.raises(SpecError):
        NormSubgroup.from_json(S, bad)


def test_correspondence_report():
    r = correspondence(S, ext(False, p3=comp3(1), p5=comp5(1, 0, 0))).to_json()
    assert list(r) == ["input", "norm_group", "index", "quotient_shape", "class_field"]
    assert r["index"] == 10 and r["quotient_shape"] == [10]
    assert r["class_field"] == {"real": False, "components": {"5": {"a": 1, "b": 0, "c": 0}}}


# -- laws over the desk-scale universe ---------------------------------------

UNIVERSE = enumerate_extensions(WIDE, 100)
SIGMA = [e for e in UNIVERSE if sigma_class(WIDE, e) != SigmaClass.NEITHER]
GROUPS = norm_groups_up_to(WIDE, 100)


def test_index_divides_degree_with_equality_on_sigma():
    for e in UNIVERSE:
        i = norm_group(WIDE, e).index
        assert degree(e) % i == 0
        assert (i == degree(e)) == (sigma_class(WIDE, e) != SigmaClass.NEITHER) == is_class_field(WIDE, e)


def test_norm_limitation():
    for e in UNIVERSE:
        stripped = FiniteExtension(e.real, tuple(
            c if c.p not in WIDE.pi1 else PrimeComponent.full(c.p, c.rank, c.level) for c in e.components
        ))
        assert norm_group(WIDE, e) == norm_group(WIDE, stripped) == norm_group(WIDE, cl_of(WIDE, e))


def test_bijection_and_inverse():
    images = [norm_group(WIDE, e) for e in SIGMA]
    assert len(set(images)) == len(images)
    assert sorted(images, key=lambda u: u.sort_key) == sorted(GROUPS, key=lambda u: u.sort_key)
    for u in GROUPS:
        assert norm_group(WIDE, class_field_of(WIDE, u)) == u


def test_duality_on_pairs():
    small = [e for e in SIGMA if degree(e) <= 30]
    for x, y in itertools.combinations_with_replacement(small, 2):
        nx, ny = norm_group(WIDE, x), norm_group(WIDE, y)
        assert norm_group(WIDE, compositum(x, y)) == meet(nx, ny)
        assert norm_group(WIDE, intersect(x, y)) == join(nx, ny)


def test_embedding_criterion():
    for u in [u for u in GROUPS if u.index <= 20]:
        x = class_field_of(WIDE, u)
        for psi in UNIVERSE:
            assert embeds(x, psi) == contains(u, norm_group(WIDE, psi))


def test_cl_is_idempotent_and_abelian_part_rule():
    for e in UNIVERSE:
        c = cl_of(WIDE, e)
        assert cl_of(WIDE, c) == c and embeds(c, e)
        full_pi2 = all(x.is_full for x in e.components if x.p in WIDE.pi2)
        assert cl_is_abelian_part(WIDE, e) == full_pi2
        assert embeds(intersect(e, abelian_part(e)), c) or not full_pi2


@given(st.sampled_from(GROUPS), st.sampled_from(GROUPS))
def test_meet_join_lattice_laws(u, v):
    m, j = meet(u, v), join(u, v)
    assert m == meet(v, u) and j == join(v, u)
    assert meet(u, j) == u and join(u, m) == u
    assert contains(u, m) and contains(j, u)
    assert contains(u, v) == (meet(u, v) == v)


def test_e1_round_trip():
    for u1 in norm_groups_E1_up_to(WIDE, 25):
        for f in (False, True):
            u = restrict_to_base(WIDE, u1, f)
            assert extend_to_E1(WIDE, u) == u1
            assert u.two_part == (2 if f else 1)
        assert quotient_shape(WIDE, u1) == quotient_shape(WIDE, restrict_to_base(WIDE, u1, False))
