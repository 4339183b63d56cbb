import pytest
from hypothesis import given, strategies as st
from sympy import divisors

from quasilocal.core import (
    FieldSpec,
    GroupShape,
    Invalid,
    LevelError,
    PrimeClass,
    SpecError,
    brauer_descriptor,
    classify_prime,
    finite_index_shape_law,
    greatest_admissible_pair,
    is_strictly_quasilocal,
    make_field_spec,
    power_collapse,
    unit_quotient_shape,
)
from quasilocal.lattice import FiniteExtension

S = make_field_spec({3}, {5}, {3: 1, 5: 2})
EMPTY = make_field_spec(set(), set(), {})


def test_valid_specs():
    assert S.pi1 == frozenset({3}) and S.pi2 == frozenset({5})
    assert EMPTY.primes == frozenset({2})
    assert S.primes == frozenset({2, 3, 5})
    assert S.rank(3) == 1 and S.rank(5) == 2


@pytest.mark.parametrize(
    "pi1, pi2, level",
    [
        ({3}, {3}, {3: 1}),
        ({2}, set(), {2: 1}),
        ({9}, set(), {9: 1}),
        ({3}, set(), {}),
        ({3}, set(), {3: 0}),
        (set(), {5}, {5: 1, 7: 1}),
    ],
)
def test_invalid_specs(pi1, pi2, level):
    with pytest.raises(SpecError):
        make_field_spec(pi1, pi2, level)


def test_spec_json_round_trip():
    data = {"pi1": [3], "pi2": [5], "level": {"3": 1, "5": 2}}
    assert FieldSpec.from_json(data) == S
    assert S.to_json() == data
    assert FieldSpec.from_json(S.to_json()) == S


@pytest.mark.parametrize("bad", [{"pi1": [3]}, {"pi1": [3], "pi2": [], "level": {"3": 1}, "x": 1},
                                 {"pi1": [3], "pi2": [], "level": {"three": 1}}])
def test_spec_json_rejects(bad):
    with pytest.raises(SpecError):
        FieldSpec.from_json(bad)


def test_classify_prime():
    assert classify_prime(S, 5) is PrimeClass.PI2
    assert classify_prime(S, 3) is PrimeClass.PI1
    assert classify_prime(S, 2) is PrimeClass.TWO
    assert classify_prime(S, 7) is PrimeClass.OUTSIDE


def test_greatest_admissible_pair_examples():
    assert greatest_admissible_pair(S, 60) == (30, 5)
    assert greatest_admissible_pair(S, 1) == (1, 1)
    assert greatest_admissible_pair(EMPTY, 1) == (1, 1)
    assert greatest_admissible_pair(EMPTY, 8) == (2, 1)


def test_unit_quotient_shape_examples():
    assert unit_quotient_shape(S, 60).to_json() == [5, 30]
    assert unit_quotient_shape(S, 5).to_json() == [5, 5]
    assert unit_quotient_shape(S, 2).to_json() == [2]
    assert unit_quotient_shape(S, 3).to_json() == [3]


def test_power_collapse_examples():
    assert power_collapse(S, 60) == 30
    assert power_collapse(S, 7) == 1
    assert power_collapse(EMPTY, 1) == 1


def test_strictly_quasilocal():
    assert is_strictly_quasilocal(make_field_spec(set(), {5}, {5: 1}))
    assert not is_strictly_quasilocal(S)
    assert is_strictly_quasilocal(EMPTY)


def test_brauer_descriptor():
    d = brauer_descriptor(S, FiniteExtension.base(S, real=False))
    assert d.kind == "quasicyclic" and d.support == frozenset({5})
    assert brauer_descriptor(S, FiniteExtension.base(S)).kind == "exponent2"
    d = brauer_descriptor(EMPTY, FiniteExtension.base(EMPTY, real=False))
    assert d.kind == "quasicyclic" and d.support == frozenset()


def test_finite_index_shape_law_examples():
    assert finite_index_shape_law(S, 50, 10).to_json() == [5, 10]
    bad = finite_index_shape_law(S, 50, 5)
    assert isinstance(bad, Invalid) and not bad
    assert finite_index_shape_law(S, 9, 9).to_json() == [9]


def test_group_shape_normalization():
    assert GroupShape.of_cyclic([2, 5, 5]).to_json() == [5, 10]
    assert GroupShape.of_cyclic([1, 1]).to_json() == []
    assert GroupShape.of_cyclic([4, 6]).to_json() == [2, 12]
    with pytest.raises(ValueError):
        GroupShape((4, 6))


def _brute_pair(spec, n):
    ok = [
        (a, c)
        for a in divisors(n)
        if a % 4 and all(a % p for p in _outside(spec, n))
        for c in divisors(a)
        if c % 2 and all(c % p for p in spec.pi1)
    ]
    best = (max(a for a, _ in ok), max(c for _, c in ok))
    assert best in ok
    return best


def _outside(spec, n):
    return [p for p in range(3, n + 1, 2) if n % p == 0 and all(p % q for q in range(2, p)) and p not in spec.odd_primes]


SPECS = [S, EMPTY, make_field_spec({3, 7}, {5}, {3: 1, 5: 1, 7: 1}), make_field_spec(set(), {3, 5}, {3: 1, 5: 1})]


@given(st.sampled_from(SPECS), st.integers(1, 10**4))
def test_pair_matches_brute_force(spec, n):
    assert greatest_admissible_pair(spec, n) == _brute_pair(spec, n)


@given(st.sampled_from(SPECS), st.integers(1, 10**4))
def test_shape_invariants(spec, n):
    ne, ne1 = greatest_admissible_pair(spec, n)
    shape = unit_quotient_shape(spec, n)
    assert shape.order == ne * ne1
    assert shape.rank <= 2
    assert ne1 % 2 and ne % ne1 == 0
    # E*^n = E*^{n(E)}: collapsing twice changes nothing
    assert power_collapse(spec, power_collapse(spec, n)) == power_collapse(spec, n)
    assert unit_quotient_shape(spec, power_collapse(spec, n)) == shape


@given(st.lists(st.integers(1, 60), max_size=5))
def test_group_shape_is_invariant_chain(orders):
    shape = GroupShape.of_cyclic(orders)
    f = shape.factors
    assert all(b % a == 0 for a, b in zip(f, f[1:]))
    assert all(x > 1 for x in f)
    prod = 1
    for x in orders:
        prod *= x
    assert shape.order == prod


def test_level_error_message():
    err = LevelError(5, 4, 2, "needed for degree bound 100")
    assert "level for prime 5 must be >= 4" in str(err)
    assert isinstance(err, SpecError)
