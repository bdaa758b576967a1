import numpy as np
import pytest
from hypothesis import given, strategies as st

from posspec.measurable import (AtomSpace, BorelFunction, SignedMeasure, SpaceMismatchError,
                                char, constant, fun_abs, fun_pos_neg, fun_sup_norm, integrate,
                                partition_variation, reweight, set_complement, set_intersect,
                                set_partitions, set_union, subsets_of, supersets_of,
                                total_variation)

import oracles

ABC = AtomSpace(("a", "b", "c"))

values = st.lists(st.floats(-10, 10, allow_nan=False), min_size=1, max_size=6)


def space_of(n):
    return AtomSpace(tuple(f"a{i}" for i in range(n)))


def test_set_algebra():
    empty, full = ABC.empty(), ABC.full()
    assert set_complement(empty) == full
    d = ABC.subset(["a", "c"])
    assert set_intersect(d, ~d) == empty
    assert set_union(d, ~d) == full
    assert (d | ABC.singleton("b")) == full
    assert d.labels == ("a", "c")
    assert ABC.singleton("b") <= full
    with pytest.raises(KeyError):
        ABC.subset(["z"])
    with pytest.raises(SpaceMismatchError):
        d | AtomSpace(("x",)).full()
    with pytest.raises(ValueError):
        AtomSpace(("a", "a"))


def test_all_subsets_count():
    assert len(list(ABC.all_subsets())) == 8
    d = ABC.singleton("a")
    assert len(list(subsets_of(d))) == 2
    assert len(list(supersets_of(d))) == 4
    assert all(d <= s for s in supersets_of(d))


def test_characteristic_functions():
    assert not np.any(char(ABC.empty()).values)
    assert char(ABC.full()).equals(constant(ABC))


def test_function_algebra():
    f = BorelFunction.from_mapping(ABC, {"a": 1.0, "b": -2.0})
    g = BorelFunction.from_mapping(ABC, {"b": 3.0, "c": 1.0})
    assert (f + g).as_dict() == {"a": 1.0, "b": 1.0, "c": 1.0}
    assert (f * g).as_dict() == {"a": 0.0, "b": -6.0, "c": 0.0}
    assert (2 * f).as_dict() == {"a": 2.0, "b": -4.0, "c": 0.0}
    assert fun_sup_norm(f) == 2.0
    assert fun_abs(f).as_dict() == {"a": 1.0, "b": 2.0, "c": 0.0}
    pos, neg = fun_pos_neg(f)
    assert (pos - neg).equals(f)
    assert f["b"] == -2.0


def test_integrate_and_reweight():
    s2 = AtomSpace(("x", "y"))
    assert integrate(BorelFunction(s2, [1, 2]), SignedMeasure(s2, [0.5, 0.5])) == 1.5
    mu = SignedMeasure(s2, [1, 2])
    assert reweight(mu, constant(s2)).values.tolist() == [1, 2]
    assert reweight(mu, BorelFunction(s2, [0, 3])).values.tolist() == [0, 6]


def test_total_variation_examples():
    assert total_variation(SignedMeasure(ABC, [1, -2, 0.5])) == 3.5
    assert partition_variation(SignedMeasure(ABC, [1, -2, 0.5])) == 3.5
    assert total_variation(SignedMeasure(ABC, [0, 0, 0])) == 0.0


def test_set_partitions_count_bell_numbers():
    bell = [1, 1, 2, 5, 15, 52, 203]
    for n, b in enumerate(bell):
        assert sum(1 for _ in set_partitions(range(n))) == b


@given(v=values)
def test_total_variation_equals_partition_oracle(v):
    mu = SignedMeasure(space_of(len(v)), v)
    tv = total_variation(mu)
    assert tv == partition_variation(mu)
    assert tv == float(oracles.partition_variation(v))


@given(v=values, data=st.data())
def test_total_variation_is_lattice_norm(v, data):
    n = len(v)
    w = data.draw(st.lists(st.floats(-10, 10, allow_nan=False), min_size=n, max_size=n))
    sp = space_of(n)
    mu, nu = SignedMeasure(sp, v), SignedMeasure(sp, w)
    # |mu| <= |nu| setwise on atoms implies totvar(mu) <= totvar(nu)
    if all(abs(a) <= abs(b) for a, b in zip(v, w)):
        assert total_variation(mu) <= total_variation(nu)
    assert total_variation(SignedMeasure(sp, np.add(v, w))) <= \
        total_variation(mu) + total_variation(nu) + 1e-12


@given(v=values)
def test_measure_additivity(v):
    sp = space_of(len(v))
    mu = SignedMeasure(sp, v)
    for d in sp.all_subsets():
        assert mu.of(d) + mu.of(~d) == pytest.approx(mu.of(sp.full()), abs=1e-9)


def test_json_shapes():
    assert ABC.to_json() == {"atoms": ["a", "b", "c"]}
    assert AtomSpace.from_json(ABC.to_json()) == ABC
    assert SignedMeasure(ABC, [1, 0, 2]).to_json() == {"values": {"a": 1.0, "b": 0.0, "c": 2.0}}


def test_partition_oracle_cap():
    with pytest.raises(ValueError):
        partition_variation(SignedMeasure(space_of(7), np.ones(7)))
