import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from posspec.lattice import LatticeContext, NormKind, pair
from posspec.measurable import total_variation
from posspec.operators import RegularOperator, apply, op_zero, operator_norm
from posspec.spectral import (InfeasibleGenerationError, PositiveSpectralMeasure,
                              check_monotone, cone_probe_pairs, evaluate, is_unital, mu_pair,
                              order_inf_sup_check, random_generate, signed_probe_pairs,
                              validate, variation_bound_check)

C2 = LatticeContext(2)
C3 = LatticeContext(3)


def band3():
    return PositiveSpectralMeasure.from_matrices(
        C3, [("a", np.diag([1.0, 0, 0])), ("b", np.diag([0, 1.0, 0])), ("c", np.diag([0, 0, 1.0]))])


def rank_one():
    return PositiveSpectralMeasure.from_matrices(C2, [("a", [[1, 0], [3, 0]])])


seeds = st.integers(0, 2 ** 20)
styles = st.sampled_from(["band", "rank1"])
dims = st.integers(1, 6)


def random_measure(seed, style, dim, atoms):
    kinds = list(NormKind)
    kind = kinds[seed % len(kinds)]
    weights = tuple(np.linspace(0.5, 2.0, dim)) if kind.weighted else None
    ctx = LatticeContext(dim, kind, weights)
    if style == "rank1":
        atoms = min(atoms, dim)
    return random_generate(ctx, atoms, seed, style)


def test_validate_examples():
    assert validate(band3()).passed
    single = PositiveSpectralMeasure.from_matrices(C2, [("a", [[1, 1], [0, 0]])])
    assert validate(single).passed
    bad = PositiveSpectralMeasure.from_matrices(C2, [("a", [[1, 0], [0, 0]]), ("b", [[0, 0], [1, 1]])])
    report = validate(bad)
    assert not report.passed
    ann = report["annihilation"]
    assert not ann.passed
    assert ann.witness == {"pair": ["b", "a"], "product": [[0.0, 0.0], [1.0, 0.0]]}


def test_validate_detects_non_idempotent_and_negative():
    p = PositiveSpectralMeasure.from_matrices(C2, [("a", [[0.9, 0], [0, 0]])])
    r = validate(p)
    assert not r["atom-idempotence"].passed and r["atom-idempotence"].witness == ["a"]
    q = PositiveSpectralMeasure.from_matrices(C2, [("a", [[1, -1], [0, 0]])])
    assert not validate(q)["atom-positivity"].passed


def test_validate_sampled_path_on_many_atoms():
    ctx = LatticeContext(8)
    p = random_generate(ctx, 9, 3, "band")
    r = validate(p, samples=64)
    assert r.passed
    mats = [q.matrix.copy() for q in p.atom_projections]
    mats[1] = np.ones((8, 8)) / 8.0  # idempotent, positive, but overlaps the others
    bad = PositiveSpectralMeasure.from_matrices(ctx, list(zip(p.space.atoms, mats)))
    assert not validate(bad, samples=64).passed


def test_evaluate_and_unital():
    p = band3()
    assert evaluate(p, p.space.empty()).tolist() == op_zero(C3).tolist()
    assert is_unital(p)
    assert not is_unital(PositiveSpectralMeasure.from_matrices(C2, [("a", [[1, 1], [0, 0]])]))
    part = PositiveSpectralMeasure.from_matrices(C3, [("a", np.diag([1.0, 1, 0]))])
    assert not is_unital(part)
    assert p(p.space.subset(["a", "c"])).tolist() == np.diag([1.0, 0, 1]).tolist()


def test_json_roundtrip():
    p = rank_one()
    q = PositiveSpectralMeasure.from_json(p.to_json())
    assert q.identical_to(p)
    assert p.to_json()["schema_version"] == 1


def test_check_monotone():
    p = band3()
    sp = p.space
    for small in sp.all_subsets():
        for large in sp.all_subsets():
            if small <= large:
                assert check_monotone(p, small, large).holds
    with pytest.raises(ValueError):
        check_monotone(p, sp.full(), sp.empty())


@given(seed=seeds, style=styles, dim=dims, atoms=st.integers(1, 5))
def test_monotone_on_random_nested_pairs(seed, style, dim, atoms):
    p = random_measure(seed, style, dim, atoms)
    rng = np.random.default_rng(seed)
    n = len(p.space)
    large = p.space.of_indices(np.flatnonzero(rng.random(n) < 0.7))
    small = p.space.of_indices([i for i in large if rng.random() < 0.5])
    mc = check_monotone(p, small, large)
    assert mc.holds
    assert mc.norm_large <= operator_norm(p.total) * (1 + 1e-9) + 1e-12


def test_mu_pair_examples():
    p = PositiveSpectralMeasure.from_matrices(C2, [("1", np.diag([1.0, 0])), ("2", np.diag([0, 1.0]))])
    mu = mu_pair(p, C2.vector([2, 3]), C2.vector([1, 1]))
    assert mu["1"] == 2 and mu["2"] == 3
    assert not np.any(mu_pair(p, C2.zero(), C2.vector([1, 1])).values)


@given(seed=seeds, style=styles, dim=dims, atoms=st.integers(1, 5))
def test_mu_pair_positive_and_bilinear(seed, style, dim, atoms):
    p = random_measure(seed, style, dim, atoms)
    ctx = p.ctx
    rng = np.random.default_rng(seed)
    x, y, xs = (ctx.vector(rng.random(dim)) for _ in range(3))
    assert mu_pair(p, x, xs).is_positive()
    a, b = rng.normal(size=2)
    lhs = mu_pair(p, x * a + y * b, xs).values
    rhs = a * mu_pair(p, x, xs).values + b * mu_pair(p, y, xs).values
    np.testing.assert_allclose(lhs, rhs, atol=1e-9)
    lhs = mu_pair(p, xs, x * a + y * b).values
    rhs = a * mu_pair(p, xs, x).values + b * mu_pair(p, xs, y).values
    np.testing.assert_allclose(lhs, rhs, atol=1e-9)


def test_variation_bound_strict_witness():
    p = PositiveSpectralMeasure.from_matrices(C2, [("a", [[1, 1], [0, 0]])])
    r = variation_bound_check(p, C2.vector([1, -1]), C2.vector([1, 0]))
    assert r.totvar == 0.0 and r.bound == 2.0
    assert not r.equality and r.passed


def test_variation_bound_sign_cases():
    p = rank_one()
    pos = variation_bound_check(p, C2.vector([1, 2]), C2.vector([0.5, 1]))
    mu = mu_pair(p, C2.vector([1, 2]), C2.vector([0.5, 1]))
    assert pos.equality and pos.totvar == mu.of(p.space.full())
    neg = variation_bound_check(p, C2.vector([-1, -2]), C2.vector([0.5, 1]))
    assert neg.equality and neg.cone_signed


@given(seed=seeds, style=styles, dim=dims, atoms=st.integers(1, 6))
def test_variation_bound_on_probes(seed, style, dim, atoms):
    p = random_measure(seed, style, dim, atoms)
    for x, xs in cone_probe_pairs(p.ctx, 4, seed) + signed_probe_pairs(p.ctx, 8, seed):
        r = variation_bound_check(p, x, xs)
        assert r.passed
        assert r.totvar == total_variation(mu_pair(p, x, xs))


def test_order_inf_sup_examples():
    p = band3()
    sp = p.space
    a = sp.singleton("a")
    r = order_inf_sup_check(p, a, [a])
    assert r.identity_holds and r.passed and r.hypothesis_holds
    r = order_inf_sup_check(p, a, [sp.subset(["a", "b"]), sp.subset(["a", "c"])])
    assert r.identity_holds and r.passed
    assert r.extremum.tolist() == np.diag([1.0, 0, 0]).tolist()
    cosingletons = [~sp.singleton(x) for x in sp.atoms]
    r = order_inf_sup_check(p, sp.full(), cosingletons, "sup")
    assert r.extremum.tolist() == np.eye(3).tolist()
    assert r.identity_holds
    with pytest.raises(ValueError):
        order_inf_sup_check(p, sp.full(), [a], "inf")


def test_random_generate_examples():
    ctx = LatticeContext(4)
    assert validate(random_generate(ctx, 3, 11, "band")).passed
    one = random_generate(ctx, 1, 5, "band")
    m = one.atom_projections[0].matrix
    assert np.array_equal(m, np.diag(np.diag(m))) and set(np.diag(m)) <= {0.0, 1.0}
    with pytest.raises(InfeasibleGenerationError):
        random_generate(LatticeContext(2), 3, 0, "rank1")
    with pytest.raises(ValueError):
        random_generate(ctx, 2, 0, "spiral")


def test_rank_one_constructor_example():
    u, v = np.array([1.0, 3.0]), np.array([1.0, 0.0])
    assert v @ u == 1.0
    p = PositiveSpectralMeasure.from_matrices(C2, [("a", np.outer(u, v))])
    assert p["a"].tolist() == [[1, 0], [3, 0]]
    assert validate(p).passed
    assert operator_norm(p.total) == 3.0


@given(seed=seeds, style=styles, dim=dims, atoms=st.integers(1, 6))
def test_generated_measures_are_valid(seed, style, dim, atoms):
    p = random_measure(seed, style, dim, atoms)
    assert validate(p).passed
    top = operator_norm(p.total)
    for d in p.space.all_subsets():
        assert operator_norm(p(d)) <= top * (1 + 1e-9) + 1e-12


def test_exhaustive_set_projections():
    p = random_generate(LatticeContext(6), 6, 1, "rank1")
    for d in p.space.all_subsets():
        q = p(d).matrix
        assert np.max(np.abs(q @ q - q)) <= 1e-9 and q.min() >= 0


def test_probe_pairs_layout():
    ctx = LatticeContext(3)
    probes = cone_probe_pairs(ctx, 5, 0)
    assert len(probes) == 9 + 5
    for (x, xs), (i, j) in zip(probes, itertools.product(range(3), repeat=2)):
        assert x.coords[i] == 1 and xs.coords[j] == 1
    assert all(x.is_positive() and xs.is_positive() for x, xs in probes)
    assert pair(apply(RegularOperator(np.eye(3), ctx), probes[0][0]), probes[0][1]) == 1.0
