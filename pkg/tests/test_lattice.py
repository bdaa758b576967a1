import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from posspec.lattice import (ContextMismatchError, LatticeContext, NormKind, dual_norm, norm,
                             pair, pos_neg_parts, vec_abs, vec_inf, vec_sup)
from posspec.tolerance import DEFAULT_TOLERANCE, get_tolerance, use_tolerance

import oracles

KINDS = ["l1", "l2", "linf", "wl1", "wlinf"]


def make_ctx(kind, dim, seed=0):
    weights = None
    if NormKind(kind).weighted:
        weights = tuple(np.random.default_rng(seed).uniform(0.5, 2.0, dim))
    return LatticeContext(dim, NormKind(kind), weights)


coords = st.lists(st.floats(-100, 100, allow_nan=False), min_size=1, max_size=6)


def test_abs_and_parts():
    ctx = LatticeContext(3)
    assert vec_abs(ctx.vector([1, -2, 0])).coords.tolist() == [1, 2, 0]
    assert vec_abs(LatticeContext(2).zero()).coords.tolist() == [0, 0]
    c2 = LatticeContext(2)
    pos, neg = pos_neg_parts(c2.vector([1, -2]))
    assert pos.coords.tolist() == [1, 0] and neg.coords.tolist() == [0, 2]
    pos, neg = pos_neg_parts(c2.vector([3, 0.5]))
    assert pos.coords.tolist() == [3, 0.5] and not np.any(neg.coords)


def test_sup_inf():
    c2 = LatticeContext(2)
    assert vec_sup(c2.vector([1, 0]), c2.vector([0, 1])).coords.tolist() == [1, 1]
    v = c2.vector([0.3, -7])
    assert vec_inf(v, v).coords.tolist() == v.coords.tolist()


def test_norm_examples():
    assert norm(LatticeContext(2).vector([1, -3])) == 3
    wl1 = LatticeContext(2, NormKind.WL1, (2, 1))
    assert norm(wl1.vector([1, 1])) == 3
    assert norm(LatticeContext(2, NormKind.L2).vector([3, 4])) == 5


def test_pair_examples():
    c2 = LatticeContext(2)
    assert pair(c2.vector([1, 2]), c2.vector([3, 4])) == 11
    assert pair(c2.vector([1, 2]), c2.zero()) == 0


def test_context_validation():
    with pytest.raises(ValueError):
        LatticeContext(0)
    with pytest.raises(ValueError):
        LatticeContext(2, NormKind.WL1)
    with pytest.raises(ValueError):
        LatticeContext(2, NormKind.WL1, (1, -1))
    with pytest.raises(ValueError):
        LatticeContext(2, NormKind.L1, (1, 1))
    with pytest.raises(ContextMismatchError):
        LatticeContext(2).vector([1, 2]) + LatticeContext(3).vector([1, 2, 3])


@pytest.mark.parametrize("kind", KINDS)
def test_context_json_roundtrip(kind):
    ctx = make_ctx(kind, 4, seed=3)
    assert LatticeContext.from_json(ctx.to_json()) == ctx


def test_dual_kinds():
    assert LatticeContext(3, NormKind.L1).dual().norm_kind is NormKind.LINF
    assert LatticeContext(3, NormKind.LINF).dual().norm_kind is NormKind.L1
    assert LatticeContext(3, NormKind.L2).dual().norm_kind is NormKind.L2
    d = LatticeContext(2, NormKind.WL1, (2, 4)).dual()
    assert d.norm_kind is NormKind.WLINF and d.weights == (0.5, 0.25)


@pytest.mark.parametrize("kind", KINDS)
@given(v=coords)
def test_lattice_norm_law(kind, v):
    ctx = make_ctx(kind, len(v))
    x = ctx.vector(v)
    assert norm(vec_abs(x)) == norm(x)


@pytest.mark.parametrize("kind", KINDS)
@given(data=st.data())
def test_norm_monotone_on_cone(kind, data):
    n = data.draw(st.integers(1, 6))
    small = np.array(data.draw(st.lists(st.floats(0, 50), min_size=n, max_size=n)))
    extra = np.array(data.draw(st.lists(st.floats(0, 50), min_size=n, max_size=n)))
    ctx = make_ctx(kind, n)
    assert norm(ctx.vector(small)) <= norm(ctx.vector(small + extra)) + 1e-12


@pytest.mark.parametrize("kind", ["l1", "linf", "wl1", "wlinf"])
def test_duality_by_vertex_enumeration(kind):
    rng = np.random.default_rng(7)
    for n in range(1, 6):
        ctx = make_ctx(kind, n, seed=n)
        dual = ctx.dual()
        verts = oracles.ball_vertices(dual.norm_kind.value, n, dual.weights)
        for _ in range(20):
            v = ctx.vector(rng.normal(size=n))
            best = max(pair(v, dual.vector(s)) for s in verts)
            assert norm(v) == pytest.approx(best, abs=1e-12)
            assert dual_norm(dual.vector(verts[0]), ctx) == pytest.approx(1.0)


def test_duality_l2():
    rng = np.random.default_rng(8)
    ctx = LatticeContext(4, NormKind.L2)
    for _ in range(50):
        v = ctx.vector(rng.normal(size=4))
        unit = v.coords / np.linalg.norm(v.coords)
        assert abs(norm(v) - pair(v, ctx.vector(unit))) <= 1e-9
        assert abs(dual_norm(ctx.vector(unit)) - 1.0) <= 1e-12


def test_tolerance_context():
    assert get_tolerance() == DEFAULT_TOLERANCE
    with use_tolerance(1e-6):
        assert get_tolerance() == 1e-6
    assert get_tolerance() == DEFAULT_TOLERANCE
    with pytest.raises(ValueError):
        with use_tolerance(-1.0):
            pass


def test_sup_inf_identities_exhaustive():
    ctx = LatticeContext(3)
    for a, b in itertools.product(itertools.product((-1.0, 0.0, 2.0), repeat=3), repeat=2):
        x, y = ctx.vector(a), ctx.vector(b)
        total = vec_sup(x, y) + vec_inf(x, y)
        assert total.allclose(x + y, 0.0)
