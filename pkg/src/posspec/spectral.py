"""Positive spectral measures on finite atom spaces.

A positive spectral measure here is a family of positive projections
``P_a`` (one per atom) with ``P_a P_b = 0`` in both orders for ``a != b``;
``P(D)`` is the sum of ``P_a`` over ``a`` in ``D``. Multiplicativity
``P(D1 ∩ D2) = P(D1) P(D2)`` quantifies over ordered pairs of sets, so a
one-sided annihilation ``P_a P_b = 0`` is not enough and is rejected by
:func:`validate`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .lattice import (LatticeContext, LatticeVector, dual_norm, norm, pair,
                      vec_abs)
from .measurable import AtomSpace, MeasurableSet, SignedMeasure, total_variation
from .operators import (RegularOperator, apply, compose, is_positive, max_abs_diff,
                        op_identity, op_inf, op_sup, op_zero, operator_norm)
from .report import Check, Report
from .tolerance import resolve

SCHEMA_VERSION = 1
EXHAUSTIVE_ATOMS = 6


class InfeasibleGenerationError(ValueError):
    """The requested random measure cannot be built with the given sizes."""


@dataclass(frozen=True, eq=False)
class PositiveSpectralMeasure:
    space: AtomSpace
    ctx: LatticeContext
    atom_projections: Tuple[RegularOperator, ...]

    def __post_init__(self) -> None:
        projs = tuple(self.atom_projections)
        if len(projs) != len(self.space):
            raise ValueError(
                f"{len(self.space)} atoms but {len(projs)} atom projections")
        for p in projs:
            if p.ctx.dim != self.ctx.dim:
                raise ValueError(f"projection of dimension {p.ctx.dim} on a "
                                 f"{self.ctx.dim}-dimensional lattice")
        object.__setattr__(self, "atom_projections", projs)

    @classmethod
    def from_matrices(cls, ctx: LatticeContext, labelled: Sequence[Tuple[str, Sequence]]):
        space = AtomSpace(tuple(label for label, _ in labelled))
        return cls(space, ctx, tuple(RegularOperator(np.asarray(m, float), ctx)
                                     for _, m in labelled))

    def __getitem__(self, label: str) -> RegularOperator:
        return self.atom_projections[self.space.index(label)]

    def __call__(self, delta: MeasurableSet) -> RegularOperator:
        return evaluate(self, delta)

    @property
    def total(self) -> RegularOperator:
        """``P(X)``."""
        return evaluate(self, self.space.full())

    def same_as(self, other: "PositiveSpectralMeasure", tol: Optional[float] = None) -> bool:
        if self.space != other.space or self.ctx.dim != other.ctx.dim:
            return False
        return all(a.allclose(b, tol) for a, b in zip(self.atom_projections,
                                                     other.atom_projections))

    def identical_to(self, other: "PositiveSpectralMeasure") -> bool:
        """Bitwise equality of the atom projections."""
        return (self.space == other.space and self.ctx.dim == other.ctx.dim and all(
            np.array_equal(a.matrix, b.matrix)
            for a, b in zip(self.atom_projections, other.atom_projections)))

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "context": self.ctx.to_json(),
            "atoms": [{"label": a, "matrix": p.matrix.tolist()}
                      for a, p in zip(self.space.atoms, self.atom_projections)],
        }

    @classmethod
    def from_json(cls, data: dict) -> "PositiveSpectralMeasure":
        ctx = LatticeContext.from_json(data["context"])
        return cls.from_matrices(ctx, [(a["label"], a["matrix"]) for a in data["atoms"]])


def evaluate(p: PositiveSpectralMeasure, delta: MeasurableSet) -> RegularOperator:
    """``P(delta)``, summed over atoms in index order."""
    if delta.space != p.space:
        raise ValueError(f"set over {delta.space.atoms}, measure over {p.space.atoms}")
    m = np.zeros((p.ctx.dim, p.ctx.dim))
    for i in delta:
        m = m + p.atom_projections[i].matrix
    return RegularOperator(m, p.ctx)


def is_unital(p: PositiveSpectralMeasure, tol: Optional[float] = None) -> bool:
    return p.total.allclose(op_identity(p.ctx), tol)


# -- validation --------------------------------------------------------------

def _subset_table(p: PositiveSpectralMeasure) -> np.ndarray:
    n = len(p.space)
    d = p.ctx.dim
    table = np.zeros((1 << n, d, d))
    for mask in range(1, 1 << n):
        low = (mask & -mask).bit_length() - 1
        table[mask] = table[mask & (mask - 1)] + p.atom_projections[low].matrix
    return table


def _mask_labels(space: AtomSpace, mask: int) -> List[str]:
    return [a for i, a in enumerate(space.atoms) if mask >> i & 1]


def validate(p: PositiveSpectralMeasure, tol: Optional[float] = None,
             samples: int = 256, seed: int = 0) -> Report:
    """Check the defining properties of a positive spectral measure.

    Failures are recorded in the report (with the offending atoms or sets as
    witness) rather than raised. Set-level checks are exhaustive for up to
    six atoms and use ``samples`` random pairs of sets beyond that.
    """
    tol = resolve(tol)
    report = Report("positive-spectral-measure")
    anchor = "positive-spectral-measure/definition"
    atoms = p.space.atoms
    projs = p.atom_projections

    bad = [a for a, q in zip(atoms, projs) if not is_positive(q, tol)]
    report.add(Check("atom-positivity", anchor, not bad,
                     lhs=min((float(q.matrix.min()) for q in projs), default=0.0), rhs=0.0,
                     tolerance=tol, witness=bad or None))

    errs = [max_abs_diff(compose(q, q), q) for q in projs]
    bad = [a for a, e in zip(atoms, errs) if e > tol]
    report.add(Check("atom-idempotence", anchor, not bad, lhs=max(errs, default=0.0),
                     rhs=0.0, tolerance=tol, witness=bad or None))

    worst, witness = 0.0, None
    for (i, a), (j, b) in itertools.permutations(enumerate(atoms), 2):
        e = float(np.max(np.abs(projs[i].matrix @ projs[j].matrix)))
        if e > worst:
            worst = e
        if e > tol and witness is None:
            witness = {"pair": [a, b], "product": (projs[i].matrix @ projs[j].matrix).tolist()}
    report.add(Check("annihilation", anchor, witness is None, lhs=worst, rhs=0.0,
                     tolerance=tol, witness=witness))

    empty = evaluate(p, p.space.empty())
    report.add(Check("empty-set", anchor, empty.allclose(op_zero(p.ctx), tol),
                     lhs=float(np.max(np.abs(empty.matrix))), rhs=0.0, tolerance=tol))

    n = len(atoms)
    if n <= EXHAUSTIVE_ATOMS:
        table = _subset_table(p)
        masks = np.arange(1 << n)
        pairs = [(int(a), int(b)) for a in masks for b in masks]
    else:
        rng = np.random.default_rng(seed)
        full = (1 << n) - 1
        drawn = rng.integers(0, full + 1, size=(samples, 2))
        needed = sorted(set(drawn.ravel().tolist()) | {int(a & b) for a, b in drawn}
                        | {int(b & ~a & full) for a, b in drawn} | {int(a | b) for a, b in drawn})
        table = {m: evaluate(p, p.space.of_indices(
            i for i in range(n) if m >> i & 1)).matrix for m in needed}
        pairs = [(int(a), int(b)) for a, b in drawn]

    # every P(D) is a positive projection
    seen = sorted({m for pr in pairs for m in pr})
    bad_set, worst = None, 0.0
    for m in seen:
        q = table[m]
        e = max(float(np.max(np.abs(q @ q - q))), float(max(0.0, -q.min())))
        worst = max(worst, e)
        if e > tol and bad_set is None:
            bad_set = _mask_labels(p.space, m)
    report.add(Check("set-projections", anchor, bad_set is None, lhs=worst, rhs=0.0,
                     tolerance=tol, witness=bad_set))

    worst_mul, bad_mul = 0.0, None
    worst_add, bad_add = 0.0, None
    basis = np.eye(p.ctx.dim)
    full = (1 << n) - 1
    for a, b in pairs:
        lhs = table[a & b]
        rhs = table[a] @ table[b]
        e = float(np.max(np.abs(lhs - rhs)))
        worst_mul = max(worst_mul, e)
        if e > tol and bad_mul is None:
            bad_mul = [_mask_labels(p.space, a), _mask_labels(p.space, b)]
        # finite additivity on the disjoint pair (a, b \ a), checked on vectors
        c = b & ~a & full
        union = table[a | c] @ basis
        parts = table[a] @ basis + table[c] @ basis
        e = float(np.max(np.abs(union - parts)))
        worst_add = max(worst_add, e)
        if e > tol and bad_add is None:
            bad_add = [_mask_labels(p.space, a), _mask_labels(p.space, c)]
    report.add(Check("multiplicativity", anchor, bad_mul is None, lhs=worst_mul, rhs=0.0,
                     tolerance=tol, witness=bad_mul))
    report.add(Check("additivity", anchor, bad_add is None, lhs=worst_add, rhs=0.0,
                     tolerance=tol, witness=bad_add))
    return report


# -- monotonicity and scalar measures -----------------------------------------

@dataclass(frozen=True)
class MonotoneCheck:
    order_holds: bool
    norm_holds: bool
    norm_small: float
    norm_large: float

    @property
    def holds(self) -> bool:
        return self.order_holds and self.norm_holds


def check_monotone(p: PositiveSpectralMeasure, small: MeasurableSet, large: MeasurableSet,
                   tol: Optional[float] = None) -> MonotoneCheck:
    """Verify ``0 <= P(small) <= P(large)`` and ``||P(small)|| <= ||P(large)||``."""
    if not small <= large:
        raise ValueError(f"{small} is not contained in {large}")
    tol = resolve(tol)
    ps, pl = evaluate(p, small), evaluate(p, large)
    order = is_positive(ps, tol) and pl.dominates(ps, tol)
    ns, nl = operator_norm(ps), operator_norm(pl)
    return MonotoneCheck(order, ns <= nl + tol * max(1.0, nl), ns, nl)


def mu_pair(p: PositiveSpectralMeasure, x: LatticeVector, xstar: LatticeVector) -> SignedMeasure:
    """The scalar measure ``D -> <P(D) x, x*>``."""
    if x.ctx.dim != p.ctx.dim or xstar.ctx.dim != p.ctx.dim:
        raise ValueError("vector dimension does not match the measure")
    values = [pair(apply(q, x), xstar) for q in p.atom_projections]
    return SignedMeasure(p.space, np.array(values))


@dataclass(frozen=True)
class VariationBound:
    totvar: float
    bound: float
    norm_bound: float
    equality: bool
    cone_signed: bool
    passed: bool


def _cone_signed(v: LatticeVector) -> bool:
    return bool(np.all(v.coords >= 0) or np.all(v.coords <= 0))


def variation_bound_check(p: PositiveSpectralMeasure, x: LatticeVector, xstar: LatticeVector,
                          tol: Optional[float] = None) -> VariationBound:
    """Compare ``|mu_{x,x*}|(X)`` with ``<P(X)|x|, |x*|>`` and ``||P(X)|| ||x|| ||x*||'``.

    Equality with the first bound is required when both ``x`` and ``x*``
    are in the positive or negative cone.
    """
    tol = resolve(tol)
    tv = total_variation(mu_pair(p, x, xstar))
    total = p.total
    bound = pair(apply(total, vec_abs(x)), vec_abs(xstar))
    nb = operator_norm(total) * norm(x) * dual_norm(xstar, p.ctx)
    slack = tol * max(1.0, abs(bound))
    equality = abs(tv - bound) <= slack
    signed = _cone_signed(x) and _cone_signed(xstar)
    ok = tv <= bound + slack and tv <= nb + tol * max(1.0, nb) and (equality or not signed)
    return VariationBound(tv, bound, nb, equality, signed, ok)


# -- order infima and suprema of measure values ---------------------------------

def cone_probe_pairs(ctx: LatticeContext, count: int = 32, seed: int = 0):
    """Basis pairs followed by ``count`` random pairs from the positive cones."""
    probes = [(ctx.basis(i), ctx.basis(j)) for i in range(ctx.dim) for j in range(ctx.dim)]
    rng = np.random.default_rng(seed)
    for _ in range(count):
        probes.append((ctx.vector(rng.random(ctx.dim)), ctx.vector(rng.random(ctx.dim))))
    return probes


def signed_probe_pairs(ctx: LatticeContext, count: int = 32, seed: int = 0):
    rng = np.random.default_rng(seed + 1)
    return [(ctx.vector(rng.uniform(-1, 1, ctx.dim)), ctx.vector(rng.uniform(-1, 1, ctx.dim)))
            for _ in range(count)]


@dataclass(frozen=True)
class OrderExtremumCheck:
    direction: str
    extremum: RegularOperator
    target: RegularOperator
    hypothesis_holds: bool
    identity_holds: bool
    hypothesis_witness: Optional[tuple] = None

    @property
    def passed(self) -> bool:
        """The scalar hypothesis forces the operator identity."""
        return self.identity_holds or not self.hypothesis_holds


def order_inf_sup_check(p: PositiveSpectralMeasure, delta: MeasurableSet,
                        family: Sequence[MeasurableSet], direction: str = "inf",
                        probes=None, tol: Optional[float] = None) -> OrderExtremumCheck:
    """Compare ``P(delta)`` with the order inf (or sup) of ``{P(D_i)}``.

    ``direction="inf"`` needs ``delta`` inside every ``D_i``; ``"sup"`` needs it
    to contain every ``D_i``. The scalar hypothesis (``mu(delta)`` equals the
    inf/sup of ``mu(D_i)`` for positive ``x``, ``x*``) is tested on ``probes``;
    a violation is reported, not raised.
    """
    tol = resolve(tol)
    if direction not in ("inf", "sup"):
        raise ValueError(f"direction must be 'inf' or 'sup', got {direction!r}")
    if not family:
        raise ValueError("empty family of sets")
    for d in family:
        nested = delta <= d if direction == "inf" else d <= delta
        if not nested:
            raise ValueError(f"{delta} and {d} are not nested for direction {direction!r}")
    if probes is None:
        probes = cone_probe_pairs(p.ctx)
    ops = [evaluate(p, d) for d in family]
    target = evaluate(p, delta)
    pick = min if direction == "inf" else max
    witness = None
    for x, xs in probes:
        mu = mu_pair(p, x, xs)
        lhs = mu.of(delta)
        rhs = pick(mu.of(d) for d in family)
        if abs(lhs - rhs) > tol * max(1.0, abs(rhs)):
            witness = (x.coords.tolist(), xs.coords.tolist(), lhs, rhs)
            break
    ext = op_inf(ops) if direction == "inf" else op_sup(ops)
    return OrderExtremumCheck(direction, ext, target, witness is None,
                              ext.allclose(target, tol), witness)


# -- random corpora -----------------------------------------------------------

def default_labels(count: int) -> Tuple[str, ...]:
    return tuple(f"a{i}" for i in range(count))


def random_generate(ctx: LatticeContext, atom_count: int, seed: int, style: str = "band",
                    labels: Optional[Sequence[str]] = None,
                    unassigned_prob: float = 0.25) -> PositiveSpectralMeasure:
    """A random valid positive spectral measure.

    ``"band"`` assigns each coordinate to one atom or leaves it unassigned and
    uses the resulting diagonal 0/1 projections (atoms may receive no
    coordinate, giving a zero projection). ``"rank1"`` builds ``P_a = u_a v_a^T``
    with ``v_a . u_a = 1``, the supports of the ``v_a`` pairwise disjoint and
    each ``u_b`` vanishing on the support of ``v_a`` for ``a != b``; it needs
    ``atom_count <= ctx.dim``.
    """
    if atom_count < 1:
        raise ValueError("atom_count must be at least 1")
    labels = default_labels(atom_count) if labels is None else tuple(labels)
    if len(labels) != atom_count:
        raise ValueError("one label per atom is required")
    rng = np.random.default_rng(seed)
    n = ctx.dim
    mats: List[np.ndarray] = []
    if style == "band":
        owner = rng.integers(0, atom_count, size=n)
        owner[rng.random(n) < unassigned_prob] = -1
        for a in range(atom_count):
            mats.append(np.diag((owner == a).astype(float)))
    elif style == "rank1":
        if atom_count > n:
            raise InfeasibleGenerationError(
                f"rank1 style needs atom_count <= dim, got {atom_count} > {n}")
        order = rng.permutation(n)
        pivot_owner = np.full(n, -1)
        pivot_owner[order[:atom_count]] = np.arange(atom_count)
        for c in order[atom_count:]:
            if rng.random() < 0.3:
                pivot_owner[c] = rng.integers(0, atom_count)
        free = pivot_owner == -1
        for a in range(atom_count):
            support = pivot_owner == a
            u = np.zeros(n)
            u[support] = rng.uniform(0.5, 2.0, support.sum())
            lift = free & (rng.random(n) < 0.6)
            u[lift] = rng.uniform(0.0, 3.0, lift.sum())
            v = np.zeros(n)
            v[support] = rng.uniform(0.2, 1.0, support.sum())
            v /= v @ u
            mats.append(np.outer(u, v))
    else:
        raise ValueError(f"unknown style {style!r}")
    return PositiveSpectralMeasure(AtomSpace(labels), ctx,
                                   tuple(RegularOperator(m, ctx) for m in mats))
