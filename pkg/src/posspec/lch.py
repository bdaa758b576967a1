"""A desk-scale locally compact Hausdorff space: truncated discrete N.

Points ``0 .. N-1`` are isolated. With ``has_tail`` an extra atom ``"tail"``
stands for the whole complement of the truncation as a single Borel lump.
Finite Hausdorff spaces are discrete, so without that lump every regularity
statement is vacuous. The model treats the lump as follows:

* every set of atoms is Borel and open;
* compact sets are exactly the tail-free sets;
* continuous functions vanishing at infinity (and compactly supported ones)
  are the functions on the points, extended by 0 on the tail.

A positive measure is then regular exactly when it gives the tail mass 0,
and the mass it does give the tail is the inner-regularity defect.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .lattice import LatticeContext, pair
from .measurable import (AtomSpace, BorelFunction, MeasurableSet, SignedMeasure, char,
                         subsets_of, supersets_of, total_variation)
from .operators import (RegularOperator, apply, compose, max_abs_diff, op_inf, op_modulus,
                        op_sup, op_zero, operator_norm)
from .report import Check, Report
from .representation import (MAX_SIGN_ATOMS, GeneratedRepresentation,
                             NotARepresentationError, TooManyAtomsError, pi_apply,
                             probe_grid)
from .spectral import (PositiveSpectralMeasure, cone_probe_pairs, evaluate, mu_pair,
                       random_generate, validate)
from .tolerance import resolve

TAIL = "tail"
RANDOM_GRID_SIZE = 32


@dataclass(frozen=True)
class DiscreteLCH:
    cutoff: int
    has_tail: bool = False

    def __post_init__(self) -> None:
        if int(self.cutoff) != self.cutoff or self.cutoff < 1:
            raise ValueError(f"cutoff must be a positive integer, got {self.cutoff!r}")

    @functools.cached_property
    def space(self) -> AtomSpace:
        labels = tuple(str(i) for i in range(self.cutoff))
        return AtomSpace(labels + ((TAIL,) if self.has_tail else ()))

    @property
    def tail_index(self) -> Optional[int]:
        return self.cutoff if self.has_tail else None

    @property
    def compact(self) -> bool:
        """Whether the model stands for a compact space (no tail)."""
        return not self.has_tail

    def points(self) -> MeasurableSet:
        return self.space.of_indices(range(self.cutoff))

    def tail(self) -> MeasurableSet:
        if not self.has_tail:
            return self.space.empty()
        return self.space.of_indices([self.cutoff])

    def is_open(self, delta: MeasurableSet) -> bool:
        return delta.space == self.space

    def is_compact(self, delta: MeasurableSet) -> bool:
        return delta.space == self.space and self.tail_index not in delta

    def open_supersets(self, delta: MeasurableSet):
        return supersets_of(delta)

    def compact_subsets(self, delta: MeasurableSet):
        return subsets_of(delta & self.points())

    def to_json(self) -> dict:
        return {"cutoff": self.cutoff, "tail": self.has_tail}

    @classmethod
    def from_json(cls, data: dict) -> "DiscreteLCH":
        return cls(int(data["cutoff"]), bool(data.get("tail", False)))


@dataclass(frozen=True, eq=False)
class C0Function:
    """A function on the points, identically 0 on the tail."""

    lch: DiscreteLCH
    values: np.ndarray
    compactly_supported: bool = True

    def __post_init__(self) -> None:
        v = np.array(self.values, dtype=float)
        if v.shape != (self.lch.cutoff,):
            raise ValueError(f"expected {self.lch.cutoff} point values, got shape {v.shape}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def to_borel(self) -> BorelFunction:
        tail = [0.0] if self.lch.has_tail else []
        return BorelFunction(self.lch.space, np.concatenate([self.values, tail]))

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values), initial=0.0))


def c0_indicator(lch: DiscreteLCH, points: Sequence[int]) -> C0Function:
    v = np.zeros(lch.cutoff)
    v[list(points)] = 1.0
    return C0Function(lch, v)


def c0_unit(lch: DiscreteLCH) -> C0Function:
    """The constant function 1; exists only on the compact model."""
    if lch.has_tail:
        raise ValueError("1_X is not in C_0(X) on a model with a tail")
    return C0Function(lch, np.ones(lch.cutoff))


@dataclass(frozen=True, eq=False)
class C0Representation:
    """A representation of the C_0 model given by the images ``pi(chi_{n})``."""

    lch: DiscreteLCH
    ctx: LatticeContext
    point_images: Tuple[RegularOperator, ...]

    def __post_init__(self) -> None:
        imgs = tuple(self.point_images)
        if len(imgs) != self.lch.cutoff:
            raise ValueError(f"{self.lch.cutoff} points but {len(imgs)} images")
        object.__setattr__(self, "point_images", imgs)

    def __call__(self, phi: C0Function) -> RegularOperator:
        if phi.lch != self.lch:
            raise ValueError("function lives on a different model")
        n = self.ctx.dim
        m = np.zeros((n, n))
        for value, img in zip(phi.values, self.point_images):
            m = m + value * img.matrix
        return RegularOperator(m, self.ctx)

    def to_json(self) -> dict:
        space = AtomSpace(tuple(str(i) for i in range(self.lch.cutoff)))
        data = PositiveSpectralMeasure(space, self.ctx, self.point_images).to_json()
        data["lch"] = self.lch.to_json()
        return data

    @classmethod
    def from_json(cls, data: dict) -> "C0Representation":
        lch = DiscreteLCH.from_json(data["lch"])
        ctx = LatticeContext.from_json(data["context"])
        by_label = {a["label"]: a["matrix"] for a in data["atoms"]}
        return cls(lch, ctx, tuple(RegularOperator(np.asarray(by_label[str(i)], float), ctx)
                                   for i in range(lch.cutoff)))


def restrict(rep: GeneratedRepresentation, lch: DiscreteLCH) -> C0Representation:
    """Restrict ``pi_P`` to the C_0 model."""
    if rep.space != lch.space:
        raise ValueError("representation is not over this model's atoms")
    images = tuple(pi_apply(rep, c0_indicator(lch, [n]).to_borel()) for n in range(lch.cutoff))
    return C0Representation(lch, rep.ctx, images)


def c0_function_grid(lch: DiscreteLCH, seed: int = 0, support: Optional[Sequence[int]] = None,
                     forced_one: Sequence[int] = (), count: int = RANDOM_GRID_SIZE,
                     indicators: bool = True) -> List[C0Function]:
    """Functions ``0 <= phi <= 1`` supported in ``support`` and equal to 1 on ``forced_one``.

    The grid holds every admissible 0/1 indicator followed by ``count`` random
    ``[0, 1]``-valued functions.
    """
    rows = grid_values(lch.cutoff, seed, None if support is None else tuple(sorted(set(support))),
                       tuple(sorted(set(forced_one))), count, indicators)
    return [C0Function(lch, row) for row in rows]


@functools.lru_cache(maxsize=512)
def grid_values(cutoff: int, seed: int, support: Optional[Tuple[int, ...]],
                forced: Tuple[int, ...], count: int, indicators: bool) -> np.ndarray:
    """The rows of :func:`c0_function_grid` as a read-only array."""
    support = tuple(range(cutoff)) if support is None else support
    if not set(forced) <= set(support):
        raise ValueError("forced points must lie in the support")
    free = [i for i in support if i not in forced]
    rows: List[np.ndarray] = []
    if indicators:
        for r in range(len(free) + 1):
            for combo in itertools.combinations(free, r):
                v = np.zeros(cutoff)
                v[list(forced) + list(combo)] = 1.0
                rows.append(v)
    rng = np.random.default_rng(seed)
    for _ in range(count):
        v = np.zeros(cutoff)
        v[free] = rng.random(len(free))
        v[list(forced)] = 1.0
        rows.append(v)
    out = np.array(rows).reshape(len(rows), cutoff)
    out.setflags(write=False)
    return out


# -- Riesz correspondence ----------------------------------------------------

@dataclass
class RieszResult:
    measure: SignedMeasure
    total_variation: float
    functional_norm: float
    point_variation: float
    tail_gap: float
    report: Report


def riesz_to_measure(lch: DiscreteLCH, weights: Sequence[float],
                     tail_weight: float = 0.0) -> RieszResult:
    """The measure of the functional ``phi -> sum_n w_n phi(n)`` (plus a tail mass).

    The functional norm over the C_0 model is computed by evaluating every
    sign function on the points; the tail mass is invisible to C_0 and shows
    up as ``tail_gap`` between total variation and functional norm.
    """
    w = np.asarray(weights, dtype=float)
    if w.shape != (lch.cutoff,):
        raise ValueError(f"expected {lch.cutoff} weights, got shape {w.shape}")
    if tail_weight and not lch.has_tail:
        raise ValueError("tail weight given for a model without a tail")
    values = np.concatenate([w, [float(tail_weight)]]) if lch.has_tail else w
    mu = SignedMeasure(lch.space, values)
    if lch.cutoff > MAX_SIGN_ATOMS:
        raise TooManyAtomsError(f"sign enumeration is capped at {MAX_SIGN_ATOMS} points")
    fnorm = max(math.fsum(np.array(s) * w)
                for s in itertools.product((1.0, -1.0), repeat=lch.cutoff))
    tv = total_variation(mu)
    point_tv = math.fsum(np.abs(w))
    expected_tv = math.fsum(np.abs(np.concatenate([w, [float(tail_weight)]])))
    report = Report("riesz")
    anchor = "riesz-representation/isometry"
    report.add(Check("total-variation", anchor, tv == expected_tv, lhs=tv, rhs=expected_tv,
                     tolerance=0.0))
    report.add(Check("functional-norm", anchor, fnorm == point_tv, lhs=fnorm, rhs=point_tv,
                     tolerance=0.0))
    gap = tv - fnorm
    report.add(Check("tail-gap", anchor, abs(gap - abs(tail_weight)) <= 1e-12 * max(1.0, tv),
                     lhs=gap, rhs=abs(float(tail_weight)), tolerance=1e-12))
    if np.all(w >= 0):
        truncations = [math.fsum(w[:k]) for k in range(1, lch.cutoff + 1)]
        increasing = all(a <= b for a, b in zip(truncations, truncations[1:]))
        report.add(Check("positive-truncations", anchor,
                         increasing and truncations[-1] == fnorm,
                         lhs=truncations, rhs=fnorm, tolerance=0.0))
    return RieszResult(mu, tv, fnorm, point_tv, gap, report)


# -- regularity of scalar measures ---------------------------------------------

def measure_regularity_check(lch: DiscreteLCH, mu: SignedMeasure, delta: MeasurableSet,
                             seed: int = 0, tol: Optional[float] = None) -> Report:
    """Outer/inner regularity of a positive ``mu`` on ``delta`` and the function formulas.

    ``info["inner_gap"]`` holds ``mu(delta) - sup{mu(K) : K compact in delta}``.
    """
    tol = resolve(tol)
    if not mu.is_positive():
        raise ValueError("measure_regularity_check needs a positive measure")
    if mu.space != lch.space or delta.space != lch.space:
        raise ValueError("measure or set is not over this model's atoms")
    value = mu.of(delta)
    slack = tol * max(1.0, value)
    report = Report("measure-regularity")
    outer = min(mu.of(v) for v in lch.open_supersets(delta))
    report.add(Check("outer-regular", "regular-borel-measure/outer", abs(outer - value) <= slack,
                     lhs=value, rhs=outer, tolerance=tol))
    inner = max(mu.of(k) for k in lch.compact_subsets(delta))
    gap = value - inner
    report.add(Check("inner-regular", "regular-borel-measure/inner", abs(gap) <= slack,
                     lhs=value, rhs=inner, tolerance=tol,
                     witness={"tail_mass": gap} if abs(gap) > slack else None))
    support = tuple(i for i in delta if i != lch.tail_index)
    point_mass = mu.values[:lch.cutoff]
    sup_f = max(math.fsum(row * point_mass)
                for row in grid_values(lch.cutoff, seed, support, (), RANDOM_GRID_SIZE, True))
    report.add(Check("open-set-functions", "regular-borel-measure/open-functions",
                     abs(sup_f - value) <= slack, lhs=value, rhs=sup_f, tolerance=tol))
    k_value = mu.of(delta & lch.points())
    inf_f = min(math.fsum(row * point_mass)
                for row in grid_values(lch.cutoff, seed, None, support, RANDOM_GRID_SIZE, True))
    report.add(Check("compact-set-functions", "regular-borel-measure/compact-functions",
                     abs(inf_f - k_value) <= tol * max(1.0, k_value), lhs=k_value, rhs=inf_f,
                     tolerance=tol))
    report.info["inner_gap"] = gap
    return report


def _is_regular_predicate(lch: DiscreteLCH, p: PositiveSpectralMeasure, tol: float) -> bool:
    if not lch.has_tail:
        return True
    return bool(np.max(np.abs(p.atom_projections[lch.tail_index].matrix)) <= tol)


def spectral_regularity_check(lch: DiscreteLCH, p: PositiveSpectralMeasure,
                              sets: Optional[Sequence[MeasurableSet]] = None, seed: int = 0,
                              tol: Optional[float] = None) -> Report:
    """Decide regularity of ``P`` from its scalar measures and check the order formulas.

    ``P`` is declared regular when every ``mu_{x,x*}`` over the cone probe grid
    (basis pairs first) is regular on each singleton and on the whole space.
    The verdict is compared with the predicate ``P(tail) = 0``. For each set in
    ``sets`` (default: all sets when there are at most 8 atoms, otherwise 32
    random ones) ``P(D) = inf{P(V) : V open, D in V}`` and
    ``P(D) = sup{P(K) : K compact in D}`` are evaluated entrywise; they must
    hold when ``P`` is regular.
    """
    tol = resolve(tol)
    if p.space != lch.space:
        raise ValueError("measure is not over this model's atoms")
    report = Report("spectral-regularity")
    anchor = "regular-spectral-measure"
    probe_sets = [lch.space.of_indices([i]) for i in range(len(lch.space))] + [lch.space.full()]
    witness = None
    for x, xs in cone_probe_pairs(p.ctx, 32, seed):
        mu = mu_pair(p, x, xs)
        if any(not measure_regularity_check(lch, mu, d, seed, tol).passed for d in probe_sets):
            witness = {"x": x.coords.tolist(), "xstar": xs.coords.tolist(),
                       "tail_mass": mu.of(lch.tail())}
            break
    verdict = witness is None
    predicate = _is_regular_predicate(lch, p, tol)
    report.add(Check("verdict-matches-predicate", anchor, verdict == predicate,
                     lhs=verdict, rhs=predicate, tolerance=tol, witness=witness))
    report.info["regular"] = verdict
    report.info["witness"] = witness

    if sets is None:
        if len(lch.space) <= 8:
            sets = list(lch.space.all_subsets())
        else:
            rng = np.random.default_rng(seed)
            n = len(lch.space)
            sets = [lch.space.of_indices(np.flatnonzero(rng.random(n) < 0.5)) for _ in range(32)]
    worst_outer, worst_inner, bad_inner = 0.0, 0.0, None
    for d in sets:
        target = evaluate(p, d)
        outer = op_inf([evaluate(p, v) for v in lch.open_supersets(d)])
        inner = op_sup([evaluate(p, k) for k in lch.compact_subsets(d)])
        worst_outer = max(worst_outer, max_abs_diff(outer, target))
        e = max_abs_diff(inner, target)
        if e > worst_inner:
            worst_inner = e
            bad_inner = list(d.labels)
    report.add(Check("order-outer-regular", "regular-spectral-measure/order-outer",
                     worst_outer <= tol or not verdict, lhs=worst_outer, rhs=0.0, tolerance=tol))
    report.add(Check("order-inner-regular", "regular-spectral-measure/order-inner",
                     worst_inner <= tol or not verdict, lhs=worst_inner, rhs=0.0, tolerance=tol,
                     witness=bad_inner if worst_inner > tol else None))
    report.info["order_outer_error"] = worst_outer
    report.info["order_inner_error"] = worst_inner
    return report


# -- representations of C_0 ------------------------------------------------------

def c0_rep_to_spectral_measure(rep: C0Representation, seed: int = 0,
                               tol: Optional[float] = None) -> PositiveSpectralMeasure:
    """The generating regular positive spectral measure of a C_0 representation.

    Finite-dimensional lattices are reflexive, hence KB-spaces, so the
    measure exists. ``P({n}) = pi(chi_{n})``; the tail gets the supremum of
    ``pi`` over compactly supported functions below it, which is 0.
    Raises :class:`NotARepresentationError` when the images are not a
    positive representation or the round trip fails.
    """
    tol = resolve(tol)
    lch = rep.lch
    images = list(rep.point_images)
    if lch.has_tail:
        below_tail = [rep(f) for f in c0_function_grid(lch, seed, support=[], count=0)]
        images.append(op_sup(below_tail))
    p = PositiveSpectralMeasure(lch.space, rep.ctx, tuple(images))
    report = validate(p, tol)
    gen = GeneratedRepresentation(p)
    worst = 0.0
    for f in c0_function_grid(lch, seed, indicators=lch.cutoff <= 10):
        worst = max(worst, max_abs_diff(pi_apply(gen, f.to_borel()), rep(f)))
    report.add(Check("restriction-matches", "kb-existence/generates", worst <= tol,
                     lhs=worst, rhs=0.0, tolerance=tol))
    report.add(Check("regular", "kb-existence/regular", _is_regular_predicate(lch, p, tol),
                     tolerance=tol))
    if not report.passed:
        failed = ", ".join(c.name for c in report.failures())
        raise NotARepresentationError(f"not a positive representation of C_0: {failed}", report)
    return p


def c0_sign_norms(rep: C0Representation) -> Tuple[float, float]:
    """``(||pi||, ||pi||_r)`` over the C_0 unit ball via sign functions on the points."""
    lch = rep.lch
    if lch.cutoff > MAX_SIGN_ATOMS:
        raise TooManyAtomsError(f"sign enumeration is capped at {MAX_SIGN_ATOMS} points")
    best, best_r = 0.0, 0.0
    for s in itertools.product((1.0, -1.0), repeat=lch.cutoff):
        t = rep(C0Function(lch, np.array(s)))
        best = max(best, operator_norm(t))
        best_r = max(best_r, operator_norm(op_modulus(t)))
    return best, best_r


def c0_norm_report(rep: C0Representation, p: PositiveSpectralMeasure,
                   tol: Optional[float] = None) -> Report:
    """``||pi|| = ||pi||_r = ||P(X)||`` for a regular generating ``P``."""
    tol = resolve(tol)
    nrm, reg = c0_sign_norms(rep)
    unit = operator_norm(p.total)
    slack = tol * max(1.0, unit)
    report = Report("c0-norms")
    report.add(Check("c0-norm", "generated-norm/regular", abs(nrm - unit) <= slack,
                     lhs=nrm, rhs=unit, tolerance=tol))
    report.add(Check("c0-regular-norm", "generated-norm/regular", abs(reg - unit) <= slack,
                     lhs=reg, rhs=unit, tolerance=tol))
    return report


def retrieval_formulas_check(rep: C0Representation, p: PositiveSpectralMeasure,
                             v_open: MeasurableSet, k_compact: MeasurableSet, seed: int = 0,
                             tol: Optional[float] = None) -> Report:
    """Recover ``P(V)``, ``P(K)`` and ``P(X)`` from the order structure of ``pi(C_0)``."""
    tol = resolve(tol)
    lch = rep.lch
    if not lch.is_open(v_open):
        raise ValueError(f"{v_open} is not open")
    if not lch.is_compact(k_compact):
        raise ValueError(f"{k_compact} is not compact")
    report = Report("retrieval")
    gen = GeneratedRepresentation(p)
    probes = probe_grid(p.ctx, seed)
    small = lch.cutoff <= 10

    gen_err = max(max_abs_diff(pi_apply(gen, f.to_borel()), rep(f))
                  for f in c0_function_grid(lch, seed, indicators=small))
    report.add(Check("generates", "kb-existence/generates", gen_err <= tol, lhs=gen_err,
                     rhs=0.0, tolerance=tol))
    regular = _is_regular_predicate(lch, p, tol)
    report.add(Check("regular", "regular-spectral-measure", regular, tolerance=tol))

    def _record(name: str, anchor: str, got: RegularOperator, want: RegularOperator) -> None:
        err = max_abs_diff(got, want)
        report.add(Check(name, anchor, err <= tol, lhs=err, rhs=0.0, tolerance=tol))
        report.info[name + ":exact"] = bool(np.array_equal(got.matrix, want.matrix))

    v_points = [i for i in v_open if i != lch.tail_index]
    below_v = [rep(f) for f in c0_function_grid(lch, seed, v_points, indicators=small)]
    _record("open-supremum", "retrieval/open", op_sup(below_v), evaluate(p, v_open))

    k_points = sorted(k_compact.members)
    above_k = [rep(f) for f in c0_function_grid(lch, seed, None, forced_one=k_points,
                                                indicators=small)]
    _record("compact-infimum", "retrieval/compact", op_inf(above_k), evaluate(p, k_compact))

    unit_ball = [rep(f) for f in c0_function_grid(lch, seed, indicators=small)]
    _record("total-supremum", "retrieval/total", op_sup(unit_ball), p.total)

    for name, target_set, pts in (("truncation-total", lch.space.full(), list(range(lch.cutoff))),
                                  ("truncation-open", v_open, v_points)):
        chain = [rep(c0_indicator(lch, pts[:k])) for k in range(1, len(pts) + 1)] or \
            [op_zero(p.ctx)]
        target = evaluate(p, target_set)
        steps = [float(np.min(b.matrix - a.matrix)) for a, b in zip(chain, chain[1:])]
        monotone = min(steps, default=0.0) >= -tol
        reached = next((k + 1 for k, t in enumerate(chain) if t.allclose(target, tol)), None)
        limit = chain[-1]
        wot = max((abs(pair(apply(limit, x), xs) - pair(apply(target, x), xs))
                   for x, xs in probes), default=0.0)
        ok = monotone and reached is not None and reached <= max(1, len(pts)) and wot <= tol
        report.add(Check(name, "retrieval/sigma-compact", ok, lhs=reached, rhs=len(pts),
                         tolerance=tol, witness=None if ok else {"monotone": monotone,
                                                                 "weak_error": wot}))
    return report


def automatic_continuity_check(rep: C0Representation, seed: int = 0,
                               tol: Optional[float] = None) -> Report:
    """Automatic boundedness of a positive representation of C(X), X compact."""
    tol = resolve(tol)
    lch = rep.lch
    if lch.has_tail:
        raise ValueError("automatic continuity needs the compact model (no tail)")
    unit_norm = operator_norm(rep(c0_unit(lch)))
    slack = tol * max(1.0, unit_norm)
    report = Report("automatic-continuity")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(64):
        f = C0Function(lch, rng.uniform(-2.0, 2.0, lch.cutoff))
        pos = float(np.max(np.maximum(f.values, 0.0), initial=0.0))
        neg = float(np.max(np.maximum(-f.values, 0.0), initial=0.0))
        worst = max(worst, operator_norm(rep(f)) - unit_norm * (pos + neg))
    report.add(Check("split-bound", "automatic-continuity/split", worst <= slack, lhs=worst,
                     rhs=0.0, tolerance=tol))
    nrm, reg = c0_sign_norms(rep)
    report.add(Check("factor-two-bound", "automatic-continuity/factor-two",
                     nrm <= 2 * unit_norm + slack, lhs=nrm, rhs=2 * unit_norm, tolerance=tol))
    report.add(Check("norm-equals-unit", "automatic-continuity/compact-dedekind",
                     abs(nrm - unit_norm) <= slack, lhs=nrm, rhs=unit_norm, tolerance=tol))
    report.add(Check("regular-norm-equals-unit", "automatic-continuity/compact-dedekind",
                     abs(reg - unit_norm) <= slack, lhs=reg, rhs=unit_norm, tolerance=tol))
    report.info["norm"] = nrm
    report.info["regular_norm"] = reg
    return report


@dataclass(eq=False)
class MonotoneClassExtension:
    """The extension of a C_0 representation to all bounded Borel functions."""

    lch: DiscreteLCH
    ctx: LatticeContext
    atom_images: Tuple[RegularOperator, ...]
    report: Report = field(default_factory=lambda: Report("monotone-class"))

    @functools.cached_property
    def space(self) -> AtomSpace:
        return self.lch.space

    def __call__(self, phi: BorelFunction) -> RegularOperator:
        return pi_apply(self, phi)  # type: ignore[arg-type]


def _open_indicator_image(rep: C0Representation, v: MeasurableSet, seed: int,
                          random_count: int = 4) -> RegularOperator:
    lch = rep.lch
    pts = [i for i in v if i != lch.tail_index]
    family = [rep(f) for f in c0_function_grid(lch, seed, pts, count=random_count,
                                               indicators=len(pts) <= 10)]
    return op_sup(family)


def monotone_class_extend(rep: C0Representation, seed: int = 0, grid_size: int = 64,
                          tol: Optional[float] = None) -> MonotoneClassExtension:
    """Extend ``pi`` from C_0 to bounded Borel functions.

    Indicators of open sets are sent to the order supremum of ``pi`` over
    compactly supported ``0 <= phi <= 1`` below them; the extension is then
    linear. The attached report checks that the linear extension reproduces
    the supremum formula on every open set (all sets when there are at most
    10 atoms), is multiplicative, and agrees with ``pi_P`` for the extracted
    measure on ``grid_size`` random bounded functions.
    """
    tol = resolve(tol)
    lch = rep.lch
    space = lch.space
    images = tuple(_open_indicator_image(rep, space.of_indices([i]), seed)
                   for i in range(len(space)))
    ext = MonotoneClassExtension(lch, rep.ctx, images)
    report = ext.report
    opens = list(space.all_subsets()) if len(space) <= 10 else \
        [space.of_indices([i]) for i in range(len(space))] + [space.full()]
    worst = max(max_abs_diff(ext(char(v)), _open_indicator_image(rep, v, seed)) for v in opens)
    report.add(Check("open-indicators", "monotone-class/open-sets", worst <= tol, lhs=worst,
                     rhs=0.0, tolerance=tol))
    rng = np.random.default_rng(seed)
    funcs = [BorelFunction(space, rng.uniform(-1.0, 1.0, len(space))) for _ in range(grid_size)]
    worst_mul = 0.0
    for f, g in zip(funcs, funcs[1:]):
        worst_mul = max(worst_mul, max_abs_diff(ext(f * g), compose(ext(f), ext(g))))
    report.add(Check("multiplicative", "monotone-class/extension", worst_mul <= tol,
                     lhs=worst_mul, rhs=0.0, tolerance=tol))
    p = c0_rep_to_spectral_measure(rep, seed, tol)
    gen = GeneratedRepresentation(p)
    worst_gen = max(max_abs_diff(ext(f), pi_apply(gen, f)) for f in funcs)
    report.add(Check("agrees-with-generated", "monotone-class/extension", worst_gen <= tol,
                     lhs=worst_gen, rhs=0.0, tolerance=tol))
    return ext


# -- corpora -----------------------------------------------------------------

def random_lch_measure(lch: DiscreteLCH, ctx: LatticeContext, seed: int, style: str = "band",
                       regular: bool = True) -> PositiveSpectralMeasure:
    """A random positive spectral measure over the model's atoms.

    Regular measures get a zero tail projection; irregular ones (tail models
    only) are redrawn until the tail projection is nonzero. The rank-one style
    supports at most ``ctx.dim`` nonzero atoms, so the remaining atoms receive
    zero projections.
    """
    space = lch.space
    if not regular and not lch.has_tail:
        raise ValueError("an irregular measure needs a tail")
    for attempt in range(1000):
        s = seed + 7919 * attempt
        if style == "rank1" and len(space) > ctx.dim:
            rng = np.random.default_rng(s)
            active = sorted(rng.choice(len(space), ctx.dim, replace=False).tolist())
            if not regular and lch.tail_index not in active:
                active[-1] = lch.tail_index
            small = random_generate(ctx, ctx.dim, s, style)
            projs = [op_zero(ctx)] * len(space)
            for i, proj in zip(active, small.atom_projections):
                projs[i] = proj
            p = PositiveSpectralMeasure(space, ctx, tuple(projs))
        else:
            p = random_generate(ctx, len(space), s, style, labels=space.atoms)
        if not lch.has_tail:
            return p
        if regular:
            projs = list(p.atom_projections)
            projs[lch.tail_index] = op_zero(ctx)
            return PositiveSpectralMeasure(space, ctx, tuple(projs))
        if np.any(p.atom_projections[lch.tail_index].matrix):
            return p
    raise RuntimeError("could not draw an irregular measure")
