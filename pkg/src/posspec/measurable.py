"""Finite measurable spaces given by an ordered list of atoms.

The σ-algebra is the power set of the atoms, so every bounded measurable
function is simple and countable additivity reduces to finite additivity.
Measures are stored atomwise (density with respect to counting measure);
set values are computed on demand.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Iterator, Mapping, Sequence, Tuple

import numpy as np


class SpaceMismatchError(ValueError):
    """Raised when objects over different atom spaces are combined."""


@dataclass(frozen=True)
class AtomSpace:
    atoms: Tuple[str, ...]

    def __post_init__(self) -> None:
        labels = tuple(str(a) for a in self.atoms)
        if len(set(labels)) != len(labels):
            raise ValueError(f"atom labels must be distinct: {labels}")
        object.__setattr__(self, "atoms", labels)

    def __len__(self) -> int:
        return len(self.atoms)

    def index(self, label: str) -> int:
        try:
            return self.atoms.index(str(label))
        except ValueError:
            raise KeyError(f"no atom labelled {label!r}") from None

    def subset(self, labels: Iterable[str]) -> "MeasurableSet":
        return MeasurableSet(self, frozenset(self.index(a) for a in labels))

    def of_indices(self, indices: Iterable[int]) -> "MeasurableSet":
        return MeasurableSet(self, frozenset(int(i) for i in indices))

    def singleton(self, label: str) -> "MeasurableSet":
        return self.subset([label])

    def empty(self) -> "MeasurableSet":
        return MeasurableSet(self, frozenset())

    def full(self) -> "MeasurableSet":
        return MeasurableSet(self, frozenset(range(len(self))))

    def all_subsets(self) -> Iterator["MeasurableSet"]:
        n = len(self)
        for mask in range(1 << n):
            yield MeasurableSet(self, frozenset(i for i in range(n) if mask >> i & 1))

    def to_json(self) -> dict:
        return {"atoms": list(self.atoms)}

    @classmethod
    def from_json(cls, data: dict) -> "AtomSpace":
        return cls(tuple(data["atoms"]))


@dataclass(frozen=True)
class MeasurableSet:
    space: AtomSpace
    members: FrozenSet[int]

    def __post_init__(self) -> None:
        bad = [i for i in self.members if not 0 <= i < len(self.space)]
        if bad:
            raise ValueError(f"atom indices out of range: {sorted(bad)}")

    @property
    def labels(self) -> Tuple[str, ...]:
        return tuple(self.space.atoms[i] for i in sorted(self.members))

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.members))

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, index: int) -> bool:
        return index in self.members

    def __or__(self, other: "MeasurableSet") -> "MeasurableSet":
        return set_union(self, other)

    def __and__(self, other: "MeasurableSet") -> "MeasurableSet":
        return set_intersect(self, other)

    def __invert__(self) -> "MeasurableSet":
        return set_complement(self)

    def __le__(self, other: "MeasurableSet") -> bool:
        _same_space(self.space, other.space)
        return self.members <= other.members

    def __repr__(self) -> str:
        return "{" + ", ".join(self.labels) + "}"


def _same_space(a: AtomSpace, b: AtomSpace) -> None:
    if a != b:
        raise SpaceMismatchError(f"{a.atoms} vs {b.atoms}")


def set_union(a: MeasurableSet, b: MeasurableSet) -> MeasurableSet:
    _same_space(a.space, b.space)
    return MeasurableSet(a.space, a.members | b.members)


def set_intersect(a: MeasurableSet, b: MeasurableSet) -> MeasurableSet:
    _same_space(a.space, b.space)
    return MeasurableSet(a.space, a.members & b.members)


def set_complement(a: MeasurableSet) -> MeasurableSet:
    return MeasurableSet(a.space, frozenset(range(len(a.space))) - a.members)


class _AtomValues:
    """Shared storage for real values indexed by atoms."""

    space: AtomSpace
    values: np.ndarray

    def _init_values(self) -> None:
        v = np.array(self.values, dtype=float)
        if v.shape != (len(self.space),):
            raise ValueError(f"expected {len(self.space)} values, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __getitem__(self, label: str) -> float:
        return float(self.values[self.space.index(label)])

    def as_dict(self) -> Dict[str, float]:
        return {a: float(x) for a, x in zip(self.space.atoms, self.values)}

    def to_json(self) -> dict:
        return {"values": self.as_dict()}


@dataclass(frozen=True, eq=False)
class BorelFunction(_AtomValues):
    space: AtomSpace
    values: np.ndarray

    def __post_init__(self) -> None:
        self._init_values()

    @classmethod
    def from_mapping(cls, space: AtomSpace, mapping: Mapping[str, float]) -> "BorelFunction":
        return cls(space, np.array([float(mapping.get(a, 0.0)) for a in space.atoms]))

    def __add__(self, other: "BorelFunction") -> "BorelFunction":
        return fun_add(self, other)

    def __sub__(self, other: "BorelFunction") -> "BorelFunction":
        return fun_add(self, fun_scale(other, -1.0))

    def __mul__(self, other):
        if isinstance(other, BorelFunction):
            return fun_mul(self, other)
        return fun_scale(self, other)

    __rmul__ = __mul__

    def __le__(self, other: "BorelFunction") -> bool:
        _same_space(self.space, other.space)
        return bool(np.all(self.values <= other.values))

    def equals(self, other: "BorelFunction") -> bool:
        _same_space(self.space, other.space)
        return bool(np.array_equal(self.values, other.values))

    def __repr__(self) -> str:
        return f"BorelFunction({self.as_dict()})"


@dataclass(frozen=True, eq=False)
class SignedMeasure(_AtomValues):
    space: AtomSpace
    values: np.ndarray

    def __post_init__(self) -> None:
        self._init_values()

    @classmethod
    def from_mapping(cls, space: AtomSpace, mapping: Mapping[str, float]) -> "SignedMeasure":
        return cls(space, np.array([float(mapping.get(a, 0.0)) for a in space.atoms]))

    def of(self, delta: MeasurableSet) -> float:
        """``mu(delta)``."""
        _same_space(self.space, delta.space)
        return math.fsum(self.values[i] for i in delta)

    def is_positive(self, tol: float = 0.0) -> bool:
        return bool(np.all(self.values >= -tol))

    def __repr__(self) -> str:
        return f"SignedMeasure({self.as_dict()})"


def char(delta: MeasurableSet) -> BorelFunction:
    v = np.zeros(len(delta.space))
    v[list(delta.members)] = 1.0
    return BorelFunction(delta.space, v)


def constant(space: AtomSpace, value: float = 1.0) -> BorelFunction:
    return BorelFunction(space, np.full(len(space), float(value)))


def fun_sup_norm(phi: BorelFunction) -> float:
    return float(np.max(np.abs(phi.values), initial=0.0))


def fun_add(phi: BorelFunction, psi: BorelFunction) -> BorelFunction:
    _same_space(phi.space, psi.space)
    return BorelFunction(phi.space, phi.values + psi.values)


def fun_mul(phi: BorelFunction, psi: BorelFunction) -> BorelFunction:
    _same_space(phi.space, psi.space)
    return BorelFunction(phi.space, phi.values * psi.values)


def fun_scale(phi: BorelFunction, alpha: float) -> BorelFunction:
    return BorelFunction(phi.space, phi.values * float(alpha))


def fun_abs(phi: BorelFunction) -> BorelFunction:
    return BorelFunction(phi.space, np.abs(phi.values))


def fun_pos_neg(phi: BorelFunction) -> Tuple[BorelFunction, BorelFunction]:
    return (BorelFunction(phi.space, np.maximum(phi.values, 0.0)),
            BorelFunction(phi.space, np.maximum(-phi.values, 0.0)))


def integrate(phi: BorelFunction, mu: SignedMeasure) -> float:
    _same_space(phi.space, mu.space)
    return math.fsum(phi.values * mu.values)


def total_variation(mu: SignedMeasure) -> float:
    """``|mu|(X)``; with atomwise storage this is the sum of ``|mu(a)|``."""
    return math.fsum(np.abs(mu.values))


def reweight(mu: SignedMeasure, psi: BorelFunction) -> SignedMeasure:
    """The measure ``delta -> integral of psi over delta`` w.r.t. ``mu``."""
    _same_space(mu.space, psi.space)
    return SignedMeasure(mu.space, psi.values * mu.values)


def set_partitions(items: Sequence[int]) -> Iterator[list]:
    """All partitions of ``items`` into nonempty blocks."""
    items = list(items)
    if not items:
        yield []
        return
    head, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[head]] + part
        for k in range(len(part)):
            yield part[:k] + [[head] + part[k]] + part[k + 1:]


def partition_variation(mu: SignedMeasure, max_atoms: int = 6) -> float:
    """Brute-force ``sup sum_i |mu(D_i)|`` over all partitions of the space.

    Block sums are accumulated in exact rational arithmetic, so the result is
    the correctly rounded value of the exact supremum.
    """
    from fractions import Fraction

    n = len(mu.space)
    if n > max_atoms:
        raise ValueError(f"partition enumeration capped at {max_atoms} atoms, got {n}")
    exact = [Fraction(float(x)) for x in mu.values]
    best = Fraction(0)
    for part in set_partitions(range(n)):
        s = sum((abs(sum((exact[i] for i in block), Fraction(0))) for block in part), Fraction(0))
        best = max(best, s)
    return float(best)


def subsets_of(delta: MeasurableSet) -> Iterator[MeasurableSet]:
    members = sorted(delta.members)
    for r in range(len(members) + 1):
        for combo in itertools.combinations(members, r):
            yield MeasurableSet(delta.space, frozenset(combo))


def supersets_of(delta: MeasurableSet) -> Iterator[MeasurableSet]:
    outside = sorted(set(range(len(delta.space))) - delta.members)
    for r in range(len(outside) + 1):
        for combo in itertools.combinations(outside, r):
            yield MeasurableSet(delta.space, delta.members | frozenset(combo))
