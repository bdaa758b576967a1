"""Finite-dimensional Banach lattices R^n with the coordinatewise order.

A :class:`LatticeContext` fixes the dimension and a lattice norm. Vectors of
the dual space are ordinary :class:`LatticeVector` objects; whether a vector is
measured with the primal or the dual norm is decided by the function called
(:func:`norm` versus :func:`dual_norm`), not by its type.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Optional, Sequence, Tuple

import numpy as np


class ContextMismatchError(ValueError):
    """Raised when two objects living over different lattices are combined."""


class NormKind(str, Enum):
    L1 = "l1"
    L2 = "l2"
    LINF = "linf"
    WL1 = "wl1"
    WLINF = "wlinf"

    @property
    def weighted(self) -> bool:
        return self in (NormKind.WL1, NormKind.WLINF)


_DUAL_KIND = {
    NormKind.L1: NormKind.LINF,
    NormKind.LINF: NormKind.L1,
    NormKind.L2: NormKind.L2,
    NormKind.WL1: NormKind.WLINF,
    NormKind.WLINF: NormKind.WL1,
}


@dataclass(frozen=True)
class LatticeContext:
    """The lattice ``R^dim`` with a chosen lattice norm.

    Weighted kinds use ``sum(w_i |v_i|)`` (``wl1``) and ``max(w_i |v_i|)``
    (``wlinf``); ``weights`` is required for them and forbidden otherwise.
    """

    dim: int
    norm_kind: NormKind = NormKind.LINF
    weights: Optional[Tuple[float, ...]] = None

    def __post_init__(self) -> None:
        if int(self.dim) != self.dim or self.dim < 1:
            raise ValueError(f"dim must be a positive integer, got {self.dim!r}")
        kind = NormKind(self.norm_kind)
        object.__setattr__(self, "norm_kind", kind)
        if kind.weighted:
            if self.weights is None:
                raise ValueError(f"norm kind {kind.value!r} needs weights")
            w = tuple(float(x) for x in self.weights)
            if len(w) != self.dim:
                raise ValueError(f"expected {self.dim} weights, got {len(w)}")
            if not all(x > 0 and math.isfinite(x) for x in w):
                raise ValueError("weights must be strictly positive and finite")
            object.__setattr__(self, "weights", w)
        elif self.weights is not None:
            raise ValueError(f"norm kind {kind.value!r} takes no weights")

    @property
    def weight_array(self) -> np.ndarray:
        if self.weights is None:
            return np.ones(self.dim)
        return np.asarray(self.weights, dtype=float)

    def dual(self) -> "LatticeContext":
        """The context whose norm is the dual norm of this one."""
        kind = _DUAL_KIND[self.norm_kind]
        weights = None
        if self.weights is not None:
            weights = tuple(1.0 / w for w in self.weights)
        return LatticeContext(self.dim, kind, weights)

    def norm_of(self, coords: np.ndarray) -> float:
        a = np.abs(np.asarray(coords, dtype=float))
        kind = self.norm_kind
        if kind is NormKind.L1:
            return math.fsum(a)
        if kind is NormKind.LINF:
            return float(a.max(initial=0.0))
        if kind is NormKind.L2:
            return float(np.sqrt(math.fsum(a * a)))
        if kind is NormKind.WL1:
            return math.fsum(a * self.weight_array)
        return float((a * self.weight_array).max(initial=0.0))

    def vector(self, coords: Sequence[float]) -> "LatticeVector":
        return LatticeVector(np.asarray(coords, dtype=float), self)

    def zero(self) -> "LatticeVector":
        return LatticeVector(np.zeros(self.dim), self)

    def basis(self, i: int) -> "LatticeVector":
        e = np.zeros(self.dim)
        e[i] = 1.0
        return LatticeVector(e, self)

    def to_json(self) -> dict:
        norm: dict[str, Any] = {"kind": self.norm_kind.value}
        if self.weights is not None:
            norm["weights"] = list(self.weights)
        return {"dim": self.dim, "norm": norm}

    @classmethod
    def from_json(cls, data: dict) -> "LatticeContext":
        norm = data.get("norm", {"kind": "linf"})
        weights = norm.get("weights")
        return cls(int(data["dim"]), NormKind(norm["kind"]),
                   None if weights is None else tuple(weights))


@dataclass(frozen=True, eq=False)
class LatticeVector:
    coords: np.ndarray
    ctx: LatticeContext

    def __post_init__(self) -> None:
        c = np.array(self.coords, dtype=float)
        if c.shape != (self.ctx.dim,):
            raise ValueError(f"expected shape ({self.ctx.dim},), got {c.shape}")
        if not np.all(np.isfinite(c)):
            raise ValueError("coordinates must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)

    def _check(self, other: "LatticeVector") -> None:
        if other.ctx.dim != self.ctx.dim:
            raise ContextMismatchError(
                f"dimension {self.ctx.dim} vs {other.ctx.dim}")

    def __add__(self, other: "LatticeVector") -> "LatticeVector":
        self._check(other)
        return LatticeVector(self.coords + other.coords, self.ctx)

    def __sub__(self, other: "LatticeVector") -> "LatticeVector":
        self._check(other)
        return LatticeVector(self.coords - other.coords, self.ctx)

    def __neg__(self) -> "LatticeVector":
        return LatticeVector(-self.coords, self.ctx)

    def __mul__(self, scalar: float) -> "LatticeVector":
        return LatticeVector(self.coords * float(scalar), self.ctx)

    __rmul__ = __mul__

    def is_positive(self, tol: float = 0.0) -> bool:
        return bool(np.all(self.coords >= -tol))

    def allclose(self, other: "LatticeVector", tol: float = 1e-9) -> bool:
        self._check(other)
        return bool(np.max(np.abs(self.coords - other.coords), initial=0.0) <= tol)

    def __repr__(self) -> str:
        return f"LatticeVector({self.coords.tolist()}, {self.ctx.norm_kind.value})"


def _same(v: LatticeVector, w: LatticeVector) -> None:
    if v.ctx != w.ctx:
        raise ContextMismatchError(f"{v.ctx} vs {w.ctx}")


def vec_abs(v: LatticeVector) -> LatticeVector:
    return LatticeVector(np.abs(v.coords), v.ctx)


def vec_sup(v: LatticeVector, w: LatticeVector) -> LatticeVector:
    _same(v, w)
    return LatticeVector(np.maximum(v.coords, w.coords), v.ctx)


def vec_inf(v: LatticeVector, w: LatticeVector) -> LatticeVector:
    _same(v, w)
    return LatticeVector(np.minimum(v.coords, w.coords), v.ctx)


def pos_neg_parts(v: LatticeVector) -> Tuple[LatticeVector, LatticeVector]:
    """Return ``(v+, v-)`` with ``v = v+ - v-`` and ``v+ ∧ v- = 0``."""
    zero = v.ctx.zero()
    return vec_sup(v, zero), vec_sup(-v, zero)


def norm(v: LatticeVector, ctx: Optional[LatticeContext] = None) -> float:
    ctx = v.ctx if ctx is None else ctx
    if ctx.dim != v.ctx.dim:
        raise ContextMismatchError(f"dimension {v.ctx.dim} vs {ctx.dim}")
    return ctx.norm_of(v.coords)


def dual_norm(xstar: LatticeVector, ctx: Optional[LatticeContext] = None) -> float:
    """Norm of ``xstar`` read as a functional on the lattice ``ctx``."""
    ctx = xstar.ctx if ctx is None else ctx
    return norm(xstar, ctx.dual())


def pair(x: LatticeVector, xstar: LatticeVector) -> float:
    """The duality pairing ``<x, x*> = sum x_i x*_i``."""
    if x.ctx.dim != xstar.ctx.dim:
        raise ContextMismatchError(f"dimension {x.ctx.dim} vs {xstar.ctx.dim}")
    return math.fsum(x.coords * xstar.coords)
