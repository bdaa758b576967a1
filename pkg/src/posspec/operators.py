"""Regular operators on a finite-dimensional lattice.

On ``R^n`` with the coordinatewise order every linear operator is regular,
and the operator cone is the cone of entrywise nonnegative matrices. The
lattice ``R^n`` is atomic: the only ways to write a basis atom ``e_j`` as a
sum of two positive vectors are the scalar splittings ``t e_j + (1-t) e_j``.
Feeding that into the Riesz-Kantorovich formulas

    |T| e_j = sup{ T y - T z : y + z = e_j, y, z >= 0 }
    (S v T) e_j = sup{ S y + T z : y + z = e_j, y, z >= 0 }

collapses them to entrywise absolute value and entrywise max, which is what
:func:`op_modulus`, :func:`op_sup` and :func:`op_inf` compute. The test-suite
checks this reduction against a grid over ``t``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .lattice import ContextMismatchError, LatticeContext, LatticeVector, NormKind
from .tolerance import resolve

POWER_ITERATION_TOL = 1e-10
POWER_ITERATION_MAX_STEPS = 10_000


class ConvergenceError(RuntimeError):
    """Power iteration did not settle within the step budget."""


@dataclass(frozen=True, eq=False)
class RegularOperator:
    matrix: np.ndarray
    ctx: LatticeContext

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=float)
        n = self.ctx.dim
        if m.shape != (n, n):
            raise ValueError(f"expected a {n}x{n} matrix, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("matrix entries must be finite")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def _check(self, other: "RegularOperator") -> None:
        if other.ctx.dim != self.ctx.dim:
            raise ContextMismatchError(f"dimension {self.ctx.dim} vs {other.ctx.dim}")

    def __add__(self, other: "RegularOperator") -> "RegularOperator":
        self._check(other)
        return RegularOperator(self.matrix + other.matrix, self.ctx)

    def __sub__(self, other: "RegularOperator") -> "RegularOperator":
        self._check(other)
        return RegularOperator(self.matrix - other.matrix, self.ctx)

    def __neg__(self) -> "RegularOperator":
        return RegularOperator(-self.matrix, self.ctx)

    def __mul__(self, scalar: float) -> "RegularOperator":
        return RegularOperator(self.matrix * float(scalar), self.ctx)

    __rmul__ = __mul__

    def __matmul__(self, other: "RegularOperator") -> "RegularOperator":
        return compose(self, other)

    def allclose(self, other: "RegularOperator", tol: Optional[float] = None) -> bool:
        self._check(other)
        return max_abs_diff(self, other) <= resolve(tol)

    def dominates(self, other: "RegularOperator", tol: Optional[float] = None) -> bool:
        """``self >= other`` in the operator order."""
        self._check(other)
        return bool(np.all(self.matrix - other.matrix >= -resolve(tol)))

    def tolist(self) -> list:
        return self.matrix.tolist()

    def __repr__(self) -> str:
        return f"RegularOperator({self.matrix.tolist()})"


def max_abs_diff(a: RegularOperator, b: RegularOperator) -> float:
    return float(np.max(np.abs(a.matrix - b.matrix), initial=0.0))


def op_identity(ctx: LatticeContext) -> RegularOperator:
    return RegularOperator(np.eye(ctx.dim), ctx)


def op_zero(ctx: LatticeContext) -> RegularOperator:
    return RegularOperator(np.zeros((ctx.dim, ctx.dim)), ctx)


def matrix_unit(ctx: LatticeContext, i: int, j: int) -> RegularOperator:
    m = np.zeros((ctx.dim, ctx.dim))
    m[i, j] = 1.0
    return RegularOperator(m, ctx)


def compose(s: RegularOperator, t: RegularOperator) -> RegularOperator:
    """The product ``S T`` (apply ``T`` first)."""
    s._check(t)
    return RegularOperator(s.matrix @ t.matrix, s.ctx)


def apply(t: RegularOperator, v: LatticeVector) -> LatticeVector:
    if v.ctx.dim != t.ctx.dim:
        raise ContextMismatchError(f"dimension {t.ctx.dim} vs {v.ctx.dim}")
    return LatticeVector(t.matrix @ v.coords, v.ctx)


def op_modulus(t: RegularOperator) -> RegularOperator:
    return RegularOperator(np.abs(t.matrix), t.ctx)


def is_positive(t: RegularOperator, tol: Optional[float] = None) -> bool:
    return bool(np.all(t.matrix >= -resolve(tol)))


def _family_matrices(family: Sequence[RegularOperator]) -> np.ndarray:
    if len(family) == 0:
        raise ValueError("empty operator family")
    first = family[0]
    for t in family[1:]:
        first._check(t)
    return np.stack([t.matrix for t in family])


def op_sup(family: Sequence[RegularOperator]) -> RegularOperator:
    return RegularOperator(_family_matrices(family).max(axis=0), family[0].ctx)


def op_inf(family: Sequence[RegularOperator]) -> RegularOperator:
    return RegularOperator(_family_matrices(family).min(axis=0), family[0].ctx)


# -- norms -----------------------------------------------------------------

def _largest_singular_value(m: np.ndarray) -> float:
    """Largest singular value by power iteration on ``T^T T``.

    Plain power iteration stalls when the top two eigenvalues of ``T^T T``
    are close, so the iteration runs on ``(T^T T)^(2^k)`` obtained by
    repeated squaring (each squaring doubles the number of plain steps).
    The Rayleigh quotient of the original Gram matrix at the resulting
    vector is the estimate; two start vectors guard against a start that
    is orthogonal to the top eigenspace.
    """
    gram = m.T @ m
    scale = float(np.max(np.abs(gram)))
    if scale == 0.0:
        return 0.0
    g = gram / scale
    for _ in range(POWER_ITERATION_MAX_STEPS):
        sq = g @ g
        top = float(np.max(np.abs(sq)))
        if top == 0.0:
            break
        sq /= top
        if float(np.max(np.abs(sq - g))) <= POWER_ITERATION_TOL:
            g = sq
            break
        g = sq
    else:
        raise ConvergenceError(
            f"power iteration did not converge in {POWER_ITERATION_MAX_STEPS} squarings")
    n = m.shape[0]
    starts = [np.ones(n) / math.sqrt(n), np.random.default_rng(0).standard_normal(n)]
    best = 0.0
    for v in starts:
        w = g @ (v / np.linalg.norm(v))
        size = np.linalg.norm(w)
        if size == 0.0:
            continue
        w /= size
        best = max(best, float(w @ gram @ w))
    return math.sqrt(max(best, 0.0))


def operator_norm(t: RegularOperator, ctx: Optional[LatticeContext] = None) -> float:
    """Induced operator norm for the lattice norm of ``ctx``.

    Weighted norms reduce to the unweighted ones by conjugating with the
    diagonal weight matrix: ``||T||_w = ||W T W^-1||``.
    """
    ctx = t.ctx if ctx is None else ctx
    m = t.matrix
    kind = ctx.norm_kind
    if kind.weighted:
        w = ctx.weight_array
        m = (w[:, None] * m) / w[None, :]
    a = np.abs(m)
    if kind in (NormKind.LINF, NormKind.WLINF):
        return max(math.fsum(row) for row in a)
    if kind in (NormKind.L1, NormKind.WL1):
        return max(math.fsum(col) for col in a.T)
    return _largest_singular_value(m)


def regular_norm(t: RegularOperator, ctx: Optional[LatticeContext] = None) -> float:
    return operator_norm(op_modulus(t), ctx)


# -- exact-ish linear algebra for commutants and spans ----------------------

def row_echelon(a: np.ndarray, tol: Optional[float] = None) -> Tuple[np.ndarray, List[int]]:
    """Reduced row echelon form by Gaussian elimination with partial pivoting.

    Pivots smaller than ``tol * max(1, max|a|)`` count as zero. Returns the
    reduced matrix and the list of pivot columns.
    """
    r = np.array(a, dtype=float, copy=True)
    if r.ndim != 2:
        raise ValueError("expected a 2-d array")
    rows, cols = r.shape
    eps = resolve(tol) * max(1.0, float(np.max(np.abs(r), initial=0.0)))
    pivots: List[int] = []
    row = 0
    for col in range(cols):
        if row >= rows:
            break
        k = row + int(np.argmax(np.abs(r[row:, col])))
        if abs(r[k, col]) <= eps:
            r[row:, col] = 0.0
            continue
        if k != row:
            r[[row, k]] = r[[k, row]]
        r[row] /= r[row, col]
        others = np.arange(rows) != row
        r[others] -= np.outer(r[others, col], r[row])
        r[others, col] = 0.0
        pivots.append(col)
        row += 1
    return r, pivots


def matrix_rank(a: np.ndarray, tol: Optional[float] = None) -> int:
    a = np.asarray(a, dtype=float)
    if a.size == 0:
        return 0
    return len(row_echelon(a, tol)[1])


def nullspace(a: np.ndarray, tol: Optional[float] = None) -> np.ndarray:
    """Columns spanning ``{z : a z = 0}``, read off the reduced echelon form."""
    a = np.asarray(a, dtype=float)
    cols = a.shape[1]
    if a.shape[0] == 0:
        return np.eye(cols)
    r, pivots = row_echelon(a, tol)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((cols, len(free)))
    for k, f in enumerate(free):
        basis[f, k] = 1.0
        for i, p in enumerate(pivots):
            basis[p, k] = -r[i, f]
    return basis


def commutator_system(family: Sequence[RegularOperator]) -> np.ndarray:
    """Stacked linear system in ``vec(S)`` (row-major) for ``S T - T S = 0``."""
    if not family:
        return np.zeros((0, 0))
    n = family[0].ctx.dim
    eye = np.eye(n)
    blocks = []
    for t in family:
        # row-major vec: vec(S T) = (I kron T^T) vec(S), vec(T S) = (T kron I) vec(S)
        blocks.append(np.kron(eye, t.matrix.T) - np.kron(t.matrix, eye))
    return np.vstack(blocks)


def commutant_basis(family: Sequence[RegularOperator],
                    ctx: Optional[LatticeContext] = None,
                    tol: Optional[float] = None) -> List[RegularOperator]:
    """A basis of ``{S : S T = T S for all T in family}``."""
    if ctx is None:
        if not family:
            raise ValueError("need a context for an empty family")
        ctx = family[0].ctx
    for t in family:
        if t.ctx.dim != ctx.dim:
            raise ContextMismatchError(f"dimension {ctx.dim} vs {t.ctx.dim}")
    n = ctx.dim
    if not family:
        kernel = np.eye(n * n)
    else:
        kernel = nullspace(commutator_system(family), tol)
    return [RegularOperator(kernel[:, k].reshape(n, n), ctx) for k in range(kernel.shape[1])]


def span_rank(ops: Sequence[RegularOperator], tol: Optional[float] = None) -> int:
    if not ops:
        return 0
    return matrix_rank(np.stack([t.matrix.ravel() for t in ops]), tol)


def same_span(a: Sequence[RegularOperator], b: Sequence[RegularOperator],
              tol: Optional[float] = None) -> bool:
    """Mutual containment of two spans, by comparing ranks."""
    ra, rb = span_rank(a, tol), span_rank(b, tol)
    return ra == rb == span_rank(list(a) + list(b), tol)


def span_contains(big: Sequence[RegularOperator], small: Sequence[RegularOperator],
                  tol: Optional[float] = None) -> bool:
    return span_rank(big, tol) == span_rank(list(big) + list(small), tol)


def span_basis(ops: Sequence[RegularOperator], tol: Optional[float] = None) -> List[RegularOperator]:
    """An echelon basis for the linear span of ``ops``."""
    if not ops:
        return []
    ctx = ops[0].ctx
    n = ctx.dim
    r, pivots = row_echelon(np.stack([t.matrix.ravel() for t in ops]), tol)
    return [RegularOperator(r[i].reshape(n, n), ctx) for i in range(len(pivots))]


def generated_algebra(ops: Sequence[RegularOperator], tol: Optional[float] = None,
                      max_rounds: int = 64) -> List[RegularOperator]:
    """Basis of the smallest product-closed linear span containing ``ops``."""
    basis = span_basis(ops, tol)
    for _ in range(max_rounds):
        products = [compose(a, b) for a in basis for b in basis]
        grown = span_basis(basis + products, tol)
        if len(grown) == len(basis):
            return basis
        basis = grown
    raise ConvergenceError("algebra closure did not stabilise")
