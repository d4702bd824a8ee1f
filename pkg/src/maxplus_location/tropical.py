"""
Max-plus algebra
================

Scalars, vectors and matrices over the idempotent semifield R_max,+ where
addition is ``max`` and multiplication is ``+``.  The zero element is an
explicit tagged value at the scalar level; dense arrays store it as IEEE
``-inf``, which is exactly neutral for ``max`` and absorbing for ``+`` so the
semiring laws hold without a "very negative" sentinel.

Spectral layer: the eigenvalue of an irreducible matrix via the trace formula,
the normalized power sum ``A^x``, the eigenbasis ``A^+`` and the minimizer of
the quadratic form ``x^- A x``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import total_ordering
from typing import Iterable, Sequence, Union

import numpy as np

UNIT_TOL = 1e-9
COLLINEAR_TOL = 1e-9

NEG_INF = -math.inf


class TropicalDomainError(ValueError):
    """Inverse or non-positive power of the zero element, or similar."""


class ShapeError(ValueError):
    """Operands with non-conforming dimensions."""


class ReducibleMatrixError(ValueError):
    """A spectral routine was called with a reducible matrix."""


class EigenbasisError(RuntimeError):
    """No unit-diagonal column found in A^x; indicates a bug, not bad input."""


@total_ordering
@dataclass(frozen=True, slots=True)
class TropicalScalar:
    """An element of R_max,+.  ``value is None`` encodes the zero element."""

    value: float | None = None

    def __post_init__(self) -> None:
        if self.value is not None:
            v = float(self.value)
            if not math.isfinite(v):
                raise TropicalDomainError(f"finite value expected, got {self.value!r}")
            object.__setattr__(self, "value", v)

    @classmethod
    def of(cls, x: "ScalarLike") -> "TropicalScalar":
        """Coerce a float (``-inf`` meaning zero), ``None`` or scalar."""
        if isinstance(x, TropicalScalar):
            return x
        if x is None:
            return ZERO
        x = float(x)
        if x == NEG_INF:
            return ZERO
        return cls(x)

    @property
    def is_zero(self) -> bool:
        return self.value is None

    def to_float(self) -> float:
        return NEG_INF if self.value is None else self.value

    # semiring operations
    def __add__(self, other: "ScalarLike") -> "TropicalScalar":
        if not isinstance(other, _SCALAR_TYPES):
            return NotImplemented
        other = TropicalScalar.of(other)
        if self.value is None:
            return other
        if other.value is None:
            return self
        return self if self.value >= other.value else other

    __radd__ = __add__

    def __mul__(self, other: "ScalarLike") -> "TropicalScalar":
        if not isinstance(other, _SCALAR_TYPES):
            return NotImplemented
        other = TropicalScalar.of(other)
        if self.value is None or other.value is None:
            return ZERO
        return TropicalScalar(self.value + other.value)

    __rmul__ = __mul__

    def inverse(self) -> "TropicalScalar":
        if self.value is None:
            raise TropicalDomainError("the zero element has no inverse")
        return TropicalScalar(-self.value)

    def __truediv__(self, other: "ScalarLike") -> "TropicalScalar":
        return self * TropicalScalar.of(other).inverse()

    def __pow__(self, alpha: float) -> "TropicalScalar":
        if self.value is None:
            if alpha > 0:
                return ZERO
            raise TropicalDomainError("zero raised to a non-positive power")
        return TropicalScalar(alpha * self.value)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, float)) or other is None:
            other = TropicalScalar.of(other)
        if not isinstance(other, TropicalScalar):
            return NotImplemented
        return self.value == other.value

    def __lt__(self, other: "ScalarLike") -> bool:
        return self.to_float() < TropicalScalar.of(other).to_float()

    def __hash__(self) -> int:
        return hash(self.value)

    def __repr__(self) -> str:
        return "𝟘" if self.value is None else f"T({self.value:g})"


_SCALAR_TYPES = (TropicalScalar, int, float, np.floating, np.integer, type(None))

ZERO = TropicalScalar(None)
ONE = TropicalScalar(0.0)

ScalarLike = Union[TropicalScalar, float, int, None]


def tsum(xs: Iterable[ScalarLike]) -> TropicalScalar:
    """Tropical sum (max) of an iterable; empty sum is the zero element."""
    acc = ZERO
    for x in xs:
        acc = acc + x
    return acc


def tprod(xs: Iterable[ScalarLike]) -> TropicalScalar:
    acc = ONE
    for x in xs:
        acc = acc * x
    return acc


def _as_float(x: ScalarLike) -> float:
    return TropicalScalar.of(x).to_float()


def _checked_array(data) -> np.ndarray:
    arr = np.array(
        [[_as_float(x) for x in row] for row in data]
        if not isinstance(data, np.ndarray)
        else data,
        dtype=float,
    )
    if arr.ndim != 2 or arr.size == 0:
        raise ShapeError(f"non-empty 2-D array expected, got shape {arr.shape}")
    if np.isnan(arr).any() or np.isposinf(arr).any():
        raise TropicalDomainError("entries must be finite or -inf (zero)")
    arr = arr.copy()
    arr.flags.writeable = False
    return arr


def _maxplus_product(b: np.ndarray, c: np.ndarray) -> np.ndarray:
    # -inf + -inf == -inf; +inf never occurs, so no nan can appear
    return np.max(b[:, :, None] + c[None, :, :], axis=1)


class TropicalMatrix:
    """Dense immutable matrix over R_max,+.

    Entries may be given as floats, ``None`` or :class:`TropicalScalar`;
    ``None`` and ``-inf`` both denote the zero element.
    """

    __slots__ = ("_a",)

    def __init__(self, rows) -> None:
        if isinstance(rows, TropicalMatrix):
            self._a = rows._a
        else:
            self._a = _checked_array(rows)

    @classmethod
    def identity(cls, n: int) -> "TropicalMatrix":
        a = np.full((n, n), NEG_INF)
        np.fill_diagonal(a, 0.0)
        return cls(a)

    @classmethod
    def zeros(cls, n: int, m: int | None = None) -> "TropicalMatrix":
        return cls(np.full((n, n if m is None else m), NEG_INF))

    @property
    def array(self) -> np.ndarray:
        """Read-only float view; the zero element appears as ``-inf``."""
        return self._a

    @property
    def shape(self) -> tuple[int, int]:
        return self._a.shape  # type: ignore[return-value]

    @property
    def is_square(self) -> bool:
        return self._a.shape[0] == self._a.shape[1]

    @property
    def T(self) -> "TropicalMatrix":
        return TropicalMatrix(self._a.T)

    def __getitem__(self, idx: tuple[int, int]) -> TropicalScalar:
        return TropicalScalar.of(self._a[idx])

    def column(self, j: int) -> "TropicalVector":
        return TropicalVector(self._a[:, j])

    def columns(self) -> list["TropicalVector"]:
        return [self.column(j) for j in range(self.shape[1])]

    def tolist(self) -> list[list[float]]:
        return self._a.tolist()

    def __add__(self, other: "TropicalMatrix") -> "TropicalMatrix":
        if not isinstance(other, TropicalMatrix):
            return NotImplemented
        if self.shape != other.shape:
            raise ShapeError(f"cannot add {self.shape} and {other.shape}")
        return TropicalMatrix(np.maximum(self._a, other._a))

    def __matmul__(self, other):
        if isinstance(other, TropicalVector):
            if self.shape[1] != len(other):
                raise ShapeError(f"cannot multiply {self.shape} by vector of size {len(other)}")
            return TropicalVector(_maxplus_product(self._a, other.array[:, None])[:, 0])
        if not isinstance(other, TropicalMatrix):
            return NotImplemented
        if self.shape[1] != other.shape[0]:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        return TropicalMatrix(_maxplus_product(self._a, other._a))

    def __mul__(self, c: ScalarLike) -> "TropicalMatrix":
        c = TropicalScalar.of(c)
        if c.is_zero:
            return TropicalMatrix.zeros(*self.shape)
        return TropicalMatrix(self._a + c.value)

    __rmul__ = __mul__

    def __pow__(self, p: int) -> "TropicalMatrix":
        return mat_power(self, p)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TropicalMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._a, other._a))

    def __hash__(self) -> int:
        return hash((self.shape, self._a.tobytes()))

    def allclose(self, other: "TropicalMatrix", atol: float = 1e-9) -> bool:
        if self.shape != other.shape:
            return False
        a, b = self._a, other._a
        same_support = np.array_equal(np.isneginf(a), np.isneginf(b))
        fin = ~np.isneginf(a)
        return same_support and bool(np.all(np.abs(a[fin] - b[fin]) <= atol))

    def __repr__(self) -> str:
        rows = ", ".join(
            "[" + ", ".join("𝟘" if v == NEG_INF else f"{v:g}" for v in row) + "]"
            for row in self._a
        )
        return f"TropicalMatrix([{rows}])"


class TropicalVector:
    """Column vector over R_max,+."""

    __slots__ = ("_v",)

    def __init__(self, entries) -> None:
        if isinstance(entries, TropicalVector):
            self._v = entries._v
            return
        if isinstance(entries, np.ndarray):
            v = np.array(entries, dtype=float).ravel()
        else:
            v = np.array([_as_float(x) for x in entries], dtype=float)
        if v.size == 0:
            raise ShapeError("vector dimension must be at least 1")
        if np.isnan(v).any() or np.isposinf(v).any():
            raise TropicalDomainError("entries must be finite or -inf (zero)")
        v.flags.writeable = False
        self._v = v

    @property
    def array(self) -> np.ndarray:
        return self._v

    def __len__(self) -> int:
        return self._v.size

    def __getitem__(self, i: int) -> TropicalScalar:
        return TropicalScalar.of(self._v[i])

    def __iter__(self):
        return (TropicalScalar.of(x) for x in self._v)

    @property
    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self._v)))

    def __add__(self, other: "TropicalVector") -> "TropicalVector":
        if len(self) != len(other):
            raise ShapeError(f"cannot add vectors of size {len(self)} and {len(other)}")
        return TropicalVector(np.maximum(self._v, other._v))

    def __mul__(self, c: ScalarLike) -> "TropicalVector":
        c = TropicalScalar.of(c)
        if c.is_zero:
            return TropicalVector(np.full(len(self), NEG_INF))
        return TropicalVector(self._v + c.value)

    __rmul__ = __mul__

    def __pow__(self, alpha: float) -> "TropicalVector":
        return TropicalVector([x**alpha for x in self])

    def conj(self) -> "TropicalVector":
        """Entry-wise inverses; only defined for vectors without zero entries.

        The result is meant to be read as the row vector ``x^-``.
        """
        if not self.is_finite:
            raise TropicalDomainError("conjugate requires all entries finite")
        return TropicalVector(-self._v)

    def dot(self, other: "TropicalVector") -> TropicalScalar:
        """Row-by-column product ``self^T (x) other``."""
        if len(self) != len(other):
            raise ShapeError(f"cannot pair vectors of size {len(self)} and {len(other)}")
        return TropicalScalar.of(float(np.max(self._v + other._v)))

    def __le__(self, other: "TropicalVector") -> bool:
        return bool(np.all(self._v <= other._v))

    def __ge__(self, other: "TropicalVector") -> bool:
        return bool(np.all(self._v >= other._v))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TropicalVector):
            return NotImplemented
        return bool(np.array_equal(self._v, other._v))

    def __hash__(self) -> int:
        return hash(self._v.tobytes())

    def tolist(self) -> list[float]:
        return self._v.tolist()

    def __repr__(self) -> str:
        return "TropicalVector([" + ", ".join(repr(x) for x in self) + "])"


# --- scalar layer ----------------------------------------------------------


def tadd(x: ScalarLike, y: ScalarLike) -> TropicalScalar:
    return TropicalScalar.of(x) + y


def tmul(x: ScalarLike, y: ScalarLike) -> TropicalScalar:
    return TropicalScalar.of(x) * y


def tinv(x: ScalarLike) -> TropicalScalar:
    return TropicalScalar.of(x).inverse()


def tpow(x: ScalarLike, alpha: float) -> TropicalScalar:
    return TropicalScalar.of(x) ** alpha


# --- matrix layer ----------------------------------------------------------


def _require_square(A: TropicalMatrix) -> int:
    if not A.is_square:
        raise ShapeError(f"square matrix expected, got {A.shape}")
    return A.shape[0]


def mat_power(A: TropicalMatrix, p: int) -> TropicalMatrix:
    """p-fold tropical product, ``A^0 = I``."""
    n = _require_square(A)
    if p < 0 or int(p) != p:
        raise ValueError(f"non-negative integer power expected, got {p!r}")
    if p == 0:
        if np.all(np.isneginf(A.array)):
            raise TropicalDomainError("zeroth power of the zero matrix is undefined")
        return TropicalMatrix.identity(n)
    result = A
    for _ in range(int(p) - 1):
        result = result @ A
    return result


def trace(A: TropicalMatrix) -> TropicalScalar:
    _require_square(A)
    return TropicalScalar.of(float(np.max(np.diag(A.array))))


def quadratic_form(A: TropicalMatrix, x: TropicalVector) -> TropicalScalar:
    """``x^- (x) A (x) x`` for a vector without zero entries."""
    n = _require_square(A)
    if len(x) != n:
        raise ShapeError(f"vector of size {n} expected, got {len(x)}")
    return x.conj().dot(A @ x)


def is_irreducible(A: TropicalMatrix) -> bool:
    """Strong connectivity of the support digraph (edge i->j iff a_ij != 0).

    A 1x1 matrix counts as irreducible only when its entry is finite, so that
    irreducible matrices always have a finite eigenvalue.
    """
    n = _require_square(A)
    support = ~np.isneginf(A.array)
    if n == 1:
        return bool(support[0, 0])

    def reaches_all(adj: np.ndarray) -> bool:
        seen = np.zeros(n, dtype=bool)
        seen[0] = True
        stack = [0]
        while stack:
            i = stack.pop()
            for j in np.flatnonzero(adj[i] & ~seen):
                seen[j] = True
                stack.append(int(j))
        return bool(seen.all())

    return reaches_all(support) and reaches_all(support.T)


# --- spectral layer --------------------------------------------------------


@dataclass(frozen=True)
class EigenData:
    eigenvalue: TropicalScalar
    basis: TropicalMatrix

    @property
    def first(self) -> TropicalVector:
        return self.basis.column(0)


def _require_irreducible(A: TropicalMatrix) -> int:
    n = _require_square(A)
    if not is_irreducible(A):
        raise ReducibleMatrixError("matrix is not irreducible")
    return n


def eigenvalue(A: TropicalMatrix) -> TropicalScalar:
    """Maximum over k of ``tr(A^k)^(1/k)``, k = 1..n."""
    n = _require_irreducible(A)
    lam = ZERO
    power = A
    for k in range(1, n + 1):
        if k > 1:
            power = power @ A
        lam = lam + trace(power) ** (1.0 / k)
    return lam


def star_like_matrix(A: TropicalMatrix, lam: ScalarLike) -> TropicalMatrix:
    """``lam^-1 A (+) lam^-2 A^2 (+) ... (+) lam^-n A^n``."""
    n = _require_square(A)
    lam = TropicalScalar.of(lam)
    if lam.is_zero:
        raise TropicalDomainError("normalizing eigenvalue must be finite")
    scaled = A * lam.inverse()
    acc = scaled
    power = scaled
    for _ in range(n - 1):
        power = power @ scaled
        acc = acc + power
    return acc


def collinear(g: TropicalVector, h: TropicalVector, tol: float = COLLINEAR_TOL) -> bool:
    """True if ``g = c (x) h`` for some finite c (up to ``tol``)."""
    if len(g) != len(h):
        raise ShapeError("collinearity test needs vectors of equal size")
    gz, hz = np.isneginf(g.array), np.isneginf(h.array)
    if not np.array_equal(gz, hz) or gz.all():
        return False
    diff = g.array[~gz] - h.array[~hz]
    return float(diff.max() - diff.min()) <= tol


def eigenbasis(A: TropicalMatrix) -> EigenData:
    """Eigenvalue and the matrix A^+ whose columns span the eigenvectors.

    Columns of A^x with unit diagonal are kept in index order; a column
    collinear with an already kept one is dropped.  Only pairwise
    collinearity is pruned, not general linear dependence.
    """
    _require_irreducible(A)
    lam = eigenvalue(A)
    star = star_like_matrix(A, lam)
    diag = np.diag(star.array)
    kept: list[TropicalVector] = []
    for i in np.flatnonzero(np.abs(diag) <= UNIT_TOL):
        col = star.column(int(i))
        if not any(collinear(col, g) for g in kept):
            kept.append(col)
    if not kept:
        raise EigenbasisError(f"no unit-diagonal column in A^x (diag={diag.tolist()})")
    basis = TropicalMatrix(np.column_stack([g.array for g in kept]))
    return EigenData(eigenvalue=lam, basis=basis)


def min_quadratic_form(A: TropicalMatrix, alpha: float) -> tuple[TropicalScalar, TropicalVector]:
    """Minimum of ``x^- A x`` over vectors without zero entries, and a minimizer.

    The minimizer is ``x_i = u_i^alpha v_i^(alpha-1)`` with ``u`` and ``v`` the
    first eigenbasis columns of ``A`` and ``A^T``.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    right = eigenbasis(A)
    left = eigenbasis(A.T)
    u, v = right.first, left.first
    x = TropicalVector(alpha * u.array + (alpha - 1.0) * v.array)
    return right.eigenvalue, x


__all__ = [
    "NEG_INF",
    "ONE",
    "ZERO",
    "EigenData",
    "EigenbasisError",
    "ReducibleMatrixError",
    "ShapeError",
    "TropicalDomainError",
    "TropicalMatrix",
    "TropicalScalar",
    "TropicalVector",
    "collinear",
    "eigenbasis",
    "eigenvalue",
    "is_irreducible",
    "mat_power",
    "min_quadratic_form",
    "quadratic_form",
    "star_like_matrix",
    "tadd",
    "tinv",
    "tmul",
    "tpow",
    "tprod",
    "trace",
    "tsum",
]
