"""Exact max-plus scalar and matrix arithmetic.

Scalars are Python integers (or :class:`fractions.Fraction` for normalized
matrices) together with the tropical zero :data:`NEG_INF`.  ``NEG_INF`` is the
IEEE value ``-inf``: it is neutral under ``max`` and absorbing under ``+``
against every finite exact number, which lets the matrix kernels use the
builtin ``max`` and ``operator.add`` directly.  It is the only float that may
appear in a matrix.

Finite values must stay inside the signed 64-bit range.  A product raises
:class:`TropOverflowError` whenever some pairwise sum of finite operand
entries could leave that range, mirroring checked 64-bit addition.
"""

from __future__ import annotations

from fractions import Fraction
from operator import add
from typing import Iterable, Union

import numpy as np

NEG_INF = float("-inf")

INT64_MAX = 2**63 - 1
INT64_MIN = -(2**63)

Scalar = Union[int, Fraction, float]


class ShapeError(ValueError):
    """Operand shapes do not conform."""


class TropOverflowError(OverflowError):
    """A finite entry left the signed 64-bit range."""


def _normalize(x) -> Scalar:
    if x is None or x == NEG_INF:
        return NEG_INF
    if isinstance(x, bool):
        raise TypeError("booleans are not tropical scalars")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, np.integer):
        return int(x)
    raise TypeError(f"unsupported tropical scalar {x!r}")


def _check(x: Scalar) -> Scalar:
    if x != NEG_INF and not INT64_MIN <= x <= INT64_MAX:
        raise TropOverflowError(f"tropical value {x} exceeds the int64 range")
    return x


def trop_add(a: Scalar, b: Scalar) -> Scalar:
    """Tropical sum ``a ⊕ b = max(a, b)``."""
    return a if a >= b else b


def trop_mul(a: Scalar, b: Scalar) -> Scalar:
    """Tropical product ``a ⊙ b = a + b`` with ``NEG_INF`` absorbing."""
    if a == NEG_INF or b == NEG_INF:
        return NEG_INF
    return _check(a + b)


class TropMatrix:
    """Immutable dense max-plus matrix.

    Entries are ints, Fractions, or ``NEG_INF``; ``None`` is accepted on input
    as an alias for ``NEG_INF``.  ``A @ B`` is the tropical product, ``A + B``
    the entrywise maximum and ``A ** t`` the tropical power.
    """

    __slots__ = ("_rows", "_hash", "_range", "_frac")

    def __init__(self, rows: Iterable[Iterable]):
        data = tuple(tuple(_normalize(x) for x in row) for row in rows)
        if not data or not data[0]:
            raise ShapeError("matrix must have at least one row and one column")
        width = len(data[0])
        if any(len(r) != width for r in data):
            raise ShapeError("ragged rows")
        self._init(data)
        lo, hi = self.finite_range
        if lo is not None:
            _check(lo)
            _check(hi)

    def _init(self, rows: tuple) -> None:
        self._rows = rows
        self._hash = None
        self._range = None
        self._frac = None

    @classmethod
    def _trusted(cls, rows: tuple) -> "TropMatrix":
        # rows are already normalized tuples
        obj = cls.__new__(cls)
        obj._init(rows)
        return obj

    @property
    def finite_range(self) -> tuple:
        """Interval containing every finite entry, ``(None, None)`` if there are none.

        Exact for constructed matrices; products inherit the sum of their
        operands' intervals, which may be loose.
        """
        if self._range is None:
            finite = [x for r in self._rows for x in r if x != NEG_INF]
            self._range = (min(finite), max(finite)) if finite else (None, None)
        return self._range

    @property
    def has_fractions(self) -> bool:
        if self._frac is None:
            self._frac = any(type(x) is Fraction for r in self._rows for x in r)
        return self._frac

    @property
    def rows(self) -> tuple:
        return self._rows

    @property
    def shape(self) -> tuple[int, int]:
        return len(self._rows), len(self._rows[0])

    @property
    def n(self) -> int:
        """Side length of a square matrix."""
        r, c = self.shape
        if r != c:
            raise ShapeError(f"matrix is {r}x{c}, not square")
        return r

    def is_square(self) -> bool:
        r, c = self.shape
        return r == c

    def is_integral(self) -> bool:
        return not self.has_fractions

    def __getitem__(self, ij: tuple[int, int]) -> Scalar:
        i, j = ij
        return self._rows[i][j]

    def __eq__(self, other) -> bool:
        if not isinstance(other, TropMatrix):
            return NotImplemented
        return self._rows == other._rows

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._rows)
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join(
            "[" + ", ".join("-inf" if x == NEG_INF else str(x) for x in r) + "]"
            for r in self._rows
        )
        return f"TropMatrix([{body}])"

    def __matmul__(self, other: "TropMatrix") -> "TropMatrix":
        return mat_mul(self, other)

    def __add__(self, other: "TropMatrix") -> "TropMatrix":
        return mat_add(self, other)

    def __pow__(self, t: int) -> "TropMatrix":
        return mat_pow(self, t)

    def to_lists(self) -> list[list]:
        """Nested lists with ``None`` standing in for ``NEG_INF``."""
        return [[None if x == NEG_INF else x for x in r] for r in self._rows]

    def transpose(self) -> "TropMatrix":
        return TropMatrix._trusted(tuple(zip(*self._rows)))

    def shift(self, c: Scalar) -> "TropMatrix":
        """Tropical scalar multiple ``c ⊙ self`` (adds ``c`` to finite entries)."""
        if c == NEG_INF:
            return full(*self.shape)
        c = _normalize(c)
        out = TropMatrix._trusted(
            tuple(tuple(_normalize(x + c) for x in r) for r in self._rows))
        lo, hi = out.finite_range
        if lo is not None:
            _check(lo)
            _check(hi)
        return out


def identity(n: int) -> TropMatrix:
    """Tropical identity: 0 on the diagonal, ``NEG_INF`` elsewhere."""
    return TropMatrix._trusted(
        tuple(tuple(0 if i == j else NEG_INF for j in range(n)) for i in range(n)))


def full(rows: int, cols: int, value: Scalar = NEG_INF) -> TropMatrix:
    return TropMatrix._trusted(tuple((value,) * cols for _ in range(rows)))


def mat_add(A: TropMatrix, B: TropMatrix) -> TropMatrix:
    """Entrywise tropical sum."""
    if A.shape != B.shape:
        raise ShapeError(f"cannot add {A.shape} and {B.shape}")
    return TropMatrix._trusted(
        tuple(tuple(map(max, ra, rb)) for ra, rb in zip(A.rows, B.rows)))


def _guard_sum(ra: tuple, rb: tuple) -> None:
    if ra[0] is None or rb[0] is None:
        return
    if ra[1] + rb[1] > INT64_MAX or ra[0] + rb[0] < INT64_MIN:
        raise TropOverflowError("tropical product overflows the int64 range")


def _frac_to_int(x):
    # Fraction sums may collapse to whole numbers; keep those as ints
    if type(x) is Fraction and x.denominator == 1:
        return x.numerator
    return x


def mat_mul(A: TropMatrix, B: TropMatrix) -> TropMatrix:
    """Max-plus product: ``(A ⊙ B)[i][j] = max_k A[i][k] + B[k][j]``."""
    if A.shape[1] != B.shape[0]:
        raise ShapeError(f"cannot multiply {A.shape} by {B.shape}")
    _guard_sum(A.finite_range, B.finite_range)
    cols = tuple(zip(*B.rows))
    if A.has_fractions or B.has_fractions:
        rows = tuple(
            tuple(_frac_to_int(max(map(add, row, col))) for col in cols)
            for row in A.rows
        )
    else:
        rows = tuple(tuple(max(map(add, row, col)) for col in cols) for row in A.rows)
    out = TropMatrix._trusted(rows)
    (alo, ahi), (blo, bhi) = A.finite_range, B.finite_range
    if alo is not None and blo is not None:
        out._range = (alo + blo, ahi + bhi)
    return out


# numpy kernel for integral operands: int64 values plus a finiteness mask.
# Masked-out slots hold 0 and never take part in a maximum.

def _to_np(A: TropMatrix) -> tuple[np.ndarray, np.ndarray]:
    mask = np.array([[x != NEG_INF for x in r] for r in A.rows], dtype=bool)
    vals = np.array([[0 if x == NEG_INF else x for x in r] for r in A.rows], dtype=np.int64)
    return vals, mask


def _from_np(vals: np.ndarray, mask: np.ndarray) -> TropMatrix:
    return TropMatrix._trusted(tuple(
        tuple(v if m else NEG_INF for v, m in zip(rv, rm))
        for rv, rm in zip(vals.tolist(), mask.tolist())
    ))


def _np_range(vals: np.ndarray, mask: np.ndarray) -> tuple:
    if not mask.any():
        return None, None
    finite = vals[mask]
    return int(finite.min()), int(finite.max())


def _np_mul(a: tuple, b: tuple) -> tuple:
    (va, ma), (vb, mb) = a, b
    _guard_sum(_np_range(va, ma), _np_range(vb, mb))
    valid = ma[:, :, None] & mb[None, :, :]
    sums = np.where(valid, va[:, :, None] + vb[None, :, :], INT64_MIN)
    mask = valid.any(axis=1)
    return np.where(mask, sums.max(axis=1), 0), mask


def mat_pow(A: TropMatrix, t: int) -> TropMatrix:
    """Tropical power by repeated squaring; ``t == 0`` gives the identity."""
    n = A.n
    if t < 0:
        raise ValueError("exponent must be nonnegative")
    if t == 0:
        return identity(n)
    if t == 1:
        return A
    if A.has_fractions:
        mul, base = mat_mul, A
    else:
        mul, base = _np_mul, _to_np(A)
    result = None
    while t:
        if t & 1:
            result = base if result is None else mul(result, base)
        t >>= 1
        if t:
            base = mul(base, base)
    return result if mul is mat_mul else _from_np(*result)


def mat_pow_naive(A: TropMatrix, t: int) -> TropMatrix:
    """Iterated product; reference path for :func:`mat_pow`."""
    result = identity(A.n)
    for _ in range(t):
        result = mat_mul(result, A)
    return result
