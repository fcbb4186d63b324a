"""The triad semiring, triad matrices and their circulant embedding.

A triad ``(a, b, c)`` maps to the 3x3 circulant ``C[a, b, c]`` whose rows are
successive right cyclic shifts of ``(a, b, c)``::

    a b c
    c a b
    b c a

This map is an isomorphism of semirings onto the tropical circulants, and
applying it blockwise turns an ``n x n`` triad matrix into a ``3n x 3n``
tropical matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import repeat
from typing import Iterable, Sequence

import numpy as np

from operator import add

from .trop import (
    INT64_MAX,
    INT64_MIN,
    NEG_INF,
    Scalar,
    ShapeError,
    TropMatrix,
    TropOverflowError,
    _check,
    _normalize,
    _np_mul,
    trop_mul,
)


class NotInImageError(ValueError):
    """A 3x3 matrix is not circulant, so it has no triad preimage."""


class NotInSubringError(ValueError):
    """A 3n x 3n matrix has a non-circulant 3x3 block."""


@dataclass(frozen=True, slots=True)
class Triad:
    a: Scalar
    b: Scalar
    c: Scalar

    def __post_init__(self):
        a, b, c = self.a, self.b, self.c
        if type(a) is int and type(b) is int and type(c) is int \
                and INT64_MIN <= min(a, b, c) and max(a, b, c) <= INT64_MAX:
            return
        for name in ("a", "b", "c"):
            object.__setattr__(self, name, _check(_normalize(getattr(self, name))))

    def __iter__(self):
        return iter((self.a, self.b, self.c))

    def __add__(self, other: "Triad") -> "Triad":
        return triad_add(self, other)

    def __mul__(self, other: "Triad") -> "Triad":
        return triad_mul(self, other)

    def __repr__(self) -> str:
        f = lambda x: "-inf" if x == NEG_INF else str(x)
        return f"Triad({f(self.a)}, {f(self.b)}, {f(self.c)})"


TRIAD_ZERO = Triad(NEG_INF, NEG_INF, NEG_INF)
TRIAD_ONE = Triad(0, NEG_INF, NEG_INF)


def triad_add(u: Triad, v: Triad) -> Triad:
    return Triad(max(u.a, v.a), max(u.b, v.b), max(u.c, v.c))


def triad_mul(u: Triad, v: Triad) -> Triad:
    """Twisted product: coordinate k collects the pairs whose indices sum to k mod 3."""
    a, b, c = u.a, u.b, u.c
    d, e, f = v.a, v.b, v.c
    m = trop_mul
    return Triad(
        max(m(a, d), m(b, f), m(c, e)),
        max(m(a, e), m(b, d), m(c, f)),
        max(m(a, f), m(b, e), m(c, d)),
    )


def psi(u: Triad) -> TropMatrix:
    """Circulant image ``C[a, b, c]`` of a triad."""
    a, b, c = u.a, u.b, u.c
    return TropMatrix._trusted(((a, b, c), (c, a, b), (b, c, a)))


def _block_preimage(rows: Sequence[Sequence[Scalar]], r0: int, c0: int) -> Triad | None:
    first = rows[r0][c0:c0 + 3]
    for r in range(1, 3):
        for s in range(3):
            if rows[r0 + r][c0 + s] != first[(s - r) % 3]:
                return None
    return Triad(*first)


def psi_inv(C: TropMatrix) -> Triad:
    if C.shape != (3, 3):
        raise ShapeError(f"expected a 3x3 matrix, got {C.shape}")
    u = _block_preimage(C.rows, 0, 0)
    if u is None:
        raise NotInImageError(f"{C!r} is not circulant")
    return u


class TriadMatrix:
    """Immutable square matrix over the triad semiring.

    Stored as three coordinate planes (the ``a``, ``b`` and ``c`` parts of
    every entry), each a tuple of integer rows.  Matrices whose entries are
    small enough to be exact in float64 may instead carry a ``(3, n, n)``
    float array; the integer planes are then built on first access.
    """

    __slots__ = ("_planes", "_arr", "_rows", "_range")

    def __init__(self, rows: Iterable[Iterable]):
        data = tuple(
            tuple(x if isinstance(x, Triad) else Triad(*x) for x in row) for row in rows
        )
        if not data or any(len(r) != len(data) for r in data):
            raise ShapeError("triad matrices must be square and non-empty")
        self._planes = tuple(
            tuple(tuple(getattr(e, f) for e in r) for r in data) for f in ("a", "b", "c"))
        self._arr = None
        self._rows = data
        self._range = None

    @classmethod
    def from_planes(cls, a: Iterable[Iterable], b: Iterable[Iterable],
                    c: Iterable[Iterable]) -> "TriadMatrix":
        """Build from the three coordinate planes (``n x n`` arrays each)."""
        planes = tuple(
            tuple(tuple(x if type(x) is int and INT64_MIN <= x <= INT64_MAX
                        else _check(_normalize(x)) for x in r) for r in p)
            for p in (a, b, c))
        n = len(planes[0])
        if not n or any(len(p) != n or any(len(r) != n for r in p) for p in planes):
            raise ShapeError("planes must be square, non-empty and of equal size")
        return cls._from_planes(planes)

    @classmethod
    def _from_planes(cls, planes: tuple) -> "TriadMatrix":
        obj = cls.__new__(cls)
        obj._planes = planes
        obj._arr = None
        obj._rows = None
        obj._range = None
        return obj

    @classmethod
    def _from_array(cls, arr: np.ndarray, finite_range: tuple) -> "TriadMatrix":
        obj = cls.__new__(cls)
        obj._planes = None
        obj._arr = arr
        obj._rows = None
        obj._range = finite_range
        return obj

    def _array(self) -> np.ndarray:
        # callers must first check that the entries are exact in float64
        if self._arr is None:
            self._arr = np.array(self._planes, dtype=np.float64)
        return self._arr

    @property
    def planes(self) -> tuple:
        if self._planes is None:
            self._planes = tuple(
                tuple(tuple(NEG_INF if x == NEG_INF else int(x) for x in r) for r in p)
                for p in self._arr.tolist())
        return self._planes

    @property
    def rows(self) -> tuple:
        if self._rows is None:
            pa, pb, pc = self.planes
            self._rows = tuple(
                tuple(Triad(*t) for t in zip(ra, rb, rc)) for ra, rb, rc in zip(pa, pb, pc))
        return self._rows

    @property
    def n(self) -> int:
        return len(self._planes[0]) if self._planes is not None else self._arr.shape[1]

    @property
    def finite_range(self) -> tuple:
        """Interval containing every finite entry (may be loose after products)."""
        if self._range is None:
            finite = [x for p in self.planes for r in p for x in r if x != NEG_INF]
            self._range = (min(finite), max(finite)) if finite else (None, None)
        return self._range

    def __getitem__(self, ij: tuple[int, int]) -> Triad:
        i, j = ij
        return Triad(*(p[i][j] for p in self.planes))

    def __eq__(self, other) -> bool:
        if not isinstance(other, TriadMatrix):
            return NotImplemented
        if self._arr is not None and other._arr is not None:
            return self._arr.shape == other._arr.shape and bool(
                np.array_equal(self._arr, other._arr))
        return self.planes == other.planes

    def __hash__(self) -> int:
        return hash(self.planes)

    def __repr__(self) -> str:
        return f"TriadMatrix({[list(r) for r in self.rows]!r})"

    def __matmul__(self, other: "TriadMatrix") -> "TriadMatrix":
        return triad_mat_mul(self, other)

    def __add__(self, other: "TriadMatrix") -> "TriadMatrix":
        return triad_mat_add(self, other)

    def __pow__(self, t: int) -> "TriadMatrix":
        return triad_mat_pow(self, t)

    def to_lists(self) -> list[list[list]]:
        pa, pb, pc = self.planes
        f = lambda x: None if x == NEG_INF else x
        return [[[f(x), f(y), f(z)] for x, y, z in zip(ra, rb, rc)]
                for ra, rb, rc in zip(pa, pb, pc)]


def triad_identity(n: int) -> TriadMatrix:
    eye = tuple(tuple(0 if i == j else NEG_INF for j in range(n)) for i in range(n))
    zero = tuple((NEG_INF,) * n for _ in range(n))
    return TriadMatrix._from_planes((eye, zero, zero))


def triad_mat_add(A: TriadMatrix, B: TriadMatrix) -> TriadMatrix:
    if A.n != B.n:
        raise ShapeError(f"cannot add {A.n}x{A.n} and {B.n}x{B.n} triad matrices")
    if A._arr is not None and B._arr is not None:
        return TriadMatrix._from_array(np.maximum(A._arr, B._arr),
                                       _hull(A.finite_range, B.finite_range))
    return TriadMatrix._from_planes(tuple(
        tuple(map(tuple, map(map, repeat(max), pa, pb)))
        for pa, pb in zip(A.planes, B.planes)
    ))


def _guard(A: TriadMatrix, B: TriadMatrix) -> None:
    (alo, ahi), (blo, bhi) = A.finite_range, B.finite_range
    if alo is None or blo is None:
        return
    if ahi + bhi > INT64_MAX or alo + blo < INT64_MIN:
        raise TropOverflowError("triad product overflows the int64 range")


def triad_mat_mul(A: TriadMatrix, B: TriadMatrix) -> TriadMatrix:
    """Native triad matrix product (entrywise triad ⊕ and ⊙).

    Coordinate ``k`` of an entry is the maximum of ``A_p[i][m] + B_q[m][j]``
    over ``m`` and over ``p + q = k (mod 3)``.  Concatenating the three planes
    of a row of ``A`` and the matching planes of a column of ``B`` turns that
    into one max-plus dot product of length ``3n``.
    """
    if A.n != B.n:
        raise ShapeError(f"cannot multiply {A.n}x{A.n} by {B.n}x{B.n} triad matrices")
    ra, rb = A.finite_range, B.finite_range
    if _magnitude(ra) + _magnitude(rb) < FLOAT_EXACT:
        return TriadMatrix._from_array(_float_mul(A._array(), B._array()), _sum_range(ra, rb))
    _guard(A, B)
    pa, pb, pc = A.planes
    n = len(pa)
    left = list(map(add, map(add, pa, pb), pc))
    c0, c1, c2 = (tuple(zip(*p)) for p in B.planes)
    # every (row, column) pair in row-major order, flattened to avoid nested loops
    lefts = [r for r in left for _ in range(n)]
    planes = []
    for q0, q1, q2 in ((c0, c2, c1), (c1, c0, c2), (c2, c1, c0)):
        rights = list(map(add, map(add, q0, q1), q2)) * n
        flat = list(map(max, map(map, repeat(add), lefts, rights)))
        planes.append(tuple(zip(*[iter(flat)] * n)))
    out = TriadMatrix._from_planes(tuple(planes))
    out._range = _sum_range(ra, rb)
    return out


# Integers below 2^53 in magnitude are exact in float64, and -inf is absorbing
# under + and neutral under max there, so small operands can use float arrays.
FLOAT_EXACT = 2**53

# planes of B paired with A_0, A_1, A_2 for coordinates 0, 1, 2
_PAIRING = np.array([[0, 2, 1], [1, 0, 2], [2, 1, 0]])


def _magnitude(r: tuple) -> int:
    return 0 if r[0] is None else max(-r[0], r[1], 0)


def _float_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = a.shape[1]
    left = np.concatenate(a, axis=1)                   # (n, 3n): [A_0 | A_1 | A_2]
    right = b[_PAIRING].reshape(3, 3 * n, n)           # per coordinate, stacked B planes
    return (left[None, :, :, None] + right[:, None, :, :]).max(axis=2)


def _sum_range(ra: tuple, rb: tuple) -> tuple:
    if ra[0] is None or rb[0] is None:
        return None, None
    return ra[0] + rb[0], ra[1] + rb[1]


def _hull(ra: tuple, rb: tuple) -> tuple:
    if ra[0] is None:
        return rb
    if rb[0] is None:
        return ra
    return min(ra[0], rb[0]), max(ra[1], rb[1])


def triad_mat_mul_entrywise(A: TriadMatrix, B: TriadMatrix) -> TriadMatrix:
    """Same product written directly with :func:`triad_add` and :func:`triad_mul`."""
    if A.n != B.n:
        raise ShapeError(f"cannot multiply {A.n}x{A.n} by {B.n}x{B.n} triad matrices")
    n = A.n
    out = []
    for i in range(n):
        out_row = []
        for j in range(n):
            acc = TRIAD_ZERO
            for k in range(n):
                acc = triad_add(acc, triad_mul(A[i, k], B[k, j]))
            out_row.append(acc)
        out.append(out_row)
    return TriadMatrix(out)


# int64 + mask planes for long power chains

def _np_planes(A: TriadMatrix) -> list[tuple]:
    out = []
    for p in A.planes:
        mask = np.array([[x != NEG_INF for x in r] for r in p], dtype=bool)
        vals = np.array([[0 if x == NEG_INF else x for x in r] for r in p], dtype=np.int64)
        out.append((vals, mask))
    return out


def _from_np_planes(planes: list[tuple]) -> TriadMatrix:
    return TriadMatrix._from_planes(tuple(
        tuple(tuple(v if m else NEG_INF for v, m in zip(rv, rm))
              for rv, rm in zip(vals.tolist(), mask.tolist()))
        for vals, mask in planes
    ))


def _np_max(x: tuple, y: tuple) -> tuple:
    (vx, mx), (vy, my) = x, y
    vals = np.where(mx & my, np.maximum(vx, vy), np.where(mx, vx, vy))
    return vals, mx | my


def _np_planes_mul(A: list[tuple], B: list[tuple]) -> list[tuple]:
    out = []
    for k in range(3):
        acc = None
        for p in range(3):
            term = _np_mul(A[p], B[(k - p) % 3])
            acc = term if acc is None else _np_max(acc, term)
        out.append(acc)
    return out


def triad_mat_pow(A: TriadMatrix, t: int) -> TriadMatrix:
    if t < 0:
        raise ValueError("exponent must be nonnegative")
    if t == 0:
        return triad_identity(A.n)
    if t == 1:
        return A
    result = None
    base = _np_planes(A)
    while t:
        if t & 1:
            result = base if result is None else _np_planes_mul(result, base)
        t >>= 1
        if t:
            base = _np_planes_mul(base, base)
    return _from_np_planes(result)


def embed(A: TriadMatrix) -> TropMatrix:
    """Replace every entry by its 3x3 circulant block (block-row-major)."""
    pa, pb, pc = A.planes
    rows = []
    for ra, rb, rc in zip(pa, pb, pc):
        shifts = ((ra, rb, rc), (rc, ra, rb), (rb, rc, ra))
        for r in range(3):
            line = []
            for u, v, w in zip(*shifts[r]):
                line += (u, v, w)
            rows.append(tuple(line))
    return TropMatrix._trusted(tuple(rows))


def extract(M: TropMatrix) -> TriadMatrix:
    """Inverse of :func:`embed`; every 3x3 block must be circulant."""
    rows_n, cols_n = M.shape
    if rows_n != cols_n or rows_n % 3:
        raise ShapeError(f"expected a 3n x 3n matrix, got {M.shape}")
    n = rows_n // 3
    out = []
    for bi in range(n):
        out_row = []
        for bj in range(n):
            u = _block_preimage(M.rows, 3 * bi, 3 * bj)
            if u is None:
                raise NotInSubringError(f"block ({bi}, {bj}) is not circulant")
            out_row.append(u)
        out.append(out_row)
    return TriadMatrix(out)
