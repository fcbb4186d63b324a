"""Max-plus spectral theory: cycle means, Kleene stars and CSR expansions.

All arithmetic is exact.  Cycle means are :class:`fractions.Fraction`
values; normalized matrices ``A ⊙ λ^{-1}`` carry Fraction entries wherever
``λ`` is not an integer.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .trop import NEG_INF, ShapeError, TropMatrix, identity, mat_add, mat_mul, mat_pow

CycleMean = Union[Fraction, float]


class DivergentStarError(ValueError):
    """Kleene star requested for a matrix with a positive cycle."""


class AcyclicMatrixError(ValueError):
    """The digraph of finite entries has no cycle, so λ = -inf."""


def strongly_connected_components(A: TropMatrix) -> list[list[int]]:
    """Tarjan's algorithm on the digraph of finite entries (iterative)."""
    n = A.n
    succ = [[j for j in range(n) if A.rows[i][j] != NEG_INF] for i in range(n)]
    index = [None] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] is not None:
            continue
        work = [(root, 0)]
        while work:
            v, pos = work.pop()
            if pos == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            recurse = False
            for k in range(pos, len(succ[v])):
                w = succ[v][k]
                if index[w] is None:
                    work.append((v, k + 1))
                    work.append((w, 0))
                    recurse = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if recurse:
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return comps


def is_strongly_connected(A: TropMatrix) -> bool:
    return len(strongly_connected_components(A)) == 1


def _karp(A: TropMatrix, comp: list[int]) -> CycleMean:
    m = len(comp)
    sub = [[A.rows[i][j] for j in comp] for i in comp]
    if m == 1:
        w = sub[0][0]
        return NEG_INF if w == NEG_INF else Fraction(w)
    # D[k][v]: heaviest walk with exactly k arcs from comp[0] to v
    D = [[NEG_INF] * m for _ in range(m + 1)]
    D[0][0] = 0
    cols = list(zip(*sub))
    for k in range(1, m + 1):
        prev = D[k - 1]
        D[k] = [max(p + w for p, w in zip(prev, col)) for col in cols]
    best: CycleMean = NEG_INF
    for v in range(m):
        if D[m][v] == NEG_INF:
            continue
        worst = min(
            Fraction(D[m][v] - D[k][v]) / (m - k) for k in range(m) if D[k][v] != NEG_INF
        )
        if worst > best:
            best = worst
    return best


def max_cycle_mean(A: TropMatrix) -> CycleMean:
    """Exact maximum cycle mean λ(A); ``NEG_INF`` if there is no cycle."""
    best: CycleMean = NEG_INF
    for comp in strongly_connected_components(A):
        if len(comp) == 1 and A.rows[comp[0]][comp[0]] == NEG_INF:
            continue
        lam = _karp(A, comp)
        if lam > best:
            best = lam
    return best


def normalize(A: TropMatrix, lam: CycleMean) -> TropMatrix:
    """``A ⊙ λ^{-1}``."""
    return A.shift(-lam)


def kleene_star(A: TropMatrix) -> TropMatrix:
    """``I ⊕ A ⊕ ... ⊕ A^{n-1}`` as an all-pairs heaviest-path closure.

    Raises DivergentStarError if ``A`` has a cycle of positive weight.
    """
    n = A.n
    d = [list(r) for r in A.rows]
    for k in range(n):
        dk = d[k]
        for i in range(n):
            dik = d[i][k]
            if dik == NEG_INF:
                continue
            row = d[i]
            for j in range(n):
                cand = dik + dk[j]
                if cand > row[j]:
                    row[j] = cand
    for i in range(n):
        if d[i][i] != NEG_INF and d[i][i] > 0:
            raise DivergentStarError("Kleene star diverges: λ(A) > 0")
        d[i][i] = max(d[i][i], 0)
    return TropMatrix(d)


@dataclass(frozen=True)
class CriticalCycle:
    """Vertices ``v0 -> v1 -> ... -> v0`` of a cycle attaining λ."""

    vertices: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.vertices)

    def arcs(self) -> list[tuple[int, int]]:
        vs = self.vertices
        return [(vs[k], vs[(k + 1) % len(vs)]) for k in range(len(vs))]

    def successor(self, v: int, steps: int = 1) -> int:
        vs = self.vertices
        return vs[(vs.index(v) + steps) % len(vs)]

    def mean(self, A: TropMatrix) -> CycleMean:
        total = sum(A.rows[i][j] for i, j in self.arcs())
        return total if total == NEG_INF else Fraction(total) / self.length


def critical_arcs(A: TropMatrix, lam: CycleMean) -> list[tuple[int, int]]:
    """Arcs ``(i, j)`` with ``Â[i][j] + Â*[j][i] = 0`` where ``Â = A ⊙ λ^{-1}``."""
    norm = normalize(A, lam)
    star = kleene_star(norm)
    n = A.n
    return [
        (i, j)
        for i in range(n)
        for j in range(n)
        if norm.rows[i][j] != NEG_INF and norm.rows[i][j] + star.rows[j][i] == 0
    ]


def critical_cycle(A: TropMatrix, lam: CycleMean) -> CriticalCycle:
    """Deterministic critical cycle.

    Walks critical arcs from the lowest-index critical vertex, always taking
    the lowest-index critical successor, and returns the first cycle closed.
    Every cycle of the critical graph is critical, so the walk cannot fail.
    """
    if lam == NEG_INF:
        raise AcyclicMatrixError("matrix has no cycle")
    succ: dict[int, list[int]] = {}
    for i, j in critical_arcs(A, lam):
        succ.setdefault(i, []).append(j)
    if not succ:
        raise ValueError(f"no critical arcs for λ = {lam}; is λ the maximum cycle mean?")
    v = min(succ)
    path: list[int] = []
    seen: dict[int, int] = {}
    while v not in seen:
        seen[v] = len(path)
        path.append(v)
        v = min(succ[v])
    return CriticalCycle(tuple(path[seen[v]:]))


@dataclass(frozen=True)
class CsrDecomposition:
    """Single-cycle CSR data of a matrix.

    ``C`` holds the columns of ``U`` indexed by the cycle, ``R`` its rows, ``S``
    the normalized cycle arcs and ``B`` the matrix with cycle rows and columns
    removed.  ``U`` is the Kleene star of ``(A ⊙ λ^{-1})^{l}``.
    """

    lam: Fraction
    cycle: CriticalCycle
    C: TropMatrix
    S: TropMatrix
    R: TropMatrix
    B: TropMatrix
    U: TropMatrix

    @property
    def length(self) -> int:
        return self.cycle.length

    @property
    def n(self) -> int:
        return self.B.n

    @property
    def cycle_weight(self) -> int:
        """``λ · l``, always an integer for integral source matrices."""
        w = self.lam * self.length
        return w.numerator if w.denominator == 1 else w


def csr_decompose(A: TropMatrix, lam: Optional[CycleMean] = None,
                  cycle: Optional[CriticalCycle] = None) -> CsrDecomposition:
    if lam is None:
        lam = max_cycle_mean(A)
    if lam == NEG_INF:
        raise AcyclicMatrixError("CSR needs λ(A) != -inf")
    lam = Fraction(lam)
    if cycle is None:
        cycle = critical_cycle(A, lam)
    n = A.n
    l = cycle.length
    # (A ⊙ λ^{-1})^l = A^l ⊙ (λl)^{-1}, and λl is the cycle weight
    U = kleene_star(mat_pow(A, l).shift(-lam * l))
    on = set(cycle.vertices)
    arcs = set(cycle.arcs())
    ninf = NEG_INF
    C = TropMatrix([[U.rows[i][j] if j in on else ninf for j in range(n)] for i in range(n)])
    R = TropMatrix([[U.rows[i][j] if i in on else ninf for j in range(n)] for i in range(n)])
    S = TropMatrix([[A.rows[i][j] - lam if (i, j) in arcs else ninf for j in range(n)]
                    for i in range(n)])
    B = TropMatrix([[ninf if (i in on or j in on) else A.rows[i][j] for j in range(n)]
                    for i in range(n)])
    return CsrDecomposition(lam, cycle, C, S, R, B, U)


def csr_term(d: CsrDecomposition, t: int) -> TropMatrix:
    """``λ^t ⊙ C ⊙ S^{t mod l} ⊙ R`` (the CSR part only)."""
    core = mat_mul(mat_mul(d.C, mat_pow(d.S, t % d.length)), d.R)
    return core.shift(d.lam * t)


def csr_power(d: CsrDecomposition, t: int, n: Optional[int] = None) -> TropMatrix:
    """CSR prediction of ``A^t``: ``λ^t ⊙ C ⊙ S^{t mod l} ⊙ R ⊕ B^t``.

    Only exact for ``t`` at or beyond the weak CSR threshold of ``A``.
    """
    if t < 0:
        raise ValueError("exponent must be nonnegative")
    if n is not None and n != d.n:
        raise ShapeError(f"decomposition is for size {d.n}, not {n}")
    return mat_add(csr_term(d, t), mat_pow(d.B, t))


def csr_threshold(A: TropMatrix, d: Optional[CsrDecomposition] = None,
                  horizon: Optional[int] = None) -> Optional[int]:
    """Smallest ``T`` with ``csr_power(d, t) == A^t`` for every ``t`` in ``[T, horizon]``.

    Empirical: checks every power up to ``horizon`` (default ``n² + 2l``).
    Returns None if even ``t = horizon`` disagrees.
    """
    if d is None:
        d = csr_decompose(A)
    if horizon is None:
        horizon = A.n ** 2 + 2 * d.length
    powers = [identity(A.n)]
    for _ in range(horizon):
        powers.append(mat_mul(powers[-1], A))
    threshold = None
    for t in range(horizon, -1, -1):
        if csr_power(d, t) != powers[t]:
            break
        threshold = t
    return threshold


__all__ = [
    "AcyclicMatrixError",
    "CriticalCycle",
    "CsrDecomposition",
    "DivergentStarError",
    "critical_arcs",
    "critical_cycle",
    "csr_decompose",
    "csr_power",
    "csr_term",
    "csr_threshold",
    "is_strongly_connected",
    "kleene_star",
    "max_cycle_mean",
    "normalize",
    "strongly_connected_components",
]
