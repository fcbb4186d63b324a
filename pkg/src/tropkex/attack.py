"""Two-sided tropical discrete logarithm via CSR, and key recovery.

Given ``U = τ ⊙ D1^t1 ⊙ M ⊙ D2^t2`` the CSR expansion pins down the rows of
``D1^t1`` on a critical cycle ``Z`` of ``D1`` and the columns of ``D2^t2`` on a
critical cycle ``W`` of ``D2`` up to the residues ``t mod l``.  Scanning the
residue pairs and matching the ``Z x W`` block of ``U`` yields one constant
``β = λ1·t1 + λ2·t2 + τ``, which leaves a two-variable linear Diophantine
equation for the quotients.  Every candidate is checked by exact
recomputation before it is returned.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .protocol import Matrix, Transcript
from .spectral import (
    CriticalCycle,
    csr_decompose,
    max_cycle_mean,
)
from .trop import NEG_INF, ShapeError, TropMatrix, identity, mat_mul, mat_pow
from .triad import embed, extract

log = logging.getLogger(__name__)

DEFAULT_FALLBACK_BOUND = 31  # (31 + 1)^2 = 1024 products


class AttackFailedError(RuntimeError):
    """Neither the CSR attack nor the brute-force fallback found exponents."""


@dataclass(frozen=True)
class DlogInstance:
    U: TropMatrix
    D1: TropMatrix
    M: TropMatrix
    D2: TropMatrix
    tau: int = 0

    def __post_init__(self):
        n = self.U.n
        for name in ("D1", "M", "D2"):
            if getattr(self, name).shape != (n, n):
                raise ShapeError(f"{name} is not {n}x{n}")


@dataclass(frozen=True)
class AttackSolution:
    """Recovered exponents; residues are None for brute-force hits."""

    t1: int
    t2: int
    tbar1: Optional[int]
    tbar2: Optional[int]
    tau: int
    verified: bool
    method: str = "csr"


@dataclass(frozen=True)
class ShiftEquation:
    """``β - τ - λ1·t̄1 - λ2·t̄2 = (λ1·lZ)·x + (λ2·lW)·y`` with lower bounds on x, y."""

    beta: Fraction
    tau: int
    lambda1: Fraction
    lambda2: Fraction
    tbar1: int
    tbar2: int
    lZ: int
    lW: int
    n: int

    @property
    def x_min(self) -> int:
        return max(0, _ceil_div((self.n - 1) * self.lZ - self.tbar1, self.lZ))

    @property
    def y_min(self) -> int:
        return max(0, _ceil_div((self.n - 1) * self.lW - self.tbar2, self.lW))


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def _rows(A: TropMatrix, idx) -> TropMatrix:
    return TropMatrix._trusted(tuple(A.rows[i] for i in idx))


def _cols(A: TropMatrix, idx) -> TropMatrix:
    return TropMatrix._trusted(tuple(tuple(r[j] for j in idx) for r in A.rows))


def residue_check(U: TropMatrix, S_Z_pow: TropMatrix, R_Z: TropMatrix, M: TropMatrix,
                  C_W: TropMatrix, S_W_pow: TropMatrix,
                  Z: CriticalCycle, W: CriticalCycle) -> Optional[Fraction]:
    """Constant offset ``β`` of ``U`` over ``S_Z^r1 R_Z M C_W S_W^r2`` on ``Z x W``.

    Only the rows in ``Z`` and columns in ``W`` of the product are formed.
    Returns None unless every checked difference is finite and identical.
    """
    zs, ws = Z.vertices, W.vertices
    left = mat_mul(mat_mul(_rows(S_Z_pow, zs), R_Z), M)
    right = mat_mul(C_W, _cols(S_W_pow, ws))
    return _block_offset(U, mat_mul(left, right), zs, ws)


def _block_offset(U: TropMatrix, P: TropMatrix, zs, ws) -> Optional[Fraction]:
    beta = None
    for a, i in enumerate(zs):
        for b, j in enumerate(ws):
            u, p = U.rows[i][j], P.rows[a][b]
            if u == NEG_INF or p == NEG_INF:
                return None
            diff = u - p
            if beta is None:
                beta = diff
            elif diff != beta:
                return None
    return Fraction(beta)


@dataclass(frozen=True)
class _Family:
    """Solutions ``(x0 + k·dx, y0 + k·dy)`` for ``k_lo <= k <= k_hi`` (``k_hi`` None: unbounded)."""

    x0: int
    dx: int
    y0: int
    dy: int
    k_lo: int
    k_hi: Optional[int]

    def at(self, k: int) -> tuple[int, int]:
        return self.x0 + self.dx * k, self.y0 + self.dy * k


def _solution_family(w1: int, w2: int, target: int, x_min: int, y_min: int) -> Optional[_Family]:
    """All ``(x, y)`` with ``w1·x + w2·y = target``, ``x >= x_min``, ``y >= y_min``.

    Parametrized so that ``x`` (then ``y``) is nondecreasing in ``k``; None if empty.
    """
    if w1 == 0 and w2 == 0:
        return _Family(x_min, 1, y_min, 0, 0, None) if target == 0 else None
    if w2 == 0:
        if target % w1 or target // w1 < x_min:
            return None
        return _Family(target // w1, 0, y_min, 1, 0, None)
    if w1 == 0:
        if target % w2 or target // w2 < y_min:
            return None
        return _Family(x_min, 1, target // w2, 0, 0, None)
    g, p, q = _ext_gcd(w1, w2)
    if target % g:
        return None
    x0, y0 = p * (target // g), q * (target // g)
    dx, dy = w2 // g, -(w1 // g)
    if dx < 0:
        dx, dy = -dx, -dy
    k_lo = _ceil_div(x_min - x0, dx)
    k_hi = None
    if dy > 0:
        k_lo = max(k_lo, _ceil_div(y_min - y0, dy))
    else:
        k_hi = (y0 - y_min) // -dy
        if k_hi < k_lo:
            return None
    return _Family(x0, dx, y0, dy, k_lo, k_hi)


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """``(g, p, q)`` with ``a·p + b·q = g = gcd(a, b) > 0``."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        quot = old_r // r
        old_r, r = r, old_r - quot * r
        old_s, s = s, old_s - quot * s
        old_t, t = t, old_t - quot * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def _family(e: ShiftEquation) -> Optional[_Family]:
    target = Fraction(e.beta) - e.tau - e.lambda1 * e.tbar1 - e.lambda2 * e.tbar2
    w1 = Fraction(e.lambda1) * e.lZ
    w2 = Fraction(e.lambda2) * e.lW
    # clear denominators before the integer solve
    scale = math.lcm(target.denominator, w1.denominator, w2.denominator)
    target, w1, w2 = (int(v * scale) for v in (target, w1, w2))
    return _solution_family(w1, w2, target, e.x_min, e.y_min)


def solve_shift_equation(e: ShiftEquation) -> Optional[tuple[int, int]]:
    """Integer ``(x, y)`` meeting the shift equation and its bounds, least ``x`` then ``y``."""
    fam = _family(e)
    return None if fam is None else fam.at(fam.k_lo)


def shift_equation_candidates(e: ShiftEquation) -> list[tuple[int, int]]:
    """Solutions worth verifying, in order.

    First the least solution, then ``n`` consecutive solutions from the middle
    of the family (from ``n²`` steps past the least one if it is unbounded),
    then the last.  The least solution can sit below the transient of ``D1``
    even when the block test passes, and when the critical graph has several
    components the exponent also matters modulo their cyclicity (at most
    ``n``), which the consecutive window covers.
    """
    fam = _family(e)
    if fam is None:
        return []
    if fam.k_hi is None:
        mid = fam.k_lo + e.n ** 2
        ks = [fam.k_lo, *range(mid, mid + e.n)]
    else:
        mid = (fam.k_lo + fam.k_hi) // 2
        ks = [fam.k_lo, *range(mid, min(mid + e.n, fam.k_hi + 1)), fam.k_hi]
    return [fam.at(k) for k in dict.fromkeys(ks)]


def _reproduces(inst: DlogInstance, t1: int, t2: int) -> bool:
    P = mat_mul(mat_mul(mat_pow(inst.D1, t1), inst.M), mat_pow(inst.D2, t2))
    return P.shift(inst.tau) == inst.U


def two_sided_dlog(inst: DlogInstance) -> Optional[AttackSolution]:
    """CSR attack; returns the first verified solution in residue-scan order."""
    d1 = csr_decompose(inst.D1)
    d2 = csr_decompose(inst.D2)
    Z, W = d1.cycle, d2.cycle
    lZ, lW = Z.length, W.length
    n = inst.U.n
    S_Z_pows = [mat_pow(d1.S, r) for r in range(lZ)]
    S_W_pows = [mat_pow(d2.S, r) for r in range(lW)]
    for tbar1 in range(lZ):
        for tbar2 in range(lW):
            beta = residue_check(inst.U, S_Z_pows[tbar1], d1.R, inst.M,
                                 d2.C, S_W_pows[tbar2], Z, W)
            if beta is None:
                continue
            eq = ShiftEquation(beta, inst.tau, d1.lam, d2.lam, tbar1, tbar2, lZ, lW, n)
            for x, y in shift_equation_candidates(eq):
                t1, t2 = lZ * x + tbar1, lW * y + tbar2
                if _reproduces(inst, t1, t2):
                    return AttackSolution(t1, t2, tbar1, tbar2, inst.tau, True)
                log.debug("candidate (%d, %d) failed verification", t1, t2)
    return None


def brute_force_dlog(inst: DlogInstance, max_t: int) -> Optional[tuple[int, int]]:
    """First ``(t1, t2)`` in ``[0, max_t]^2`` (t1-major) that reproduces ``U`` exactly."""
    if max_t < 1:
        raise ValueError("max_t must be at least 1")
    target = inst.U.shift(-inst.tau)
    left = inst.M
    for t1 in range(max_t + 1):
        cur = left
        for t2 in range(max_t + 1):
            if cur == target:
                return t1, t2
            if t2 < max_t:
                cur = mat_mul(cur, inst.D2)
        left = mat_mul(inst.D1, left)
    return None


@dataclass(frozen=True)
class KeyRecovery:
    key: Matrix
    solution: AttackSolution


def _lift(t: Transcript) -> tuple[TropMatrix, ...]:
    if t.semiring == "triad":
        return embed(t.X), embed(t.Y), embed(t.A), embed(t.B)
    return t.X, t.Y, t.A, t.B


def attack_transcript(t: Transcript,
                      fallback_bound: int = DEFAULT_FALLBACK_BOUND) -> KeyRecovery:
    """Recover the shared key of a transcript from public data only.

    Triad transcripts are first embedded blockwise into tropical matrices of
    three times the size.  Falls back to :func:`brute_force_dlog` up to
    ``fallback_bound`` when the CSR attack finds nothing (0 disables it).
    """
    X, Y, A, B = _lift(t)
    inst = DlogInstance(U=A, D1=X, M=identity(X.n), D2=Y, tau=0)
    sol = None
    if max_cycle_mean(X) != NEG_INF and max_cycle_mean(Y) != NEG_INF:
        sol = two_sided_dlog(inst)
    if sol is None and fallback_bound > 0:
        found = brute_force_dlog(inst, fallback_bound)
        if found is not None:
            t1, t2 = found
            sol = AttackSolution(t1, t2, None, None, 0, True, method="brute")
    if sol is None:
        raise AttackFailedError("no exponents reproduce the published matrix")
    key = mat_mul(mat_mul(mat_pow(X, sol.t1), B), mat_pow(Y, sol.t2))
    if t.semiring == "triad":
        key = extract(key)
    return KeyRecovery(key, sol)


def recover_key(t: Transcript, fallback_bound: int = DEFAULT_FALLBACK_BOUND) -> Matrix:
    return attack_transcript(t, fallback_bound).key


__all__ = [
    "AttackFailedError",
    "AttackSolution",
    "DlogInstance",
    "KeyRecovery",
    "ShiftEquation",
    "attack_transcript",
    "brute_force_dlog",
    "recover_key",
    "residue_check",
    "shift_equation_candidates",
    "solve_shift_equation",
    "two_sided_dlog",
]
