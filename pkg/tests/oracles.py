"""Independent reference computations used as test oracles.

Each helper avoids the routine it serves as a reference for; the matrix
product itself is checked against hand-computed values.
"""

from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache

from tropkex.trop import NEG_INF, TropMatrix, identity, mat_add, mat_mul
from tropkex.triad import Triad, TriadMatrix


def simple_cycles(A: TropMatrix):
    """Every simple cycle of the finite-entry digraph, rooted at its smallest vertex."""
    n = A.n
    for start in range(n):
        stack = [(start, (start,))]
        while stack:
            v, path = stack.pop()
            for w in range(start, n):
                if A[v, w] == NEG_INF:
                    continue
                if w == start:
                    yield path
                elif w not in path:
                    stack.append((w, path + (w,)))


def cycle_mean(A: TropMatrix, cycle) -> Fraction:
    total = sum(A[cycle[k], cycle[(k + 1) % len(cycle)]] for k in range(len(cycle)))
    return Fraction(total) / len(cycle)


def brute_max_cycle_mean(A: TropMatrix):
    best = NEG_INF
    for c in simple_cycles(A):
        m = cycle_mean(A, c)
        if m > best:
            best = m
    return best


def star_by_powers(A: TropMatrix) -> TropMatrix:
    """``I ⊕ A ⊕ ... ⊕ A^{n-1}`` by explicit products."""
    acc = identity(A.n)
    power = identity(A.n)
    for _ in range(A.n - 1):
        power = mat_mul(power, A)
        acc = mat_add(acc, power)
    return acc


def lex_min_solution(w1: int, w2: int, target: int, x_min: int, y_min: int, x_max: int):
    """Scan x upward; first x admitting an integral y >= y_min wins."""
    for x in range(x_min, x_max + 1):
        rest = target - w1 * x
        if w2 == 0:
            if rest == 0:
                return x, y_min
            continue
        if rest % w2 == 0 and rest // w2 >= y_min:
            return x, rest // w2
    return None


def random_trop(rng: random.Random, n: int, lo: int = -10, hi: int = 10,
                density: float = 0.0, m: int | None = None) -> TropMatrix:
    m = n if m is None else m
    return TropMatrix([
        [NEG_INF if rng.random() < density else rng.randint(lo, hi) for _ in range(m)]
        for _ in range(n)
    ])


def random_triad(rng: random.Random, lo: int = -10, hi: int = 10,
                 density: float = 0.0) -> Triad:
    return Triad(*(NEG_INF if rng.random() < density else rng.randint(lo, hi)
                   for _ in range(3)))


def random_triad_matrix(rng: random.Random, n: int, lo: int = -10, hi: int = 10,
                        density: float = 0.0) -> TriadMatrix:
    values, weights = _entry_distribution(lo, hi, density)
    flat = rng.choices(values, cum_weights=weights, k=3 * n * n)
    planes = [[flat[(p * n + i) * n:(p * n + i + 1) * n] for i in range(n)] for p in range(3)]
    return TriadMatrix.from_planes(*planes)


@lru_cache(maxsize=None)
def _entry_distribution(lo: int, hi: int, density: float):
    # NEG_INF with probability density, otherwise uniform on [lo, hi]
    values = [NEG_INF, *range(lo, hi + 1)]
    step = (1 - density) / (hi - lo + 1)
    weights = [density + k * step for k in range(hi - lo + 2)]
    return values, weights
