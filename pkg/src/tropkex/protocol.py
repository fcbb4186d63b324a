"""Two-party key exchange with public matrices X, Y and monomial secrets.

Party 1 picks ``a, b`` and publishes ``A = X^a ⊙ Y^b``; party 2 picks ``c, d``
and publishes ``B = X^c ⊙ Y^d``.  Both arrive at
``K = X^a ⊙ B ⊙ Y^b = X^c ⊙ A ⊙ Y^d``.  Matrices live either over the plain
tropical semiring or over the triad semiring.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Union

from .rng import SplitMix64
from .trop import NEG_INF, TropMatrix, mat_mul, mat_pow
from .triad import Triad, TriadMatrix, triad_mat_mul, triad_mat_pow

Matrix = Union[TropMatrix, TriadMatrix]

SEMIRINGS = ("tropical", "triad")


class KeyAgreementError(RuntimeError):
    """The two parties derived different keys."""


@dataclass(frozen=True)
class ProtocolParams:
    n: int = 5
    entry_min: int = -100
    entry_max: int = 100
    neginf_density: float = 0.0
    exp_min: int = 2**10
    exp_max: int = 2**20
    semiring: str = "triad"
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be at least 1, got {self.n}")
        if self.entry_min > self.entry_max:
            raise ValueError("entry_min must not exceed entry_max")
        if not 0.0 <= self.neginf_density < 1.0:
            raise ValueError("neginf_density must lie in [0, 1)")
        if not 1 <= self.exp_min <= self.exp_max:
            raise ValueError("exponents must satisfy 1 <= exp_min <= exp_max")
        if self.semiring not in SEMIRINGS:
            raise ValueError(f"semiring must be one of {SEMIRINGS}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class Transcript:
    """Everything an eavesdropper sees."""

    X: Matrix
    Y: Matrix
    A: Matrix
    B: Matrix
    semiring: str


@dataclass(frozen=True)
class KeyMaterial:
    a: int
    b: int
    c: int
    d: int
    K: Matrix


def matrix_ops(semiring: str):
    """``(mul, pow)`` for the given semiring."""
    if semiring == "tropical":
        return mat_mul, mat_pow
    if semiring == "triad":
        return triad_mat_mul, triad_mat_pow
    raise ValueError(f"unknown semiring {semiring!r}")


def semiring_of(M: Matrix) -> str:
    return "triad" if isinstance(M, TriadMatrix) else "tropical"


def _entry(rng: SplitMix64, p: ProtocolParams):
    if p.neginf_density > 0 and rng.uniform() < p.neginf_density:
        return NEG_INF
    return rng.integer(p.entry_min, p.entry_max)


def random_matrix(rng: SplitMix64, p: ProtocolParams) -> Matrix:
    """Row-major draw; triad entries draw their three coordinates in order."""
    if p.semiring == "tropical":
        return TropMatrix([[_entry(rng, p) for _ in range(p.n)] for _ in range(p.n)])
    return TriadMatrix([
        [Triad(_entry(rng, p), _entry(rng, p), _entry(rng, p)) for _ in range(p.n)]
        for _ in range(p.n)
    ])


def public_key(X: Matrix, Y: Matrix, e1: int, e2: int) -> Matrix:
    mul, power = matrix_ops(semiring_of(X))
    return mul(power(X, e1), power(Y, e2))


def derive_key(X: Matrix, Y: Matrix, other_public: Matrix, e1: int, e2: int) -> Matrix:
    """``X^e1 ⊙ other_public ⊙ Y^e2``."""
    if e1 < 1 or e2 < 1:
        raise ValueError("secret exponents are natural numbers (>= 1)")
    mul, power = matrix_ops(semiring_of(X))
    return mul(mul(power(X, e1), other_public), power(Y, e2))


def generate_instance(p: ProtocolParams) -> tuple[Transcript, KeyMaterial]:
    """Run one honest exchange; a pure function of ``p``.

    Draw order from ``SplitMix64(p.seed)``: entries of X, entries of Y, then
    the exponents a, b, c, d.
    """
    rng = SplitMix64(p.seed)
    X = random_matrix(rng, p)
    Y = random_matrix(rng, p)
    a, b, c, d = (rng.integer(p.exp_min, p.exp_max) for _ in range(4))
    mul, power = matrix_ops(p.semiring)
    Xa, Yb, Xc, Yd = power(X, a), power(Y, b), power(X, c), power(Y, d)
    A = mul(Xa, Yb)
    B = mul(Xc, Yd)
    K_A = mul(mul(Xa, B), Yb)
    K_B = mul(mul(Xc, A), Yd)
    if K_A != K_B:
        raise KeyAgreementError("parties derived different keys")
    return Transcript(X, Y, A, B, p.semiring), KeyMaterial(a, b, c, d, K_A)
