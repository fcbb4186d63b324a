"""Tropical and triad matrix key exchange, and the CSR attack that breaks it."""

from .attack import (
    AttackFailedError,
    AttackSolution,
    DlogInstance,
    attack_transcript,
    brute_force_dlog,
    recover_key,
    two_sided_dlog,
)
from .protocol import KeyMaterial, ProtocolParams, Transcript, derive_key, generate_instance
from .spectral import critical_cycle, csr_decompose, csr_power, kleene_star, max_cycle_mean
from .triad import Triad, TriadMatrix, embed, extract, psi, psi_inv
from .trop import NEG_INF, TropMatrix, identity, mat_mul, mat_pow

__version__ = "0.1.0"

__all__ = [
    "AttackFailedError",
    "AttackSolution",
    "DlogInstance",
    "KeyMaterial",
    "NEG_INF",
    "ProtocolParams",
    "Transcript",
    "Triad",
    "TriadMatrix",
    "TropMatrix",
    "attack_transcript",
    "brute_force_dlog",
    "critical_cycle",
    "csr_decompose",
    "csr_power",
    "derive_key",
    "embed",
    "extract",
    "generate_instance",
    "identity",
    "kleene_star",
    "mat_mul",
    "mat_pow",
    "max_cycle_mean",
    "psi",
    "psi_inv",
    "recover_key",
    "two_sided_dlog",
]
