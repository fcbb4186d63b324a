"""JSON documents for matrices, transcripts, secrets and attack results.

``NEG_INF`` is written as ``null``.  Triad entries are 3-element arrays.
Every document carries a ``kind`` field; parsers reject unknown or missing
fields so that public transcripts provably contain no secrets.
"""

from __future__ import annotations

import json
from typing import Any

from .attack import AttackSolution, KeyRecovery
from .protocol import KeyMaterial, Matrix, ProtocolParams, Transcript
from .trop import NEG_INF, TropMatrix
from .triad import Triad, TriadMatrix

TRANSCRIPT_FIELDS = ("kind", "semiring", "seed", "params", "X", "Y", "A", "B")
SECRETS_FIELDS = ("kind", "semiring", "seed", "a", "b", "c", "d", "K")
ATTACK_FIELDS = ("kind", "semiring", "t1", "t2", "tau", "tbar1", "tbar2", "method",
                 "verified", "key")


class DocumentError(ValueError):
    """A document is malformed or has the wrong shape."""


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def loads(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise DocumentError("top-level JSON value must be an object")
    return doc


def _scalar_out(x):
    return None if x == NEG_INF else x


def _scalar_in(x):
    if x is None:
        return NEG_INF
    if isinstance(x, bool) or not isinstance(x, int):
        raise DocumentError(f"matrix entries must be integers or null, got {x!r}")
    return x


def matrix_to_doc(M: Matrix) -> dict:
    if isinstance(M, TriadMatrix):
        entries = [[[_scalar_out(x) for x in e] for e in row] for row in M.rows]
        return {"semiring": "triad", "n": M.n, "entries": entries}
    rows, cols = M.shape
    if rows != cols:
        raise DocumentError("only square matrices are serialized")
    return {"semiring": "tropical", "n": rows, "entries": M.to_lists()}


def matrix_from_doc(doc: Any) -> Matrix:
    if not isinstance(doc, dict) or set(doc) != {"semiring", "n", "entries"}:
        raise DocumentError("matrix document needs exactly semiring, n, entries")
    semiring, n, entries = doc["semiring"], doc["n"], doc["entries"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise DocumentError(f"bad size {n!r}")
    if not isinstance(entries, list) or len(entries) != n or any(
            not isinstance(r, list) or len(r) != n for r in entries):
        raise DocumentError(f"entries are not an {n}x{n} array")
    if semiring == "tropical":
        return TropMatrix([[_scalar_in(x) for x in r] for r in entries])
    if semiring == "triad":
        rows = []
        for r in entries:
            row = []
            for e in r:
                if not isinstance(e, list) or len(e) != 3:
                    raise DocumentError(f"triad entries must have 3 coordinates, got {e!r}")
                row.append(Triad(*(_scalar_in(x) for x in e)))
            rows.append(row)
        return TriadMatrix(rows)
    raise DocumentError(f"unknown semiring {semiring!r}")


def _require(doc: dict, kind: str, fields: tuple) -> None:
    if doc.get("kind") != kind:
        raise DocumentError(f"expected a {kind} document, got kind={doc.get('kind')!r}")
    if set(doc) != set(fields):
        missing = set(fields) - set(doc)
        extra = set(doc) - set(fields)
        raise DocumentError(f"{kind} document fields: missing {sorted(missing)}, "
                            f"unexpected {sorted(extra)}")


def _int_field(doc: dict, name: str, allow_none: bool = False):
    v = doc[name]
    if v is None and allow_none:
        return None
    if isinstance(v, bool) or not isinstance(v, int):
        raise DocumentError(f"{name} must be an integer, got {v!r}")
    return v


def _semiring_matches(doc: dict, *mats: Matrix) -> None:
    for M in mats:
        actual = "triad" if isinstance(M, TriadMatrix) else "tropical"
        if actual != doc["semiring"]:
            raise DocumentError("matrix semiring disagrees with the document")


def transcript_to_doc(t: Transcript, params: ProtocolParams) -> dict:
    return {
        "kind": "transcript",
        "semiring": t.semiring,
        "seed": params.seed,
        "params": params.to_dict(),
        "X": matrix_to_doc(t.X),
        "Y": matrix_to_doc(t.Y),
        "A": matrix_to_doc(t.A),
        "B": matrix_to_doc(t.B),
    }


def transcript_from_doc(doc: dict) -> tuple[Transcript, ProtocolParams]:
    _require(doc, "transcript", TRANSCRIPT_FIELDS)
    try:
        params = ProtocolParams(**doc["params"])
    except (TypeError, ValueError) as exc:
        raise DocumentError(f"bad params: {exc}") from exc
    X, Y, A, B = (matrix_from_doc(doc[k]) for k in ("X", "Y", "A", "B"))
    _semiring_matches(doc, X, Y, A, B)
    if len({M.n for M in (X, Y, A, B)}) != 1:
        raise DocumentError("transcript matrices differ in size")
    return Transcript(X, Y, A, B, doc["semiring"]), params


def secrets_to_doc(k: KeyMaterial, semiring: str, seed: int) -> dict:
    return {
        "kind": "secrets",
        "semiring": semiring,
        "seed": seed,
        "a": k.a,
        "b": k.b,
        "c": k.c,
        "d": k.d,
        "K": matrix_to_doc(k.K),
    }


def secrets_from_doc(doc: dict) -> KeyMaterial:
    _require(doc, "secrets", SECRETS_FIELDS)
    K = matrix_from_doc(doc["K"])
    _semiring_matches(doc, K)
    return KeyMaterial(*(_int_field(doc, f) for f in "abcd"), K)


def attack_to_doc(r: KeyRecovery, semiring: str, timing: dict | None = None) -> dict:
    s = r.solution
    doc = {
        "kind": "attack",
        "semiring": semiring,
        "t1": s.t1,
        "t2": s.t2,
        "tau": s.tau,
        "tbar1": s.tbar1,
        "tbar2": s.tbar2,
        "method": s.method,
        "verified": s.verified,
        "key": matrix_to_doc(r.key),
    }
    if timing is not None:
        doc["timing"] = timing
    return doc


def attack_from_doc(doc: dict) -> tuple[KeyRecovery, dict | None]:
    fields = ATTACK_FIELDS + (("timing",) if "timing" in doc else ())
    _require(doc, "attack", fields)
    if not isinstance(doc["verified"], bool) or doc["method"] not in ("csr", "brute"):
        raise DocumentError("bad verified/method field")
    key = matrix_from_doc(doc["key"])
    _semiring_matches(doc, key)
    sol = AttackSolution(
        _int_field(doc, "t1"), _int_field(doc, "t2"),
        _int_field(doc, "tbar1", True), _int_field(doc, "tbar2", True),
        _int_field(doc, "tau"), doc["verified"], doc["method"],
    )
    return KeyRecovery(key, sol), doc.get("timing")
