"""Command-line interface: ``tropkex {gen,attack,verify,bench}``.

Exit codes:

====  ==========================================================
0     success
2     invalid flags or parameters
3     unreadable or malformed input file
4     attack failed (no exponents reproduce the public matrix)
5     verification mismatch (recovered key differs)
6     integrity error (secrets inconsistent with the transcript)
====  ==========================================================
"""

from __future__ import annotations

import argparse
import statistics
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import documents as docs
from .attack import DEFAULT_FALLBACK_BOUND, AttackFailedError, attack_transcript
from .protocol import ProtocolParams, derive_key, generate_instance, public_key
from .spectral import csr_decompose, csr_threshold
from .triad import embed

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_ATTACK_FAILED = 4
EXIT_MISMATCH = 5
EXIT_INTEGRITY = 6


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _read_doc(path: str) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}", EXIT_INPUT) from exc
    try:
        return docs.loads(text)
    except docs.DocumentError as exc:
        raise CliError(f"{path}: {exc}", EXIT_INPUT) from exc


def _parse(fn, doc: dict, path: str):
    try:
        return fn(doc)
    except (docs.DocumentError, ValueError, TypeError, OverflowError) as exc:
        raise CliError(f"{path}: {exc}", EXIT_INPUT) from exc


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        try:
            Path(path).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise CliError(f"cannot write {path}: {exc.strerror}", EXIT_INPUT) from exc


def _params(args, **overrides) -> ProtocolParams:
    fields = dict(
        n=getattr(args, "n", 1), entry_min=args.entry_min, entry_max=args.entry_max,
        neginf_density=args.neginf_density, exp_min=args.exp_min,
        exp_max=args.exp_max, semiring=args.semiring, seed=args.seed,
    )
    fields.update(overrides)
    try:
        return ProtocolParams(**fields)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_USAGE) from exc


def default_secrets_path(out: str) -> str:
    p = Path(out)
    return str(p.with_name(p.stem + ".secrets" + (p.suffix or ".json")))


def cmd_gen(args) -> int:
    params = _params(args)
    transcript, keys = generate_instance(params)
    secrets_path = args.secrets or default_secrets_path(args.out)
    _write(args.out, docs.dumps(docs.transcript_to_doc(transcript, params)))
    _write(secrets_path, docs.dumps(docs.secrets_to_doc(keys, params.semiring, params.seed)))
    print(f"wrote {args.out} and {secrets_path}", file=sys.stderr)
    return EXIT_OK


def cmd_attack(args) -> int:
    if args.fallback_bound < 0:
        raise CliError("--fallback-bound must be nonnegative", EXIT_USAGE)
    transcript, _ = _parse(docs.transcript_from_doc, _read_doc(args.transcript),
                           args.transcript)
    start = time.perf_counter()
    try:
        result = attack_transcript(transcript, args.fallback_bound)
    except (AttackFailedError, OverflowError) as exc:
        raise CliError(f"attack failed: {exc}", EXIT_ATTACK_FAILED) from exc
    elapsed = time.perf_counter() - start
    timing = None if args.no_timing else {"attack_seconds": round(elapsed, 6)}
    _write(args.out, docs.dumps(docs.attack_to_doc(result, transcript.semiring, timing)))
    s = result.solution
    print(f"recovered t1={s.t1} t2={s.t2} via {s.method}", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    transcript, _ = _parse(docs.transcript_from_doc, _read_doc(args.transcript),
                           args.transcript)
    keys = _parse(docs.secrets_from_doc, _read_doc(args.secrets), args.secrets)
    recovery, _ = _parse(docs.attack_from_doc, _read_doc(args.attack), args.attack)
    X, Y, A, B = transcript.X, transcript.Y, transcript.A, transcript.B
    try:
        if public_key(X, Y, keys.a, keys.b) != A or public_key(X, Y, keys.c, keys.d) != B:
            raise CliError("integrity error: secrets do not produce the published "
                           "matrices", EXIT_INTEGRITY)
        K_A = derive_key(X, Y, B, keys.a, keys.b)
        K_B = derive_key(X, Y, A, keys.c, keys.d)
    except (ValueError, TypeError, OverflowError) as exc:
        raise CliError(f"integrity error: {exc}", EXIT_INTEGRITY) from exc
    if K_A != K_B or K_A != keys.K:
        raise CliError("integrity error: K_A, K_B and the stored key disagree",
                       EXIT_INTEGRITY)
    if recovery.key == K_A:
        print("MATCH")
        return EXIT_OK
    print("MISMATCH")
    return EXIT_MISMATCH


def _bench_trial(job: tuple) -> dict:
    params, fallback_bound, measure = job
    transcript, keys = generate_instance(params)
    start = time.perf_counter()
    try:
        result = attack_transcript(transcript, fallback_bound)
        ok = result.key == keys.K
        method = result.solution.method
    except AttackFailedError:
        ok, method = False, None
    elapsed = time.perf_counter() - start
    X, Y = transcript.X, transcript.Y
    if transcript.semiring == "triad":
        X, Y = embed(X), embed(Y)
    size = X.n
    out = {"ok": ok, "method": method, "seconds": elapsed, "size": size}
    for name, D in (("X", X), ("Y", Y)):
        try:
            d = csr_decompose(D)
        except ValueError:
            continue
        out[f"l_{name}"] = d.length
        out[f"bound_{name}"] = (size - 1) * d.length
        if measure:
            out[f"threshold_{name}"] = csr_threshold(D, d)
    return out


def _summary(values: list) -> dict | None:
    values = [v for v in values if v is not None]
    if not values:
        return None
    return {"min": min(values), "median": statistics.median(values), "max": max(values)}


def bench_rows(n_list: list[int], trials: int, base: ProtocolParams, fallback_bound: int,
               jobs: int = 1, timing: bool = True, measure: bool = False) -> list[dict]:
    """One summary row per size; trial ``i`` uses seed ``base.seed + i``."""
    rows = []
    for n in n_list:
        work = [
            (ProtocolParams(**{**base.to_dict(), "n": n, "seed": base.seed + i}),
             fallback_bound, measure)
            for i in range(trials)
        ]
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                results = list(pool.map(_bench_trial, work))
        else:
            results = [_bench_trial(w) for w in work]
        successes = sum(r["ok"] for r in results)
        row = {
            "n": n,
            "tropical_size": results[0]["size"] if results else None,
            "trials": trials,
            "successes": successes,
            "success_rate": successes / trials,
            "csr_hits": sum(r["method"] == "csr" and r["ok"] for r in results),
            "fallback_hits": sum(r["method"] == "brute" and r["ok"] for r in results),
            "cycle_length_X": _summary([r.get("l_X") for r in results]),
            "cycle_length_Y": _summary([r.get("l_Y") for r in results]),
            "csr_bound_X": _summary([r.get("bound_X") for r in results]),
            "csr_bound_Y": _summary([r.get("bound_Y") for r in results]),
        }
        if measure:
            row["csr_threshold_X"] = _summary([r.get("threshold_X") for r in results])
            row["csr_threshold_Y"] = _summary([r.get("threshold_Y") for r in results])
        if timing:
            secs = [r["seconds"] for r in results]
            row["median_attack_s"] = round(statistics.median(secs), 6)
            row["max_attack_s"] = round(max(secs), 6)
        rows.append(row)
    return rows


def _format_table(rows: list[dict]) -> str:
    header = ["n", "size", "trials", "success", "csr", "fallback", "median_s", "max_s"]
    lines = ["  ".join(f"{h:>8}" for h in header)]
    for r in rows:
        cells = [r["n"], r["tropical_size"], r["trials"], f"{r['success_rate']:.3f}",
                 r["csr_hits"], r["fallback_hits"],
                 r.get("median_attack_s", "-"), r.get("max_attack_s", "-")]
        lines.append("  ".join(f"{c:>8}" for c in cells))
    return "\n".join(lines) + "\n"


def cmd_bench(args) -> int:
    if args.trials < 1:
        raise CliError("--trials must be at least 1", EXIT_USAGE)
    if args.jobs < 1:
        raise CliError("--jobs must be at least 1", EXIT_USAGE)
    try:
        n_list = [int(x) for x in args.n_list.split(",") if x.strip()]
    except ValueError as exc:
        raise CliError(f"bad --n-list: {args.n_list!r}", EXIT_USAGE) from exc
    if not n_list:
        raise CliError("--n-list is empty", EXIT_USAGE)
    base = _params(args, n=n_list[0])
    for n in n_list:
        _params(args, n=n)
    rows = bench_rows(n_list, args.trials, base, args.fallback_bound, args.jobs,
                      timing=not args.no_timing, measure=args.measure_threshold)
    table = {"kind": "bench", "seed": args.seed, "semiring": args.semiring,
             "params": {k: v for k, v in base.to_dict().items() if k not in ("n", "seed")},
             "rows": rows}
    if args.out:
        _write(args.out, docs.dumps(table))
    sys.stdout.write(_format_table(rows))
    return EXIT_OK


def _add_param_flags(p: argparse.ArgumentParser, with_n: bool = True) -> None:
    d = ProtocolParams()
    if with_n:
        p.add_argument("--n", type=int, default=d.n, help="matrix size")
    p.add_argument("--entry-min", type=int, default=d.entry_min)
    p.add_argument("--entry-max", type=int, default=d.entry_max)
    p.add_argument("--neginf-density", type=float, default=d.neginf_density)
    p.add_argument("--exp-min", type=int, default=d.exp_min)
    p.add_argument("--exp-max", type=int, default=d.exp_max)
    p.add_argument("--semiring", choices=("tropical", "triad"), default=d.semiring)
    p.add_argument("--seed", type=int, default=d.seed)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tropkex",
        description="Tropical/triad matrix key exchange and its CSR attack.",
        epilog="exit codes: 0 ok, 2 bad flags, 3 bad input, 4 attack failed, "
               "5 mismatch, 6 integrity error",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="run one exchange and write its transcript")
    _add_param_flags(gen)
    gen.add_argument("--out", required=True, help="public transcript path")
    gen.add_argument("--secrets", help="secrets path (default: <out>.secrets.json)")
    gen.set_defaults(func=cmd_gen)

    atk = sub.add_parser("attack", help="recover the shared key from a transcript")
    atk.add_argument("--transcript", required=True)
    atk.add_argument("--out", help="attack document path (default: stdout)")
    atk.add_argument("--fallback-bound", type=int, default=DEFAULT_FALLBACK_BOUND,
                     help="largest exponent tried by the brute-force fallback (0: off)")
    atk.add_argument("--no-timing", action="store_true",
                     help="omit wall-clock fields so output is byte-reproducible")
    atk.set_defaults(func=cmd_attack)

    ver = sub.add_parser("verify", help="check an attack against the true secrets")
    ver.add_argument("--transcript", required=True)
    ver.add_argument("--secrets", required=True)
    ver.add_argument("--attack", required=True)
    ver.set_defaults(func=cmd_verify)

    bench = sub.add_parser("bench", help="success rate and timing over many runs")
    bench.add_argument("--n-list", default="3,4,5")
    bench.add_argument("--trials", type=int, default=50)
    _add_param_flags(bench, with_n=False)
    bench.add_argument("--fallback-bound", type=int, default=DEFAULT_FALLBACK_BOUND)
    bench.add_argument("--jobs", type=int, default=1)
    bench.add_argument("--out", help="machine-readable JSON table")
    bench.add_argument("--no-timing", action="store_true")
    bench.add_argument("--measure-threshold", action="store_true",
                       help="also measure the empirical CSR threshold (slow)")
    bench.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad flags and 0 after --help
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except CliError as exc:
        print(f"tropkex: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
