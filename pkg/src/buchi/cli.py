"""Command-line entry point: ``buchi <subcommand> ...``.

Exit codes: 0 ok, 1 verification failure, 2 invalid input, 3 a = 0 where the
kernel set would be infinite.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from typing import Iterable, List, Optional

from .core import format_sequence, is_trivial_sequence, parse_sequence, parse_triple, second_differences
from .decompose import classify_orbit_mod8, decompose
from .io import RecordWriter, ResumeState, read_resume, truncate_output, write_resume
from .lab import (
    HensleyDivisibilityError,
    HensleyParityError,
    analyze5,
    compute_mx,
    find_canonical_subseq,
    hensley_generate,
    orbit_bfs,
    search_buchi,
)
from .reduction import InfiniteThetaError, NotInGammaError, enumerate_theta, reduce_to_theta
from .verify import CHECKS, VerifyConfig, run_verify
from .words import Word

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_DOMAIN = 0, 1, 2, 3
THREADS_ENV = "BUCHI_THREADS"
SEARCH_FIELDS = ["kind", "seq", "a", "trivial", "delta", "mx_word", "mx_length", "canonical", "flip_mask"]

log = logging.getLogger("buchi")


class InputError(Exception):
    pass


def resolve_threads(flag: Optional[int]) -> int:
    """--threads wins, then $BUCHI_THREADS, then the machine's CPU count."""
    if flag is not None:
        n, source = flag, "--threads"
    elif os.environ.get(THREADS_ENV):
        try:
            n, source = int(os.environ[THREADS_ENV]), THREADS_ENV
        except ValueError:
            raise InputError(f"{THREADS_ENV} must be an integer") from None
    else:
        return os.cpu_count() or 1
    if n < 1:
        raise InputError(f"{source} must be positive, got {n}")
    return n


# -- output helpers ---------------------------------------------------------------


def _jsonable(v):
    if isinstance(v, Word):
        return str(v)
    if isinstance(v, tuple):
        return [_jsonable(x) for x in v]
    if isinstance(v, list):
        return [_jsonable(x) for x in v]
    return v


def _text_value(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, Word):
        return f'"{v}"'
    if isinstance(v, (tuple, list)):
        return format_sequence(v)
    return str(v)


def _emit(args, rec: dict, text_keys: Optional[dict] = None) -> None:
    """One record in the chosen format; ``text_keys`` renames keys for text output."""
    if args.format == "text":
        names = text_keys or {}
        print(" ".join(f"{names.get(k, k)}={_text_value(v)}" for k, v in rec.items()))
        return
    writer = RecordWriter(sys.stdout, args.format, list(rec), header=not getattr(args, "_header_done", False))
    args._header_done = True
    writer.write({k: _jsonable(v) for k, v in rec.items()})


def _emit_rows(args, key: str, rows: Iterable, extra: dict) -> int:
    n = 0
    for row in rows:
        if args.format == "text":
            print(format_sequence(row))
        else:
            _emit(args, {**extra, key: tuple(row)})
        n += 1
    return n


def _triple(text: str):
    try:
        return parse_triple(text)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _sequence(text: str, length: Optional[int] = None):
    try:
        s = parse_sequence(text)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if length is not None and len(s) != length:
        raise InputError(f"expected {length} terms, got {len(s)}")
    return s


# -- subcommands ------------------------------------------------------------------


def cmd_reduce(args) -> int:
    tr = reduce_to_theta(_triple(args.triple), args.a)
    if args.format == "text":
        if not args.no_steps:
            for i, (gen, y) in enumerate(tr.steps, 1):
                print(f"step {i}: {gen} -> {y}")
        print(f'theta={tr.theta} word="{tr.witness_word}" steps={tr.n_steps}')
        return EXIT_OK
    rec = {"seq": tr.start, "a": args.a, "theta": tr.theta, "word": tr.witness_word, "n_steps": tr.n_steps}
    if not args.no_steps:
        rec["trace"] = [[g, list(y)] for g, y in tr.steps]
    _emit(args, rec)
    return EXIT_OK


def cmd_decompose(args) -> int:
    x = _triple(args.triple)
    d = decompose(x)
    _emit(args, {"seq": x, "word": d.word, "delta": d.delta, "symmetric": d.symmetric_ambiguity},
          text_keys={"word": "M"})
    return EXIT_OK


def cmd_classify(args) -> int:
    x = _triple(args.triple)
    delta = classify_orbit_mod8(x) if args.method == "mod8" else decompose(x).delta
    rec = {"seq": x, "delta": delta} if args.format != "text" else {"delta": delta}
    _emit(args, rec)
    return EXIT_OK


def cmd_theta(args) -> int:
    _emit_rows(args, "theta", enumerate_theta(args.a), {"a": args.a})
    return EXIT_OK


def cmd_orbit(args) -> int:
    if args.box < 1:
        raise InputError("--box must be positive")
    if args.depth is not None and args.depth < 0:
        raise InputError("--depth must be nonnegative")
    _emit_rows(args, "seq", orbit_bfs(args.a, args.depth, args.box), {"a": args.a})
    return EXIT_OK


def cmd_search(args) -> int:
    if args.length < 3 or args.bound < 1:
        raise InputError("need --length >= 3 and --bound >= 1")
    if args.stripe_width < 1:
        raise InputError("--stripe-width must be positive")
    fmt = "jsonl" if args.format == "text" else args.format
    workers = resolve_threads(args.threads)
    state = read_resume(args.resume) if args.resume else None
    if state is not None and not state.matches(args.a, args.length, args.bound):
        raise InputError(f"resume file {args.resume} was written for a different search: {state}")
    start = state.last_completed_x1 + 1 if state else 0
    append = False
    if args.output and state is not None and os.path.exists(args.output):
        kept = truncate_output(args.output, fmt, SEARCH_FIELDS, state.last_completed_x1)
        append = True
        log.info("resuming at x1=%d with %d records kept", start, kept)
    out = open(args.output, "a" if append else "w") if args.output else sys.stdout
    try:
        header = not (append and os.path.getsize(args.output) > 0)
        writer = RecordWriter(out, fmt, SEARCH_FIELDS, header=header)

        def checkpoint(last_x1, _recs):
            writer.flush()
            if args.resume:
                write_resume(args.resume, ResumeState(args.a, args.length, args.bound, last_x1))

        if start > args.bound:
            return EXIT_OK
        for rec in search_buchi(
            args.length,
            args.bound,
            args.a,
            args.nontrivial_only,
            workers=workers,
            start_x1=start,
            stripe_width=args.stripe_width,
            dedupe_reversal=args.dedupe_reversal,
            on_stripe_done=checkpoint,
        ):
            if rec.kind == "discovery":
                log.warning("non-trivial length-%d sequence: %s", len(rec.seq), rec.seq)
            writer.write(rec.to_dict())
        writer.flush()
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def _check_seq(s):
    if not second_differences(s, 2):
        raise InputError(f"{format_sequence(s)} is not a Buchi sequence (a=2)")
    return s


def cmd_analyze5(args) -> int:
    s = _check_seq(_sequence(args.seq, 5))
    r = analyze5(s)
    keys = ["seq", "normalized", "flip_mask", "m1", "m2", "m3", "delta", "delta_prime", "mx", "mx_length",
            "trivial", "canonical"]
    _emit(args, {k: r[k] for k in keys})
    return EXIT_OK


def cmd_analyze8(args) -> int:
    y = _check_seq(_sequence(args.seq, 8))
    w = find_canonical_subseq(y)
    mx = compute_mx(w.window).mx
    _emit(args, {
        "seq": y,
        "j": w.j,
        "flip_mask": w.flip_mask,
        "window": w.window,
        "mx_word": mx,
        "mx_length": mx.length,
        "conforming": str(mx) in ("B", "B^-1"),
        "trivial": is_trivial_sequence(y),
    })
    return EXIT_OK


def cmd_hensley(args) -> int:
    try:
        t = hensley_generate(args.u, args.v)
    except (HensleyParityError, HensleyDivisibilityError) as exc:
        raise InputError(str(exc)) from None
    _emit(args, {"u": args.u, "v": args.v, "seq": t})
    return EXIT_OK


def cmd_verify(args) -> int:
    names = [n for n, _ in CHECKS]
    for n in args.only or []:
        if n not in names:
            raise InputError(f"unknown check {n!r}; choose from {', '.join(names)}")
    cfg = VerifyConfig.for_level(
        args.level, workers=resolve_threads(args.threads), faults=frozenset(args.inject_fault or [])
    )

    def progress(res):
        status = "PASS" if res.ok else "FAIL"
        print(f"{status} {res.name} ({res.seconds:.2f}s) {res.detail.splitlines()[0] if res.detail else ''}",
              flush=True)

    report = run_verify(cfg, only=set(args.only) if args.only else None, progress=progress)
    if report.ok:
        print(f"verify {args.level}: all {len(report.results)} checks passed")
        return EXIT_OK
    print(f"verify {args.level}: {len(report.failures)} check(s) failed", file=sys.stderr)
    for res in report.failures:
        print(f"  {res.name}: {res.detail}", file=sys.stderr)
    return EXIT_VERIFY


# -- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="buchi", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="cmd", required=True)

    def add(name, func, help_, default_format="text"):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=func)
        sp.add_argument("--format", choices=["text", "jsonl", "tsv"], default=default_format)
        return sp

    sp = add("reduce", cmd_reduce, "reduce a triple to the kernel set")
    sp.add_argument("--a", type=int, default=2)
    sp.add_argument("--no-steps", action="store_true", help="omit the intermediate triples")
    sp.add_argument("triple", help="x1,x2,x3 (put -- before a leading minus sign)")

    sp = add("decompose", cmd_decompose, "write an a=2 triple as M . delta")
    sp.add_argument("triple")

    sp = add("classify", cmd_classify, "orbit generator of an a=2 triple")
    sp.add_argument("--method", choices=["mod8", "reduce"], default="mod8")
    sp.add_argument("triple")

    sp = add("theta", cmd_theta, "list the kernel set for a")
    sp.add_argument("--a", type=int, default=2)

    sp = add("orbit", cmd_orbit, "breadth-first orbit inside a box")
    sp.add_argument("--a", type=int, default=2)
    sp.add_argument("--depth", type=int, default=None, help="generator applications (default: to closure)")
    sp.add_argument("--box", type=int, required=True)

    sp = add("search", cmd_search, "search for Buchi sequences", default_format="jsonl")
    sp.add_argument("--a", type=int, default=2)
    sp.add_argument("--length", type=int, required=True)
    sp.add_argument("--bound", type=int, required=True)
    sp.add_argument("--nontrivial-only", action="store_true")
    sp.add_argument("--dedupe-reversal", action="store_true")
    sp.add_argument("--threads", type=int, default=None)
    sp.add_argument("--stripe-width", type=int, default=64)
    sp.add_argument("--output", help="write records here instead of stdout")
    sp.add_argument("--resume", help="key=value checkpoint file, updated after every stripe")

    sp = add("analyze5", cmd_analyze5, "M_x analysis of a length-5 sequence")
    sp.add_argument("seq")

    sp = add("analyze8", cmd_analyze8, "canonical window of a length-8 sequence")
    sp.add_argument("seq")

    sp = add("hensley", cmd_hensley, "triple from the (u, v) parametrization")
    sp.add_argument("u", type=int)
    sp.add_argument("v", type=int)

    sp = sub.add_parser("verify", help="run the verification suite")
    sp.set_defaults(func=cmd_verify)
    sp.add_argument("level", choices=["quick", "full"], nargs="?", default="quick")
    sp.add_argument("--threads", type=int, default=None)
    sp.add_argument("--only", action="append", metavar="CHECK")
    sp.add_argument("--inject-fault", action="append", choices=["theta2"], help="testing hook")
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except InfiniteThetaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (InputError, NotInGammaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BrokenPipeError:
        return EXIT_OK


def run() -> None:
    sys.exit(main())
