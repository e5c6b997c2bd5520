"""Command-line driver.

Exit codes: 0 success or verified, 2 verified false (or a determined
negative result), 3 budget exhausted, 4 usage or parse errors. All output
is a transcript of "prefix: detail" lines; identical inputs produce
byte-identical transcripts and certificate files.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .certificates import (HJCertificate, load_certificate, save_certificate,
                           verify_certificate)
from .coloring import ColoringOracle, builtin, load_coloring
from .errors import (BudgetExhausted, CapExceeded, ParseError, UnknownName,
                     VarwordError)
from .extraction import MODE_DIRECT, carlson_extract, cs_extract
from .hj import find_monochromatic_line, hj_number
from .largeness import (Budget, Meter, ProbeMode, Verdict, color_class,
                        largeness_probe)
from .spans import SpanKind, SpanQuery, enumerate_span
from .words import (TAIL_ARITHMETIC, AlphabetLadder, VariableWord, VarSeq,
                    parse_word, render_word, x_word)

EXIT_OK = 0
EXIT_FALSE = 2
EXIT_BUDGET = 3
EXIT_USAGE = 4


class _UsageError(Exception):
    pass


def parse_ladder(text: str) -> AlphabetLadder:
    """Ladder shorthand: "2" is the constant alphabet {0,1}; "2,3,3" lists
    level sizes with a constant tail; a trailing "+" is the explicit
    constant-tail marker and "+N" selects arithmetic growth by N."""
    text = text.strip()
    tail = "constant"
    step = 0
    if "+" in text:
        text, _, suffix = text.rpartition("+")
        if suffix:
            tail, step = TAIL_ARITHMETIC, int(suffix)
    try:
        sizes = [int(t) for t in text.split(",") if t != ""]
    except ValueError:
        raise _UsageError(f"malformed ladder spec {text!r}") from None
    if not sizes or any(s < 1 for s in sizes):
        raise _UsageError(f"malformed ladder spec {text!r}")
    try:
        return AlphabetLadder.from_sizes(sizes, tail=tail, step=step)
    except ValueError as exc:
        raise _UsageError(str(exc)) from None


def parse_coloring(text: str) -> ColoringOracle:
    """Either "builtin:NAME[:ARG...]" or a path to a coloring document."""
    if text.startswith("builtin:"):
        parts = text.split(":")[1:]
        name, args = parts[0], parts[1:]
        try:
            if name == "constant":
                return builtin("constant")
            if name == "length-mod":
                return builtin("length-mod", int(args[0]))
            if name == "last-letter":
                alphabet = [int(t) for t in args[0].split(",")]
                empty = int(args[1]) if len(args) > 1 else 1
                return builtin("last-letter", alphabet, empty)
            if name == "letter-count-mod":
                return builtin("letter-count-mod", int(args[0]), int(args[1]))
            raise _UsageError(f"unknown builtin coloring {name!r}")
        except (IndexError, ValueError, UnknownName) as exc:
            raise _UsageError(f"bad builtin coloring spec: {exc}") from None
    try:
        with open(text, "r", encoding="utf-8") as handle:
            return load_coloring(handle.read())
    except OSError as exc:
        raise _UsageError(f"cannot read coloring file: {exc}") from None


def _budget(args) -> Budget:
    return Budget(max_evaluations=args.max_candidates,
                  max_candidates=args.max_candidates,
                  max_span=args.max_span,
                  max_total_length=args.max_word_length)


def _emit(out, prefix: str, detail: str) -> None:
    print(f"{prefix}: {detail}", file=out)


def _write_certificate(cert, path: Optional[str], out) -> None:
    document = save_certificate(cert)
    if path:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(document)
        _emit(out, "output", path)
    else:
        out.write(document)


def _cmd_hj_search(args, out) -> int:
    coloring = parse_coloring(args.coloring)
    alphabet = tuple(range(args.p))
    _emit(out, "config", f"subcommand=hj-search n={args.n} p={args.p}")
    witness = find_monochromatic_line(
        args.n, alphabet, coloring.evaluate_letters,
        max_candidates=args.max_candidates)
    if witness is None:
        _emit(out, "result", "no monochromatic line (exhaustive)")
        return EXIT_FALSE
    _emit(out, "witness", f"line={render_word(witness.line)} color={witness.color}")
    cert = HJCertificate(args.n, alphabet, witness.line, witness.color,
                         coloring, budget=args.max_candidates)
    _write_certificate(cert, args.output, out)
    return EXIT_OK


def _cmd_hj_number(args, out) -> int:
    _emit(out, "config",
          f"subcommand=hj-number p={args.p} q={args.q} nmax={args.nmax}")
    value = hj_number(args.p, args.q, args.nmax,
                      max_colorings=args.max_candidates)
    if value is None:
        _emit(out, "result", "none")
        print("none", file=out)
        return EXIT_FALSE
    _emit(out, "result", str(value))
    print(value, file=out)
    return EXIT_OK


def _cmd_extract(args, out, carlson: bool) -> int:
    coloring = parse_coloring(args.coloring)
    ladder = parse_ladder(args.ladder)
    name = "carlson-extract" if carlson else "cs-extract"
    _emit(out, "config",
          f"subcommand={name} ladder={args.ladder} depth={args.depth} mode={args.mode}")
    if args.workers != 1:
        _emit(out, "workers", f"{args.workers} requested; running sequentially")
    extract = carlson_extract if carlson else cs_extract
    cert = extract(coloring, ladder, args.depth, mode=args.mode,
                   budget=_budget(args))
    words = " ".join(render_word(w) for w in cert.words)
    _emit(out, "certificate", f"color={cert.color} words={words}")
    _emit(out, "verify", f"ok products={cert.checked}")
    _write_certificate(cert, args.output, out)
    return EXIT_OK


def _cmd_verify(args, out) -> int:
    try:
        with open(args.cert, "r", encoding="utf-8") as handle:
            cert = load_certificate(handle.read())
    except OSError as exc:
        raise _UsageError(f"cannot read certificate: {exc}") from None
    _emit(out, "config", f"subcommand=verify cert={args.cert}")
    if verify_certificate(cert):
        _emit(out, "verify", "ok")
        return EXIT_OK
    _emit(out, "verify", "FAILED")
    return EXIT_FALSE


def _cmd_enumerate_span(args, out) -> int:
    ladder = parse_ladder(args.ladder)
    seq = []
    for token in args.seq.split(","):
        word = parse_word(token)
        if not isinstance(word, VariableWord):
            raise _UsageError(f"span positions must be variable words: {token!r}")
        seq.append(word)
    try:
        kind = SpanKind(args.kind)
    except ValueError:
        raise _UsageError(f"unknown span kind {args.kind!r}") from None
    query = SpanQuery.over_ladder(seq, ladder, args.offset, kind)
    _emit(out, "config",
          f"subcommand=enumerate-span kind={args.kind} offset={args.offset}")
    count = 0
    for word in enumerate_span(query, cap=args.cap):
        print(render_word(word), file=out)
        count += 1
    _emit(out, "result", f"{count} words")
    return EXIT_OK


def _cmd_probe(args, out) -> int:
    coloring = parse_coloring(args.coloring)
    ladder = parse_ladder(args.ladder)
    if not 1 <= args.class_index <= coloring.q:
        raise _UsageError(f"class index out of range 1..{coloring.q}")
    oracle = color_class(coloring, args.class_index)
    if args.seq:
        seq = VarSeq(tuple(parse_word(t) for t in args.seq.split(",")))
    else:
        seq = VarSeq.constant(x_word())
    mode = ProbeMode(args.mode)
    _emit(out, "config",
          f"subcommand=probe-largeness class={args.class_index} mode={args.mode}")
    evidence = largeness_probe(oracle, seq, args.offset, ladder, mode,
                               budget=_budget(args))
    prefix = " ".join(render_word(w) for w in evidence.prefix)
    _emit(out, "probe", f"verdict={evidence.verdict.value} r={len(evidence.prefix) - 1}")
    _emit(out, "prefix", prefix if prefix else "(empty)")
    _emit(out, "checked", str(len(evidence.transcript)))
    if evidence.verdict is Verdict.FOUND_PREFIX:
        return EXIT_OK
    if evidence.verdict is Verdict.COUNTEREXAMPLE_PREFIX:
        return EXIT_FALSE
    return EXIT_BUDGET


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="varword",
        description="Word-combinatorics searches and certificate verification")
    parser.add_argument("--max-candidates", type=int, default=10_000_000,
                        help="candidate/evaluation budget")
    parser.add_argument("--max-span", type=int, default=20_000,
                        help="cap for a single span enumeration")
    parser.add_argument("--max-word-length", type=int, default=14,
                        help="longest candidate in direct searches")
    parser.add_argument("--workers", type=int, default=1,
                        help="worker fan-out limit (current engine is sequential)")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("hj-search", help="find a monochromatic line")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--coloring", required=True)
    p.add_argument("--output")

    p = sub.add_parser("hj-number", help="exact tiny threshold computation")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--nmax", type=int, required=True)

    for name in ("cs-extract", "carlson-extract"):
        p = sub.add_parser(name, help=f"{name} certificate extraction")
        p.add_argument("--coloring", required=True)
        p.add_argument("--ladder", required=True)
        p.add_argument("--depth", type=int, required=True)
        p.add_argument("--mode", default=MODE_DIRECT,
                       choices=("direct", "proof-guided"))
        p.add_argument("--output")

    p = sub.add_parser("verify", help="re-verify a certificate document")
    p.add_argument("--cert", required=True)

    p = sub.add_parser("enumerate-span", help="list a span")
    p.add_argument("--ladder", required=True)
    p.add_argument("--seq", required=True)
    p.add_argument("--offset", type=int, default=0)
    p.add_argument("--kind", default="reduced-constant")
    p.add_argument("--cap", type=int, default=10_000)

    p = sub.add_parser("probe-largeness", help="bounded-depth largeness probe")
    p.add_argument("--ladder", required=True)
    p.add_argument("--coloring", required=True)
    p.add_argument("--class-index", type=int, required=True)
    p.add_argument("--mode", default="reduced-shifted",
                   choices=("reduced-shifted", "extracted"))
    p.add_argument("--offset", type=int, default=0)
    p.add_argument("--seq")
    return parser


_COMMANDS = {
    "hj-search": _cmd_hj_search,
    "hj-number": _cmd_hj_number,
    "verify": _cmd_verify,
    "enumerate-span": _cmd_enumerate_span,
    "probe-largeness": _cmd_probe,
}


def run(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        if args.subcommand == "cs-extract":
            return _cmd_extract(args, out, carlson=False)
        if args.subcommand == "carlson-extract":
            return _cmd_extract(args, out, carlson=True)
        return _COMMANDS[args.subcommand](args, out)
    except _UsageError as exc:
        _emit(out, "error", str(exc))
        return EXIT_USAGE
    except ParseError as exc:
        _emit(out, "error", str(exc))
        return EXIT_USAGE
    except (BudgetExhausted, CapExceeded) as exc:
        _emit(out, "error", f"budget: {exc}")
        return EXIT_BUDGET
    except VarwordError as exc:
        _emit(out, "error", str(exc))
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
