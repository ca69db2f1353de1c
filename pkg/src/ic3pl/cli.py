"""Command line: ``ic3pl check FILE``, ``ic3pl corpus DIR``, ``ic3pl gen-corpus DIR``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .aiger import AigerParseError, write_aag
from .certification import Reach, explicit_reach, format_witness
from .engine import Options, Safe, Unsafe
from .frames import format_invariant
from .report import run_corpus, run_file, write_csv
from .sat import BACKENDS

EXIT_SAFE = 20
EXIT_UNSAFE = 10
EXIT_UNKNOWN = 0
EXIT_USAGE = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _engine_flags(p):
    p.add_argument("--no-prediction", action="store_true",
                   help="plain IC3 generalization (no lemma prediction)")
    p.add_argument("--max-frames", type=int, metavar="N")
    p.add_argument("--timeout", type=float, metavar="S", help="wall-clock limit in seconds")
    p.add_argument("--backend", choices=BACKENDS, default="reference")
    p.add_argument("--audit", action="store_true", help="check frame invariants after each phase")


def _parser():
    p = _Parser(prog="ic3pl", description="IC3 model checker with lemma prediction")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("check", help="check one AIGER file")
    c.add_argument("model")
    _engine_flags(c)
    c.add_argument("--report", choices=("text", "json", "csv"))
    c.add_argument("--dump-invariant", metavar="FILE")
    c.add_argument("--witness", metavar="FILE")
    c.add_argument("--oracle", action="store_true",
                   help="cross-check against explicit-state search when small enough")
    c.add_argument("--dimacs-dump", metavar="DIR")

    b = sub.add_parser("corpus", help="check every .aag/.aig file in a directory, CSV out")
    b.add_argument("directory")
    _engine_flags(b)
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--out", metavar="FILE", help="CSV destination (default stdout)")

    g = sub.add_parser("gen-corpus", help="write the toy and random test models as .aag")
    g.add_argument("directory")
    g.add_argument("--random", type=int, default=100, help="models per random family")
    return p


def _options(args) -> Options:
    return Options(prediction=not args.no_prediction, max_frames=args.max_frames,
                   timeout=args.timeout, backend=args.backend, audit=args.audit,
                   dimacs_dir=getattr(args, "dimacs_dump", None))


def _check(args) -> int:
    try:
        report, verdict, engine = run_file(args.model, _options(args))
    except FileNotFoundError:
        print(f"ic3pl: no such file: {args.model}", file=sys.stderr)
        return EXIT_USAGE
    except AigerParseError as e:
        print(f"ic3pl: {args.model}: {e}", file=sys.stderr)
        return EXIT_USAGE
    print(report.verdict, flush=True)
    if args.oracle:
        r = explicit_reach(engine.ts)
        if r.status is Reach.TOO_LARGE:
            print("oracle: skipped (state space over budget)", file=sys.stderr)
        else:
            expected = "SAFE" if r.status is Reach.SAFE else "UNSAFE"
            agree = report.verdict in (expected, "UNKNOWN")
            print(f"oracle: {expected}" + ("" if agree else " MISMATCH"), file=sys.stderr)
    if engine.audit_failures:
        for msg in engine.audit_failures:
            print(f"audit: {msg}", file=sys.stderr)
    if args.report == "text":
        print(report.text())
    elif args.report == "json":
        print(report.to_json())
    elif args.report == "csv":
        sys.stdout.write(write_csv([report]))
    if args.dump_invariant and isinstance(verdict, Safe):
        Path(args.dump_invariant).write_text(format_invariant(verdict.invariant))
    if args.witness and isinstance(verdict, Unsafe):
        Path(args.witness).write_text(format_witness(engine.ts, verdict.trace))
    if isinstance(verdict, Safe):
        return EXIT_SAFE
    if isinstance(verdict, Unsafe):
        return EXIT_UNSAFE
    return EXIT_UNKNOWN


def _corpus(args) -> int:
    if not Path(args.directory).is_dir():
        print(f"ic3pl: not a directory: {args.directory}", file=sys.stderr)
        return EXIT_USAGE
    reports = run_corpus(args.directory, _options(args), jobs=args.jobs)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            write_csv(reports, fh)
    else:
        sys.stdout.write(write_csv(reports))
    return 0


def _gen_corpus(args) -> int:
    from .models import random_aig, random_local_aig, toy_models

    out = Path(args.directory)
    out.mkdir(parents=True, exist_ok=True)
    for name, model in toy_models().items():
        (out / f"toy_{name}.aag").write_text(write_aag(model))
    for seed in range(args.random):
        (out / f"rand_{seed:04d}.aag").write_text(write_aag(random_aig(seed)))
        (out / f"local_{seed:04d}.aag").write_text(write_aag(random_local_aig(seed)))
    return 0


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "check":
        return _check(args)
    if args.command == "corpus":
        return _corpus(args)
    return _gen_corpus(args)


if __name__ == "__main__":
    sys.exit(main())
