"""Command line interface.

Subcommands::

    lf-transfer translate --from en --to fr heavy smoker
    lf-transfer analyze --lang en heavy smoker
    lf-transfer generate --lang en --sem "oppose(x),Magn(x)"
    lf-transfer validate my.lex other.lex
    lf-transfer serve --host 127.0.0.1 --port 8000

Lexicon files come from ``--lexicon`` flags (repeatable; a directory
means all its ``*.lex`` files), else from the ``LF_TRANSFER_LEXICON_PATH``
environment variable (paths separated like PATH), else from the built-in
sample lexicon.

Exit codes: 0 success; 1 analysis failure (unknown token, no parse);
2 transfer failure (missing bilingual sign); 3 generation failure
(realization gap, missing base entry); 64 usage errors; 65 a lexicon
that cannot be loaded.  ``validate`` exits 1 when it reports any
error-level diagnostic.
"""

from __future__ import annotations

import argparse
import os
import sys
from importlib import resources
from typing import Optional, Sequence

from . import avm
from .analysis import analyze
from .errors import LexiconError, PipelineError, SemSyntaxError, UnknownLF
from .generation import generate
from .lexicon import Lexicon, has_errors, load_lexicon_files, validate
from .pipeline import translate, translate_reading
from .semantics import parse_sem

EX_USAGE = 64
EX_DATAERR = 65

ENV_LEXICON_PATH = "LF_TRANSFER_LEXICON_PATH"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="lf-transfer",
        description="Collocation translation through lexical functions.",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_lexicon_arg(p):
        p.add_argument(
            "--lexicon",
            action="append",
            default=None,
            metavar="PATH",
            help="lexicon file or directory of *.lex files (repeatable)",
        )

    p = sub.add_parser("translate", help="translate a phrase")
    add_lexicon_arg(p)
    p.add_argument("--from", dest="src_lang", required=True, metavar="LANG")
    p.add_argument("--to", dest="tgt_lang", required=True, metavar="LANG")
    p.add_argument("--trace", action="store_true", help="detail lines on stderr")
    p.add_argument(
        "--all-readings",
        action="store_true",
        help="translate every reading, not just the best",
    )
    p.add_argument("tokens", nargs="+", metavar="WORD")
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("analyze", help="show the readings of a phrase")
    add_lexicon_arg(p)
    p.add_argument("--lang", required=True, metavar="LANG")
    p.add_argument("--trace", action="store_true")
    p.add_argument("tokens", nargs="+", metavar="WORD")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("generate", help="realize a semantics in a language")
    add_lexicon_arg(p)
    p.add_argument("--lang", required=True, metavar="LANG")
    p.add_argument("--sem", required=True, metavar="SEM", help='e.g. "smoker(x),Magn(x)"')
    p.add_argument("--trace", action="store_true")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("validate", help="check lexicon files and print diagnostics")
    add_lexicon_arg(p)
    p.add_argument("files", nargs="*", metavar="FILE")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("serve", help="run the HTTP service")
    add_lexicon_arg(p)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def default_lexicon_paths() -> list[str]:
    root = resources.files("lf_transfer") / "fixtures"
    return sorted(
        str(item)
        for item in root.iterdir()
        if item.name.endswith(".lex")
    )


def resolve_lexicon_paths(flag_values: Optional[Sequence[str]]) -> list[str]:
    raw: list[str]
    if flag_values:
        raw = list(flag_values)
    elif os.environ.get(ENV_LEXICON_PATH):
        raw = [p for p in os.environ[ENV_LEXICON_PATH].split(os.pathsep) if p]
    else:
        return default_lexicon_paths()
    paths = []
    for item in raw:
        if os.path.isdir(item):
            paths.extend(
                sorted(
                    os.path.join(item, name)
                    for name in os.listdir(item)
                    if name.endswith(".lex")
                )
            )
        else:
            paths.append(item)
    return paths


def _load_or_exit(args) -> Lexicon:
    paths = resolve_lexicon_paths(args.lexicon)
    lexicon, diagnostics = load_lexicon_files(paths)
    if lexicon is None:
        for diag in diagnostics:
            print(diag.format(), file=sys.stderr)
        raise SystemExit(EX_DATAERR)
    return lexicon


def _print_result(result, trace: bool) -> None:
    if trace:
        for line in result.stages:
            print(line)
        for line in result.details:
            print(line, file=sys.stderr)
    for realization in result.realizations:
        print(realization.surface)


def cmd_translate(args) -> int:
    lexicon = _load_or_exit(args)
    if not args.all_readings:
        result = translate(args.tokens, args.src_lang, args.tgt_lang, lexicon)
        _print_result(result, args.trace)
        return 0
    readings = analyze(args.tokens, args.src_lang, lexicon)
    first_failed = None
    for index, reading in enumerate(readings, start=1):
        print(f"== reading {index} {reading.line()}")
        try:
            result = translate_reading(
                reading, args.tokens, args.src_lang, args.tgt_lang, lexicon
            )
        except PipelineError as exc:
            print(f"error: {exc.code} {exc}", file=sys.stderr)
            if index == 1:
                first_failed = exc
            continue
        _print_result(result, args.trace)
    if first_failed is not None:
        return first_failed.exit_status
    return 0


def cmd_analyze(args) -> int:
    lexicon = _load_or_exit(args)
    readings = analyze(args.tokens, args.lang, lexicon)
    for reading in readings:
        print(reading.line())
        if args.trace and reading.license_avm is not None:
            print(f"license: {avm.render(reading.license_avm)}", file=sys.stderr)
    return 0


def cmd_generate(args) -> int:
    lexicon = _load_or_exit(args)
    try:
        sem = parse_sem(args.sem, lexicon.registry)
    except (SemSyntaxError, UnknownLF) as exc:
        print(f"lf-transfer generate: error: {exc}", file=sys.stderr)
        return EX_USAGE
    realizations = generate(sem, args.lang, lexicon)
    for realization in realizations:
        print(realization.surface)
        if args.trace:
            print(f"realize: {realization.record()}", file=sys.stderr)
    return 0


def cmd_validate(args) -> int:
    paths = list(args.files) or resolve_lexicon_paths(args.lexicon)
    lexicon, diagnostics = load_lexicon_files(paths)
    if lexicon is not None:
        diagnostics = diagnostics + validate(lexicon)
    for diag in diagnostics:
        print(diag.format())
    if lexicon is None or has_errors(diagnostics):
        return 1
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service.app import create_app

    paths = resolve_lexicon_paths(args.lexicon)
    app = create_app(paths)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except PipelineError as exc:
        print(f"error: {exc.code} {exc}", file=sys.stderr)
        return exc.exit_status
    except LexiconError as exc:
        for diag in exc.diagnostics:
            print(diag.format(), file=sys.stderr)
        return EX_DATAERR


if __name__ == "__main__":
    sys.exit(main())
