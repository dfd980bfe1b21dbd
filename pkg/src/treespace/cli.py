"""Command-line entry point: ``treespace <command> --n N ...``."""

from __future__ import annotations

import argparse
import logging
import sys

from treespace.config import (
    DEPTHS,
    FORMATS,
    JOBS_ENV,
    SPACES,
    ConfigError,
    RunConfig,
    default_jobs,
)
from treespace.reports import (
    EXPORTS,
    MODULES,
    cmd_character,
    cmd_enumerate,
    cmd_export,
    cmd_verify,
    cmd_whitehouse,
    render,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _common(p: argparse.ArgumentParser, n_required: bool = True) -> None:
    p.add_argument("--n", type=int, required=n_required, help="number of non-root labels")
    p.add_argument("--space", choices=SPACES, default=SPACES[0])
    p.add_argument("--format", dest="fmt", choices=FORMATS, default="json")
    p.add_argument("--depth", choices=DEPTHS, default="quick")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=None, help=f"worker count (default ${JOBS_ENV} or 1)")
    p.add_argument("--out", default=None, help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="treespace", description="Tree spaces, Lie superrings and their homology.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="simplex counts of T_n or the partition nerve")
    _common(p)
    p.add_argument("--list", action="store_true", help="include every simplex encoding")

    p = sub.add_parser("verify", help="run the checks selected by --depth")
    _common(p, n_required=False)
    p.add_argument("--complex", default=None, help="check a complex export instead of building one")
    p.add_argument("--timings", action="store_true", help="add per-check seconds (not byte-stable)")

    p = sub.add_parser("character", help="character table of a module")
    _common(p)
    p.add_argument("--module", choices=MODULES, default="lie")

    p = sub.add_parser("whitehouse", help="pair homology, exactness and the character identity")
    _common(p)

    p = sub.add_parser("export", help="dump a complex or the fundamental cycle as JSON")
    _common(p)
    p.add_argument("--what", choices=EXPORTS, default="complex")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors, 0 on --help
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")

    n = args.n
    if n is None:
        if args.command == "verify" and args.complex:
            n = 1
        else:
            parser.error("--n is required")
    try:
        cfg = RunConfig(
            command=args.command,
            n=n,
            space=args.space,
            fmt=args.fmt,
            depth=args.depth,
            seed=args.seed,
            jobs=args.jobs if args.jobs is not None else default_jobs(),
            out=args.out,
        )
        if args.command == "character" and args.module == "hatlie" and n < 3:
            raise ConfigError("hatlie needs n >= 3")
        if args.command in ("whitehouse",) and n < 3:
            raise ConfigError("whitehouse needs n >= 3")
        if args.command == "export" and args.what == "cycle" and n < 3:
            raise ConfigError("the fundamental cycle needs n >= 3")
    except ConfigError as exc:
        print(f"treespace: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    if cfg.command == "enumerate":
        report = cmd_enumerate(cfg, listing=args.list)
    elif cfg.command == "verify":
        try:
            report = cmd_verify(cfg, complex_path=args.complex, timings=args.timings)
        except OSError as exc:
            print(f"treespace: error: {exc}", file=sys.stderr)
            return EXIT_USAGE
    elif cfg.command == "character":
        report = cmd_character(cfg, args.module)
    elif cfg.command == "whitehouse":
        report = cmd_whitehouse(cfg)
    else:
        report = cmd_export(cfg, args.what)

    text = render(report.payload, cfg.fmt)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if report.ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
