"""Command-line front end: build, query, bench, inspect.

Exit codes: 0 success (no matches included), 1 usage, 2 I/O, 3 corrupt index.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .bench import DEFAULT_FREQS, DEFAULT_LENGTHS, extract_patterns, run_bench, size_report
from .blockmodel import BlockClass, read_manifest
from .diskstore import FormatError
from .engine import MODES, Engine, unescape_pattern
from .index import (INDEX_KINDS, MANIFEST_FILE, CorruptIndexError, build_index, corpus_digest,
                    load_index, save_index)
from .textcore import EmptyTextError, build_suffix_context, ingest

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_CORRUPT = 0, 1, 2, 3
ENV_INDEX_DIR = "ROSA_INDEX_DIR"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    try:
        vals = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not vals or any(v < 1 for v in vals):
        raise argparse.ArgumentTypeError("values must be positive")
    return vals


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _non_negative(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="rosa", description="Reduced-space two-level suffix array index.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def index_opt(sp):
        sp.add_argument("--index", type=Path, default=None,
                        help=f"index directory (default: ${ENV_INDEX_DIR})")

    b = sub.add_parser("build", help="build an index directory from a text file")
    b.add_argument("input", type=Path)
    index_opt(b)
    b.add_argument("--b", type=_positive, default=4096, help="maximum block size (default 4096)")
    b.add_argument("--index-kind", choices=INDEX_KINDS, default="both")
    b.add_argument("--bitvector", choices=("plain", "sparse"), default="sparse")

    q = sub.add_parser("query", help="run queries against an index")
    index_opt(q)
    q.add_argument("patterns", nargs="*", help="patterns; \\xNN escapes allowed")
    q.add_argument("--patterns-file", type=Path, help="one pattern per line, \\xNN escapes allowed")
    q.add_argument("--mode", choices=MODES, default="count")
    q.add_argument("--window", type=_non_negative, default=0, help="context radius")
    q.add_argument("--index-kind", choices=("condensed", "blindtree"), default=None)
    q.add_argument("--text", type=Path, default=None,
                   help="text file to verify against (must match the stored digest)")

    be = sub.add_parser("bench", help="stratified disk-access benchmark")
    index_opt(be)
    be.add_argument("--seed", type=int, default=0)
    be.add_argument("--lengths", type=_int_list, default=list(DEFAULT_LENGTHS))
    be.add_argument("--freqs", type=_int_list, default=list(DEFAULT_FREQS))
    be.add_argument("--per-stratum", type=_positive, default=1000)
    be.add_argument("--index-kind", choices=INDEX_KINDS, default="both")
    be.add_argument("--csv", type=Path, default=None, help="CSV output (default: stdout)")
    be.add_argument("--json", type=Path, default=None, help="size breakdown JSON output")

    ins = sub.add_parser("inspect", help="summarize an index directory")
    index_opt(ins)
    ins.add_argument("--blocks", action="store_true", help="also print the block manifest")
    return p


def _index_dir(args) -> Path:
    if args.index is not None:
        return args.index
    env = os.environ.get(ENV_INDEX_DIR)
    if not env:
        raise UsageError(f"no index directory: pass --index or set {ENV_INDEX_DIR}")
    return Path(env)


def read_patterns_file(path: Path) -> list[bytes]:
    out = []
    for line in Path(path).read_bytes().split(b"\n"):
        if line.endswith(b"\r"):
            line = line[:-1]
        if line:
            out.append(unescape_pattern(line))
    return out


def cmd_build(args, out) -> int:
    raw = args.input.read_bytes()
    built = build_index(raw, args.b, args.index_kind, args.bitvector)
    directory = _index_dir(args)
    save_index(built, directory)
    loaded = load_index(directory)
    classes = {k: 0 for k in BlockClass}
    for blk in built.blocks:
        classes[blk.kind] += 1
    print(f"index\t{directory}", file=out)
    print(f"n\t{built.n}\tsigma\t{built.sigma}\tb\t{built.b}\tblocks\t{len(built.blocks)}", file=out)
    print("classes\t" + "\t".join(f"{k.value}={v}" for k, v in classes.items()), file=out)
    report = size_report(loaded, built.blocks, int(built.ctx.lcp.max()))
    _print_sizes(report, out)
    return EXIT_OK


def _print_sizes(report: dict, out) -> None:
    for fname, size in report["files"].items():
        print(f"file\t{fname}\t{size}", file=out)
    for part in ("memory", "blocks"):
        for name, size in report[part].items():
            print(f"size\t{part}.{name}\t{size}", file=out)
    for key in ("B", "z", "kappa"):
        if key in report:
            print(f"{key}\t{report[key]}", file=out)
    for k, v in report.get("pointerFractions", {}).items():
        print(f"pointers\t{k}\t{v:.6f}", file=out)


def cmd_query(args, out) -> int:
    patterns = [unescape_pattern(os.fsencode(p)) for p in args.patterns]
    if args.patterns_file is not None:
        patterns += read_patterns_file(args.patterns_file)
    if not patterns:
        raise UsageError("no patterns given")
    if any(not p for p in patterns):
        raise UsageError("empty pattern")
    loaded = load_index(_index_dir(args))
    if args.text is not None:
        text = args.text.read_bytes()
        if corpus_digest(text) != loaded.memory.digest:
            raise CorruptIndexError("text file does not match the corpus digest stored at build time")
    try:
        engine = Engine.from_loaded(loaded, args.index_kind)
    except ValueError as exc:
        raise UsageError(str(exc))
    for p in patterns:
        print(engine.query(args.mode, p, args.window).record(), file=out)
    return EXIT_OK


def cmd_bench(args, out) -> int:
    directory = _index_dir(args)
    loaded = load_index(directory)
    ctx = build_suffix_context(ingest(loaded.text))
    strata = extract_patterns(ctx, args.lengths, args.freqs, args.per_stratum, args.seed)
    kinds = None if args.index_kind == "both" else [args.index_kind]
    mem = loaded.memory
    for kind in kinds or ():
        if (mem.condensed if kind == "condensed" else mem.blind) is None:
            raise UsageError(f"index has no {kind} section")
    blocks = read_manifest(directory / MANIFEST_FILE)
    report = run_bench(loaded, strata, kinds, args.seed, blocks, int(ctx.lcp.max()))
    csv_text = report.to_csv()
    if args.csv is None:
        out.write(csv_text)
    else:
        args.csv.write_text(csv_text)
    if args.json is not None:
        args.json.write_text(report.to_json() + "\n")
    return EXIT_OK


def cmd_inspect(args, out) -> int:
    directory = _index_dir(args)
    loaded = load_index(directory)
    mem = loaded.memory
    blocks = read_manifest(directory / MANIFEST_FILE)
    sections = [name for name, part in (("condensed", mem.condensed), ("blindtree", mem.blind))
                if part is not None]
    print(f"index\t{directory}", file=out)
    print(f"n\t{mem.n}\tsigma\t{mem.sigma}\tb\t{mem.b}\tblocks\t{len(blocks)}", file=out)
    print(f"sections\t{','.join(sections)}", file=out)
    print(f"diskBlocks\t{loaded.blocks.count}", file=out)
    print(f"digest\t{mem.digest.hex()}", file=out)
    if mem.condensed is not None:
        print(f"bitvectors\t{mem.condensed.bitvector_kind}", file=out)
    _print_sizes(size_report(loaded, blocks), out)
    if args.blocks:
        out.write((directory / MANIFEST_FILE).read_text())
    return EXIT_OK


COMMANDS = {"build": cmd_build, "query": cmd_query, "bench": cmd_bench, "inspect": cmd_inspect}


def main(argv: list[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args, out)
    except (UsageError, EmptyTextError) as exc:
        print(f"rosa: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CorruptIndexError, FormatError) as exc:
        print(f"rosa: corrupt index: {exc}", file=sys.stderr)
        return EXIT_CORRUPT
    except OSError as exc:
        print(f"rosa: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
