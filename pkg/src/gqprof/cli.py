"""Command line front end.

Exit status: 0 on verified success, 1 on bad input, 2 when every retry of
the fingerprint verification failed.
"""

from __future__ import annotations

import argparse
import os
import sys

from .errors import CollisionError, GqprofError
from .fingerprint import make_params
from .pipeline import (
    BASIC,
    DEFAULT_MAX_RETRIES,
    IMPROVED,
    build_profile,
    build_profile_basic,
    build_profile_improved,
    count_unigrams,
    qgram_distance,
)
from .profile import read_profile_tsv, unescape_gram, verify_collision_free, write_profile_tsv
from .slp import compress_text, parse_slp, write_slp

DEFAULT_SEED = 20140901

EXIT_OK, EXIT_INPUT, EXIT_COLLISION = 0, 1, 2


class UsageError(GqprofError):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad usage; 2 is reserved for verification failure
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _read_slp(path: str):
    with open(path, encoding="latin-1") as fh:
        return parse_slp(fh.read())


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="latin-1", newline="\n") as fh:
            fh.write(text)


def cmd_compress(args) -> int:
    with open(args.input, "rb") as fh:
        data = fh.read()
    slp = compress_text(data)
    _emit(write_slp(slp), args.out)
    print(f"n={slp.n} N={slp.length}", file=sys.stderr)
    return EXIT_OK


def cmd_profile(args) -> int:
    slp = _read_slp(args.slp)
    if args.q == 1:
        table = count_unigrams(slp)
    else:
        profile, st = build_profile(
            slp, args.q, args.seed, algorithm=args.algorithm, max_retries=args.max_retries
        )
        if args.stats:
            print(st.to_json(), file=sys.stderr)
        table = profile.table()
    _emit(write_profile_tsv(table), args.out)
    return EXIT_OK


def cmd_query(args) -> int:
    gram = unescape_gram(os.fsencode(args.gram).decode("latin-1"))
    if len(gram) != args.q:
        raise UsageError(f"gram {args.gram!r} has length {len(gram)}, expected q={args.q}")
    slp = _read_slp(args.slp)
    if args.q == 1:
        count = count_unigrams(slp).counts.get(gram, 0)
    else:
        profile, st = build_profile(
            slp, args.q, args.seed, algorithm=args.algorithm, max_retries=args.max_retries
        )
        if args.stats:
            print(st.to_json(), file=sys.stderr)
        count = profile.query(gram)
    print(count)
    return EXIT_OK


def cmd_dist(args) -> int:
    tables = []
    for path in (args.a, args.b):
        with open(path, encoding="latin-1") as fh:
            tables.append(read_profile_tsv(fh.read()))
    print(qgram_distance(*tables))
    return EXIT_OK


def cmd_dot(args) -> int:
    if args.q < 2:
        raise UsageError("dot needs q >= 2")
    slp = _read_slp(args.slp)
    builder = build_profile_improved if args.algorithm == IMPROVED else build_profile_basic
    for attempt in range(args.max_retries + 1):
        profile, graph, _ = builder(slp, args.q, make_params(args.q, args.seed + attempt))
        if verify_collision_free(profile).ok:
            break
    else:
        raise CollisionError("fingerprints collided in every attempt")
    if graph is None:
        _emit("digraph qgram_graph {\n}\n", args.out)
    else:
        _emit(graph.to_dot(), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="gqprof", description="q-gram profiles of grammar-compressed strings"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--q", type=int, required=True, help="q-gram length")
        p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="fingerprint seed")
        p.add_argument("--algorithm", choices=(BASIC, IMPROVED), default=IMPROVED)
        p.add_argument("--max-retries", type=int, default=DEFAULT_MAX_RETRIES)
        p.add_argument("--stats", action="store_true", help="print build statistics as JSON to stderr")

    p = sub.add_parser("compress", help="compress a file into the SLP text format")
    p.add_argument("input")
    p.add_argument("--out", help="output path (default: stdout)")
    p.set_defaults(func=cmd_compress)

    p = sub.add_parser("profile", help="write the q-gram profile of an SLP as TSV")
    p.add_argument("slp")
    common(p)
    p.add_argument("--out", help="output path (default: stdout)")
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("query", help="print the frequency of one q-gram")
    p.add_argument("slp")
    p.add_argument("gram", help="the q-gram; \\xHH escapes allowed")
    common(p)
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("dist", help="q-gram distance between two profile TSV files")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("dot", help="export the q-gram graph in DOT format")
    p.add_argument("slp")
    common(p)
    p.add_argument("--out", help="output path (default: stdout)")
    p.set_defaults(func=cmd_dot)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CollisionError as exc:
        print(f"gqprof: verification failed: {exc}", file=sys.stderr)
        return EXIT_COLLISION
    except (GqprofError, OSError) as exc:
        print(f"gqprof: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
