"""Command-line front end.

Commands: analyze, tree, embed, enumerate, convert.  Exit codes: 0 success,
1 input error (parse failures, or an embedding request for a non-admissible
sequence), 2 internal cross-check violation.
"""

from __future__ import annotations

import argparse
import json
import sys

from .admissibility import OrbitKind
from .atlas import (
    ENUMERATION_CAP,
    CrossCheckError,
    analyze_sequence,
    atlas_header,
    diagnostics_record,
    enumerate_rows,
)
from .embedding import EvilOrbitError, enumerate_embeddings, generate_embedding
from .sequences import (
    InternalAddress,
    KneadingSequence,
    ParseError,
    address_to_sequence,
    internal_address,
)
from .tree import StructuralError, build_tree, classify_orbits

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_CROSSCHECK = 2


def _parse_input(text: str) -> KneadingSequence:
    """Accept either sequence text ``[01]+\\*`` or address text ``1-k-...``."""
    if "-" in text:
        return address_to_sequence(InternalAddress.parse(text))
    return KneadingSequence.parse(text)


def _render_row(row) -> str:
    lines = [
        f"sequence: {row.sequence}",
        f"period: {row.period}",
        f"internal-address: {row.internal_address}",
        f"admissible: {'true' if row.admissible else 'false'}",
        "failing-periods: " + (",".join(str(m) for m in row.failing_periods) or "none"),
    ]
    if row.spectrum:
        for entry in row.spectrum:
            lines.append(
                f"orbit: kind={entry['kind']} period={entry['period']} "
                f"arms={entry['arms']} itinerary={entry['itinerary']}")
    else:
        lines.append("orbit: none")
    lines.append(
        f"tree: vertices={row.vertices} edges={row.edges} "
        f"endpoints={','.join(row.endpoints)} max-branch-period={row.max_branch_period}")
    lines.append(f"embeddings: {row.embeddings}")
    lines.append(f"tree-hash: {row.tree_hash}")
    return "\n".join(lines) + "\n"


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="ascii") as handle:
            handle.write(text)


def _write_lines(lines, out: str | None) -> None:
    """Stream one record per line as they are produced."""
    if out is None:
        for line in lines:
            sys.stdout.write(line + "\n")
    else:
        with open(out, "w", encoding="ascii") as handle:
            for line in lines:
                handle.write(line + "\n")


def cmd_analyze(args) -> int:
    seq = _parse_input(args.input)
    row, _ = analyze_sequence(seq)
    if args.json:
        record = row.to_dict()
        record["diagnostics"] = diagnostics_record(seq)
        _write(json.dumps(record, sort_keys=True, separators=(",", ":")) + "\n", args.out)
    else:
        _write(_render_row(row), args.out)
    return EXIT_OK


def cmd_tree(args) -> int:
    tree = build_tree(_parse_input(args.input))
    if args.dot:
        _write(tree.to_dot(), args.out)
    else:
        _write(json.dumps(tree.to_record(), sort_keys=True, separators=(",", ":")) + "\n",
               args.out)
    return EXIT_OK


def cmd_embed(args) -> int:
    tree = build_tree(_parse_input(args.input))
    try:
        if args.all:
            embeddings = enumerate_embeddings(tree)
        else:
            orbits = classify_orbits(tree)
            evil = [o.period for o in orbits if o.kind is OrbitKind.EVIL]
            if evil:
                raise EvilOrbitError(evil)
            embeddings = [generate_embedding(
                tree, {o.characteristic: 1 for o in orbits})]
    except EvilOrbitError as exc:
        sys.stderr.write(
            "error: no embedding exists; evil periods: "
            + ",".join(str(p) for p in exc.periods) + "\n")
        return EXIT_INPUT
    _write("".join(e.to_json() + "\n" for e in embeddings), args.out)
    return EXIT_OK


def cmd_enumerate(args) -> int:
    def lines():
        yield atlas_header(args.period, args.exact)
        yield from enumerate_rows(args.period, exact=args.exact, jobs=args.jobs)

    _write_lines(lines(), args.out)
    return EXIT_OK


def cmd_convert(args) -> int:
    text = args.input
    if "-" in text:
        _write(str(address_to_sequence(InternalAddress.parse(text))) + "\n", args.out)
    else:
        seq = KneadingSequence.parse(text)
        _write(str(internal_address(seq)) + "\n", args.out)
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hubbardtree",
        description="Admissibility, tree reconstruction and planar embeddings "
                    "for star-periodic kneading sequences.")
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="full pipeline report for one sequence")
    analyze.add_argument("input", help="sequence like 10110* or address like 1-2-4-5-6")
    analyze.add_argument("--json", action="store_true", help="machine-readable row")
    analyze.add_argument("--out", default=None, help="write to file instead of stdout")
    analyze.set_defaults(func=cmd_analyze)

    tree = sub.add_parser("tree", help="serialize the tree")
    tree.add_argument("input")
    tree.add_argument("--dot", action="store_true", help="graph-description text output")
    tree.add_argument("--out", default=None)
    tree.set_defaults(func=cmd_tree)

    embed = sub.add_parser("embed", help="emit planar embeddings")
    embed.add_argument("input")
    embed.add_argument("--all", action="store_true", help="every embedding, not just one")
    embed.add_argument("--out", default=None)
    embed.set_defaults(func=cmd_embed)

    enum = sub.add_parser("enumerate", help="atlas of all sequences up to a period bound")
    enum.add_argument("--period", type=int, required=True,
                      help=f"period bound, 2..{ENUMERATION_CAP}")
    enum.add_argument("--exact", action="store_true", help="exactly this period only")
    enum.add_argument("--jobs", type=int, default=1, help="worker processes")
    enum.add_argument("--out", default=None)
    enum.set_defaults(func=cmd_enumerate)

    convert = sub.add_parser("convert", help="sequence <-> internal address")
    convert.add_argument("input")
    convert.add_argument("--out", default=None)
    convert.set_defaults(func=cmd_convert)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; keep 2 reserved for cross-checks
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (ParseError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except (CrossCheckError, StructuralError) as exc:
        sys.stderr.write(f"cross-check violation: {exc}\n")
        return EXIT_CROSSCHECK


if __name__ == "__main__":
    sys.exit(main())
