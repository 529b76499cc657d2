"""Operator command line.

Exit codes: 0 on success, 1 on a domain error (printed as one
machine-parsable ``error: ...`` line on stderr), 2 on usage errors
(argparse's default). Output is deterministic given the inputs; nothing
is written outside ``-o`` / ``--data-dir`` destinations.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .assertions import assertions_to_tsv, extract_assertions
from .corpus import TsvCountProvider, bootstrap_corpus, corpus_to_tsv, load_term_list
from .dungeon import DungeonParams, generate_dungeon
from .errors import GeckaError
from .game import parse_script_line, run_script, trace_header, trace_lines
from .jsonutil import canonical_dumps
from .scene import scene_from_doc, scene_to_doc
from .server import DEFAULT_PORT, poag_stats
from .session import parse_session_xml, replay_session, session_from_doc
from .store import JsonlStore

import json


def _write_output(text: str, out: str | None):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _range(raw: str) -> tuple[int, int]:
    lo, _, hi = raw.partition(",")
    return (int(lo), int(hi or lo))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gecka",
        description="scene authoring, play simulation and knowledge extraction",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--port", type=int, default=DEFAULT_PORT)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--data-dir", required=True)
    p.add_argument("--static", default=None, help="directory of built webapp assets to serve at /")

    p = sub.add_parser("validate", help="schema and reference check a session XML file")
    p.add_argument("session", help="path to session .xml")

    p = sub.add_parser("export", help="extract assertions from a session")
    p.add_argument("--assertions", required=True, metavar="SESSION_XML")
    p.add_argument("-o", "--output", default=None)

    p = sub.add_parser("gen-dungeon", help="generate a seeded dungeon scene")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--width", type=int, default=32)
    p.add_argument("--height", type=int, default=32)
    p.add_argument("--rooms", type=_range, default=(4, 8), metavar="LO,HI")
    p.add_argument("--room-size", type=_range, default=(3, 7), metavar="LO,HI")
    p.add_argument("--zombies", type=int, default=3)
    p.add_argument("-o", "--output", default=None)

    p = sub.add_parser("simulate", help="run a headless scripted playthrough")
    p.add_argument("--scene", required=True, help="scene JSON file")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--script", required=True, help="command script, one command per line")
    p.add_argument("--trace", default=None, help="write the JSON-lines trace here (default stdout)")

    p = sub.add_parser("stats", help="POAG frequency table over a data directory")
    p.add_argument("--data-dir", required=True)
    p.add_argument("--top", type=int, default=10)

    p = sub.add_parser("corpus", help="score verb-noun pairs with an offline count file")
    p.add_argument("--nouns", required=True)
    p.add_argument("--verbs", required=True)
    p.add_argument("--counts", required=True, help="TSV verb<TAB>noun<TAB>count")
    p.add_argument("-o", "--output", default=None)

    return parser


def run(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except GeckaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _dispatch(args: argparse.Namespace) -> int:
    if args.command == "serve":
        from .server import serve

        serve(args.data_dir, port=args.port, host=args.host, static_dir=args.static)
        return 0

    if args.command == "validate":
        session = parse_session_xml(Path(args.session).read_text(encoding="utf-8"))
        replay_session(session)  # raises on dangling references
        print(f"{args.session}: ok ({len(session.actions)} actions)")
        return 0

    if args.command == "export":
        session = parse_session_xml(Path(args.assertions).read_text(encoding="utf-8"))
        _write_output(assertions_to_tsv(extract_assertions(session)), args.output)
        return 0

    if args.command == "gen-dungeon":
        params = DungeonParams(
            width=args.width,
            height=args.height,
            room_count=args.rooms,
            room_size=(args.room_size, args.room_size),
            zombie_count=args.zombies,
            seed=args.seed,
        )
        scene = generate_dungeon(params)
        _write_output(canonical_dumps(scene_to_doc(scene)), args.output)
        return 0

    if args.command == "simulate":
        doc = json.loads(Path(args.scene).read_text(encoding="utf-8"))
        scene, kb = scene_from_doc(doc)
        commands = []
        for line in Path(args.script).read_text(encoding="utf-8").splitlines():
            cmd = parse_script_line(line)
            if cmd is not None:
                commands.append(cmd)
        header = trace_header(scene, kb, args.seed)
        _state, events = run_script(scene, kb, args.seed, commands)
        _write_output("\n".join(trace_lines(header, events)) + "\n", args.trace)
        return 0

    if args.command == "stats":
        store = JsonlStore(args.data_dir)
        sessions = [session_from_doc(r["body"]) for r in store.all("sessions")]
        rows = poag_stats(sessions, args.top)
        print("item\taction\tprerequisites\toutcome\tgoal\tfrequency")
        for s in rows:
            goal = s.goal if s.goal else "--"
            print(f"{s.item}\t{s.action}\t{s.prerequisites}\t{s.outcome}\t{goal}\t{s.frequency}")
        return 0

    if args.command == "corpus":
        entries = bootstrap_corpus(
            load_term_list(args.nouns),
            load_term_list(args.verbs),
            TsvCountProvider(args.counts),
        )
        _write_output(corpus_to_tsv(entries), args.output)
        return 0

    raise AssertionError(f"unhandled command {args.command}")


def main():  # console entry point
    raise SystemExit(run())


if __name__ == "__main__":
    main()
