"""Command line interface: run a live session, replay a script, validate files."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import Config, load_config
from .errors import ProtocolError, SpatialUIError
from .geo import load_chargers, load_point_cloud
from .layout import LayoutDocument, rules_from_json
from .runtime import build_demo_world, parse_script, run_replay

EXIT_OK = 0
EXIT_FORMAT = 2
EXIT_PROTOCOL = 3


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _load_world(args):
    config = load_config(_read(args.config)) if getattr(args, "config", None) else Config()
    layout = LayoutDocument.from_json(_read(args.layout)) if getattr(args, "layout", None) else None
    rules = rules_from_json(_read(args.rules)) if getattr(args, "rules", None) else None
    world, row_errors = build_demo_world(config, _read(args.chargers), layout, rules)
    for err in row_errors:
        print(f"warning: charger row skipped, {err.message} (line {err.line})", file=sys.stderr)
    return world, config, layout, rules


def _cmd_run(args) -> int:
    world, config, layout, rules = _load_world(args)
    if args.serve is not None:
        from .server import serve

        def factory():
            fresh, _ = build_demo_world(config, _read(args.chargers), layout, rules)
            return fresh

        server = serve(factory, args.serve)
        print(f"serving frame protocol on 127.0.0.1:{server.port}", file=sys.stderr)
        try:
            import threading

            threading.Event().wait()
        except KeyboardInterrupt:
            pass
        finally:
            server.shutdown()
        return EXIT_OK

    from .server import run_stdio_session

    return run_stdio_session(world, sys.stdin, sys.stdout)


def _cmd_replay(args) -> int:
    world, *_ = _load_world(args)
    script = parse_script(_read(args.script))
    trace = run_replay(world, script)
    if args.out == "-":
        sys.stdout.write(trace)
    else:
        Path(args.out).write_text(trace, encoding="utf-8")
    return EXIT_OK


def _sniff_json_kind(text: str) -> str:
    doc = json.loads(text)
    if isinstance(doc, dict) and "rules" in doc:
        return "rules"
    return "layout"


def _cmd_validate(args) -> int:
    path = Path(args.file)
    text = path.read_text(encoding="utf-8")
    suffix = path.suffix.lower()
    if suffix == ".csv":
        records, row_errors = load_chargers(text)
        for err in row_errors:
            print(f"row error (line {err.line}): {err.message}")
        print(f"chargers: {len(records)} valid, {len(row_errors)} rejected")
        return EXIT_OK if not row_errors else EXIT_FORMAT
    if suffix == ".ply":
        cloud = load_point_cloud(text)
        print(f"point cloud: {len(cloud)} points")
        return EXIT_OK
    if suffix in (".json", ".jsonl"):
        if suffix == ".jsonl":
            parse_script(text)
            print("replay script: ok")
            return EXIT_OK
        kind = _sniff_json_kind(text)
        if kind == "rules":
            rules = rules_from_json(text)
            print(f"context rules: {len(rules)} rules")
        else:
            doc = LayoutDocument.from_json(text)
            print(f"layout: {len(doc.entries)} components, saved_at {doc.saved_at!r}")
        return EXIT_OK
    print(f"unrecognized file type: {path.name}", file=sys.stderr)
    return EXIT_FORMAT


def _add_world_args(parser: argparse.ArgumentParser, *, layout: bool = True) -> None:
    parser.add_argument("--chargers", required=True, help="charger CSV file")
    if layout:
        parser.add_argument("--layout", help="layout JSON to apply at startup")
    parser.add_argument("--rules", help="context rules JSON")
    parser.add_argument("--config", help="widget/runtime defaults JSON")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spatialui", description="Spatial GUI core: sessions, replay, validation"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="serve a live session (stdio, or TCP with --serve)")
    _add_world_args(p_run)
    p_run.add_argument("--serve", type=int, metavar="PORT", help="listen on a local TCP port")
    p_run.set_defaults(func=_cmd_run)

    p_replay = sub.add_parser("replay", help="run a recorded script and write its event trace")
    p_replay.add_argument("--script", required=True, help="replay script (.jsonl)")
    _add_world_args(p_replay)
    p_replay.add_argument("--out", required=True, help="trace output path, or - for stdout")
    p_replay.set_defaults(func=_cmd_replay)

    p_validate = sub.add_parser("validate", help="check a csv/layout/rules/ply/script file")
    p_validate.add_argument("file")
    p_validate.set_defaults(func=_cmd_validate)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ProtocolError as exc:
        print(f"protocol error: {exc}", file=sys.stderr)
        return EXIT_PROTOCOL
    except (SpatialUIError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FORMAT


if __name__ == "__main__":
    sys.exit(main())
