"""
Tropical toolkit - command-line entry point.

Every subcommand reads one JSON request (``--input PATH`` or ``--json TEXT``,
standard input when neither is given) and prints a JSON envelope
{"ok", "result", "error"} on standard output.
"""

import argparse
import json
import logging
import sys
from typing import Any, List, Optional

from dotenv import load_dotenv

from src import __version__
from src.config.settings import get_settings
from src.tools.commands import TOOLS, get_tool, schemas

logger = logging.getLogger("tropical")

EXIT_OK = 0
EXIT_DOMAIN_ERROR = 1
EXIT_USAGE = 2


class UsageError(Exception):
    """Input that could not be read or decoded as JSON."""


class TropicalToolkitApp:
    """Main application class: settings, logging and command dispatch."""

    def __init__(self):
        load_dotenv()
        self.settings = get_settings()
        logging.basicConfig(
            level=self.settings.log_level.upper(),
            stream=sys.stderr,
            format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        )
        self.parser = self._build_parser()

    def _build_parser(self) -> argparse.ArgumentParser:
        parser = argparse.ArgumentParser(
            prog="tropical",
            description="Exact tropical algebra, convexity and curve tools over JSON",
        )
        parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
        parser.add_argument("--schema", action="store_true", help="Print the request schema of every command")
        commands = parser.add_subparsers(dest="command", metavar="COMMAND")
        for tool in TOOLS:
            sub = commands.add_parser(tool.name, help=tool.description, description=tool.description)
            source = sub.add_mutually_exclusive_group()
            source.add_argument("--input", metavar="PATH", help="Read the request from a JSON file")
            source.add_argument("--json", metavar="TEXT", help="Inline JSON request")
        return parser

    def _read_request(self, args: argparse.Namespace) -> Any:
        try:
            if args.json is not None:
                text = args.json
            elif args.input is not None:
                with open(args.input, encoding="utf-8") as handle:
                    text = handle.read()
            else:
                text = sys.stdin.read()
        except OSError as exc:
            raise UsageError(f"Cannot read input: {exc}")
        if not text.strip():
            return {}
        try:
            return json.loads(text)
        except json.JSONDecodeError as exc:
            raise UsageError(f"Input is not valid JSON: {exc}")

    def emit(self, payload: Any) -> None:
        print(json.dumps(payload, sort_keys=True, indent=self.settings.json_indent))

    def run(self, argv: Optional[List[str]] = None) -> int:
        try:
            args = self.parser.parse_args(argv)
        except SystemExit as exc:
            return EXIT_OK if exc.code in (0, None) else EXIT_USAGE

        if args.schema:
            self.emit(schemas())
            return EXIT_OK
        if args.command is None:
            self.parser.print_usage(sys.stderr)
            return EXIT_USAGE

        try:
            request = self._read_request(args)
        except UsageError as exc:
            logger.error("%s", exc)
            self.emit({"ok": False, "result": None, "error": {"code": "UsageError", "message": str(exc)}})
            return EXIT_USAGE

        logger.debug("running %s", args.command)
        envelope = get_tool(args.command).run(request)
        self.emit(envelope)
        return EXIT_OK if envelope["ok"] else EXIT_DOMAIN_ERROR


def main(argv: Optional[List[str]] = None) -> int:
    """Main application entry point."""
    return TropicalToolkitApp().run(argv)


if __name__ == "__main__":
    sys.exit(main())
