import argparse
import importlib
import json
import logging
import sys
import traceback
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, TextIO

from dotenv import load_dotenv

from modules.core import FORMAT_VERSION
from modules.errors import HyperspaceError, IdentityRefutedError, IndeterminateError, MalformedInputError
from modules.logging_setup import configure_logging
from modules.settings import get_settings

# Load environment variables
load_dotenv()

logger = logging.getLogger("hyperspace")

EXIT_OK = 0
EXIT_REFUTED = 1
EXIT_MALFORMED = 2
EXIT_INDETERMINATE = 3


class HyperspaceCLI:
    def __init__(self, out: Optional[TextIO] = None):
        self.out = out or sys.stdout
        self.parser = argparse.ArgumentParser(
            prog="hyperspace",
            description="Acceptable colorings of indexed hyperspaces: set-system solvers, "
                        "greedy colorings of streams, cubes, morphism search and spray covers.",
        )
        self.parser.add_argument("--version", action="version",
                                 version=f"hyperspace format-version {FORMAT_VERSION}")
        self.parser.add_argument("--log-level", default=None,
                                 help="root log level (default: HYPERSPACE_LOG_LEVEL or WARNING)")
        self.subparsers = self.parser.add_subparsers(dest="command", metavar="COMMAND")
        self.subparsers.required = True
        self.cogs: Dict[str, Any] = {}

    def add_cog(self, cog: Any):
        self.cogs[type(cog).__name__] = cog

    def add_command(self, name: str, handler: Callable[[argparse.Namespace], Optional[int]],
                    help: str) -> argparse.ArgumentParser:
        parser = self.subparsers.add_parser(
            name, help=help, description=help,
            formatter_class=argparse.ArgumentDefaultsHelpFormatter,
        )
        parser.set_defaults(handler=handler)
        return parser

    def load_extensions(self):
        """Register every command group found in cogs/"""
        cogs_dir = Path(__file__).parent / "cogs"
        loaded, failed = [], []
        for file in sorted(cogs_dir.glob("*.py")):
            if file.name == "__init__.py":
                continue
            module_name = f"cogs.{file.stem}"
            try:
                module = importlib.import_module(module_name)
                module.setup(self)
                loaded.append(module_name)
                logger.debug(f"✅ Command group {module_name} loaded")
            except Exception as e:
                failed.append((module_name, str(e)))
                logger.error(f"❌ Command group {module_name} failed: {e}")
                logger.error(traceback.format_exc())
        logger.debug(f"Command groups loaded: {len(loaded)}, failures: {len(failed)}")

    def emit(self, text: str):
        self.out.write(text if text.endswith("\n") else text + "\n")

    def emit_json(self, data: Any, path: Optional[str] = None):
        """Print the document, or write it to path when one is given"""
        if path is None:
            self.emit(json.dumps(data, indent=2))
            return
        try:
            with open(path, 'w', encoding='utf-8') as f:
                json.dump(data, f, indent=2)
                f.write("\n")
        except OSError as e:
            raise MalformedInputError(f"cannot write {path}: {e}")
        logger.info(f"wrote {path}")

    def on_command_error(self, error: Exception) -> int:
        if isinstance(error, IdentityRefutedError):
            logger.error(f"❌ {error}")
            return EXIT_REFUTED
        if isinstance(error, IndeterminateError):
            logger.error(f"❌ indeterminate: {error}")
            return EXIT_INDETERMINATE
        if isinstance(error, HyperspaceError):
            logger.error(f"❌ {type(error).__name__}: {error}")
            sys.stderr.write(f"error: {error}\n")
            return EXIT_MALFORMED
        raise error

    def run(self, argv: Optional[List[str]] = None) -> int:
        try:
            args = self.parser.parse_args(argv)
        except SystemExit as e:
            return e.code if isinstance(e.code, int) else EXIT_MALFORMED
        if args.log_level:
            configure_logging(args.log_level)
        try:
            status = args.handler(args)
        except Exception as e:
            return self.on_command_error(e)
        logger.info(f"✅ {args.command} done")
        return EXIT_OK if status is None else status


def main(argv: Optional[List[str]] = None, out: Optional[TextIO] = None) -> int:
    try:
        configure_logging(get_settings().log_level)
    except HyperspaceError as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_MALFORMED
    cli = HyperspaceCLI(out)
    cli.load_extensions()
    return cli.run(argv)


if __name__ == "__main__":
    sys.exit(main())
