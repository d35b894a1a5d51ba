from lrd_entropy.commands.estimate import estimate_subparser, run_estimate
from lrd_entropy.commands.lemma_check import lemma_check_subparser, run_lemma_check
from lrd_entropy.commands.limit_check import limit_check_subparser, run_limit_check
from lrd_entropy.commands.simulate import run_simulate, simulate_subparser
from lrd_entropy.commands.table import run_table, table_subparser
from lrd_entropy.commands.truth import run_truth, truth_subparser
from lrd_entropy.commands.common import default_workers
from lrd_entropy.exceptions import ValidationError
from lrd_entropy.experiment_io import ConfigFileReader
import argparse
from dataclasses import dataclass
import importlib.metadata
import json
import logging
from logging.handlers import RotatingFileHandler
import shlex
import sys
from typing import Dict, List, Optional, Tuple

LOG_FILE = "lrd_entropy.log"
LOG_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"
# namespace entries that describe the invocation rather than the run
NON_CONFIG_KEYS = {"command", "config", "show_config"}

COMMANDS = {
    "simulate": run_simulate,
    "estimate": run_estimate,
    "truth": run_truth,
    "table": run_table,
    "limit-check": run_limit_check,
    "lemma-check": run_lemma_check,
}

_installed_handlers: List[logging.Handler] = []


class JsonErrorArgumentParser(argparse.ArgumentParser):
    """Usage errors surface as ValidationError instead of exiting."""

    def error(self, message):
        raise ValidationError(message)


@dataclass(frozen=True)
class RunConfig:
    command: str
    options: Tuple[Tuple[str, str], ...]

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        options = []
        for key, value in vars(args).items():
            if key in NON_CONFIG_KEYS or value is None or value is False:
                continue
            if value is True:
                text = "true"
            elif isinstance(value, (list, tuple)):
                text = " ".join(str(v) for v in value)
            else:
                text = str(value)
            options.append((key, text))
        return cls(args.command, tuple(sorted(options)))

    def to_text(self) -> str:
        return "".join(f"{key}={value}\n" for key, value in self.options)


class CLIManager:
    def __init__(self, parser: argparse.ArgumentParser):
        self.parser = parser

    @staticmethod
    def config_tokens(values: Dict[str, str]) -> List[str]:
        tokens = []
        for key, value in values.items():
            if key in NON_CONFIG_KEYS:
                raise ValidationError(f"'{key}' cannot be set from a config file")
            flag = "--" + key.replace("_", "-")
            if value.lower() in ("true", "false"):
                if value.lower() == "true":
                    tokens.append(flag)
                continue
            tokens.append(flag)
            tokens.extend(shlex.split(value))
        return tokens

    def apply_config_file(self, argv: List[str], args: argparse.Namespace) -> argparse.Namespace:
        """Re-parse with the file's options placed first so that flags win."""
        values = ConfigFileReader(args.config).data
        tokens = self.config_tokens(values)
        logging.debug(f"Config file options: {tokens}")
        return self.parser.parse_args([argv[0]] + tokens + argv[1:])

    @staticmethod
    def resolve_workers(workers: Optional[int]) -> int:
        if workers is None:
            return default_workers()
        if workers < 1:
            raise ValidationError(f"--workers must be >= 1, got {workers}")
        return workers


def setup_parsers():
    parser = JsonErrorArgumentParser(
        prog="lrd-entropy",
        description="Quadratic functional and Renyi entropy estimation for long-memory linear processes "
        "with heavy-tailed innovations",
    )
    try:
        version = importlib.metadata.version("lrd_entropy")
    except importlib.metadata.PackageNotFoundError:
        # package is not installed
        version = "unknown"

    parser.add_argument(
        "-v",
        "--version",
        action="version",
        version=f"%(prog)s {version}",
        help="Reports the program's version number."
    )
    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    # Options every subcommand understands
    common_parent = argparse.ArgumentParser(add_help=False)
    common_parent.add_argument("--config", help="key=value file of options; flags override it")
    common_parent.add_argument(
        "--show-config",
        action="store_true",
        help="Print the resolved options as key=value lines and exit",
    )
    common_parent.add_argument(
        "--workers",
        type=int,
        help="Worker processes/threads (default: $LRD_ENTROPY_WORKERS or 1)",
    )
    common_parent.add_argument("--verbose", action="store_true", help="Log debug messages to stderr")

    simulate_subparser(subparsers, common_parent)
    estimate_subparser(subparsers, common_parent)
    truth_subparser(subparsers, common_parent)
    table_subparser(subparsers, common_parent)
    limit_check_subparser(subparsers, common_parent)
    lemma_check_subparser(subparsers, common_parent)

    return parser


def configure_logging(verbose: bool = False) -> None:
    root = logging.getLogger()
    for handler in _installed_handlers:
        root.removeHandler(handler)
        handler.close()
    _installed_handlers.clear()

    file_handler = RotatingFileHandler(LOG_FILE, maxBytes=100000, backupCount=3)
    file_handler.setFormatter(logging.Formatter(LOG_FORMAT))
    file_handler.setLevel(logging.DEBUG)

    # stdout carries results only
    stream_handler = logging.StreamHandler(sys.stderr)
    stream_handler.setFormatter(logging.Formatter("%(levelname)s - %(message)s"))
    stream_handler.setLevel(logging.DEBUG if verbose else logging.INFO)

    for handler in (file_handler, stream_handler):
        root.addHandler(handler)
        _installed_handlers.append(handler)
    root.setLevel(logging.DEBUG)


def handle_command_error(error: Exception) -> int:
    """One JSON line on stderr; exit 2 for invalid input, 1 otherwise."""
    code = 2 if isinstance(error, ValidationError) else 1
    logging.error(f"Command failed: {error}")
    logging.debug("Failure details", exc_info=error)
    print(json.dumps({"error": str(error)}), file=sys.stderr)
    return code


def main(argv: Optional[List[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)

    # Convert underscores to hyphens in command
    if argv:
        argv[0] = argv[0].replace("_", "-")

    try:
        parser = setup_parsers()
        args = parser.parse_args(argv)
        if not args.command:
            parser.print_help(sys.stderr)
            return 2
        cli_manager = CLIManager(parser)
        if args.config:
            args = cli_manager.apply_config_file(argv, args)
        configure_logging(args.verbose)
        args.workers = cli_manager.resolve_workers(args.workers)

        if args.show_config:
            sys.stdout.write(RunConfig.from_args(args).to_text())
            return 0

        logging.info(f"Running {args.command}")
        return COMMANDS[args.command](args)
    except SystemExit as e:
        # --help and --version
        return 0 if e.code is None else e.code
    except Exception as e:
        return handle_command_error(e)


if __name__ == "__main__":
    sys.exit(main())
