import argparse
import json
import logging
import os
from dataclasses import dataclass
from difflib import get_close_matches
from pathlib import Path
from typing import Callable, Dict, List, Optional

from dotenv import load_dotenv

from src.circle_core import CircleCoreError
from src.constants import DEFAULT_OPTIONS, ENV_LOG_LEVEL, ENV_OUTPUT_DIR, EXIT_CODES
from src.function_catalog import FunctionCatalog
from src.functions import FunctionCatalogError
from src.helpers import print_h_bar
from src.pipeline import (
    ConfigError,
    SeriesFileError,
    exit_code_for,
    load_experiment_config,
    run_counterexample,
    run_experiment,
    verify_series,
    with_grid,
    write_counterexample_csv,
    write_ground_truth,
)
from src.theodorsen_solver import GroundTruthError, SolverError
from src.types import EpsilonRule, VerificationReport

logger = logging.getLogger("cli")

# Input problems end the run with the config-error exit code
INPUT_ERRORS = (ConfigError, SeriesFileError, FunctionCatalogError, CircleCoreError, GroundTruthError, OSError)


class UsageError(Exception):
    """Raised for malformed command-line arguments"""
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class Command:
    """Dataclass to represent a CLI command"""
    name: str
    description: str
    tips: List[str]
    handler: Callable[[List[str]], int]
    aliases: List[str] = None

    def __post_init__(self):
        if self.aliases is None:
            self.aliases = []


class CircleConjCLI:
    def __init__(self):
        self._initialize_commands()

    def _initialize_commands(self) -> None:
        """Initialize all CLI commands"""
        self.commands: Dict[str, Command] = {}

        self._register_command(
            Command(
                name="help",
                description="Displays a list of all available commands, or help for a specific command.",
                tips=["Try 'help {command}' to get more information about a specific command."],
                handler=self.help,
                aliases=['h']
            )
        )
        self._register_command(
            Command(
                name="solve",
                description="Solves the boundary correspondence for an experiment and runs every enabled check.",
                tips=["Format: solve --config {path or name} [--out DIR] [--grid N] [--json]",
                      "Writes {name}_report.json and {name}_series.csv to the output directory"],
                handler=self.solve,
                aliases=['run']
            )
        )
        self._register_command(
            Command(
                name="verify",
                description="Runs the checks on an existing h series against an experiment's f.",
                tips=["Format: verify --config {path or name} --series {csv} [--out DIR] [--json]",
                      "The series CSV needs columns t and h on the canonical grid"],
                handler=self.verify,
            )
        )
        self._register_command(
            Command(
                name="counterexample",
                description="Tabulates sup|sigma_N(g~)| against its closed form for the eps-series.",
                tips=["Format: counterexample [--rule inv_log] [--offset 2] [--N 16 64 256] [--grid n]",
                      "Rules: inv_log, inv_loglog, constant (with --value)"],
                handler=self.counterexample,
                aliases=['fejer']
            )
        )
        self._register_command(
            Command(
                name="ground-truth",
                description="Writes the exact pair (f, h) for the map z + beta z^2.",
                tips=["Format: ground-truth --beta 0.3 [--grid 2048] [--out DIR] [--json]",
                      "|beta| must not exceed 0.3"],
                handler=self.ground_truth,
                aliases=['oracle']
            )
        )
        self._register_command(
            Command(
                name="catalog",
                description="Lists the function kinds an experiment can use.",
                tips=["Use --json for machine-readable output"],
                handler=self.catalog,
                aliases=['kinds']
            )
        )
        self._register_command(
            Command(
                name="schema",
                description="Prints the JSON schema of the verification report.",
                tips=["Reports written by 'solve' and 'verify' validate against this schema"],
                handler=self.schema,
            )
        )

    def _register_command(self, command: Command) -> None:
        """Register a command and its aliases"""
        self.commands[command.name] = command
        for alias in command.aliases:
            self.commands[alias] = command

    def run(self, argv: List[str]) -> int:
        """Dispatch argv to a command and return the process exit code"""
        if not argv:
            self._show_general_help()
            return EXIT_CODES["OK"]
        command = self.commands.get(argv[0].lower())
        if command is None:
            self._handle_unknown_command(argv[0])
            return EXIT_CODES["CONFIG_ERROR"]
        try:
            return command.handler(argv[1:])
        except UsageError as e:
            logger.error(f"❌ {command.name}: {e}")
            self._show_command_help(command.name)
            return EXIT_CODES["CONFIG_ERROR"]
        except INPUT_ERRORS as e:
            logger.error(f"❌ {e}")
            return EXIT_CODES["CONFIG_ERROR"]
        except SolverError as e:
            logger.error(f"❌ Solver failed: {e}")
            return EXIT_CODES["NOT_CONVERGED"]

    def _handle_unknown_command(self, command: str) -> None:
        """Handle unknown command with suggestions"""
        logger.warning(f"Unknown command: '{command}'")

        suggestions = self._get_command_suggestions(command)
        if suggestions:
            logger.info("Did you mean one of these?")
            for suggestion in suggestions:
                logger.info(f"  - {suggestion}")
        logger.info("Use 'help' to see all available commands.")

    def _get_command_suggestions(self, command: str, max_suggestions: int = 3) -> List[str]:
        """Get command suggestions based on string similarity"""
        return get_close_matches(command, self.commands.keys(), n=max_suggestions, cutoff=0.6)

    def _show_command_help(self, command_name: str) -> None:
        command = self.commands.get(command_name)
        if not command:
            self._handle_unknown_command(command_name)
            return

        logger.info(f"\nHelp for '{command.name}':")
        logger.info(f"Description: {command.description}")
        if command.aliases:
            logger.info(f"Aliases: {', '.join(command.aliases)}")
        if command.tips:
            logger.info("\nTips:")
            for tip in command.tips:
                logger.info(f"  - {tip}")

    def _show_general_help(self) -> None:
        logger.info("\nAvailable Commands:")
        for cmd_name, cmd in sorted(self.commands.items()):
            # Only show main commands, not aliases
            if cmd_name == cmd.name:
                logger.info(f"  {cmd.name:<15} - {cmd.description}")

    def _parser(self, name: str) -> _ArgumentParser:
        return _ArgumentParser(prog=f"circleconj {name}", description=self.commands[name].description)

    @staticmethod
    def _emit_json(payload) -> None:
        # Machine output bypasses the logger
        print(json.dumps(payload, indent=2, ensure_ascii=False))

    ######################################################
    # Command handlers
    ######################################################

    def help(self, input_list: List[str]) -> int:
        if input_list:
            self._show_command_help(input_list[0].lower())
        else:
            self._show_general_help()
        return EXIT_CODES["OK"]

    def solve(self, input_list: List[str]) -> int:
        parser = self._parser("solve")
        parser.add_argument("--config", required=True, help="Experiment JSON path or name in the experiments directory")
        parser.add_argument("--out", default=None, help="Output directory")
        parser.add_argument("--grid", type=int, default=None, help="Override the solver grid size n")
        parser.add_argument("--json", action="store_true", help="Print the report to stdout")
        args = parser.parse_args(input_list)

        cfg = with_grid(load_experiment_config(args.config), args.grid)
        report = run_experiment(cfg, out_dir=args.out)
        if args.json:
            self._emit_json(report.model_dump(mode="json"))
        return exit_code_for(report)

    def verify(self, input_list: List[str]) -> int:
        parser = self._parser("verify")
        parser.add_argument("--config", required=True, help="Experiment JSON path or name")
        parser.add_argument("--series", required=True, help="Series CSV with columns t,h")
        parser.add_argument("--out", default=None, help="Output directory")
        parser.add_argument("--json", action="store_true", help="Print the report to stdout")
        args = parser.parse_args(input_list)

        cfg = load_experiment_config(args.config)
        report = verify_series(cfg, args.series, out_dir=args.out)
        if args.json:
            self._emit_json(report.model_dump(mode="json"))
        return exit_code_for(report)

    def counterexample(self, input_list: List[str]) -> int:
        parser = self._parser("counterexample")
        parser.add_argument("--rule", default="inv_log", help="eps rule: inv_log, inv_loglog or constant")
        parser.add_argument("--offset", type=float, default=2.0, help="c in 1/log(n + c)")
        parser.add_argument("--value", type=float, default=1.0, help="eps value for the constant rule")
        parser.add_argument("--N", dest="N_list", type=int, nargs="+", default=[16, 64, 256], help="Ascending orders N")
        parser.add_argument("--grid", type=int, default=None, help="Synthesis grid (default: next power of two >= 4N)")
        parser.add_argument("--out", default=None, help="Write counterexample.csv to this directory")
        parser.add_argument("--json", action="store_true", help="Print the table to stdout")
        args = parser.parse_args(input_list)

        rule = EpsilonRule(name=args.rule, offset=args.offset, value=args.value)
        rows = run_counterexample(rule, args.N_list, args.grid)
        if args.out:
            directory = Path(args.out)
            directory.mkdir(parents=True, exist_ok=True)
            write_counterexample_csv(rows, directory / "counterexample.csv")
        if args.json:
            self._emit_json([row.model_dump() for row in rows])
        return EXIT_CODES["OK"]

    def ground_truth(self, input_list: List[str]) -> int:
        parser = self._parser("ground-truth")
        parser.add_argument("--beta", type=float, default=0.3, help="Coefficient of z^2, |beta| <= 0.3")
        parser.add_argument("--grid", type=int, default=DEFAULT_OPTIONS["GRID"], help="Grid size n")
        parser.add_argument("--out", default=None, help="Output directory")
        parser.add_argument("--json", action="store_true", help="Print the f spec to stdout")
        args = parser.parse_args(input_list)

        directory = args.out or os.getenv(ENV_OUTPUT_DIR, "outputs")
        spec, _, _, _ = write_ground_truth(args.beta, args.grid, directory)
        if args.json:
            self._emit_json(spec.model_dump(mode="json"))
        return EXIT_CODES["OK"]

    def catalog(self, input_list: List[str]) -> int:
        parser = self._parser("catalog")
        parser.add_argument("--json", action="store_true", help="Print kinds and descriptions to stdout")
        args = parser.parse_args(input_list)

        catalog = FunctionCatalog()
        if args.json:
            self._emit_json(catalog.describe())
        else:
            catalog.list_kinds()
        return EXIT_CODES["OK"]

    def schema(self, input_list: List[str]) -> int:
        self._parser("schema").parse_args(input_list)
        self._emit_json(VerificationReport.model_json_schema())
        return EXIT_CODES["OK"]


def main(argv: Optional[List[str]] = None, log_level: Optional[str] = None) -> int:
    load_dotenv()
    level = (log_level or os.getenv(ENV_LOG_LEVEL, "INFO")).upper()
    logging.basicConfig(level=getattr(logging, level, logging.INFO), format='%(message)s')
    print_h_bar()
    return CircleConjCLI().run(list(argv or []))
