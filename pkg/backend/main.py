"""
dea-lab command-line interface
Main application entry point
"""

import argparse
import logging
import sys
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Type

import settings
from commands import COMMANDS
from errors import (
    CircuitParseError,
    CircuitValidationError,
    ConfigError,
    DEAError,
    NumericalError,
    ParameterAssignmentError,
    SymmetryError,
    UnsupportedError,
)
from schemas.config import Command, build_run_config, load_run_file
from storage import OutputStore

logger = logging.getLogger("dea")

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INPUT = 2
EXIT_NUMERICAL = 3


# ==================== Parser ====================

class _Parser(argparse.ArgumentParser):
    """Usage errors become ConfigError so they print as one line."""

    def error(self, message: str):
        raise ConfigError(message)


def _common_flags() -> argparse.ArgumentParser:
    common = _Parser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", help="YAML run file; flags override its values")
    common.add_argument("--circuit", help="Circuit description file (JSON)")
    theta = common.add_mutually_exclusive_group()
    theta.add_argument("--theta", help="JSON file with parameter values")
    theta.add_argument("--random-theta", dest="random_theta", action="store_true",
                       help="Draw theta from --seed")
    common.add_argument("--seed", type=int, help="Root seed (unsigned 64-bit)")
    common.add_argument("--shots", help="Shots per overlap estimate, or 'exact'")
    common.add_argument("--report", help="JSON report path (default stdout)")
    common.add_argument("--csv", help="Eigenvalue CSV path")
    common.add_argument("--cap", type=int, help="Dimension cap for early termination")
    common.add_argument("--tol-abs", dest="tol_abs", type=float, help="Absolute eigenvalue tolerance")
    common.add_argument("--tol-rel", dest="tol_rel", type=float, help="Relative eigenvalue tolerance")
    common.add_argument("-v", "--verbose", action="count", help="-v for INFO, -vv for DEBUG")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dea", description="Dimensional expressivity analysis of parametric circuits")
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = _common_flags()
    for command, (module, _, help_text) in COMMANDS.items():
        sub = subparsers.add_parser(
            command.value, parents=[common], help=help_text, argument_default=argparse.SUPPRESS
        )
        module.configure(sub)
    return parser


# ==================== Error handlers ====================

def _error_line(code: str, message: str) -> str:
    return f"error[{code}]: {' '.join(str(message).split())}"


# checked in order; subclasses before their bases
EXCEPTION_HANDLERS: List[Tuple[Type[BaseException], int]] = [
    (CircuitParseError, EXIT_INPUT),
    (CircuitValidationError, EXIT_INPUT),
    (ParameterAssignmentError, EXIT_INPUT),
    (SymmetryError, EXIT_INPUT),
    (ConfigError, EXIT_INPUT),
    (UnsupportedError, EXIT_INPUT),
    (NumericalError, EXIT_NUMERICAL),
    (DEAError, EXIT_FAILURE),
    (OSError, EXIT_INPUT),
    (Exception, EXIT_FAILURE),
]


def _error_code(exc: BaseException) -> str:
    if isinstance(exc, DEAError):
        return exc.code
    return "IO_ERROR" if isinstance(exc, OSError) else "INTERNAL"


def handle_error(exc: BaseException, stderr=None) -> int:
    stderr = stderr or sys.stderr
    for exc_type, exit_code in EXCEPTION_HANDLERS:
        if isinstance(exc, exc_type):
            if exit_code == EXIT_FAILURE and not isinstance(exc, DEAError):
                logger.debug("Unhandled error", exc_info=exc)
            message = exc.message if isinstance(exc, DEAError) else exc
            print(_error_line(_error_code(exc), message), file=stderr)
            return exit_code
    raise exc


# ==================== Entry point ====================

def _configure_logging(verbosity: int) -> None:
    level = {0: settings.LOG_LEVEL, 1: "INFO"}.get(verbosity, "DEBUG")
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
        force=True,
    )


def _run_values(args: argparse.Namespace) -> Dict[str, object]:
    values = vars(args).copy()
    values.pop("verbose", None)
    config_path = values.pop("config", None)
    merged: Dict[str, object] = load_run_file(config_path) if config_path else {}
    merged.update(values)
    return merged


def main(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        _configure_logging(getattr(args, "verbose", 0) or 0)
        cfg = build_run_config(_run_values(args))
        store = OutputStore(stdout=stdout or sys.stdout)
        handler: Callable = COMMANDS[Command(cfg.command)][1]
        logger.debug("running %s", cfg.command.value)
        code = handler(cfg, store)
        store.flush()
        return code
    except Exception as exc:  # noqa: BLE001
        return handle_error(exc, stderr)


if __name__ == "__main__":
    sys.exit(main())
