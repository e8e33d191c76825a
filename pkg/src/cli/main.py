"""MoodNet command-line entry point.

Usage:
    moodnet synth --config runs/fused.yaml --out data/synth
    moodnet featurize --config runs/fused.yaml
    moodnet train --config runs/fused.yaml
    moodnet eval --config runs/fused.yaml --checkpoint checkpoints/fused --split val
    moodnet inspect --checkpoint checkpoints/fused
"""

import argparse
import sys
import uuid
from typing import Optional, Sequence

from src.cli.commands import COMMANDS
from src.cli.error_handlers import run_with_error_handling
from src.utils import RunContext, get_logger, setup_logging

logger = get_logger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="moodnet", description="Multimodal music mood classification")
    parser.add_argument(
        "--log-level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        help="overrides MOODNET_LOG_LEVEL",
    )
    parser.add_argument("--log-json", action="store_true", default=None, help="JSON log lines on stderr")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        command.register(subparsers)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(level=args.log_level, json_format=args.log_json)

    with RunContext(run_id=uuid.uuid4().hex[:12], command=args.command):
        logger.debug("command_started", argv=list(argv) if argv is not None else sys.argv[1:])
        return run_with_error_handling(args.handler, args)


if __name__ == "__main__":
    sys.exit(main())
