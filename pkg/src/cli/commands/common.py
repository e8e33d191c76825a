"""Helpers shared by the command modules."""

import argparse
import json
import sys
from pathlib import Path
from typing import Any

from src.config import RunConfig, load_run_config, parse_run_config


def add_config_argument(parser: argparse.ArgumentParser, required: bool = False) -> None:
    parser.add_argument("--config", type=Path, required=required, help="run configuration YAML file")


def load_config(args: argparse.Namespace) -> RunConfig:
    """The --config file, or the defaults (plus MOODNET_CACHE) when none is given."""
    if getattr(args, "config", None) is not None:
        return load_run_config(args.config)
    return parse_run_config({})


def print_json(payload: Any) -> None:
    sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True, default=str) + "\n")


def print_text(text: str) -> None:
    sys.stdout.write(text.rstrip("\n") + "\n")
