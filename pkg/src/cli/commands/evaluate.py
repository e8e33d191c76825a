"""`moodnet eval`: score a checkpoint on a feature manifest."""

import argparse
import json
from pathlib import Path

from src.core.models import Split
from src.services import ExperimentService
from src.tensor import atomic_write_bytes

from .common import add_config_argument, load_config, print_json, print_text

_SPLITS = {"train": Split.TRAIN, "val": Split.VAL, "all": None}


def register(subparsers) -> None:
    parser = subparsers.add_parser("eval", help="evaluate a checkpoint")
    add_config_argument(parser)
    parser.add_argument("--checkpoint", type=Path, required=True, help="checkpoint or run directory")
    parser.add_argument("--manifest", type=Path, help="feature manifest (default: from the config)")
    parser.add_argument("--split", choices=sorted(_SPLITS), default="all")
    parser.add_argument("--out", type=Path, help="also write report.json into this directory")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    report = ExperimentService(load_config(args)).evaluate(
        args.checkpoint,
        manifest=args.manifest,
        split=_SPLITS[args.split],
    )
    print_text(report.to_table())
    print_json(report.to_dict())
    if args.out is not None:
        blob = json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"
        atomic_write_bytes(args.out / "report.json", blob.encode("utf-8"))
    return 0
