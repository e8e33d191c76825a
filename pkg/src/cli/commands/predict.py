"""`moodnet predict`: classify one song."""

import argparse
from pathlib import Path

from src.services import ExperimentService

from .common import add_config_argument, load_config, print_json, print_text


def register(subparsers) -> None:
    parser = subparsers.add_parser("predict", help="predict the mood cluster of one song")
    add_config_argument(parser)
    parser.add_argument("--checkpoint", type=Path, required=True, help="checkpoint or run directory")
    parser.add_argument("--audio", type=Path, help="16-bit PCM mono WAV")
    parser.add_argument("--lyrics", type=Path, help="lyrics text file")
    parser.add_argument("--embeddings", type=Path, help="word-vector file (default: paths.embeddings)")
    parser.add_argument("--json", action="store_true", help="print JSON instead of a table")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    prediction = ExperimentService(load_config(args)).predict(
        args.checkpoint,
        audio=args.audio,
        lyrics=args.lyrics,
        embeddings=args.embeddings,
    )
    if args.json:
        print_json(prediction.to_dict())
    else:
        print_text(prediction.to_table())
    return 0
