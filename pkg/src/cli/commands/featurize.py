"""`moodnet featurize`: raw WAV + lyrics assets -> feature cache and feature manifest."""

import argparse
from pathlib import Path

from src.exception import EXIT_DATA
from src.services import ExperimentService

from .common import add_config_argument, load_config, print_json


def register(subparsers) -> None:
    parser = subparsers.add_parser("featurize", help="compute mel-spectrogram and lyrics tensors")
    add_config_argument(parser)
    parser.add_argument("--manifest", type=Path, help="raw-asset manifest (default: paths.raw_manifest)")
    parser.add_argument("--out", type=Path, help="feature cache directory (default: paths.cache_dir)")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    config = load_config(args)
    if args.out is not None:
        config = config.with_cache_dir(args.out.resolve())
    summary = ExperimentService(config).featurize(raw_manifest=args.manifest)
    print_json(summary.to_dict())
    return 0 if summary.ok else EXIT_DATA
