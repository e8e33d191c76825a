"""`moodnet train`: train from a feature manifest and write the checkpoint series."""

import argparse
from pathlib import Path

from src.services import ExperimentService

from .common import add_config_argument, load_config, print_text


def register(subparsers) -> None:
    parser = subparsers.add_parser("train", help="train a model")
    add_config_argument(parser, required=True)
    parser.add_argument("--manifest", type=Path, help="feature manifest (default: from the config)")
    parser.add_argument("--out", type=Path, help="run directory (default: paths.checkpoint_dir)")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    result = ExperimentService(load_config(args)).train(manifest=args.manifest, run_dir=args.out)
    lines = [f"{'epoch':>5}  {'loss':>10}  {'val_macro_f1':>12}"]
    for record in result.history:
        val = "" if record.val_macro_f1 is None else f"{100.0 * record.val_macro_f1:.2f}"
        lines.append(f"{record.epoch:>5}  {record.loss:>10.6f}  {val:>12}")
    lines.append(f"checkpoints: {result.run_dir}")
    print_text("\n".join(lines))
    return 0
