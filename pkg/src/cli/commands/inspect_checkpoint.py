"""`moodnet inspect`: list parameter names, shapes and the total count."""

import argparse
from pathlib import Path

from src.services import ExperimentService

from .common import print_text


def register(subparsers) -> None:
    parser = subparsers.add_parser("inspect", help="list the parameters of a checkpoint")
    parser.add_argument("--checkpoint", type=Path, required=True, help="checkpoint or run directory")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    info = ExperimentService.inspect(args.checkpoint)
    config = info["config"]
    width = max(len(p["name"]) for p in info["parameters"])
    lines = [
        f"depth {config['depth']}  modalities {'+'.join(config['modalities'])}  "
        f"epochs {info['epochs_completed']}  adam_step {info['adam_step']}",
    ]
    for p in info["parameters"]:
        lines.append(f"{p['name']:<{width}}  {'x'.join(str(e) for e in p['shape']):>16}  {p['size']:>12}")
    lines.append(f"total parameters: {info['total_parameters']}")
    print_text("\n".join(lines))
    return 0
