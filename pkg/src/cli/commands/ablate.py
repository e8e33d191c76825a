"""`moodnet ablate`: featurize, train and evaluate several configs and tabulate macro F1."""

import argparse
from pathlib import Path

from src.exception import EXIT_DATA
from src.services import ExperimentService, ablation_table
from src.tensor import atomic_write_bytes

from .common import print_text


def register(subparsers) -> None:
    parser = subparsers.add_parser("ablate", help="compare configurations (modality / depth ablation)")
    parser.add_argument("configs", type=Path, nargs="+", help="one run config per ablation arm")
    parser.add_argument("--out", type=Path, required=True, help="parent directory for the run directories")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    rows = ExperimentService.ablate(args.configs, args.out)
    table = ablation_table(rows)
    atomic_write_bytes(args.out / "ablation.txt", (table + "\n").encode("utf-8"))
    print_text(table)
    return EXIT_DATA if any(row.failed for row in rows) else 0
