"""`moodnet synth`: write a synthetic corpus of WAVs, lyrics, embeddings and a raw manifest."""

import argparse
from pathlib import Path

from src.training import generate_corpus

from .common import add_config_argument, load_config, print_json


def register(subparsers) -> None:
    parser = subparsers.add_parser("synth", help="generate a synthetic corpus")
    add_config_argument(parser)
    parser.add_argument("--out", type=Path, required=True, help="corpus directory")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    config = load_config(args)
    corpus = generate_corpus(
        args.out,
        synthetic=config.synthetic,
        features=config.features,
        embedding_dim=config.model.embedding_dim,
        seed=config.seed,
    )
    print_json({
        "root": str(corpus.root),
        "raw_manifest": str(corpus.raw_manifest),
        "embeddings": str(corpus.embeddings),
        "clips": corpus.n_clips,
    })
    return 0
