from .dataset import DatasetManifest, Example, ManifestRecord, check_compatible, load_examples
from .metrics import EvalReport, F1Scores, as_percent, class_names, confusion, f1, macro_f1
from .evaluator import evaluate, evaluate_examples, predict
from .trainer import EPOCH_LOG, EpochRecord, Trainer, TrainResult, epoch_order, train
from .synthetic import SyntheticCorpus, generate_corpus

__all__ = [
    "DatasetManifest",
    "Example",
    "ManifestRecord",
    "check_compatible",
    "load_examples",
    "EvalReport",
    "F1Scores",
    "as_percent",
    "class_names",
    "confusion",
    "f1",
    "macro_f1",
    "evaluate",
    "evaluate_examples",
    "predict",
    "EPOCH_LOG",
    "EpochRecord",
    "Trainer",
    "TrainResult",
    "epoch_order",
    "train",
    "SyntheticCorpus",
    "generate_corpus",
]
