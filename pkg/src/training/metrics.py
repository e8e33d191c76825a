"""Confusion-matrix metrics: per-class precision, recall, F1 and macro F1."""

from dataclasses import dataclass
from typing import Any, Dict, Sequence

import numpy as np
from sklearn.metrics import confusion_matrix

from src.core.models import N_CLUSTERS, MoodCluster
from src.exception import ValidationError


@dataclass(frozen=True)
class F1Scores:
    precision: np.ndarray
    recall: np.ndarray
    f1: np.ndarray
    macro_f1: float


def _ratio(num: np.ndarray, den: np.ndarray) -> np.ndarray:
    # 0/0 -> 0
    return np.divide(num, den, out=np.zeros(num.shape, dtype=np.float64), where=den > 0)


def f1(confusion: np.ndarray) -> F1Scores:
    """Scores from a k x k count matrix with rows = true class, columns = predicted."""
    counts = np.asarray(confusion)
    if counts.ndim != 2 or counts.shape[0] != counts.shape[1]:
        raise ValidationError(f"confusion matrix must be square, got {counts.shape}", field="confusion")
    if np.any(counts < 0):
        raise ValidationError("confusion matrix has negative counts", field="confusion")
    counts = counts.astype(np.float64)

    tp = np.diag(counts)
    precision = _ratio(tp, counts.sum(axis=0))
    recall = _ratio(tp, counts.sum(axis=1))
    scores = _ratio(2.0 * precision * recall, precision + recall)
    return F1Scores(precision=precision, recall=recall, f1=scores, macro_f1=float(scores.mean()))


def confusion(y_true: Sequence[int], y_pred: Sequence[int], n_classes: int = N_CLUSTERS) -> np.ndarray:
    if len(y_true) != len(y_pred):
        raise ValidationError(f"{len(y_true)} labels but {len(y_pred)} predictions", field="predictions")
    if len(y_true) == 0:
        return np.zeros((n_classes, n_classes), dtype=np.int64)
    return confusion_matrix(y_true, y_pred, labels=list(range(n_classes))).astype(np.int64)


def macro_f1(y_true: Sequence[int], y_pred: Sequence[int], n_classes: int = N_CLUSTERS) -> float:
    return f1(confusion(y_true, y_pred, n_classes)).macro_f1


def class_names(n_classes: int) -> Sequence[str]:
    """Mood cluster numerals for five classes, plain indices otherwise."""
    if n_classes == N_CLUSTERS:
        return [c.value for c in MoodCluster]
    return [str(i) for i in range(n_classes)]


def as_percent(value: float) -> str:
    """F1 in [0, 1] printed as a two-decimal percentage, e.g. 0.76342 -> "76.34"."""
    return f"{100.0 * value:.2f}"


@dataclass(frozen=True)
class EvalReport:
    confusion: np.ndarray
    precision: np.ndarray
    recall: np.ndarray
    f1: np.ndarray
    macro_f1: float
    n_samples: int

    @classmethod
    def from_confusion(cls, matrix: np.ndarray) -> "EvalReport":
        scores = f1(matrix)
        return cls(
            confusion=np.asarray(matrix, dtype=np.int64),
            precision=scores.precision,
            recall=scores.recall,
            f1=scores.f1,
            macro_f1=scores.macro_f1,
            n_samples=int(np.asarray(matrix).sum()),
        )

    @classmethod
    def from_predictions(cls, y_true: Sequence[int], y_pred: Sequence[int], n_classes: int = N_CLUSTERS) -> "EvalReport":
        return cls.from_confusion(confusion(y_true, y_pred, n_classes))

    @property
    def support(self) -> np.ndarray:
        """True-class counts (confusion row sums)."""
        return self.confusion.sum(axis=1)

    @property
    def class_names(self) -> Sequence[str]:
        return class_names(self.confusion.shape[0])

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n_samples": self.n_samples,
            "macro_f1": self.macro_f1,
            "confusion": self.confusion.tolist(),
            "classes": {
                name: {
                    "precision": float(self.precision[i]),
                    "recall": float(self.recall[i]),
                    "f1": float(self.f1[i]),
                    "support": int(self.support[i]),
                }
                for i, name in enumerate(self.class_names)
            },
        }

    def to_table(self) -> str:
        """Per-class scores as percentages, the confusion matrix and the macro F1."""
        names = self.class_names
        lines = [f"{'cluster':<8}{'precision':>10}{'recall':>10}{'f1':>10}{'support':>9}"]
        for i, name in enumerate(names):
            lines.append(
                f"{name:<8}{as_percent(self.precision[i]):>10}{as_percent(self.recall[i]):>10}"
                f"{as_percent(self.f1[i]):>10}{int(self.support[i]):>9}"
            )
        lines.append("")
        lines.append("confusion (rows = true, cols = predicted)")
        lines.append(" " * 8 + "".join(f"{n:>6}" for n in names))
        for i, name in enumerate(names):
            lines.append(f"{name:<8}" + "".join(f"{int(c):>6}" for c in self.confusion[i]))
        lines.append("")
        lines.append(f"macro F1 {as_percent(self.macro_f1)}  (n={self.n_samples})")
        return "\n".join(lines)
