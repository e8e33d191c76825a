import numpy as np
import pytest
from sklearn.metrics import f1_score, precision_recall_fscore_support

from src.exception import ValidationError
from src.training import EvalReport, as_percent, confusion, f1, macro_f1


def test_worked_example():
    # class 0: TP=2, FP=1, FN=1
    matrix = np.array([
        [2, 1],
        [1, 0],
    ])
    scores = f1(matrix)
    assert scores.precision[0] == pytest.approx(2 / 3)
    assert scores.recall[0] == pytest.approx(2 / 3)
    assert scores.f1[0] == pytest.approx(2 / 3)
    assert scores.f1[1] == 0.0
    assert scores.macro_f1 == pytest.approx(1 / 3)


def test_perfect_predictions():
    labels = [0, 1, 2, 3, 4, 4, 3]
    assert macro_f1(labels, labels) == 1.0


def test_absent_class_counts_as_zero():
    scores = f1(np.diag([3, 3, 0, 3, 3]))
    assert scores.f1.tolist() == [1.0, 1.0, 0.0, 1.0, 1.0]
    assert scores.macro_f1 == pytest.approx(0.8)


def test_always_predicting_one_class():
    y_true = [0, 1, 2, 3, 4] * 4
    report = EvalReport.from_predictions(y_true, [0] * len(y_true))
    assert report.recall.tolist() == [1.0, 0.0, 0.0, 0.0, 0.0]
    assert report.precision[0] == pytest.approx(0.2)
    assert report.support.tolist() == [4] * 5


def test_matches_sklearn_on_random_labelings():
    rng = np.random.default_rng(7)
    labels = list(range(5))
    for _ in range(1000):
        n = int(rng.integers(1, 60))
        y_true = rng.integers(0, 5, size=n)
        y_pred = rng.integers(0, 5, size=n)
        expected = f1_score(y_true, y_pred, labels=labels, average="macro", zero_division=0)
        assert abs(macro_f1(y_true, y_pred) - expected) < 1e-12


def test_per_class_matches_sklearn(rng):
    y_true = rng.integers(0, 5, size=200)
    y_pred = np.where(rng.random(200) < 0.6, y_true, rng.integers(0, 5, size=200))
    precision, recall, scores, support = precision_recall_fscore_support(
        y_true, y_pred, labels=list(range(5)), zero_division=0
    )
    report = EvalReport.from_predictions(y_true, y_pred)
    np.testing.assert_allclose(report.precision, precision, atol=1e-12)
    np.testing.assert_allclose(report.recall, recall, atol=1e-12)
    np.testing.assert_allclose(report.f1, scores, atol=1e-12)
    assert report.support.tolist() == support.tolist()


def test_sample_order_does_not_matter(rng):
    y_true = rng.integers(0, 5, size=80)
    y_pred = rng.integers(0, 5, size=80)
    order = rng.permutation(80)
    assert macro_f1(y_true, y_pred) == pytest.approx(macro_f1(y_true[order], y_pred[order]), abs=1e-15)


def test_confusion_counts():
    matrix = confusion([0, 0, 1, 4], [0, 1, 1, 2])
    assert matrix.shape == (5, 5)
    assert matrix.sum() == 4
    assert matrix[0, 0] == 1 and matrix[0, 1] == 1 and matrix[4, 2] == 1


def test_length_mismatch():
    with pytest.raises(ValidationError):
        confusion([0, 1], [0])


@pytest.mark.parametrize("matrix", [np.zeros((2, 3)), np.array([[1, -1], [0, 1]])])
def test_invalid_confusion(matrix):
    with pytest.raises(ValidationError):
        f1(matrix)


def test_report_rendering():
    report = EvalReport.from_predictions([0, 1, 2, 3, 4], [0, 1, 2, 3, 3])
    assert as_percent(0.76342) == "76.34"
    table = report.to_table()
    assert "macro F1 73.33" in table
    payload = report.to_dict()
    assert payload["n_samples"] == 5
    assert set(payload["classes"]) == {"I", "II", "III", "IV", "V"}
    assert payload["classes"]["IV"]["precision"] == pytest.approx(0.5)


def test_relabeling_classes_permutes_per_class_scores(rng):
    y_true = rng.integers(0, 5, size=120)
    y_pred = np.where(rng.random(120) < 0.5, y_true, rng.integers(0, 5, size=120))
    relabel = rng.permutation(5)
    original = f1(confusion(y_true, y_pred))
    relabeled = f1(confusion(relabel[y_true], relabel[y_pred]))
    np.testing.assert_allclose(relabeled.f1[relabel], original.f1, atol=1e-15)
    assert relabeled.macro_f1 == pytest.approx(original.macro_f1, abs=1e-15)
