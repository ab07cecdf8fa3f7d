"""Linkage quality metrics against ground truth."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Metrics:
    precision: float
    recall: float
    f1: float
    true_positives: int
    false_positives: int
    false_negatives: int


def evaluate(
    predicted_match: np.ndarray, truth_match: np.ndarray, total_true: int
) -> Metrics:
    """Precision/recall/F1 of predictions over the candidate set.

    ``total_true`` is the number of true pairs in the ground truth;
    true pairs that blocking never produced therefore count as misses.
    Zero predicted matches yield precision 0 by convention.
    """
    predicted_match = np.asarray(predicted_match, dtype=bool)
    truth_match = np.asarray(truth_match, dtype=bool)
    if predicted_match.shape != truth_match.shape:
        raise ValueError("prediction and truth arrays differ in shape")
    tp = int(np.count_nonzero(predicted_match & truth_match))
    fp = int(np.count_nonzero(predicted_match & ~truth_match))
    if tp > total_true:
        raise ValueError("more true positives than true pairs")
    fn = total_true - tp
    precision = tp / (tp + fp) if tp + fp > 0 else 0.0
    recall = tp / total_true if total_true > 0 else 0.0
    f1 = (
        2.0 * precision * recall / (precision + recall)
        if precision + recall > 0
        else 0.0
    )
    return Metrics(precision, recall, f1, tp, fp, fn)


def find_optimal_threshold(
    sims: np.ndarray,
    truth_match: np.ndarray,
    total_true: int,
    *,
    low: float = 0.5,
    high: float = 1.0,
    step: float = 0.005,
) -> tuple[float, float]:
    """Smallest threshold maximizing F1 over a fixed sweep grid.

    Returns (threshold, f1).  Ties resolve to the smallest threshold so
    the result is deterministic.
    """
    sims = np.asarray(sims, dtype=np.float64)
    best_t = low
    best_f1 = -1.0
    steps = int(round((high - low) / step))
    for k in range(steps + 1):
        threshold = round(low + k * step, 10)
        metrics = evaluate(sims >= threshold, truth_match, total_true)
        if metrics.f1 > best_f1 + 1e-12:
            best_f1 = metrics.f1
            best_t = threshold
    return best_t, best_f1
