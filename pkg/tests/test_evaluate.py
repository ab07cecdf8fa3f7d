"""Unit tests for linkage quality metrics."""

import numpy as np
import pytest

from layerlink.evaluate import evaluate, find_optimal_threshold


def test_evaluate_hand_case():
    predicted = np.array([True, True, False])
    truth = np.array([True, False, False])
    metrics = evaluate(predicted, truth, total_true=2)
    assert (metrics.true_positives, metrics.false_positives) == (1, 1)
    assert metrics.false_negatives == 1
    assert metrics.precision == pytest.approx(0.5)
    assert metrics.recall == pytest.approx(0.5)
    assert metrics.f1 == pytest.approx(0.5)


def test_evaluate_zero_predictions():
    metrics = evaluate(np.zeros(3, dtype=bool), np.array([True, False, False]), 1)
    assert metrics.precision == 0.0
    assert metrics.recall == 0.0
    assert metrics.f1 == 0.0


def test_evaluate_counts_blocking_misses_as_false_negatives():
    # Two true pairs exist but only one survived blocking.
    predicted = np.array([True])
    truth = np.array([True])
    metrics = evaluate(predicted, truth, total_true=2)
    assert metrics.false_negatives == 1
    assert metrics.recall == pytest.approx(0.5)
    assert metrics.precision == pytest.approx(1.0)


def test_evaluate_validation():
    with pytest.raises(ValueError):
        evaluate(np.array([True]), np.array([True, False]), 1)
    with pytest.raises(ValueError):
        # Claims more hits than true pairs exist.
        evaluate(np.array([True, True]), np.array([True, True]), 1)


def test_evaluate_perfect():
    predicted = np.array([True, False, True])
    truth = np.array([True, False, True])
    metrics = evaluate(predicted, truth, 2)
    assert metrics.f1 == pytest.approx(1.0)
    assert metrics.false_negatives == 0


def test_find_optimal_threshold_hand_case():
    sims = np.array([0.6, 0.7, 0.8, 0.9])
    truth = np.array([False, False, True, True])
    threshold, f1 = find_optimal_threshold(sims, truth, total_true=2)
    # Perfect separation is first reached at the smallest grid value
    # strictly above 0.7.
    assert threshold == pytest.approx(0.705)
    assert f1 == pytest.approx(1.0)


def test_find_optimal_threshold_tie_prefers_smallest():
    # All-true candidates: every threshold at or below 0.9 gives F1 1.
    sims = np.array([0.9, 0.95])
    truth = np.array([True, True])
    threshold, f1 = find_optimal_threshold(sims, truth, total_true=2)
    assert threshold == 0.5
    assert f1 == pytest.approx(1.0)


def test_find_optimal_threshold_custom_grid():
    sims = np.array([0.4, 0.62])
    truth = np.array([False, True])
    threshold, f1 = find_optimal_threshold(
        sims, truth, total_true=1, low=0.6, high=0.7, step=0.01
    )
    assert threshold == pytest.approx(0.6)
    assert f1 == pytest.approx(1.0)
