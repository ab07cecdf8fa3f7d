"""Adaptive classifiers for the record and attribute layers.

The record layer uses a movable similarity threshold that follows
review feedback in bounded steps.  The attribute layer uses a forest of
shallow decision trees that grows with each review batch, evicting its
oldest trees once full, so the model tracks the newest labels without
retraining from scratch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .matching import Layer, Prediction


@dataclass
class LabeledInstance:
    """One labeled pair as consumed by a model update.

    ``features`` is the record-level similarity for the threshold model
    or the attribute-level feature vector for the forest.  The weight
    equals the labeling layer's confidence, doubled for clerical labels
    because a human decision should outweigh a model guess.
    """

    pair_id: int
    features: float | np.ndarray
    label: bool
    weight: float
    origin: Layer


def instance_weight(origin: Layer, confidence: float) -> float:
    """Weight of a labeled instance given who labeled it."""
    if origin is Layer.CLERICAL:
        return 2.0 * confidence
    return confidence


@dataclass(frozen=True)
class ThresholdClassifier:
    """Record-level classifier: match iff similarity >= threshold.

    Review feedback moves the threshold over a fixed grid centered on
    the initial value; a single update never moves it by more than
    ``max_step``, which keeps one noisy batch from derailing the model.
    """

    threshold: float
    initial_threshold: float
    max_total_shift: float = 0.10
    max_step: float = 0.02
    grid_step: float = 0.01

    @classmethod
    def start(cls, initial_threshold: float, **kwargs) -> "ThresholdClassifier":
        return cls(
            threshold=initial_threshold,
            initial_threshold=initial_threshold,
            **kwargs,
        )

    def confidence(self, sims: np.ndarray | float) -> np.ndarray | float:
        """Confidence grows linearly with distance from the threshold.

        The slope is asymmetric: similarities below the threshold reach
        full confidence within 0.05, above within 0.10, mirroring the
        wider spread of true matches above the decision boundary.
        """
        sims = np.asarray(sims, dtype=np.float64)
        distance = np.abs(sims - self.threshold)
        scale = np.where(sims < self.threshold, 0.05, 0.10)
        return 0.5 * (1.0 + np.minimum(1.0, distance / scale))

    def classify(self, sim: float) -> Prediction:
        if not 0.0 <= sim <= 1.0:
            raise ValueError("similarity must lie in [0, 1]")
        return Prediction(sim >= self.threshold, float(self.confidence(sim)))

    def classify_batch(self, sims: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        sims = np.asarray(sims, dtype=np.float64)
        return sims >= self.threshold, np.asarray(self.confidence(sims))

    def candidate_grid(self) -> np.ndarray:
        steps = int(round(self.max_total_shift / self.grid_step))
        offsets = np.arange(-steps, steps + 1, dtype=np.float64)
        return np.round(self.initial_threshold + offsets * self.grid_step, 10)

    def best_candidate(self, instances: Sequence[LabeledInstance]) -> float:
        """Grid candidate with the highest weighted accuracy on the store.

        Ties break toward the current threshold, then toward the smaller
        candidate, so repeated updates on the same store are stable.
        """
        if not instances:
            raise ValueError("cannot update from an empty labeled store")
        sims = np.array([float(i.features) for i in instances], dtype=np.float64)
        labels = np.array([i.label for i in instances], dtype=bool)
        weights = np.array([i.weight for i in instances], dtype=np.float64)
        candidates = self.candidate_grid()
        predicted = sims[None, :] >= candidates[:, None]
        accuracy = (weights[None, :] * (predicted == labels[None, :])).sum(axis=1)
        best = accuracy.max()
        tied = candidates[np.isclose(accuracy, best, rtol=0.0, atol=1e-12)]
        order = np.lexsort((tied, np.abs(tied - self.threshold)))
        return float(tied[order[0]])

    def move_toward(self, target: float) -> "ThresholdClassifier":
        """Move toward ``target``, clamped to ``max_step`` per update."""
        shift = min(self.max_step, max(-self.max_step, target - self.threshold))
        return replace(self, threshold=round(self.threshold + shift, 10))

    def update(self, instances: Sequence[LabeledInstance]) -> "ThresholdClassifier":
        """One bounded threshold move toward the accuracy-best candidate."""
        return self.move_toward(self.best_candidate(instances))

    def to_dict(self) -> dict:
        return {
            "version": 1,
            "kind": "threshold",
            "threshold": self.threshold,
            "initial_threshold": self.initial_threshold,
            "max_total_shift": self.max_total_shift,
            "max_step": self.max_step,
            "grid_step": self.grid_step,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ThresholdClassifier":
        if data.get("kind") != "threshold":
            raise ValueError("not a threshold model snapshot")
        fields = {k: data[k] for k in (
            "threshold", "initial_threshold", "max_total_shift", "max_step", "grid_step",
        )}
        return cls(**fields)


@dataclass
class _Node:
    feature: int = -1
    threshold: float = 0.0
    impurity: float = 0.0
    left: "_Node | None" = None
    right: "_Node | None" = None
    vote: bool = False
    match_weight: float = 0.0
    total_weight: float = 0.0

    @property
    def is_leaf(self) -> bool:
        return self.left is None

    def to_dict(self) -> dict:
        if self.is_leaf:
            return {
                "vote": bool(self.vote),
                "impurity": self.impurity,
                "match_weight": self.match_weight,
                "total_weight": self.total_weight,
            }
        return {
            "feature": self.feature,
            "threshold": self.threshold,
            "impurity": self.impurity,
            "left": self.left.to_dict(),
            "right": self.right.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "_Node":
        if "feature" in data:
            return cls(
                feature=data["feature"],
                threshold=data["threshold"],
                impurity=data.get("impurity", 0.0),
                left=cls.from_dict(data["left"]),
                right=cls.from_dict(data["right"]),
            )
        return cls(
            vote=bool(data["vote"]),
            impurity=data.get("impurity", 0.0),
            match_weight=data.get("match_weight", 0.0),
            total_weight=data.get("total_weight", 0.0),
        )


def _gini(match_weight: float, total_weight: float) -> float:
    if total_weight <= 0.0:
        return 0.0
    share = match_weight / total_weight
    return 1.0 - share * share - (1.0 - share) * (1.0 - share)


class DecisionTree:
    """Binary CART tree with Gini splits and weighted samples."""

    def __init__(self, root: _Node) -> None:
        self.root = root

    @classmethod
    def fit(
        cls,
        features: np.ndarray,
        labels: np.ndarray,
        weights: np.ndarray,
        *,
        max_depth: int = 6,
        min_leaf_weight: float = 1.0,
        features_per_split: int | None = None,
        rng: np.random.Generator | None = None,
    ) -> "DecisionTree":
        if features.ndim != 2 or len(features) == 0:
            raise ValueError("features must be a nonempty 2-d array")
        builder = _TreeBuilder(max_depth, min_leaf_weight, features_per_split, rng)
        return cls(builder.build(features, labels.astype(bool), weights, depth=0))

    def predict_batch(self, features: np.ndarray) -> np.ndarray:
        votes = np.zeros(len(features), dtype=bool)
        self._descend(self.root, features, np.arange(len(features)), votes)
        return votes

    def _descend(self, node: _Node, features, index, votes) -> None:
        if node.is_leaf:
            votes[index] = node.vote
            return
        go_left = features[index, node.feature] <= node.threshold
        self._descend(node.left, features, index[go_left], votes)
        self._descend(node.right, features, index[~go_left], votes)

    def split_sequence(self) -> list[tuple[int, float, float]]:
        """(feature, threshold, impurity) per split, in preorder.

        Exposed so audits can replay training decisions against an
        independent split search.
        """
        out: list[tuple[int, float, float]] = []

        def walk(node: _Node) -> None:
            if node.is_leaf:
                return
            out.append((node.feature, node.threshold, node.impurity))
            walk(node.left)
            walk(node.right)

        walk(self.root)
        return out


class _TreeBuilder:
    def __init__(
        self,
        max_depth: int,
        min_leaf_weight: float,
        features_per_split: int | None,
        rng: np.random.Generator | None,
    ) -> None:
        self.max_depth = max_depth
        self.min_leaf_weight = min_leaf_weight
        self.features_per_split = features_per_split
        self.rng = rng

    def build(self, X, y, w, depth: int) -> _Node:
        match_weight = float(w[y].sum())
        total_weight = float(w.sum())
        node = _Node(
            impurity=_gini(match_weight, total_weight),
            vote=match_weight * 2.0 > total_weight,
            match_weight=match_weight,
            total_weight=total_weight,
        )
        if (
            depth >= self.max_depth
            or node.impurity == 0.0
            or total_weight < 2.0 * self.min_leaf_weight
        ):
            return node
        split = self._best_split(X, y, w)
        if split is None:
            return node
        feature, threshold = split
        go_left = X[:, feature] <= threshold
        node.feature = feature
        node.threshold = threshold
        node.left = self.build(X[go_left], y[go_left], w[go_left], depth + 1)
        node.right = self.build(X[~go_left], y[~go_left], w[~go_left], depth + 1)
        return node

    def _candidate_features(self, n_features: int) -> np.ndarray:
        if self.features_per_split is None or self.features_per_split >= n_features:
            return np.arange(n_features)
        chosen = self.rng.choice(n_features, size=self.features_per_split, replace=False)
        return np.sort(chosen)

    def _best_split(self, X, y, w) -> tuple[int, float] | None:
        best_score = math.inf
        best: tuple[int, float] | None = None
        total_w = w.sum()
        total_match = float(w[y].sum())
        for feature in self._candidate_features(X.shape[1]):
            values = X[:, feature]
            order = np.argsort(values, kind="stable")
            v = values[order]
            cw = np.cumsum(w[order])
            cm = np.cumsum(np.where(y[order], w[order], 0.0))
            # Split points sit between distinct consecutive values.
            cuts = np.nonzero(v[:-1] < v[1:])[0]
            if len(cuts) == 0:
                continue
            left_w = cw[cuts]
            right_w = total_w - left_w
            valid = (left_w >= self.min_leaf_weight) & (right_w >= self.min_leaf_weight)
            if not valid.any():
                continue
            cuts = cuts[valid]
            left_w = left_w[valid]
            right_w = right_w[valid]
            left_m = cm[cuts]
            right_m = total_match - left_m
            left_share = left_m / left_w
            right_share = right_m / right_w
            gini_left = 1.0 - left_share**2 - (1.0 - left_share) ** 2
            gini_right = 1.0 - right_share**2 - (1.0 - right_share) ** 2
            scores = left_w * gini_left + right_w * gini_right
            k = int(np.argmin(scores))
            if scores[k] < best_score - 1e-12:
                best_score = float(scores[k])
                best = (int(feature), float((v[cuts[k]] + v[cuts[k] + 1]) / 2.0))
        return best


@dataclass
class ForestConfig:
    initial_trees: int = 10
    trees_per_update: int = 10
    max_trees: int = 100
    max_depth: int = 6
    bag_fraction: float = 0.7
    min_leaf_weight: float = 1.0


@dataclass
class EvolvingForest:
    """A forest that grows by whole tree batches and forgets the oldest.

    Updates append ``trees_per_update`` fresh trees trained on the full
    current labeled store; once ``max_trees`` is reached the oldest
    trees are evicted, so stale decision boundaries age out.
    """

    trees: list[DecisionTree] = field(default_factory=list)
    config: ForestConfig = field(default_factory=ForestConfig)
    degenerate_class: bool | None = None
    updates: int = 0

    @property
    def is_degenerate(self) -> bool:
        return not self.trees

    @classmethod
    def bootstrap(
        cls,
        instances: Sequence[LabeledInstance],
        rng: np.random.Generator,
        config: ForestConfig | None = None,
    ) -> "EvolvingForest":
        """Train the initial trees from prelabeled pairs.

        A single-class store cannot support a split, so the forest
        starts degenerate: it predicts the one observed class with no
        confidence until an update supplies both classes.
        """
        config = config or ForestConfig()
        if not instances:
            raise ValueError("cannot bootstrap from an empty labeled store")
        labels = {bool(i.label) for i in instances}
        if len(labels) == 1:
            return cls(trees=[], config=config, degenerate_class=labels.pop())
        trees = _fit_trees(instances, config.initial_trees, config, rng)
        return cls(trees=trees, config=config)

    def update(
        self, instances: Sequence[LabeledInstance], rng: np.random.Generator
    ) -> "EvolvingForest":
        """New forest with a fresh tree batch appended, oldest evicted."""
        if not instances:
            raise ValueError("cannot update from an empty labeled store")
        labels = {bool(i.label) for i in instances}
        if len(labels) == 1 and self.is_degenerate:
            return EvolvingForest(
                trees=[],
                config=self.config,
                degenerate_class=labels.pop(),
                updates=self.updates + 1,
            )
        fresh = _fit_trees(instances, self.config.trees_per_update, self.config, rng)
        trees = (self.trees + fresh)[-self.config.max_trees :]
        return EvolvingForest(trees=trees, config=self.config, updates=self.updates + 1)

    def classify_batch(self, features: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Majority vote per row; confidence is the raw vote share."""
        features = np.asarray(features, dtype=np.float64)
        if self.is_degenerate:
            if self.degenerate_class is None:
                raise ValueError("forest has no trees and no fallback class")
            n = len(features)
            return (
                np.full(n, self.degenerate_class, dtype=bool),
                np.full(n, 0.5, dtype=np.float64),
            )
        votes = np.zeros(len(features), dtype=np.int64)
        for tree in self.trees:
            votes += tree.predict_batch(features)
        share = votes / len(self.trees)
        is_match = share > 0.5
        confidence = np.where(is_match, share, 1.0 - share)
        return is_match, confidence

    def classify(self, features: np.ndarray) -> Prediction:
        is_match, confidence = self.classify_batch(features[None, :])
        return Prediction(bool(is_match[0]), float(confidence[0]))

    def to_dict(self) -> dict:
        return {
            "version": 1,
            "kind": "evolving-forest",
            "config": self.config.__dict__.copy(),
            "degenerate_class": self.degenerate_class,
            "updates": self.updates,
            "trees": [tree.root.to_dict() for tree in self.trees],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "EvolvingForest":
        if data.get("kind") != "evolving-forest":
            raise ValueError("not a forest snapshot")
        return cls(
            trees=[DecisionTree(_Node.from_dict(t)) for t in data["trees"]],
            config=ForestConfig(**data["config"]),
            degenerate_class=data.get("degenerate_class"),
            updates=data.get("updates", 0),
        )


def _fit_trees(
    instances: Sequence[LabeledInstance],
    count: int,
    config: ForestConfig,
    rng: np.random.Generator,
) -> list[DecisionTree]:
    X = np.array([np.asarray(i.features, dtype=np.float64) for i in instances])
    y = np.array([i.label for i in instances], dtype=bool)
    w = np.array([i.weight for i in instances], dtype=np.float64)
    if w.sum() <= 0.0:
        raise ValueError("instance weights must be positive")
    per_split = math.ceil(math.sqrt(X.shape[1]))
    bag_size = max(1, round(config.bag_fraction * len(X)))
    probabilities = w / w.sum()
    trees = []
    for _ in range(count):
        bag = rng.choice(len(X), size=bag_size, replace=True, p=probabilities)
        trees.append(
            DecisionTree.fit(
                X[bag],
                y[bag],
                np.ones(bag_size, dtype=np.float64),
                max_depth=config.max_depth,
                min_leaf_weight=config.min_leaf_weight,
                features_per_split=per_split,
                rng=rng,
            )
        )
    return trees
