"""Candidate generation and similarity computation over encoded records."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum
from typing import Mapping, NamedTuple, Sequence

import numpy as np

from .encoding import ATTRIBUTES, EncodedRecord, KeyedAttributeEncoding

# Attribute weights for the single-layer weighted-mean baseline,
# proportional to how discriminating each attribute is on typical
# person data.
BASELINE_WEIGHTS = {
    "first_name": 12.04,
    "middle_name": 15.15,
    "last_name": 5.12,
    "yob": 6.58,
    "city": 8.23,
    "zip": 10.95,
    "pob": 6.63,
}


class Layer(IntEnum):
    """The three disclosure layers, ordered by how much they reveal."""

    RECORD = 0
    ATTRIBUTE = 1
    CLERICAL = 2

    @property
    def label(self) -> str:
        return self.name.lower()

    @classmethod
    def from_label(cls, label: str) -> "Layer":
        try:
            return cls[label.upper()]
        except KeyError:
            raise ValueError(f"unknown layer {label!r}") from None


class Prediction(NamedTuple):
    """A classification with its estimated probability of being right.

    ``confidence`` lives in [0.5, 1.0]: 0.5 means the classifier is
    guessing, 1.0 means it is certain.
    """

    is_match: bool
    confidence: float


@dataclass
class CandidatePair:
    """One blocked record pair and everything learned about it so far."""

    pair_id: int
    id_a: str
    id_b: str
    record_sim: float | None = None
    attribute_sims: dict[str, float] | None = None
    frequency_features: dict[str, int] | None = None
    prediction: Prediction | None = None
    label_layer: Layer = Layer.RECORD


def dice(a: np.ndarray, b: np.ndarray) -> float:
    """Dice coefficient of two bit vectors: 2|a&b| / (|a|+|b|)."""
    if a.shape != b.shape:
        raise ValueError("bit vectors differ in length")
    total = int(np.count_nonzero(a)) + int(np.count_nonzero(b))
    if total == 0:
        return 0.0
    common = int(np.count_nonzero(np.logical_and(a, b)))
    return 2.0 * common / total


_POPCOUNT = np.array([bin(v).count("1") for v in range(256)], dtype=np.uint16)


def pack_vectors(vectors: Sequence[np.ndarray]) -> np.ndarray:
    """Pack boolean vectors into a (n, length/8) uint8 matrix."""
    return np.packbits(np.asarray(vectors, dtype=bool), axis=1)


def dice_packed(
    packed_a: np.ndarray,
    packed_b: np.ndarray,
    index_a: np.ndarray,
    index_b: np.ndarray,
) -> np.ndarray:
    """Vectorized Dice over packed vectors for many (a, b) index pairs.

    Equivalent to calling :func:`dice` per pair; kept vectorized because
    candidate sets run into the hundreds of thousands.
    """
    rows_a = packed_a[index_a]
    rows_b = packed_b[index_b]
    common = _POPCOUNT[np.bitwise_and(rows_a, rows_b)].sum(axis=1, dtype=np.int64)
    totals = (
        _POPCOUNT[rows_a].sum(axis=1, dtype=np.int64)
        + _POPCOUNT[rows_b].sum(axis=1, dtype=np.int64)
    )
    sims = np.zeros(len(common), dtype=np.float64)
    nonzero = totals > 0
    sims[nonzero] = 2.0 * common[nonzero] / totals[nonzero]
    return sims


def candidate_indices(
    records_a: Sequence[EncodedRecord], records_b: Sequence[EncodedRecord]
) -> tuple[np.ndarray, np.ndarray]:
    """Indexes of all cross-source pairs sharing a blocking digest.

    Output is sorted by (index_a, index_b) and independent of input
    bucket ordering, which keeps downstream pair ids stable.
    """
    buckets: dict[str, list[int]] = {}
    for i, record in enumerate(records_a):
        for digest in record.blocking_keys:
            buckets.setdefault(digest, []).append(i)
    pairs: set[tuple[int, int]] = set()
    for j, record in enumerate(records_b):
        for digest in record.blocking_keys:
            hit = buckets.get(digest)
            if hit:
                pairs.update((i, j) for i in hit)
    if not pairs:
        return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
    ordered = np.array(sorted(pairs), dtype=np.int64)
    return ordered[:, 0], ordered[:, 1]


def block_candidates(
    records_a: Sequence[EncodedRecord], records_b: Sequence[EncodedRecord]
) -> list[CandidatePair]:
    """Blocked candidate pairs with fresh sequential pair ids."""
    index_a, index_b = candidate_indices(records_a, records_b)
    return [
        CandidatePair(
            pair_id=pair_id,
            id_a=records_a[i].record_id,
            id_b=records_b[j].record_id,
        )
        for pair_id, (i, j) in enumerate(zip(index_a.tolist(), index_b.tolist()))
    ]


@dataclass
class AttributeComparison:
    """Attribute-level similarities and frequency hints for one pair."""

    sims: dict[str, float] = field(default_factory=dict)
    frequency_features: dict[str, int] = field(default_factory=dict)

    ABSENT = -1.0  # sentinel for attributes missing on either side

    def feature_vector(self) -> np.ndarray:
        """Fixed-order model features: 7 similarities then 7 frequency hints."""
        sims = [self.sims.get(attr, self.ABSENT) for attr in ATTRIBUTES]
        freqs = [float(self.frequency_features.get(attr, 0)) for attr in ATTRIBUTES]
        return np.array(sims + freqs, dtype=np.float64)


def compare_attributes(
    enc_a: KeyedAttributeEncoding, enc_b: KeyedAttributeEncoding
) -> AttributeComparison:
    """Per-attribute Dice similarities between two pair-keyed encodings.

    An attribute contributes only when present on both sides.  The
    frequency feature is nonzero only for exactly agreeing attributes:
    the owners' frequency classes are combined by taking the more
    frequent one (smaller class number).
    """
    comparison = AttributeComparison()
    for attribute in ATTRIBUTES:
        fa = enc_a.filters.get(attribute)
        fb = enc_b.filters.get(attribute)
        if fa is None or fb is None:
            continue
        sim = dice(fa, fb)
        comparison.sims[attribute] = sim
        if sim == 1.0:
            la = enc_a.frequency_labels.get(attribute)
            lb = enc_b.frequency_labels.get(attribute)
            labels = [l for l in (la, lb) if l is not None]
            if labels:
                comparison.frequency_features[attribute] = min(labels)
    return comparison


def weighted_mean_similarity(
    attribute_sims: Mapping[str, float],
    weights: Mapping[str, float] = BASELINE_WEIGHTS,
) -> float:
    """Weighted mean of attribute similarities over present attributes.

    Weights of missing attributes are redistributed by renormalizing
    over the present ones, so a sparse pair is not penalized for
    missingness itself.
    """
    present = [a for a in attribute_sims if weights.get(a, 0.0) > 0.0]
    if not present:
        raise ValueError("no attribute similarities to aggregate")
    total = sum(weights[a] for a in present)
    return sum(weights[a] * attribute_sims[a] for a in present) / total
