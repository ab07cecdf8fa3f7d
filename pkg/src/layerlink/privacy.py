"""Privacy instrumentation: frequency skew of encodings, re-identification
risk of disclosed attributes, and the append-only disclosure ledger.

Skewed bit frequencies are what frequency attacks on Bloom-filter
encodings exploit, so flat is good.  The attribute-disclosure risk
score rises with every attribute a reviewer gets to see and falls with
the number of records that remain indistinguishable under that view.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .encoding import ATTRIBUTES


def bit_frequencies(vectors: Sequence[np.ndarray] | np.ndarray) -> np.ndarray:
    """Per-position relative frequency of set bits over a batch."""
    matrix = np.asarray(vectors, dtype=bool)
    if matrix.ndim != 2 or matrix.size == 0:
        raise ValueError("need a nonempty batch of equal-length vectors")
    return matrix.mean(axis=0)


def gini(frequencies: np.ndarray) -> float:
    """Gini coefficient of a frequency vector: 0 = perfectly flat.

    Computed via the sorted closed form; equals the normalized mean
    absolute difference between all position pairs.
    """
    f = np.asarray(frequencies, dtype=np.float64)
    if f.ndim != 1 or f.size == 0:
        raise ValueError("need a nonempty frequency vector")
    if np.any(f < 0):
        raise ValueError("frequencies must be nonnegative")
    total = f.sum()
    if total == 0.0:
        return 0.0
    ranked = np.sort(f)
    n = f.size
    coefficients = 2.0 * np.arange(1, n + 1) - n - 1
    return float((coefficients * ranked).sum() / (n * total))


def jsd(frequencies: np.ndarray) -> float:
    """Jensen-Shannon divergence (base 2) to the uniform distribution.

    The frequency vector is normalized to a distribution over
    positions; the result lies in [0, 1], where 0 means the encoding
    batch sets every position equally often.
    """
    f = np.asarray(frequencies, dtype=np.float64)
    if f.ndim != 1 or f.size == 0:
        raise ValueError("need a nonempty frequency vector")
    if np.any(f < 0):
        raise ValueError("frequencies must be nonnegative")
    total = f.sum()
    if total == 0.0:
        return 0.0
    p = f / total
    u = np.full(f.size, 1.0 / f.size)
    m = 0.5 * (p + u)
    return float(0.5 * (_kl_base2(p, m) + _kl_base2(u, m)))


def _kl_base2(p: np.ndarray, q: np.ndarray) -> float:
    support = p > 0
    return float((p[support] * np.log2(p[support] / q[support])).sum())


@dataclass(frozen=True)
class DisclosedRecord:
    """One record in the clerical pool and what a reviewer saw of it.

    ``values`` are the record's actual attribute values; ``disclosed``
    names the attributes whose plaintext reached the reviewer.
    """

    record_id: str
    values: Mapping[str, str | None]
    disclosed: frozenset[str]


def kapr(
    records: Sequence[DisclosedRecord], total_attributes: int = len(ATTRIBUTES)
) -> float:
    """Average attribute-disclosure risk over a clerical pool.

    Per record: (number of disclosed attributes) over (number of pool
    records consistent with everything disclosed about it), normalized
    by pool size times the full attribute count.  A record that stays
    indistinguishable from many others contributes little risk even if
    much of it was shown.
    """
    if not records:
        raise ValueError("need a nonempty disclosure pool")
    if total_attributes < 1:
        raise ValueError("total_attributes must be >= 1")
    score = 0.0
    for record in records:
        revealed = [(a, record.values.get(a)) for a in record.disclosed]
        if not revealed:
            continue
        matching = 0
        for other in records:
            if all(other.values.get(a) == v for a, v in revealed):
                matching += 1
        score += len(revealed) / matching
    return score / (len(records) * total_attributes)


def availability_stats(records: Sequence[DisclosedRecord]) -> dict[str, float]:
    """Share of clerical-pool records with each attribute disclosed."""
    if not records:
        raise ValueError("need a nonempty disclosure pool")
    counts = {attribute: 0 for attribute in ATTRIBUTES}
    for record in records:
        for attribute in record.disclosed:
            counts[attribute] += 1
    return {a: counts[a] / len(records) for a in ATTRIBUTES}


@dataclass(frozen=True)
class DisclosureEntry:
    """One fulfilled disclosure: which record revealed what, and when."""

    iteration: int
    layer: str
    pair_id: int
    source: str
    record_id: str
    attributes: tuple[str, ...]

    def to_json(self) -> dict:
        return {
            "iteration": self.iteration,
            "layer": self.layer,
            "pair_id": self.pair_id,
            "source": self.source,
            "record_id": self.record_id,
            "attributes": list(self.attributes),
        }


class DisclosureLedger:
    """Append-only record of every disclosure beyond the record layer.

    The ledger is the audit substrate: risk scores are computed from
    it, and policy compliance is checked against it, so nothing may
    ever be rewritten or removed.
    """

    def __init__(self) -> None:
        self._entries: list[DisclosureEntry] = []

    def record(self, entry: DisclosureEntry) -> None:
        self._entries.append(entry)

    @property
    def entries(self) -> tuple[DisclosureEntry, ...]:
        return tuple(self._entries)

    def save(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as handle:
            for entry in self._entries:
                handle.write(
                    json.dumps(entry.to_json(), sort_keys=True, separators=(",", ":"))
                )
                handle.write("\n")

    @classmethod
    def load(cls, path: str | Path) -> "DisclosureLedger":
        ledger = cls()
        with open(path, "r", encoding="utf-8") as handle:
            for line in handle:
                data = json.loads(line)
                ledger.record(
                    DisclosureEntry(
                        iteration=data["iteration"],
                        layer=data["layer"],
                        pair_id=data["pair_id"],
                        source=data["source"],
                        record_id=data["record_id"],
                        attributes=tuple(data["attributes"]),
                    )
                )
        return ledger
