"""Keyed Bloom-filter encodings for privacy-preserving record linkage.

Record-level encodings hash every attribute of a record into one bit
vector under an owner-shared secret, so a linkage unit can compare
records without seeing plaintext.  Attribute-level encodings are built
per candidate pair under a fresh pair key, which makes them unlinkable
across pairs.  Blocking keys are one-way digests of attribute recipes.
"""

from __future__ import annotations

import hashlib
import hmac
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

# Canonical attribute order; every record carries exactly these fields.
ATTRIBUTES = (
    "first_name",
    "middle_name",
    "last_name",
    "yob",
    "city",
    "zip",
    "pob",
)

DEFAULT_RECORD_SIZE = 1024
DEFAULT_RECORD_HASHES = 12
DEFAULT_ATTRIBUTE_SIZE = 256

# Per-attribute hash counts for attribute-level filters, tuned so the
# expected fill rate stays comparable across attributes of very
# different typical lengths.
ATTRIBUTE_HASHES = {
    "first_name": 18,
    "middle_name": 21,
    "last_name": 17,
    "yob": 26,
    "city": 13,
    "zip": 21,
    "pob": 43,
}


@dataclass(frozen=True)
class EncodingParams:
    """Shared encoding configuration for both data owners.

    Both owners must encode under identical parameters, otherwise the
    resulting bit vectors are not comparable.
    """

    qgram_length: int = 2
    record_size: int = DEFAULT_RECORD_SIZE
    record_hashes: int = DEFAULT_RECORD_HASHES
    attribute_size: int = DEFAULT_ATTRIBUTE_SIZE
    attribute_hashes: Mapping[str, int] = field(
        default_factory=lambda: dict(ATTRIBUTE_HASHES)
    )
    fold_record_level: bool = False

    def __post_init__(self) -> None:
        if self.qgram_length < 1:
            raise ValueError("qgram_length must be >= 1")
        if self.record_size < 2 or self.attribute_size < 2:
            raise ValueError("filter sizes must be >= 2")
        if self.fold_record_level and self.record_size % 2 != 0:
            raise ValueError("XOR folding needs an even record_size")
        for attr in ATTRIBUTES:
            if self.attribute_hashes.get(attr, 0) < 1:
                raise ValueError(f"missing hash count for {attr!r}")


@dataclass
class PlainRecord:
    """One source record: an id plus the fixed attribute schema.

    Missing values are stored as None.  Values are kept exactly as
    loaded; normalization happens at encoding time.
    """

    record_id: str
    values: dict[str, str | None]

    def value(self, attribute: str) -> str | None:
        return normalize_value(self.values.get(attribute))


@dataclass
class EncodedRecord:
    """What a data owner hands to the linkage unit per record."""

    record_id: str
    record_level: np.ndarray
    blocking_keys: frozenset[str]


@dataclass
class KeyedAttributeEncoding:
    """Per-attribute filters for one record under one pair key.

    ``filters`` holds a bit vector per present attribute and
    ``frequency_labels`` the owner-side frequency class (1 = very
    frequent, 3 = rare) for the same attributes.
    """

    record_id: str
    filters: dict[str, np.ndarray]
    frequency_labels: dict[str, int]


def normalize_value(value: str | None) -> str | None:
    """Uppercase, trim and collapse whitespace; empty becomes None."""
    if value is None:
        return None
    cleaned = " ".join(value.split()).upper()
    return cleaned or None


def extract_qgrams(value: str, q: int = 2) -> list[str]:
    """Split a normalized value into overlapping substrings of length q.

    Values shorter than q yield the value itself as a single feature so
    that no present value encodes to an empty filter.
    """
    if not value:
        raise ValueError("cannot extract q-grams from an empty value")
    if len(value) < q:
        return [value]
    return [value[i : i + q] for i in range(len(value) - q + 1)]


def hash_positions(feature: str, key: bytes, count: int, size: int) -> np.ndarray:
    """Map one feature to ``count`` filter positions in [0, size).

    The feature is keyed with HMAC-SHA256; the digest seeds a
    deterministic SHA256 counter stream whose 64-bit words are reduced
    modulo ``size``.  Without the key the positions are unpredictable,
    which is what makes dictionary attacks on the filters expensive.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if size < 2:
        raise ValueError("size must be >= 2")
    digest = hmac.new(key, feature.encode("utf-8"), hashlib.sha256).digest()
    blocks = []
    for block_index in range((count * 8 + 31) // 32):
        blocks.append(
            hashlib.sha256(digest + block_index.to_bytes(4, "big")).digest()
        )
    words = np.frombuffer(b"".join(blocks), dtype=">u8")[:count]
    return (words % np.uint64(size)).astype(np.int64)


def xor_fold(bits: np.ndarray) -> np.ndarray:
    """Fold a bit vector in half by XOR-ing the two halves.

    Folding halves the length and roughly doubles the fill rate, which
    hardens the encoding against pattern-mining attacks at some cost in
    similarity resolution.
    """
    if bits.size % 2 != 0:
        raise ValueError("cannot fold a vector of odd length")
    half = bits.size // 2
    return np.not_equal(bits[:half], bits[half:])


def _derive_key(secret: bytes, label: str) -> bytes:
    # Domain separation: one owner secret, independent keys per use.
    return hmac.new(secret, label.encode("utf-8"), hashlib.sha256).digest()


class RecordEncoder:
    """Owner-side encoder for record-level vectors and blocking keys.

    Position lists are cached per (attribute, q-gram), which matters
    because realistic name distributions repeat values heavily.
    """

    def __init__(self, params: EncodingParams, secret: bytes) -> None:
        self.params = params
        self._attr_keys = {
            attr: _derive_key(secret, f"record-level|{attr}") for attr in ATTRIBUTES
        }
        self._block_key = _derive_key(secret, "blocking")
        self._cache: dict[tuple[str, str], np.ndarray] = {}

    def _positions(self, attribute: str, qgram: str) -> np.ndarray:
        cached = self._cache.get((attribute, qgram))
        if cached is None:
            cached = hash_positions(
                qgram,
                self._attr_keys[attribute],
                self.params.record_hashes,
                self.params.record_size,
            )
            self._cache[(attribute, qgram)] = cached
        return cached

    def encode_record_level(self, record: PlainRecord) -> np.ndarray:
        """Hash all present attribute q-grams into one bit vector."""
        bits = np.zeros(self.params.record_size, dtype=bool)
        for attribute in ATTRIBUTES:
            value = record.value(attribute)
            if value is None:
                continue
            for qgram in extract_qgrams(value, self.params.qgram_length):
                bits[self._positions(attribute, qgram)] = True
        if self.params.fold_record_level:
            bits = xor_fold(bits)
        return bits

    def blocking_keys(self, record: PlainRecord) -> frozenset[str]:
        """Keyed digests of three standard blocking recipes.

        A recipe is skipped when any of its inputs is missing, so a
        record can carry fewer than three keys.
        """
        fn = record.value("first_name")
        ln = record.value("last_name")
        yob = record.value("yob")
        recipes = []
        if fn is not None and yob is not None:
            recipes.append(f"fn-yob|{fn}|{yob}")
        if ln is not None and yob is not None:
            recipes.append(f"ln-yob|{ln}|{yob}")
        if fn is not None and ln is not None:
            recipes.append(f"sdx|{soundex(fn)}|{soundex(ln)}")
        digests = (
            hmac.new(self._block_key, r.encode("utf-8"), hashlib.sha256).hexdigest()
            for r in recipes
        )
        return frozenset(digests)

    def encode(self, record: PlainRecord) -> EncodedRecord:
        return EncodedRecord(
            record_id=record.record_id,
            record_level=self.encode_record_level(record),
            blocking_keys=self.blocking_keys(record),
        )


def encode_clk(record: PlainRecord, params: EncodingParams, secret: bytes) -> np.ndarray:
    """One-shot record-level encoding; see RecordEncoder for bulk use."""
    return RecordEncoder(params, secret).encode_record_level(record)


def _attribute_filter(
    value: str, attribute: str, params: EncodingParams, key: bytes
) -> np.ndarray:
    bits = np.zeros(params.attribute_size, dtype=bool)
    hashes = params.attribute_hashes[attribute]
    for qgram in extract_qgrams(value, params.qgram_length):
        bits[hash_positions(qgram, key, hashes, params.attribute_size)] = True
    return bits


def encode_keyed_attributes(
    record: PlainRecord,
    params: EncodingParams,
    secret: bytes,
    pair_key: bytes,
    frequency_labels: Mapping[str, int] | None = None,
) -> KeyedAttributeEncoding:
    """Encode each present attribute under (owner secret, pair key).

    The pair key is mixed into the HMAC key, so the same value encodes
    to unrelated vectors for different pairs.  Equal values under the
    same pair key still collide exactly, which is what the pairwise
    comparison relies on.
    """
    base = _derive_key(secret, "attribute-level")
    filters: dict[str, np.ndarray] = {}
    labels: dict[str, int] = {}
    for attribute in ATTRIBUTES:
        value = record.value(attribute)
        if value is None:
            continue
        key = base + pair_key + attribute.encode("utf-8")
        filters[attribute] = _attribute_filter(value, attribute, params, key)
        if frequency_labels and attribute in frequency_labels:
            labels[attribute] = frequency_labels[attribute]
    return KeyedAttributeEncoding(record.record_id, filters, labels)


def encode_shared_attributes(
    record: PlainRecord, params: EncodingParams, secret: bytes
) -> dict[str, np.ndarray]:
    """Per-attribute filters under a shared key only (no pair key).

    This is the classical attribute-level scheme used as a baseline; it
    leaks value frequencies across the whole dataset, which the privacy
    metrics in :mod:`layerlink.privacy` make visible.
    """
    base = _derive_key(secret, "attribute-level")
    filters: dict[str, np.ndarray] = {}
    for attribute in ATTRIBUTES:
        value = record.value(attribute)
        if value is None:
            continue
        key = base + attribute.encode("utf-8")
        filters[attribute] = _attribute_filter(value, attribute, params, key)
    return filters


class FrequencyTable:
    """Owner-side value frequency classes for one attribute.

    Values are ranked by count; the smallest prefix covering 1% of the
    attribute's records is class 1, the prefix covering 5% is class 2,
    everything else (including unseen values) is class 3.
    """

    def __init__(self, labels: dict[str, int]) -> None:
        self._labels = labels

    @classmethod
    def from_values(cls, values: Iterable[str | None]) -> "FrequencyTable":
        counts: dict[str, int] = {}
        total = 0
        for raw in values:
            value = normalize_value(raw)
            if value is None:
                continue
            counts[value] = counts.get(value, 0) + 1
            total += 1
        labels: dict[str, int] = {}
        seen = 0
        # Ties broken lexicographically so the table is deterministic.
        for value, count in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0])):
            if seen < 0.01 * total:
                labels[value] = 1
            elif seen < 0.05 * total:
                labels[value] = 2
            else:
                labels[value] = 3
            seen += count
        return cls(labels)

    def label(self, value: str | None) -> int | None:
        value = normalize_value(value)
        if value is None:
            return None
        return self._labels.get(value, 3)


def frequency_label(table: FrequencyTable, value: str | None) -> int | None:
    """Frequency class of a value, or None when the value is missing."""
    return table.label(value)


_SOUNDEX_CODES = {
    "B": "1", "F": "1", "P": "1", "V": "1",
    "C": "2", "G": "2", "J": "2", "K": "2", "Q": "2", "S": "2", "X": "2", "Z": "2",
    "D": "3", "T": "3",
    "L": "4",
    "M": "5", "N": "5",
    "R": "6",
}


def soundex(name: str) -> str:
    """American Soundex code (letter plus three digits).

    Adjacent letters with the same code collapse, including across H
    and W; vowels separate runs; the code is zero-padded to length 4.
    """
    letters = [c for c in name.upper() if "A" <= c <= "Z"]
    if not letters:
        raise ValueError("soundex needs at least one letter")
    code = letters[0]
    previous = _SOUNDEX_CODES.get(letters[0], "")
    for letter in letters[1:]:
        if letter in "HW":
            continue
        digit = _SOUNDEX_CODES.get(letter)
        if digit is None:
            previous = ""
            continue
        if digit != previous:
            code += digit
            previous = digit
        if len(code) == 4:
            break
    return (code + "000")[:4]
