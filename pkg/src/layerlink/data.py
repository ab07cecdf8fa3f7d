"""Synthetic person datasets and the CSV formats used at the boundaries.

The generator produces two sources with a controlled overlap.  Records
of overlapping persons are corrupted so that no true pair agrees on
everything, and a share of non-matching records are made deliberately
confusable (relatives sharing surname, birth year and address), which
is what gives the matcher a genuinely uncertain middle ground.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .encoding import ATTRIBUTES, PlainRecord, normalize_value
from .tables import BIRTH_PLACES, CITIES, FIRST_NAMES, LAST_NAMES

CSV_HEADER = ["id", "first_name", "middle_name", "last_name", "yob", "city", "zip", "pob"]

_LETTERS = "ABCDEFGHIJKLMNOPQRSTUVWXYZ"

# One corruption unit per line; city and zip change together because a
# move affects both.
CORRUPTION_UNITS = ("first_name", "middle_name", "last_name", "pob", "cityzip")


@dataclass(frozen=True)
class DatasetSpec:
    """Knobs for one synthetic dataset pair.

    ``min_corruptions`` is the minimum number of corruption units
    changed per true pair: 1 keeps most pairs similar, 2 produces a
    noticeably harder dataset.
    """

    size: int = 5000
    overlap: float = 0.2
    min_corruptions: int = 1
    seed: int = 0
    sibling_rate: float = 0.12
    sibling_same_yob: float = 0.6
    sibling_same_city: float = 0.8
    sibling_same_pob: float = 0.4
    middle_name_missing: float = 0.08
    birthplace_missing: float = 0.20
    yob_typo_rate: float = 0.04

    def __post_init__(self) -> None:
        if self.size < 2:
            raise ValueError("size must be >= 2")
        if not 0.0 <= self.overlap <= 1.0:
            raise ValueError("overlap must lie in [0, 1]")
        if self.min_corruptions not in (1, 2):
            raise ValueError("min_corruptions must be 1 or 2")


def _zipf_weights(count: int, exponent: float, offset: float = 1.0) -> np.ndarray:
    ranks = np.arange(1, count + 1, dtype=np.float64)
    weights = 1.0 / (ranks + offset) ** exponent
    return weights / weights.sum()

_FIRST_W = _zipf_weights(len(FIRST_NAMES), 0.95)
_MIDDLE_W = _zipf_weights(len(FIRST_NAMES), 0.70)
_LAST_W = _zipf_weights(len(LAST_NAMES), 1.0)
_CITY_W = _zipf_weights(len(CITIES), 0.95)
_POB_W = _zipf_weights(len(BIRTH_PLACES), 0.85)

_YEARS = np.arange(1935, 2005)
_YEAR_W = np.exp(-(((_YEARS - 1966) / 22.0) ** 2))
_YEAR_W = _YEAR_W / _YEAR_W.sum()

# Deterministic zip suffixes per city: nearby cities share prefixes, so
# zips carry realistic partial similarity.
_CITY_ZIPS = {
    name: [f"{prefix}{(i * 7 + j * 13) % 100:02d}" for j in range(suffixes)]
    for i, (name, prefix, suffixes) in enumerate(CITIES)
}
_CITY_NAMES = [name for name, _, _ in CITIES]


def _make_person(spec: DatasetSpec, rng: np.random.Generator) -> dict[str, str | None]:
    city = _CITY_NAMES[rng.choice(len(_CITY_NAMES), p=_CITY_W)]
    zips = _CITY_ZIPS[city]
    return {
        "first_name": FIRST_NAMES[rng.choice(len(FIRST_NAMES), p=_FIRST_W)],
        "middle_name": (
            None
            if rng.random() < spec.middle_name_missing
            else FIRST_NAMES[rng.choice(len(FIRST_NAMES), p=_MIDDLE_W)]
        ),
        "last_name": LAST_NAMES[rng.choice(len(LAST_NAMES), p=_LAST_W)],
        "yob": str(_YEARS[rng.choice(len(_YEARS), p=_YEAR_W)]),
        "city": city,
        "zip": zips[rng.integers(len(zips))],
        "pob": (
            None
            if rng.random() < spec.birthplace_missing
            else BIRTH_PLACES[rng.choice(len(BIRTH_PLACES), p=_POB_W)]
        ),
    }


def _typo(value: str, rng: np.random.Generator) -> str:
    """One character-level edit that is guaranteed to change the value."""
    for _ in range(32):
        op = rng.integers(4)
        pos = int(rng.integers(len(value)))
        if op == 0:
            letter = _LETTERS[rng.integers(26)]
            out = value[:pos] + letter + value[pos + 1 :]
        elif op == 1:
            letter = _LETTERS[rng.integers(26)]
            out = value[:pos] + letter + value[pos:]
        elif op == 2 and len(value) > 3:
            out = value[:pos] + value[pos + 1 :]
        elif len(value) >= 2:
            pos = min(pos, len(value) - 2)
            out = value[:pos] + value[pos + 1] + value[pos] + value[pos + 2 :]
        else:
            continue
        if out != value:
            return out
    raise RuntimeError("could not corrupt value")  # pragma: no cover


def _replace(pool: list[str], weights: np.ndarray, current: str | None,
             rng: np.random.Generator) -> str:
    for _ in range(32):
        candidate = pool[rng.choice(len(pool), p=weights)]
        if candidate != current:
            return candidate
    raise RuntimeError("could not draw a distinct replacement")  # pragma: no cover


def _corrupt_unit(
    unit: str, values: dict[str, str | None], spec: DatasetSpec, rng: np.random.Generator
) -> None:
    roll = rng.random()
    if unit == "first_name":
        current = values["first_name"]
        if roll < 0.70:
            values["first_name"] = _typo(current, rng)
        elif roll < 0.85:
            values["first_name"] = _replace(FIRST_NAMES, _FIRST_W, current, rng)
        else:
            # Nickname-style truncation; fall back to a typo for short names.
            values["first_name"] = current[:4] if len(current) > 4 else _typo(current, rng)
    elif unit == "middle_name":
        current = values["middle_name"]
        if current is None:
            values["middle_name"] = FIRST_NAMES[rng.choice(len(FIRST_NAMES), p=_MIDDLE_W)]
        elif roll < 0.40:
            values["middle_name"] = _replace(FIRST_NAMES, _MIDDLE_W, current, rng)
        elif roll < 0.65:
            values["middle_name"] = None
        elif roll < 0.85:
            values["middle_name"] = _typo(current, rng)
        else:
            values["middle_name"] = current[0]
    elif unit == "last_name":
        current = values["last_name"]
        if roll < 0.45:
            values["last_name"] = _replace(LAST_NAMES, _LAST_W, current, rng)
        elif roll < 0.85:
            values["last_name"] = _typo(current, rng)
        else:
            other = _replace(LAST_NAMES, _LAST_W, current, rng)
            values["last_name"] = f"{current}-{other}"
    elif unit == "pob":
        current = values["pob"]
        if current is None:
            values["pob"] = BIRTH_PLACES[rng.choice(len(BIRTH_PLACES), p=_POB_W)]
        elif roll < 0.60:
            values["pob"] = _replace(BIRTH_PLACES, _POB_W, current, rng)
        else:
            values["pob"] = _typo(current, rng)
    elif unit == "cityzip":
        if roll < 0.70:
            city = _replace(_CITY_NAMES, _CITY_W, values["city"], rng)
            values["city"] = city
            zips = _CITY_ZIPS[city]
            values["zip"] = zips[rng.integers(len(zips))]
        elif roll < 0.90:
            zips = [z for z in _CITY_ZIPS[values["city"]] if z != values["zip"]]
            if zips:
                values["zip"] = zips[rng.integers(len(zips))]
            else:
                values["zip"] = _typo(values["zip"], rng)
        else:
            values["city"] = _typo(values["city"], rng)
    else:  # pragma: no cover
        raise ValueError(f"unknown corruption unit {unit!r}")


def _unit_equal(unit: str, a: dict[str, str | None], b: dict[str, str | None]) -> bool:
    if unit == "cityzip":
        return a["city"] == b["city"] and a["zip"] == b["zip"]
    return a[unit] == b[unit]


def _corrupt_person(
    original: dict[str, str | None], spec: DatasetSpec, rng: np.random.Generator
) -> dict[str, str | None]:
    values = dict(original)
    if spec.min_corruptions == 1:
        count = int(rng.choice([1, 2, 3], p=[0.55, 0.30, 0.15]))
    else:
        count = int(rng.choice([2, 3], p=[0.65, 0.35]))
    chosen = rng.choice(len(CORRUPTION_UNITS), size=count, replace=False)
    for unit_index in sorted(chosen):
        unit = CORRUPTION_UNITS[unit_index]
        for _ in range(16):
            _corrupt_unit(unit, values, spec, rng)
            if not _unit_equal(unit, original, values):
                break
    if rng.random() < spec.yob_typo_rate:
        year = values["yob"]
        values["yob"] = _typo(year, rng)
        if len(values["yob"]) != 4 or not values["yob"].isdigit():
            values["yob"] = str(int(year) + int(rng.integers(1, 3)))
    return values


def _make_sibling(
    of: dict[str, str | None], spec: DatasetSpec, rng: np.random.Generator
) -> dict[str, str | None]:
    values = _make_person(spec, rng)
    values["last_name"] = of["last_name"]
    if rng.random() < spec.sibling_same_yob:
        values["yob"] = of["yob"]
    else:
        values["yob"] = str(int(of["yob"]) + int(rng.integers(1, 4)))
    if rng.random() < spec.sibling_same_city:
        values["city"] = of["city"]
        values["zip"] = of["zip"]
    if rng.random() < spec.sibling_same_pob and of["pob"] is not None:
        values["pob"] = of["pob"]
    if values["first_name"] == of["first_name"]:
        values["first_name"] = _replace(FIRST_NAMES, _FIRST_W, of["first_name"], rng)
    return values


def generate_dataset(
    spec: DatasetSpec,
) -> tuple[list[PlainRecord], list[PlainRecord], set[tuple[str, str]]]:
    """Two record lists plus the set of true (id_a, id_b) pairs.

    The same spec always yields byte-identical data.  True pairs never
    agree on every attribute; the share of hard non-matches is
    controlled by ``sibling_rate``.
    """
    rng = np.random.default_rng(spec.seed)
    n = spec.size
    n_overlap = int(round(spec.overlap * n))
    persons_a = [_make_person(spec, rng) for _ in range(n)]
    records_a = [
        PlainRecord(record_id=f"A-{i:06d}", values=values)
        for i, values in enumerate(persons_a)
    ]

    duplicate_of = rng.choice(n, size=n_overlap, replace=False)
    b_entries: list[tuple[dict[str, str | None], int | None]] = [
        (_corrupt_person(persons_a[i], spec, rng), int(i)) for i in duplicate_of
    ]
    fresh = n - n_overlap
    n_siblings = int(round(spec.sibling_rate * fresh))
    for _ in range(n_siblings):
        target = int(rng.integers(n))
        b_entries.append((_make_sibling(persons_a[target], spec, rng), None))
    for _ in range(fresh - n_siblings):
        b_entries.append((_make_person(spec, rng), None))

    order = rng.permutation(len(b_entries))
    records_b = []
    truth: set[tuple[str, str]] = set()
    for position, entry_index in enumerate(order):
        values, a_index = b_entries[entry_index]
        record_id = f"B-{position:06d}"
        records_b.append(PlainRecord(record_id=record_id, values=values))
        if a_index is not None:
            truth.add((records_a[a_index].record_id, record_id))
    return records_a, records_b, truth


def save_records(path: str | Path, records: Sequence[PlainRecord]) -> None:
    """Write records as CSV; missing values become empty fields."""
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(CSV_HEADER)
        for record in records:
            row = [record.record_id]
            row += [record.values.get(a) or "" for a in ATTRIBUTES]
            writer.writerow(row)


def load_records(path: str | Path) -> list[PlainRecord]:
    """Read records from CSV, normalizing values and empty fields."""
    records = []
    with open(path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        missing = set(CSV_HEADER) - set(reader.fieldnames or ())
        if missing:
            raise ValueError(f"dataset is missing columns: {sorted(missing)}")
        for row in reader:
            values = {a: normalize_value(row[a]) for a in ATTRIBUTES}
            records.append(PlainRecord(record_id=row["id"], values=values))
    return records


def save_truth(path: str | Path, truth: set[tuple[str, str]]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["id_a", "id_b"])
        for id_a, id_b in sorted(truth):
            writer.writerow([id_a, id_b])


def load_truth(path: str | Path) -> set[tuple[str, str]]:
    truth = set()
    with open(path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        for row in reader:
            truth.add((row["id_a"], row["id_b"]))
    return truth
