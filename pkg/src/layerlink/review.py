"""Masked clerical review: what a human may see, and how labels flow back.

A reviewer never sees full record pairs.  Equal attributes show only an
agree symbol (optionally tagged with a frequency hint), strongly
disagreeing attributes show a disagree symbol, and only mid-similarity
attributes reveal characters, with the longest common subsequence
blanked out.  Which attributes may be requested in plaintext at all is
governed by a selection strategy; everything else stays withheld.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Protocol, Sequence

import numpy as np

from .encoding import ATTRIBUTES
from .matching import AttributeComparison

# Below this similarity two values are treated as plain disagreement
# and nothing about them is revealed.
DISSIMILAR_BOUND = 0.4

# Placeholder alphabet for masked digits; rotating placeholders keep
# repeated digits from being linkable across positions.
DIGIT_PLACEHOLDERS = ("$", "%", "@")


class SelectionStrategy(Enum):
    """How aggressively plaintext requests are restricted.

    NO_RESTRICTIONS requests every available attribute; NO_EQUAL skips
    exactly agreeing attributes (the reviewer only needs the agree
    symbol); NO_EQUAL_NO_DISSIMILAR additionally skips strongly
    disagreeing attributes, leaving only the ambiguous middle ground.
    """

    NO_RESTRICTIONS = "no-restrictions"
    NO_EQUAL = "no-equal"
    NO_EQUAL_NO_DISSIMILAR = "no-equal-no-dissimilar"

    @classmethod
    def from_label(cls, label: str) -> "SelectionStrategy":
        for strategy in cls:
            if strategy.value == label:
                return strategy
        raise ValueError(f"unknown selection strategy {label!r}")


def select_attributes(
    comparison: AttributeComparison,
    present_a: set[str],
    present_b: set[str],
    strategy: SelectionStrategy,
) -> tuple[str, ...]:
    """Attributes to request in plaintext for one pair.

    Similarity-filtered modes can only consider attributes present on
    both sides (otherwise there is no similarity); the unrestricted
    mode requests whatever either owner has.
    """
    if strategy is SelectionStrategy.NO_RESTRICTIONS:
        return tuple(a for a in ATTRIBUTES if a in present_a or a in present_b)
    sims = comparison.sims
    if strategy is SelectionStrategy.NO_EQUAL:
        return tuple(a for a in ATTRIBUTES if a in sims and sims[a] < 1.0)
    return tuple(
        a for a in ATTRIBUTES if a in sims and DISSIMILAR_BOUND <= sims[a] < 1.0
    )


@dataclass(frozen=True)
class MaskedAttribute:
    """Display state of one attribute: agree, disagree, partial or withheld."""

    kind: str
    freq: str | None = None
    display_a: str | None = None
    display_b: str | None = None

    def to_json(self) -> dict:
        if self.kind == "agree":
            payload: dict = {"kind": "agree"}
            if self.freq is not None:
                payload["freq"] = self.freq
            return payload
        if self.kind == "partial":
            return {"kind": "partial", "a": self.display_a, "b": self.display_b}
        return {"kind": self.kind}


AGREE_FREQ_TAGS = {1: "freq", 3: "rare"}

WITHHELD = MaskedAttribute(kind="withheld")


def _lcs_members(a: str, b: str) -> tuple[list[bool], list[bool]]:
    # Standard LCS table with a deterministic backtrack.
    la, lb = len(a), len(b)
    table = np.zeros((la + 1, lb + 1), dtype=np.int32)
    for i in range(1, la + 1):
        for j in range(1, lb + 1):
            if a[i - 1] == b[j - 1]:
                table[i, j] = table[i - 1, j - 1] + 1
            else:
                table[i, j] = max(table[i - 1, j], table[i, j - 1])
    in_a = [False] * la
    in_b = [False] * lb
    i, j = la, lb
    while i > 0 and j > 0:
        if a[i - 1] == b[j - 1] and table[i, j] == table[i - 1, j - 1] + 1:
            in_a[i - 1] = True
            in_b[j - 1] = True
            i -= 1
            j -= 1
        elif table[i - 1, j] >= table[i, j - 1]:
            i -= 1
        else:
            j -= 1
    return in_a, in_b


def build_mask(
    value_a: str,
    value_b: str,
    sim: float,
    freq_label: int | None = None,
) -> MaskedAttribute:
    """Masked display of one attribute pair.

    Exact agreement and strong disagreement reduce to symbols.  In
    between, characters on the longest common subsequence are blanked
    with ``*`` while differing characters show through: literally for
    alphabetic values, as rotating placeholders for digits, so numeric
    values never leak actual digits.  Non-alphanumeric separators always
    render as themselves.
    """
    if not value_a or not value_b:
        raise ValueError("masking requires both values present")
    if sim == 1.0:
        return MaskedAttribute(kind="agree", freq=AGREE_FREQ_TAGS.get(freq_label or 0))
    if sim < DISSIMILAR_BOUND:
        return MaskedAttribute(kind="disagree")
    in_a, in_b = _lcs_members(value_a, value_b)
    numeric_a = any(c.isdigit() for c in value_a)
    numeric_b = any(c.isdigit() for c in value_b)
    out_a: list[str] = []
    out_b: list[str] = []
    counter = 0
    for position in range(max(len(value_a), len(value_b))):
        if position < len(value_a):
            char, counter = _mask_char(value_a[position], in_a[position], numeric_a, counter)
            out_a.append(char)
        if position < len(value_b):
            char, counter = _mask_char(value_b[position], in_b[position], numeric_b, counter)
            out_b.append(char)
    return MaskedAttribute(
        kind="partial", display_a="".join(out_a), display_b="".join(out_b)
    )


def _mask_char(char: str, on_lcs: bool, numeric_value: bool, counter: int) -> tuple[str, int]:
    if not char.isalnum():
        return char, counter
    if on_lcs:
        return "*", counter
    if numeric_value and char.isdigit():
        placeholder = DIGIT_PLACEHOLDERS[counter % len(DIGIT_PLACEHOLDERS)]
        return placeholder, counter + 1
    return char, counter


@dataclass
class ReviewTask:
    """One pair awaiting a human match/non-match decision."""

    pair_id: int
    attributes: dict[str, MaskedAttribute]

    def to_json(self) -> dict:
        return {
            "pair_id": self.pair_id,
            "attributes": {a: m.to_json() for a, m in self.attributes.items()},
        }


def build_view(
    comparison: AttributeComparison,
    disclosed_a: Mapping[str, str],
    disclosed_b: Mapping[str, str],
) -> dict[str, MaskedAttribute]:
    """Per-attribute masked view given what was actually disclosed.

    Agree and disagree symbols derive from similarities alone; partial
    masks additionally need the plaintext of both sides, so an attribute
    whose plaintext was not disclosed stays withheld even when its
    similarity is known.
    """
    view: dict[str, MaskedAttribute] = {}
    for attribute in ATTRIBUTES:
        sim = comparison.sims.get(attribute)
        if sim is None:
            view[attribute] = WITHHELD
        elif sim == 1.0:
            freq = comparison.frequency_features.get(attribute) or None
            view[attribute] = MaskedAttribute(
                kind="agree", freq=AGREE_FREQ_TAGS.get(freq or 0)
            )
        elif sim < DISSIMILAR_BOUND:
            view[attribute] = MaskedAttribute(kind="disagree")
        else:
            va = disclosed_a.get(attribute)
            vb = disclosed_b.get(attribute)
            if va is None or vb is None:
                view[attribute] = WITHHELD
            else:
                view[attribute] = build_mask(va, vb, sim)
    return view


def simulated_oracle(truth: bool, error_rate: float, rng: np.random.Generator) -> bool:
    """A clerical decision that is wrong with probability ``error_rate``."""
    if not 0.0 <= error_rate <= 1.0:
        raise ValueError("error_rate must lie in [0, 1]")
    if rng.random() < error_rate:
        return not truth
    return truth


class ClericalOracle(Protocol):
    """Anything that can label a batch of review tasks."""

    def review(self, tasks: Sequence[ReviewTask]) -> dict[int, bool]:
        ...


class SimulatedOracle:
    """Labels tasks from ground truth with a configurable error rate.

    Keeps a transcript of every labeling decision so a replayed session
    (for example through the HTTP review API) can reproduce the exact
    same label sequence.
    """

    def __init__(
        self,
        truth_by_pair: Mapping[int, bool],
        error_rate: float,
        rng: np.random.Generator,
    ) -> None:
        self.truth_by_pair = truth_by_pair
        self.error_rate = error_rate
        self.rng = rng
        self.transcript: list[tuple[int, bool]] = []

    def review(self, tasks: Sequence[ReviewTask]) -> dict[int, bool]:
        labels: dict[int, bool] = {}
        for task in tasks:
            truth = self.truth_by_pair[task.pair_id]
            label = simulated_oracle(truth, self.error_rate, self.rng)
            labels[task.pair_id] = label
            self.transcript.append((task.pair_id, label))
        return labels


class SessionClosed(Exception):
    pass


class DuplicateLabel(Exception):
    pass


class ReviewSession:
    """Blocking bridge between the protocol and an interactive reviewer.

    The protocol thread enqueues a batch and waits; a UI (or a script)
    pulls one task at a time and submits labels until the batch is
    complete.  Tasks are handed out strictly in batch order and each
    pair accepts exactly one label.
    """

    def __init__(self, run_id: str) -> None:
        self.run_id = run_id
        self.budget_remaining: int | None = None
        self._lock = threading.Lock()
        self._ready = threading.Condition(self._lock)
        self._order: list[int] = []
        self._tasks: dict[int, ReviewTask] = {}
        self._labels: dict[int, bool] = {}
        self._closed = False

    def set_context(self, budget_remaining: int) -> None:
        with self._lock:
            self.budget_remaining = budget_remaining

    # -- protocol side ---------------------------------------------------

    def review(self, tasks: Sequence[ReviewTask]) -> dict[int, bool]:
        with self._ready:
            if self._closed:
                raise SessionClosed("review session is closed")
            for task in tasks:
                self._order.append(task.pair_id)
                self._tasks[task.pair_id] = task
            self._ready.notify_all()
            self._ready.wait_for(
                lambda: self._closed
                or all(p in self._labels for p in self._order)
            )
            if self._closed and not all(p in self._labels for p in self._order):
                raise SessionClosed("review session closed mid-batch")
            labels = {p: self._labels[p] for p in self._order}
            self._order.clear()
            self._tasks.clear()
            self._labels.clear()
            return labels

    def close(self) -> None:
        with self._ready:
            self._closed = True
            self._ready.notify_all()

    # -- reviewer side ---------------------------------------------------

    @property
    def pending_count(self) -> int:
        with self._lock:
            return sum(1 for p in self._order if p not in self._labels)

    def next_task(self) -> ReviewTask | None:
        """First unlabeled task, or None when the queue is idle."""
        with self._lock:
            for pair_id in self._order:
                if pair_id not in self._labels:
                    return self._tasks[pair_id]
            return None

    def submit(self, pair_id: int, is_match: bool) -> None:
        with self._ready:
            if self._closed:
                raise SessionClosed("review session is closed")
            if pair_id not in self._tasks:
                raise KeyError(f"no open task for pair {pair_id}")
            if pair_id in self._labels:
                raise DuplicateLabel(f"pair {pair_id} already labeled")
            self._labels[pair_id] = bool(is_match)
            self._ready.notify_all()
