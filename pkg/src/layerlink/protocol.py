"""Multi-layer linkage protocol between two data owners and a linkage unit.

The linkage unit never sees plaintext it did not explicitly request and
never holds the owners' shared secret.  Escalation is strictly per pair:
record-level similarity first, pair-keyed attribute encodings for pairs
the record-level model is unsure about, masked clerical review for pairs
the attribute-level model is unsure about.  Labels obtained at a deeper
layer flow back upward as training data for the shallower model.
"""

from __future__ import annotations

import json
import secrets as _secrets
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .encoding import (
    ATTRIBUTES,
    EncodingParams,
    FrequencyTable,
    KeyedAttributeEncoding,
    PlainRecord,
    RecordEncoder,
    encode_keyed_attributes,
)
from .evaluate import Metrics, evaluate
from .matching import (
    AttributeComparison,
    Layer,
    candidate_indices,
    compare_attributes,
    dice_packed,
    pack_vectors,
)
from .models import EvolvingForest, LabeledInstance, ThresholdClassifier
from .privacy import DisclosureEntry, DisclosureLedger
from .review import (
    ClericalOracle,
    ReviewTask,
    SelectionStrategy,
    build_view,
    select_attributes,
)

PAIR_KEY_BYTES = 16


class PolicyError(ValueError):
    pass


@dataclass(frozen=True)
class DisclosurePolicy:
    """Per-record disclosure caps a data owner enforces.

    ``max_layers`` caps how deep a record may be escalated; requests past
    the cap are refused outright.  ``deny`` lists attributes never released
    as plaintext during clerical review; a denied attribute is silently
    dropped from the response rather than refusing the whole request.
    """

    default_max_layer: Layer = Layer.CLERICAL
    max_layers: Mapping[str, Layer] = field(default_factory=dict)
    deny: Mapping[str, frozenset[str]] = field(default_factory=dict)

    def max_layer(self, record_id: str) -> Layer:
        return self.max_layers.get(record_id, self.default_max_layer)

    def denied(self, record_id: str) -> frozenset[str]:
        return self.deny.get(record_id, frozenset())

    def to_dict(self) -> dict:
        return {
            "default_max_layer": self.default_max_layer.label,
            "records": {
                record_id: {
                    "max_layer": self.max_layers.get(
                        record_id, self.default_max_layer
                    ).label,
                    "deny": sorted(self.deny.get(record_id, frozenset())),
                }
                for record_id in sorted(set(self.max_layers) | set(self.deny))
            },
        }

    @classmethod
    def from_dict(cls, payload: Mapping) -> "DisclosurePolicy":
        records = payload.get("records", {})
        max_layers = {}
        deny = {}
        for record_id, entry in records.items():
            if "max_layer" in entry:
                max_layers[record_id] = Layer.from_label(entry["max_layer"])
            denied = frozenset(entry.get("deny", ()))
            if denied - set(ATTRIBUTES):
                raise PolicyError(f"unknown attributes in deny list: {denied}")
            if denied:
                deny[record_id] = denied
        return cls(
            default_max_layer=Layer.from_label(
                payload.get("default_max_layer", "clerical")
            ),
            max_layers=max_layers,
            deny=deny,
        )

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True))

    @classmethod
    def load(cls, path: str | Path) -> "DisclosurePolicy":
        return cls.from_dict(json.loads(Path(path).read_text()))


class DataOwner:
    """One database holder.  Keeps plaintext and the shared secret local.

    Everything the linkage unit receives goes through ``encoded_records``,
    ``respond_attribute_request``, or ``respond_clerical_request``; the
    secret itself is never part of any response payload.
    """

    def __init__(
        self,
        source: str,
        records: Sequence[PlainRecord],
        secret: bytes,
        params: EncodingParams | None = None,
        policy: DisclosurePolicy | None = None,
    ) -> None:
        self.source = source
        self.records = list(records)
        self.params = params if params is not None else EncodingParams()
        self.policy = policy if policy is not None else DisclosurePolicy()
        self._secret = secret
        self._by_id = {record.record_id: record for record in self.records}
        if len(self._by_id) != len(self.records):
            raise ValueError(f"duplicate record ids in source {source!r}")
        self._encoder = RecordEncoder(self.params, secret)
        self._tables = {
            attr: FrequencyTable.from_values(
                record.value(attr) for record in self.records
            )
            for attr in ATTRIBUTES
        }

    def record(self, record_id: str) -> PlainRecord:
        return self._by_id[record_id]

    def encoded_records(self) -> list[EncodedRecord]:
        return [self._encoder.encode(record) for record in self.records]

    def frequency_labels(self, record: PlainRecord) -> dict[str, int]:
        labels = {}
        for attr in ATTRIBUTES:
            label = self._tables[attr].label(record.value(attr))
            if label is not None:
                labels[attr] = label
        return labels

    def respond_attribute_request(
        self, record_id: str, pair_key: bytes
    ) -> KeyedAttributeEncoding | None:
        """Pair-keyed attribute encodings, or None if policy refuses."""
        record = self._by_id[record_id]
        if self.policy.max_layer(record_id) < Layer.ATTRIBUTE:
            return None
        return encode_keyed_attributes(
            record,
            self.params,
            self._secret,
            pair_key,
            frequency_labels=self.frequency_labels(record),
        )

    def respond_clerical_request(
        self, record_id: str, attributes: Iterable[str]
    ) -> dict[str, str] | None:
        """Plaintext for the requested attributes, or None if policy refuses.

        Denied and missing attributes are dropped from the response; only a
        layer cap below clerical refuses the request as a whole.  A request
        that asks for nothing yields an empty response, not a refusal: the
        pair still advances to symbols-only review.
        """
        record = self._by_id[record_id]
        requested = tuple(attributes)
        unknown = set(requested) - set(ATTRIBUTES)
        if unknown:
            raise PolicyError(f"unknown attributes requested: {sorted(unknown)}")
        if requested and self.policy.max_layer(record_id) < Layer.CLERICAL:
            return None
        denied = self.policy.denied(record_id)
        response = {}
        for attr in requested:
            if attr in denied:
                continue
            value = record.value(attr)
            if value is not None:
                response[attr] = value
        return response


@dataclass(frozen=True)
class ProtocolConfig:
    """Knobs of the escalation schedule and both layer models."""

    initial_threshold: float = 0.8
    probability_threshold: float = 0.8
    buckets: int = 10
    clerical_budget: int = 300
    warmup_iterations: int = 5
    warmup_batch_size: int = 100
    clerical_batches_per_iteration: int = 2
    main_iterations: int = 4
    main_batch_size: int = 1000
    oversample_factor: int = 1
    response_rate: float = 1.0
    strategy: SelectionStrategy = SelectionStrategy.NO_EQUAL_NO_DISSIMILAR

    def __post_init__(self) -> None:
        if not 0.5 < self.probability_threshold <= 1.0:
            raise ValueError("probability_threshold must lie in (0.5, 1]")
        if self.buckets < 1:
            raise ValueError("need at least one uncertainty bucket")
        if self.clerical_budget < 0:
            raise ValueError("clerical budget cannot be negative")
        if self.oversample_factor < 1:
            raise ValueError("oversample factor must be at least 1")
        if not 0.0 < self.response_rate <= 1.0:
            raise ValueError("response rate must lie in (0, 1]")
        if self.clerical_budget % (
            self.warmup_iterations * self.clerical_batches_per_iteration
        ):
            raise ValueError(
                "clerical budget must split evenly across the warm-up batches"
            )

    @property
    def clerical_batch_size(self) -> int:
        return self.clerical_budget // (
            self.warmup_iterations * self.clerical_batches_per_iteration
        )

    @property
    def bucket_width(self) -> float:
        return (self.probability_threshold - 0.5) / self.buckets


@dataclass(frozen=True)
class MetricsRow:
    iteration: int
    layer: str
    reviews_used: int
    precision: float
    recall: float
    f1: float
    threshold: float
    true_positives: int
    false_positives: int
    false_negatives: int

    def public_fields(self) -> dict:
        return {
            "iteration": self.iteration,
            "layer": self.layer,
            "reviews_used": self.reviews_used,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "threshold": self.threshold,
        }


def uncertainty_buckets(
    confidences: np.ndarray, probability_threshold: float, buckets: int
) -> np.ndarray:
    """Bucket index per confidence value, low confidence first.

    The band [0.5, probability_threshold) splits into equal-width buckets;
    values at or above the threshold are not uncertain and get bucket -1.
    """
    confidences = np.asarray(confidences, dtype=np.float64)
    width = (probability_threshold - 0.5) / buckets
    index = np.floor((confidences - 0.5) / width).astype(np.int64)
    index = np.clip(index, 0, buckets - 1)
    index[confidences >= probability_threshold] = -1
    return index


def select_uncertain_batch(
    confidences: np.ndarray,
    eligible: np.ndarray,
    batch_size: int,
    probability_threshold: float,
    buckets: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """Round-robin draw across uncertainty buckets.

    Eligible low-confidence pairs are bucketed by confidence, each bucket
    is shuffled, and the batch is filled one pair per non-empty bucket in
    ascending bucket order until ``batch_size`` pairs are taken or the
    pool runs dry.  Low buckets are visited first so the least certain
    pairs win when the batch is smaller than the bucket count.
    """
    if batch_size <= 0:
        return np.empty(0, dtype=np.int64)
    confidences = np.asarray(confidences, dtype=np.float64)
    eligible = np.asarray(eligible, dtype=bool)
    pool = np.nonzero(eligible & (confidences < probability_threshold))[0]
    if pool.size == 0:
        return np.empty(0, dtype=np.int64)
    index = uncertainty_buckets(confidences[pool], probability_threshold, buckets)
    queues = []
    for bucket in range(buckets):
        members = pool[index == bucket]
        if members.size:
            queues.append(list(rng.permutation(members)))
    picked: list[int] = []
    while queues and len(picked) < batch_size:
        survivors = []
        for queue in queues:
            picked.append(int(queue.pop()))
            if queue:
                survivors.append(queue)
            if len(picked) >= batch_size:
                break
        queues = survivors
    return np.asarray(picked, dtype=np.int64)


@dataclass
class LayerAState:
    """Linkage-unit view of one pair escalated to the attribute layer."""

    pair_key: bytes
    comparison: AttributeComparison
    features: np.ndarray
    present_a: frozenset[str]
    present_b: frozenset[str]


@dataclass
class ClericalRecordView:
    record_id: str
    disclosed: dict[str, str]
    requested: tuple[str, ...]


@dataclass
class ClericalReview:
    pair_id: int
    id_a: str
    id_b: str
    iteration: int
    requested: tuple[str, ...]
    disclosed_a: tuple[str, ...]
    disclosed_b: tuple[str, ...]
    label: bool | None = None


@dataclass
class LinkageBase:
    """Blocked candidate pairs with record-level similarities.

    Built once per dataset; protocol runs at different thresholds reuse
    it so threshold sweeps do not re-encode or re-block.
    """

    owner_a: DataOwner
    owner_b: DataOwner
    index_a: np.ndarray
    index_b: np.ndarray
    record_sims: np.ndarray
    truth_mask: np.ndarray
    truth_total: int

    @property
    def pair_count(self) -> int:
        return int(self.index_a.size)

    def id_a(self, pair: int) -> str:
        return self.owner_a.records[self.index_a[pair]].record_id

    def id_b(self, pair: int) -> str:
        return self.owner_b.records[self.index_b[pair]].record_id


def prepare_base(
    owner_a: DataOwner,
    owner_b: DataOwner,
    truth: set[tuple[str, str]] | None = None,
) -> LinkageBase:
    """Block the two sources and compute record-level similarities."""
    enc_a = owner_a.encoded_records()
    enc_b = owner_b.encoded_records()
    index_a, index_b = candidate_indices(enc_a, enc_b)
    packed_a = pack_vectors([record.record_level for record in enc_a])
    packed_b = pack_vectors([record.record_level for record in enc_b])
    sims = dice_packed(packed_a, packed_b, index_a, index_b)
    truth = truth if truth is not None else set()
    ids_a = [record.record_id for record in owner_a.records]
    ids_b = [record.record_id for record in owner_b.records]
    truth_mask = np.fromiter(
        (
            (ids_a[ia], ids_b[ib]) in truth
            for ia, ib in zip(index_a, index_b)
        ),
        dtype=bool,
        count=index_a.size,
    )
    return LinkageBase(
        owner_a=owner_a,
        owner_b=owner_b,
        index_a=index_a,
        index_b=index_b,
        record_sims=sims,
        truth_mask=truth_mask,
        truth_total=len(truth),
    )


OracleFactory = Callable[[dict[int, bool], np.random.Generator], ClericalOracle]


class ProtocolEngine:
    """Runs the escalation schedule over a prepared candidate set.

    Separate RNG streams cover batch sampling, pair-key generation,
    wishlist response simulation, clerical-oracle noise, and forest
    training, so replacing the simulated oracle with live human labels
    leaves every other stream untouched and the run replayable.
    """

    def __init__(
        self,
        base: LinkageBase,
        config: ProtocolConfig,
        *,
        seed: int = 0,
        oracle_factory: OracleFactory | None = None,
        run_id: str | None = None,
    ) -> None:
        self.base = base
        self.config = config
        self.run_id = run_id if run_id is not None else f"run-{seed:08d}"
        streams = np.random.SeedSequence(seed).spawn(5)
        self.rng_sampling = np.random.default_rng(streams[0])
        self.rng_keys = np.random.default_rng(streams[1])
        self.rng_response = np.random.default_rng(streams[2])
        self.rng_oracle = np.random.default_rng(streams[3])
        self.rng_models = np.random.default_rng(streams[4])

        n = base.pair_count
        self.is_match = np.zeros(n, dtype=bool)
        self.confidence = np.zeros(n, dtype=np.float64)
        self.label_layer = np.full(n, int(Layer.RECORD), dtype=np.int8)
        self.refused = np.zeros(n, dtype=bool)

        self.threshold_model = ThresholdClassifier.start(config.initial_threshold)
        self.forest: EvolvingForest | None = None
        self.layer_a: dict[int, LayerAState] = {}
        self.ma_store: dict[int, LabeledInstance] = {}
        self.mr_store: dict[int, LabeledInstance] = {}
        self.ledger = DisclosureLedger()
        self.metrics: list[MetricsRow] = []
        self.threshold_trace: list[tuple[int, float, float]] = []
        self.clerical_reviews: list[ClericalReview] = []
        self.clerical_used = 0
        self.attribute_reviews = 0
        self.attribute_bit_counts: dict[str, np.ndarray] = {
            attr: np.zeros(base.owner_a.params.attribute_size, dtype=np.int64)
            for attr in ATTRIBUTES
        }
        self.attribute_encoding_counts: dict[str, int] = dict.fromkeys(ATTRIBUTES, 0)
        self.iteration = 0

        truth_by_pair = {
            pair: bool(base.truth_mask[pair]) for pair in range(n)
        }
        if oracle_factory is None:
            raise ValueError("an oracle factory is required")
        self.oracle = oracle_factory(truth_by_pair, self.rng_oracle)

    # ---------------------------------------------------------------- layers

    def run_initial_linkage(self) -> MetricsRow:
        """Classify every candidate pair with the record-level model."""
        self.is_match, self.confidence = self.threshold_model.classify_batch(
            self.base.record_sims
        )
        return self._record_metrics(layer=Layer.RECORD)

    def run(self) -> None:
        self.run_initial_linkage()
        for _ in range(self.config.warmup_iterations):
            self.iteration += 1
            self._attribute_batch(self.config.warmup_batch_size, frozen=False)
            for _ in range(self.config.clerical_batches_per_iteration):
                applied = self._clerical_batch()
                if applied:
                    self._update_attribute_layer()
            self._update_record_layer()
            self._record_metrics(layer=Layer.CLERICAL)
        for _ in range(self.config.main_iterations):
            self.iteration += 1
            self._attribute_batch(self.config.main_batch_size, frozen=True)
            self._update_record_layer()
            self._record_metrics(layer=Layer.ATTRIBUTE)
        self._close_oracle()

    # ------------------------------------------------------- attribute layer

    def _attribute_batch(self, batch_size: int, *, frozen: bool) -> np.ndarray:
        """Escalate one batch of uncertain record-layer pairs.

        Issues a pair-keyed wishlist, classifies fulfilled pairs with the
        attribute-level forest, and reports the fresh predictions to the
        record-layer training store.
        """
        eligible = (self.label_layer == int(Layer.RECORD)) & ~self.refused
        batch = select_uncertain_batch(
            self.confidence,
            eligible,
            batch_size * self.config.oversample_factor,
            self.config.probability_threshold,
            self.config.buckets,
            self.rng_sampling,
        )
        advanced = self._fulfill_attribute_wishlist(batch)
        if advanced.size == 0:
            return advanced
        self.attribute_reviews += int(advanced.size)
        if self.forest is None:
            self._seed_attribute_store(advanced)
            self.forest = EvolvingForest.bootstrap(
                list(self.ma_store.values()), self.rng_models
            )
        elif not frozen:
            self._seed_attribute_store(advanced)
        features = np.stack([self.layer_a[p].features for p in advanced])
        is_match, confidence = self.forest.classify_batch(features)
        self.is_match[advanced] = is_match
        self.confidence[advanced] = confidence
        self.label_layer[advanced] = int(Layer.ATTRIBUTE)
        for pair, match, conf in zip(advanced, is_match, confidence):
            self.mr_store[int(pair)] = LabeledInstance(
                pair_id=int(pair),
                features=float(self.base.record_sims[pair]),
                label=bool(match),
                weight=float(conf),
                origin=Layer.ATTRIBUTE,
            )
        return advanced

    def _fulfill_attribute_wishlist(self, batch: np.ndarray) -> np.ndarray:
        """Send pair keys to both owners; collect keyed encodings.

        A fresh random key per pair makes encodings from different pairs
        non-comparable.  One refusal on either side pins the pair at the
        record layer for the rest of the run.
        """
        advanced = []
        for pair in batch:
            pair = int(pair)
            if self.rng_response.random() >= self.config.response_rate:
                self.refused[pair] = True
                continue
            pair_key = self.rng_keys.bytes(PAIR_KEY_BYTES)
            id_a = self.base.id_a(pair)
            id_b = self.base.id_b(pair)
            enc_a = self.base.owner_a.respond_attribute_request(id_a, pair_key)
            enc_b = self.base.owner_b.respond_attribute_request(id_b, pair_key)
            if enc_a is None or enc_b is None:
                self.refused[pair] = True
                continue
            comparison = compare_attributes(enc_a, enc_b)
            self.layer_a[pair] = LayerAState(
                pair_key=pair_key,
                comparison=comparison,
                features=comparison.feature_vector(),
                present_a=frozenset(enc_a.filters),
                present_b=frozenset(enc_b.filters),
            )
            self._count_attribute_bits(enc_a)
            self._count_attribute_bits(enc_b)
            self._ledger_attribute(pair, id_a, "a", enc_a)
            self._ledger_attribute(pair, id_b, "b", enc_b)
            advanced.append(pair)
        return np.asarray(advanced, dtype=np.int64)

    def _count_attribute_bits(self, encoding: KeyedAttributeEncoding) -> None:
        for attr, vector in encoding.filters.items():
            self.attribute_bit_counts[attr] += vector
            self.attribute_encoding_counts[attr] += 1

    def _ledger_attribute(
        self, pair: int, record_id: str, source: str, enc: KeyedAttributeEncoding
    ) -> None:
        attrs = tuple(attr for attr in ATTRIBUTES if attr in enc.filters)
        if not attrs:
            return
        self.ledger.record(
            DisclosureEntry(
                iteration=self.iteration,
                layer=Layer.ATTRIBUTE.label,
                pair_id=pair,
                source=source,
                record_id=record_id,
                attributes=attrs,
            )
        )

    def _seed_attribute_store(self, pairs: Iterable[int]) -> None:
        """Add record-model predictions for new layer-A pairs as training data."""
        for pair in pairs:
            pair = int(pair)
            sim = float(self.base.record_sims[pair])
            prediction = self.threshold_model.classify(sim)
            self.ma_store[pair] = LabeledInstance(
                pair_id=pair,
                features=self.layer_a[pair].features,
                label=prediction.is_match,
                weight=prediction.confidence,
                origin=Layer.RECORD,
            )

    # -------------------------------------------------------- clerical layer

    def _clerical_batch(self) -> bool:
        """One masked review batch.  Returns True if any label was applied."""
        remaining = self.config.clerical_budget - self.clerical_used
        if remaining <= 0:
            return False
        batch_size = min(self.config.clerical_batch_size, remaining)
        eligible = (self.label_layer == int(Layer.ATTRIBUTE)) & ~self.refused
        batch = select_uncertain_batch(
            self.confidence,
            eligible,
            batch_size * self.config.oversample_factor,
            self.config.probability_threshold,
            self.config.buckets,
            self.rng_sampling,
        )
        tasks: list[ReviewTask] = []
        reviews: list[ClericalReview] = []
        for pair in batch:
            pair = int(pair)
            if len(tasks) >= remaining:
                break
            if self.rng_response.random() >= self.config.response_rate:
                self.refused[pair] = True
                continue
            state = self.layer_a[pair]
            requested = select_attributes(
                state.comparison,
                state.present_a,
                state.present_b,
                self.config.strategy,
            )
            id_a = self.base.id_a(pair)
            id_b = self.base.id_b(pair)
            response_a = self.base.owner_a.respond_clerical_request(id_a, requested)
            response_b = self.base.owner_b.respond_clerical_request(id_b, requested)
            if response_a is None or response_b is None:
                self.refused[pair] = True
                continue
            self._ledger_clerical(pair, id_a, "a", response_a)
            self._ledger_clerical(pair, id_b, "b", response_b)
            tasks.append(
                ReviewTask(
                    pair_id=pair,
                    attributes=build_view(state.comparison, response_a, response_b),
                )
            )
            reviews.append(
                ClericalReview(
                    pair_id=pair,
                    id_a=id_a,
                    id_b=id_b,
                    iteration=self.iteration,
                    requested=requested,
                    disclosed_a=tuple(sorted(response_a)),
                    disclosed_b=tuple(sorted(response_b)),
                )
            )
        if not tasks:
            return False
        self._set_oracle_context()
        labels = self.oracle.review(tasks)
        for review in reviews:
            pair = review.pair_id
            label = labels[pair]
            review.label = label
            self.clerical_reviews.append(review)
            self.clerical_used += 1
            self.is_match[pair] = label
            self.confidence[pair] = 1.0
            self.label_layer[pair] = int(Layer.CLERICAL)
            self.ma_store[pair] = LabeledInstance(
                pair_id=pair,
                features=self.layer_a[pair].features,
                label=label,
                weight=2.0,
                origin=Layer.CLERICAL,
            )
            self.mr_store[pair] = LabeledInstance(
                pair_id=pair,
                features=float(self.base.record_sims[pair]),
                label=label,
                weight=2.0,
                origin=Layer.CLERICAL,
            )
        return True

    def _ledger_clerical(
        self, pair: int, record_id: str, source: str, response: Mapping[str, str]
    ) -> None:
        attrs = tuple(attr for attr in ATTRIBUTES if attr in response)
        if not attrs:
            return
        self.ledger.record(
            DisclosureEntry(
                iteration=self.iteration,
                layer=Layer.CLERICAL.label,
                pair_id=pair,
                source=source,
                record_id=record_id,
                attributes=attrs,
            )
        )

    def _set_oracle_context(self) -> None:
        setter = getattr(self.oracle, "set_context", None)
        if setter is not None:
            setter(budget_remaining=self.config.clerical_budget - self.clerical_used)

    def _close_oracle(self) -> None:
        closer = getattr(self.oracle, "close", None)
        if closer is not None:
            closer()

    # ---------------------------------------------------------- model updates

    def _update_attribute_layer(self) -> np.ndarray:
        """Retrain the forest and push changed predictions up to the record layer."""
        self._refresh_record_origin_labels()
        self.forest = self.forest.update(
            list(self.ma_store.values()), self.rng_models
        )
        pairs = np.asarray(
            [
                pair
                for pair in self.layer_a
                if self.label_layer[pair] == int(Layer.ATTRIBUTE)
            ],
            dtype=np.int64,
        )
        if pairs.size == 0:
            return pairs
        features = np.stack([self.layer_a[int(p)].features for p in pairs])
        is_match, confidence = self.forest.classify_batch(features)
        changed = (self.is_match[pairs] != is_match) | (
            self.confidence[pairs] != confidence
        )
        self.is_match[pairs] = is_match
        self.confidence[pairs] = confidence
        changed_pairs = pairs[changed]
        for pair, match, conf in zip(
            changed_pairs, is_match[changed], confidence[changed]
        ):
            self.mr_store[int(pair)] = LabeledInstance(
                pair_id=int(pair),
                features=float(self.base.record_sims[pair]),
                label=bool(match),
                weight=float(conf),
                origin=Layer.ATTRIBUTE,
            )
        return changed_pairs

    def _refresh_record_origin_labels(self) -> None:
        """Record-origin training labels follow the current record model."""
        for pair, instance in self.ma_store.items():
            if instance.origin is not Layer.RECORD:
                continue
            prediction = self.threshold_model.classify(
                float(self.base.record_sims[pair])
            )
            instance.label = prediction.is_match
            instance.weight = prediction.confidence
            self.ma_store[pair] = instance

    def _update_record_layer(self) -> np.ndarray:
        """Move the threshold toward the best grid candidate; reclassify."""
        instances = list(self.mr_store.values())
        if instances:
            target = self.threshold_model.best_candidate(instances)
            self.threshold_model = self.threshold_model.move_toward(target)
            self.threshold_trace.append(
                (self.iteration, target, self.threshold_model.threshold)
            )
        record_layer = self.label_layer == int(Layer.RECORD)
        pairs = np.nonzero(record_layer)[0]
        if pairs.size == 0:
            return pairs
        is_match, confidence = self.threshold_model.classify_batch(
            self.base.record_sims[pairs]
        )
        changed = (self.is_match[pairs] != is_match) | (
            self.confidence[pairs] != confidence
        )
        self.is_match[pairs] = is_match
        self.confidence[pairs] = confidence
        return pairs[changed]

    # -------------------------------------------------------------- reporting

    def _record_metrics(self, layer: Layer) -> MetricsRow:
        metrics = evaluate(self.is_match, self.base.truth_mask, self.base.truth_total)
        row = MetricsRow(
            iteration=self.iteration,
            layer=layer.label,
            reviews_used=self.clerical_used,
            precision=metrics.precision,
            recall=metrics.recall,
            f1=metrics.f1,
            threshold=self.threshold_model.threshold,
            true_positives=metrics.true_positives,
            false_positives=metrics.false_positives,
            false_negatives=metrics.false_negatives,
        )
        self.metrics.append(row)
        return row

    def current_metrics(self) -> Metrics:
        return evaluate(self.is_match, self.base.truth_mask, self.base.truth_total)


@dataclass
class RunResult:
    run_id: str
    config: ProtocolConfig
    metrics: list[MetricsRow]
    threshold_trace: list[tuple[int, float, float]]
    clerical_used: int
    attribute_reviews: int
    ledger: DisclosureLedger
    clerical_reviews: list[ClericalReview]
    engine: ProtocolEngine

    @property
    def initial_f1(self) -> float:
        return self.metrics[0].f1

    @property
    def final_f1(self) -> float:
        return self.metrics[-1].f1


def run_protocol(
    base: LinkageBase,
    config: ProtocolConfig,
    *,
    seed: int = 0,
    oracle_factory: OracleFactory,
    run_id: str | None = None,
) -> RunResult:
    """Run the full escalation schedule over a prepared candidate set."""
    engine = ProtocolEngine(
        base, config, seed=seed, oracle_factory=oracle_factory, run_id=run_id
    )
    engine.run()
    return RunResult(
        run_id=engine.run_id,
        config=config,
        metrics=engine.metrics,
        threshold_trace=engine.threshold_trace,
        clerical_used=engine.clerical_used,
        attribute_reviews=engine.attribute_reviews,
        ledger=engine.ledger,
        clerical_reviews=engine.clerical_reviews,
        engine=engine,
    )


def random_policy(
    records: Sequence[PlainRecord],
    *,
    record_cap_fraction: float = 0.0,
    attribute_cap_fraction: float = 0.0,
    deny_fraction: float = 0.0,
    seed: int = 0,
) -> DisclosurePolicy:
    """Random per-record caps, for privacy experiments and audits.

    Draws disjoint record subsets capped at the record and attribute
    layers, plus an independent subset with one random denied attribute.
    """
    rng = np.random.default_rng(seed)
    ids = [record.record_id for record in records]
    n_record = int(round(record_cap_fraction * len(ids)))
    n_attribute = int(round(attribute_cap_fraction * len(ids)))
    capped = rng.choice(len(ids), size=n_record + n_attribute, replace=False)
    max_layers: dict[str, Layer] = {}
    for offset, index in enumerate(capped):
        layer = Layer.RECORD if offset < n_record else Layer.ATTRIBUTE
        max_layers[ids[int(index)]] = layer
    deny: dict[str, frozenset[str]] = {}
    if deny_fraction > 0.0:
        n_deny = int(round(deny_fraction * len(ids)))
        for index in rng.choice(len(ids), size=n_deny, replace=False):
            attr = ATTRIBUTES[int(rng.integers(len(ATTRIBUTES)))]
            deny[ids[int(index)]] = frozenset({attr})
    return DisclosurePolicy(max_layers=max_layers, deny=deny)


def fresh_secret() -> bytes:
    """A new random shared secret for the owners."""
    return _secrets.token_bytes(32)
