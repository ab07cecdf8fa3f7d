"""Tests for the escalation protocol: selection, policies, budget, replay."""

import threading
import time

import numpy as np
import pytest

from layerlink.encoding import ATTRIBUTES
from layerlink.matching import Layer
from layerlink.protocol import (
    PAIR_KEY_BYTES,
    DataOwner,
    DisclosurePolicy,
    PolicyError,
    ProtocolConfig,
    fresh_secret,
    prepare_base,
    random_policy,
    run_protocol,
    select_uncertain_batch,
    uncertainty_buckets,
)
from layerlink.review import (
    DuplicateLabel,
    ReviewSession,
    SessionClosed,
    SimulatedOracle,
)

from conftest import SMALL_SECRET

TINY = ProtocolConfig(
    warmup_iterations=2,
    warmup_batch_size=25,
    clerical_batches_per_iteration=2,
    clerical_budget=8,
    main_iterations=2,
    main_batch_size=40,
)


def oracle_factory(error_rate=0.0):
    def factory(truth_by_pair, rng):
        return SimulatedOracle(truth_by_pair, error_rate, rng)

    return factory


def run_tiny(base, config=TINY, seed=5, error_rate=0.0):
    return run_protocol(
        base, config, seed=seed, oracle_factory=oracle_factory(error_rate)
    )


# --------------------------------------------------------------------- config


def test_config_validation():
    with pytest.raises(ValueError):
        ProtocolConfig(probability_threshold=0.5)
    with pytest.raises(ValueError):
        ProtocolConfig(buckets=0)
    with pytest.raises(ValueError):
        ProtocolConfig(clerical_budget=-1)
    with pytest.raises(ValueError):
        ProtocolConfig(oversample_factor=0)
    with pytest.raises(ValueError):
        ProtocolConfig(response_rate=0.0)
    with pytest.raises(ValueError):
        # 7 does not split across 5 iterations x 2 batches.
        ProtocolConfig(clerical_budget=7)


def test_config_derived_quantities():
    config = ProtocolConfig()
    assert config.clerical_batch_size == 30
    assert config.bucket_width == pytest.approx(0.03)
    assert TINY.clerical_batch_size == 2


# ------------------------------------------------------------------ bucketing


def test_uncertainty_buckets_examples():
    buckets = uncertainty_buckets(
        np.array([0.51, 0.79, 0.50, 0.53, 0.80, 0.95]), 0.8, 10
    )
    assert buckets.tolist() == [0, 9, 0, 1, -1, -1]


def test_select_batch_exhausts_single_bucket():
    confidences = np.full(7, 0.51)
    eligible = np.ones(7, dtype=bool)
    picked = select_uncertain_batch(
        confidences, eligible, 5, 0.8, 10, np.random.default_rng(0)
    )
    assert picked.size == 5
    assert len(set(picked.tolist())) == 5
    assert set(picked.tolist()) <= set(range(7))


def test_select_batch_round_robin_across_buckets():
    confidences = np.array([0.51, 0.51, 0.51, 0.655, 0.655, 0.655])
    eligible = np.ones(6, dtype=bool)
    picked = select_uncertain_batch(
        confidences, eligible, 4, 0.8, 10, np.random.default_rng(1)
    )
    assert picked.size == 4
    low = sum(1 for p in picked if p < 3)
    assert low == 2  # two from each bucket


def test_select_batch_prefers_low_buckets():
    confidences = np.array([0.79, 0.51])
    eligible = np.ones(2, dtype=bool)
    picked = select_uncertain_batch(
        confidences, eligible, 1, 0.8, 10, np.random.default_rng(2)
    )
    assert picked.tolist() == [1]


def test_select_batch_filters_confident_and_ineligible():
    confidences = np.array([0.51, 0.85, 0.52, 0.60])
    eligible = np.array([True, True, False, True])
    picked = select_uncertain_batch(
        confidences, eligible, 10, 0.8, 10, np.random.default_rng(3)
    )
    assert set(picked.tolist()) == {0, 3}


def test_select_batch_empty_cases():
    rng = np.random.default_rng(0)
    assert select_uncertain_batch(np.array([0.9]), np.array([True]), 5, 0.8, 10, rng).size == 0
    assert select_uncertain_batch(np.array([0.6]), np.array([True]), 0, 0.8, 10, rng).size == 0


def test_select_batch_deterministic_under_seed():
    confidences = np.random.default_rng(7).uniform(0.5, 0.8, 50)
    eligible = np.ones(50, dtype=bool)
    a = select_uncertain_batch(confidences, eligible, 20, 0.8, 10, np.random.default_rng(9))
    b = select_uncertain_batch(confidences, eligible, 20, 0.8, 10, np.random.default_rng(9))
    assert a.tolist() == b.tolist()


# ----------------------------------------------------------------------- base


def test_prepare_base_consistency(small_dataset, small_base):
    _, _, truth = small_dataset
    assert small_base.pair_count == small_base.record_sims.size
    assert np.all((small_base.record_sims >= 0.0) & (small_base.record_sims <= 1.0))
    assert small_base.truth_total == len(truth)
    for pair in range(small_base.pair_count):
        expected = (small_base.id_a(pair), small_base.id_b(pair)) in truth
        assert bool(small_base.truth_mask[pair]) == expected


# ------------------------------------------------------------------ full runs


def test_run_schedule_shape(small_base):
    result = run_tiny(small_base)
    assert [m.layer for m in result.metrics] == [
        "record",
        "clerical",
        "clerical",
        "attribute",
        "attribute",
    ]
    assert [m.iteration for m in result.metrics] == [0, 1, 2, 3, 4]
    assert len(result.threshold_trace) == 4
    assert result.metrics[-1].reviews_used == result.clerical_used


def test_run_pinned_counts(small_base):
    result = run_tiny(small_base)
    engine = result.engine
    assert result.attribute_reviews == 24
    assert result.clerical_used == 8
    assert len(engine.layer_a) == result.attribute_reviews
    assert len(result.ledger.entries) == 60


def test_threshold_walk_is_bounded(small_base):
    result = run_tiny(small_base)
    previous = TINY.initial_threshold
    for _, target, threshold in result.threshold_trace:
        assert abs(threshold - previous) <= 0.02 + 1e-12
        assert 0.70 - 1e-12 <= threshold <= 0.90 + 1e-12
        # The post-move value never overshoots the per-update target.
        assert abs(threshold - target) <= abs(previous - target) + 1e-12
        previous = threshold


def test_pair_keys_fresh_per_pair(small_base):
    engine = run_tiny(small_base).engine
    keys = [state.pair_key for state in engine.layer_a.values()]
    assert all(len(k) == PAIR_KEY_BYTES for k in keys)
    assert len(set(keys)) == len(keys)


def test_budget_is_hard_cap(small_base):
    for budget in (0, 4, 8):
        config = ProtocolConfig(
            warmup_iterations=2,
            warmup_batch_size=25,
            clerical_batches_per_iteration=2,
            clerical_budget=budget,
            main_iterations=1,
            main_batch_size=30,
        )
        result = run_tiny(small_base, config=config)
        assert result.clerical_used <= budget
        assert len(result.clerical_reviews) == result.clerical_used


def test_clerical_labels_follow_truth_when_oracle_is_exact(small_base):
    result = run_tiny(small_base, error_rate=0.0)
    engine = result.engine
    assert result.clerical_used > 0
    for review in result.clerical_reviews:
        assert review.label == bool(small_base.truth_mask[review.pair_id])
        assert bool(engine.is_match[review.pair_id]) == review.label
        assert engine.confidence[review.pair_id] == 1.0
        assert engine.label_layer[review.pair_id] == int(Layer.CLERICAL)


def test_store_origins(small_base):
    engine = run_tiny(small_base).engine
    assert {i.origin for i in engine.ma_store.values()} <= {Layer.RECORD, Layer.CLERICAL}
    assert {i.origin for i in engine.mr_store.values()} <= {
        Layer.ATTRIBUTE,
        Layer.CLERICAL,
    }
    # Clerical labels carry double weight in both stores.
    for store in (engine.ma_store, engine.mr_store):
        for instance in store.values():
            if instance.origin is Layer.CLERICAL:
                assert instance.weight == 2.0


def test_ledger_matches_layer_state(small_base):
    result = run_tiny(small_base)
    engine = result.engine
    attr_entries = [e for e in result.ledger.entries if e.layer == "attribute"]
    # Both owners respond for every advanced pair.
    assert len(attr_entries) == 2 * result.attribute_reviews
    for record_entry in attr_entries:
        state = engine.layer_a[record_entry.pair_id]
        present = (
            state.present_a if record_entry.source == "a" else state.present_b
        )
        assert set(record_entry.attributes) == set(present)
    clerical_entries = [e for e in result.ledger.entries if e.layer == "clerical"]
    reviewed = {r.pair_id for r in result.clerical_reviews}
    assert {e.pair_id for e in clerical_entries} <= reviewed


def test_clerical_disclosures_respect_strategy(small_base):
    result = run_tiny(small_base)
    engine = result.engine
    for review in result.clerical_reviews:
        state = engine.layer_a[review.pair_id]
        sims = state.comparison.sims
        for attr in review.requested:
            # Default strategy: only ambiguous mid-similarity attributes.
            assert 0.4 <= sims[attr] < 1.0
        assert set(review.disclosed_a) <= set(review.requested)
        assert set(review.disclosed_b) <= set(review.requested)


def test_response_rate_produces_refusals(small_dataset):
    records_a, records_b, truth = small_dataset
    base = prepare_base(
        DataOwner("a", records_a, SMALL_SECRET),
        DataOwner("b", records_b, SMALL_SECRET),
        truth,
    )
    config = ProtocolConfig(
        warmup_iterations=2,
        warmup_batch_size=25,
        clerical_batches_per_iteration=2,
        clerical_budget=8,
        main_iterations=2,
        main_batch_size=40,
        response_rate=0.5,
        oversample_factor=2,
    )
    result = run_tiny(base, config=config)
    engine = result.engine
    assert int(engine.refused.sum()) > 0
    # Refused pairs never reached the attribute layer.
    refused_pairs = np.nonzero(engine.refused)[0]
    assert all(int(p) not in engine.layer_a or
               engine.label_layer[p] >= int(Layer.ATTRIBUTE)
               for p in refused_pairs)
    assert result.attribute_reviews > 0


# ------------------------------------------------------------------- policies


def test_policy_cap_at_record_blocks_escalation(small_dataset):
    records_a, records_b, truth = small_dataset
    base = prepare_base(
        DataOwner(
            "a",
            records_a,
            SMALL_SECRET,
            policy=DisclosurePolicy(default_max_layer=Layer.RECORD),
        ),
        DataOwner("b", records_b, SMALL_SECRET),
        truth,
    )
    result = run_tiny(base)
    assert result.attribute_reviews == 0
    assert result.clerical_used == 0
    assert len(result.ledger.entries) == 0
    assert result.engine.forest is None
    assert int(result.engine.refused.sum()) > 0


def test_policy_cap_at_attribute_blocks_plaintext(small_dataset):
    records_a, records_b, truth = small_dataset
    base = prepare_base(
        DataOwner(
            "a",
            records_a,
            SMALL_SECRET,
            policy=DisclosurePolicy(default_max_layer=Layer.ATTRIBUTE),
        ),
        DataOwner("b", records_b, SMALL_SECRET),
        truth,
    )
    result = run_tiny(base)
    assert result.attribute_reviews > 0
    # Any review that would disclose plaintext is refused; only requests
    # for nothing (every attribute equal or dissimilar) may proceed.
    for review in result.clerical_reviews:
        assert review.requested == ()
        assert review.disclosed_a == ()
        assert review.disclosed_b == ()
    assert all(e.layer == "attribute" for e in result.ledger.entries)
    assert int(result.engine.refused.sum()) > 0


def test_policy_deny_all_runs_symbols_only(small_dataset):
    records_a, records_b, truth = small_dataset
    deny_a = {r.record_id: frozenset(ATTRIBUTES) for r in records_a}
    deny_b = {r.record_id: frozenset(ATTRIBUTES) for r in records_b}
    base = prepare_base(
        DataOwner("a", records_a, SMALL_SECRET, policy=DisclosurePolicy(deny=deny_a)),
        DataOwner("b", records_b, SMALL_SECRET, policy=DisclosurePolicy(deny=deny_b)),
        truth,
    )
    result = run_tiny(base)
    # Review still happens, but nothing is disclosed and nothing hits
    # the clerical ledger.
    assert result.clerical_used > 0
    assert all(e.layer == "attribute" for e in result.ledger.entries)
    for review in result.clerical_reviews:
        assert review.disclosed_a == ()
        assert review.disclosed_b == ()


def test_policy_round_trip(tmp_path):
    policy = DisclosurePolicy(
        default_max_layer=Layer.CLERICAL,
        max_layers={"A-000001": Layer.RECORD, "A-000002": Layer.ATTRIBUTE},
        deny={"A-000003": frozenset({"yob", "zip"})},
    )
    path = tmp_path / "policy.json"
    policy.save(path)
    loaded = DisclosurePolicy.load(path)
    assert loaded.max_layer("A-000001") is Layer.RECORD
    assert loaded.max_layer("A-000002") is Layer.ATTRIBUTE
    assert loaded.max_layer("A-999999") is Layer.CLERICAL
    assert loaded.denied("A-000003") == frozenset({"yob", "zip"})
    assert loaded.denied("A-000001") == frozenset()


def test_policy_rejects_unknown_deny_attribute():
    with pytest.raises(PolicyError):
        DisclosurePolicy.from_dict(
            {"records": {"A-1": {"deny": ["salary"]}}}
        )


def test_owner_rejects_unknown_clerical_attribute(small_dataset):
    records_a, _, _ = small_dataset
    owner = DataOwner("a", records_a, SMALL_SECRET)
    with pytest.raises(PolicyError):
        owner.respond_clerical_request(records_a[0].record_id, ["salary"])


def test_owner_empty_clerical_request_is_not_a_refusal(small_dataset):
    records_a, _, _ = small_dataset
    capped = DisclosurePolicy(default_max_layer=Layer.ATTRIBUTE)
    owner = DataOwner("a", records_a, SMALL_SECRET, policy=capped)
    record_id = records_a[0].record_id
    assert owner.respond_clerical_request(record_id, []) == {}
    assert owner.respond_clerical_request(record_id, ["first_name"]) is None


def test_owner_rejects_duplicate_ids(small_dataset):
    records_a, _, _ = small_dataset
    with pytest.raises(ValueError):
        DataOwner("a", [records_a[0], records_a[0]], SMALL_SECRET)


def test_random_policy_counts(small_dataset):
    records_a, _, _ = small_dataset
    policy = random_policy(
        records_a,
        record_cap_fraction=0.1,
        attribute_cap_fraction=0.2,
        deny_fraction=0.1,
        seed=3,
    )
    layers = list(policy.max_layers.values())
    assert layers.count(Layer.RECORD) == 25
    assert layers.count(Layer.ATTRIBUTE) == 50
    assert len(policy.deny) == 25
    for denied in policy.deny.values():
        assert len(denied) == 1 and denied <= set(ATTRIBUTES)


def test_fresh_secret():
    a, b = fresh_secret(), fresh_secret()
    assert len(a) == 32 and len(b) == 32
    assert a != b


# --------------------------------------------------------------------- replay


def scripted_session(run_id, labels_by_pair, stop):
    session = ReviewSession(run_id)

    def drive():
        while not stop.is_set():
            task = session.next_task()
            if task is None:
                time.sleep(0.0005)
                continue
            try:
                session.submit(task.pair_id, labels_by_pair[task.pair_id])
            except (DuplicateLabel, SessionClosed):
                return

    thread = threading.Thread(target=drive, daemon=True)
    thread.start()
    return session, thread


def test_interactive_replay_matches_simulated_run(small_base):
    reference = run_tiny(small_base, error_rate=0.2)
    labels_by_pair = dict(reference.engine.oracle.transcript)
    assert len(labels_by_pair) == reference.clerical_used

    stop = threading.Event()
    session, thread = scripted_session("replay", labels_by_pair, stop)
    try:
        replayed = run_protocol(
            small_base,
            TINY,
            seed=5,
            oracle_factory=lambda truth, rng: session,
        )
    finally:
        stop.set()
        thread.join(timeout=5)

    assert replayed.metrics == reference.metrics
    assert replayed.threshold_trace == reference.threshold_trace
    assert replayed.ledger.entries == reference.ledger.entries
    assert [(r.pair_id, r.label) for r in replayed.clerical_reviews] == [
        (r.pair_id, r.label) for r in reference.clerical_reviews
    ]
