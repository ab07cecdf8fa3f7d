"""Unit tests for the privacy metrics and the disclosure ledger."""

import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from layerlink.privacy import (
    DisclosedRecord,
    DisclosureEntry,
    DisclosureLedger,
    availability_stats,
    bit_frequencies,
    gini,
    jsd,
    kapr,
)


def test_bit_frequencies():
    vectors = np.array([[1, 0, 1, 1], [1, 0, 0, 1], [1, 0, 0, 0]], dtype=bool)
    assert bit_frequencies(vectors).tolist() == [1.0, 0.0, 1 / 3, 2 / 3]
    with pytest.raises(ValueError):
        bit_frequencies(np.empty((0, 4), dtype=bool))


# ----------------------------------------------------------------------- gini


def test_gini_flat_is_zero():
    assert gini(np.full(256, 0.37)) == pytest.approx(0.0, abs=1e-12)


def test_gini_one_hot():
    for n in (2, 4, 256):
        one_hot = np.zeros(n)
        one_hot[n // 2] = 1.0
        assert gini(one_hot) == pytest.approx((n - 1) / n, abs=1e-12)


def test_gini_hand_value():
    # sorted [1,2,3,4]: sum((2i-n-1) f_i) / (n sum f) = 10/40
    assert gini(np.array([4.0, 2.0, 1.0, 3.0])) == pytest.approx(0.25, abs=1e-12)


def test_gini_scale_invariant():
    rng = np.random.default_rng(2)
    f = rng.uniform(0, 1, 128)
    assert gini(f) == pytest.approx(gini(7.3 * f), abs=1e-12)


def test_gini_validation():
    assert gini(np.zeros(8)) == 0.0
    with pytest.raises(ValueError):
        gini(np.array([0.1, -0.2]))
    with pytest.raises(ValueError):
        gini(np.empty(0))


# ------------------------------------------------------------------------ jsd


def test_jsd_flat_is_zero():
    assert jsd(np.full(256, 0.37)) == pytest.approx(0.0, abs=1e-12)


def test_jsd_one_hot_reference_value():
    one_hot = np.zeros(256)
    one_hot[0] = 1.0
    # Independent closed form against the uniform distribution:
    # 0.5*KL(p||m) + 0.5*KL(u||m) with m the midpoint.
    n = 256
    kl_p = math.log2(2 * n / (n + 1))
    kl_u = (1 / n) * math.log2(2 / (n + 1)) + (n - 1) / n
    expected = 0.5 * (kl_p + kl_u)
    assert jsd(one_hot) == pytest.approx(expected, abs=1e-12)
    assert expected == pytest.approx(0.9815518, abs=1e-6)


def test_jsd_bounds():
    rng = np.random.default_rng(3)
    for _ in range(50):
        f = rng.uniform(0, 1, 64)
        assert 0.0 <= jsd(f) <= 1.0


def test_jsd_zero_vector():
    assert jsd(np.zeros(16)) == 0.0
    with pytest.raises(ValueError):
        jsd(np.array([-1.0, 1.0]))


# ----------------------------------------------------------------------- kapr


def rec(record_id, values, disclosed):
    return DisclosedRecord(
        record_id=record_id, values=values, disclosed=frozenset(disclosed)
    )


def test_kapr_single_fully_disclosed_record():
    record = rec("a:1", {"first_name": "MARY", "yob": "1984"}, {"first_name", "yob"})
    # 2 attributes revealed, pool of 1, 2 total attributes: maximal risk.
    assert kapr([record], total_attributes=2) == pytest.approx(1.0)


def test_kapr_indistinguishable_records_halve_risk():
    values = {"first_name": "MARY"}
    pool = [rec("a:1", values, {"first_name"}), rec("a:2", values, {"first_name"})]
    # Each record stays consistent with both pool members.
    assert kapr(pool, total_attributes=1) == pytest.approx(0.5)


def test_kapr_nothing_disclosed_is_zero_risk():
    pool = [rec("a:1", {"yob": "1984"}, set()), rec("a:2", {"yob": "1985"}, set())]
    assert kapr(pool) == 0.0


def test_kapr_unique_value_in_pool_of_two():
    pool = [
        rec("a:1", {"yob": "1984"}, {"yob"}),
        rec("a:2", {"yob": "1985"}, set()),
    ]
    assert kapr(pool, total_attributes=7) == pytest.approx(1 / 14)


def test_kapr_validation():
    with pytest.raises(ValueError):
        kapr([])
    with pytest.raises(ValueError):
        kapr([rec("a:1", {}, set())], total_attributes=0)


@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_kapr_monotone_in_disclosure(data):
    n = data.draw(st.integers(min_value=2, max_value=6))
    attrs = ["first_name", "yob", "city"]
    pool = []
    for k in range(n):
        values = {
            a: data.draw(st.sampled_from(["X", "Y", "Z"]), label=f"{k}-{a}")
            for a in attrs
        }
        disclosed = {a for a in attrs if data.draw(st.booleans(), label=f"d-{k}-{a}")}
        pool.append(rec(f"a:{k}", values, disclosed))
    target = data.draw(st.integers(min_value=0, max_value=n - 1))
    hidden = [a for a in attrs if a not in pool[target].disclosed]
    if not hidden:
        return
    extra = data.draw(st.sampled_from(hidden))
    widened = list(pool)
    widened[target] = rec(
        pool[target].record_id,
        pool[target].values,
        set(pool[target].disclosed) | {extra},
    )
    # Revealing one more attribute can only shrink the consistent set
    # and grow the numerator, so the risk never goes down.
    assert kapr(widened) >= kapr(pool) - 1e-12


def test_availability_stats():
    pool = [
        rec("a:1", {}, {"first_name", "yob"}),
        rec("a:2", {}, {"first_name"}),
    ]
    stats = availability_stats(pool)
    assert stats["first_name"] == 1.0
    assert stats["yob"] == 0.5
    assert stats["city"] == 0.0
    with pytest.raises(ValueError):
        availability_stats([])


# --------------------------------------------------------------------- ledger


def entry(iteration, pair_id, layer="attribute", attrs=("first_name",)):
    return DisclosureEntry(
        iteration=iteration,
        layer=layer,
        pair_id=pair_id,
        source="a",
        record_id=f"A-{pair_id:06d}",
        attributes=tuple(attrs),
    )


def test_ledger_round_trip(tmp_path):
    ledger = DisclosureLedger()
    ledger.record(entry(1, 10))
    ledger.record(entry(2, 11, layer="clerical", attrs=("last_name", "yob")))
    path = tmp_path / "ledger.jsonl"
    ledger.save(path)
    clone = DisclosureLedger.load(path)
    assert clone.entries == ledger.entries

    lines = path.read_text().splitlines()
    assert len(lines) == 2
    first = json.loads(lines[0])
    assert first == {
        "attributes": ["first_name"],
        "iteration": 1,
        "layer": "attribute",
        "pair_id": 10,
        "record_id": "A-000010",
        "source": "a",
    }


def test_ledger_entries_snapshot_is_immutable():
    ledger = DisclosureLedger()
    ledger.record(entry(1, 10))
    snapshot = ledger.entries
    ledger.record(entry(1, 11))
    assert len(snapshot) == 1
    assert len(ledger.entries) == 2
    assert isinstance(ledger.entries, tuple)
