"""Experiment harness: configs, end-to-end runs, artifacts on disk.

Everything here is deterministic in the config seed: the shared secret
defaults to a seed-derived value, run ids carry no timestamps, and all
artifact writers use stable key ordering and float formatting, so two
runs of the same config produce byte-identical outputs.
"""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .data import (
    DatasetSpec,
    generate_dataset,
    load_records,
    load_truth,
)
from .encoding import ATTRIBUTES, EncodingParams, PlainRecord, encode_shared_attributes
from .evaluate import Metrics, evaluate, find_optimal_threshold
from .matching import BASELINE_WEIGHTS, pack_vectors, dice_packed
from .privacy import (
    DisclosedRecord,
    availability_stats,
    gini,
    jsd,
    kapr,
)
from .protocol import (
    DataOwner,
    DisclosurePolicy,
    LinkageBase,
    ProtocolConfig,
    RunResult,
    prepare_base,
    run_protocol,
)
from .review import SelectionStrategy, SimulatedOracle

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib


METRICS_COLUMNS = (
    "iteration",
    "layer",
    "reviews_used",
    "precision",
    "recall",
    "f1",
    "threshold",
)


# --------------------------------------------------------------------- config


@dataclass(frozen=True)
class MatrixSpec:
    """Grid of protocol runs around the oracle-optimal threshold."""

    budgets: tuple[int, ...] = (100, 200, 300)
    error_rates: tuple[float, ...] = (0.0, 0.1, 0.2)
    offset_span: float = 0.05
    offset_step: float = 0.01
    repeats: int = 3

    def offsets(self) -> list[float]:
        steps = int(round(self.offset_span / self.offset_step))
        return [round(k * self.offset_step, 10) for k in range(-steps, steps + 1)]


@dataclass
class RunConfig:
    """Everything one linkage run needs, resolvable from a config file."""

    seed: int = 0
    secret: bytes = b""
    dataset_paths: tuple[str, str, str] | None = None
    generate: DatasetSpec | None = None
    encoding: EncodingParams = field(default_factory=EncodingParams)
    protocol: ProtocolConfig = field(default_factory=ProtocolConfig)
    error_rate: float = 0.0
    policy_a: DisclosurePolicy | None = None
    policy_b: DisclosurePolicy | None = None
    matrix: MatrixSpec = field(default_factory=MatrixSpec)
    dump_candidates: bool = False

    def __post_init__(self) -> None:
        if not self.secret:
            self.secret = derive_secret(self.seed)
        if self.dataset_paths is None and self.generate is None:
            self.generate = DatasetSpec(seed=self.seed)

    @classmethod
    def from_dict(cls, payload: Mapping, *, seed: int | None = None) -> "RunConfig":
        payload = dict(payload)
        resolved_seed = int(payload.get("seed", 0)) if seed is None else seed
        secret = bytes.fromhex(payload["secret"]) if "secret" in payload else b""
        dataset = payload.get("dataset", {})
        paths = None
        generate = None
        if "a" in dataset:
            paths = (dataset["a"], dataset["b"], dataset["truth"])
        elif "generate" in dataset:
            spec = dict(dataset["generate"])
            spec.setdefault("seed", resolved_seed)
            generate = DatasetSpec(**spec)
        encoding = EncodingParams(**payload.get("encoding", {}))
        protocol_payload = dict(payload.get("protocol", {}))
        if "strategy" in protocol_payload:
            protocol_payload["strategy"] = SelectionStrategy.from_label(
                protocol_payload["strategy"]
            )
        protocol = ProtocolConfig(**protocol_payload)
        policy = payload.get("policy", {})
        policy_a = DisclosurePolicy.load(policy["a"]) if "a" in policy else None
        policy_b = DisclosurePolicy.load(policy["b"]) if "b" in policy else None
        matrix_payload = dict(payload.get("matrix", {}))
        for key in ("budgets",):
            if key in matrix_payload:
                matrix_payload[key] = tuple(int(v) for v in matrix_payload[key])
        for key in ("error_rates",):
            if key in matrix_payload:
                matrix_payload[key] = tuple(float(v) for v in matrix_payload[key])
        matrix = MatrixSpec(**matrix_payload)
        return cls(
            seed=resolved_seed,
            secret=secret,
            dataset_paths=paths,
            generate=generate,
            encoding=encoding,
            protocol=protocol,
            error_rate=float(payload.get("oracle", {}).get("error_rate", 0.0)),
            policy_a=policy_a,
            policy_b=policy_b,
            matrix=matrix,
            dump_candidates=bool(payload.get("dump_candidates", False)),
        )


def load_config_payload(path: str | Path) -> dict:
    path = Path(path)
    if path.suffix == ".toml":
        with path.open("rb") as handle:
            return tomllib.load(handle)
    return json.loads(path.read_text())


def load_config(path: str | Path, *, seed: int | None = None) -> RunConfig:
    return RunConfig.from_dict(load_config_payload(path), seed=seed)


def derive_secret(seed: int) -> bytes:
    """Deterministic stand-in secret so seeded runs are reproducible."""
    return hashlib.sha256(b"linkage-owner-secret|%d" % seed).digest()


def config_summary(config: RunConfig) -> dict:
    """JSON-safe echo of the effective configuration."""
    protocol = {
        key: (value.value if isinstance(value, SelectionStrategy) else value)
        for key, value in vars(config.protocol).items()
    }
    dataset: dict = {}
    if config.dataset_paths is not None:
        dataset = {
            "a": config.dataset_paths[0],
            "b": config.dataset_paths[1],
            "truth": config.dataset_paths[2],
        }
    elif config.generate is not None:
        dataset = {"generate": vars(config.generate).copy()}
    return {
        "seed": config.seed,
        "dataset": dataset,
        "encoding": vars(config.encoding).copy(),
        "protocol": protocol,
        "oracle": {"error_rate": config.error_rate},
    }


# -------------------------------------------------------------------- dataset


def load_dataset(
    config: RunConfig,
) -> tuple[list[PlainRecord], list[PlainRecord], set[tuple[str, str]]]:
    if config.dataset_paths is not None:
        path_a, path_b, path_truth = config.dataset_paths
        return (
            load_records(path_a),
            load_records(path_b),
            load_truth(path_truth),
        )
    assert config.generate is not None
    return generate_dataset(config.generate)


def build_base(
    config: RunConfig,
    dataset: tuple[list[PlainRecord], list[PlainRecord], set[tuple[str, str]]]
    | None = None,
) -> LinkageBase:
    records_a, records_b, truth = dataset if dataset is not None else load_dataset(
        config
    )
    owner_a = DataOwner("a", records_a, config.secret, config.encoding, config.policy_a)
    owner_b = DataOwner("b", records_b, config.secret, config.encoding, config.policy_b)
    return prepare_base(owner_a, owner_b, truth)


# ------------------------------------------------------------------ link runs


def simulated_oracle_factory(error_rate: float):
    def factory(truth_by_pair: dict[int, bool], rng: np.random.Generator):
        return SimulatedOracle(truth_by_pair, error_rate, rng)

    return factory


def run_link(
    config: RunConfig,
    out_dir: str | Path | None = None,
    *,
    base: LinkageBase | None = None,
    run_id: str | None = None,
) -> RunResult:
    """One full protocol run; optionally writes the artifact set."""
    if base is None:
        base = build_base(config)
    result = run_protocol(
        base,
        config.protocol,
        seed=config.seed,
        oracle_factory=simulated_oracle_factory(config.error_rate),
        run_id=run_id,
    )
    if out_dir is not None:
        write_run_artifacts(result, config, Path(out_dir))
    return result


def write_run_artifacts(result: RunResult, config: RunConfig, out_dir: Path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    write_metrics_csv(result, out_dir / "metrics.csv")
    result.ledger.save(out_dir / "ledger.jsonl")
    (out_dir / "models.json").write_text(model_snapshot_json(result))
    (out_dir / "privacy.json").write_text(
        json.dumps(privacy_report(result), indent=2, sort_keys=True)
    )
    (out_dir / "run.json").write_text(
        json.dumps(run_summary(result, config), indent=2, sort_keys=True)
    )
    if config.dump_candidates:
        write_candidates_jsonl(result, out_dir / "candidates.jsonl")


def write_metrics_csv(result: RunResult, path: Path) -> None:
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(METRICS_COLUMNS)
        for row in result.metrics:
            fields = row.public_fields()
            writer.writerow(
                [
                    fields["iteration"],
                    fields["layer"],
                    fields["reviews_used"],
                    f"{fields['precision']:.6f}",
                    f"{fields['recall']:.6f}",
                    f"{fields['f1']:.6f}",
                    f"{fields['threshold']:.6f}",
                ]
            )


def model_snapshot_json(result: RunResult) -> str:
    engine = result.engine
    snapshot = {
        "version": 1,
        "run_id": result.run_id,
        "record_layer": engine.threshold_model.to_dict(),
        "attribute_layer": engine.forest.to_dict() if engine.forest else None,
    }
    return json.dumps(snapshot, indent=2, sort_keys=True)


def run_summary(result: RunResult, config: RunConfig) -> dict:
    final = result.metrics[-1]
    return {
        "run_id": result.run_id,
        "config": config_summary(config),
        "candidate_pairs": result.engine.base.pair_count,
        "true_pairs": result.engine.base.truth_total,
        "clerical_reviews_used": result.clerical_used,
        "attribute_reviews": result.attribute_reviews,
        "initial_f1": result.initial_f1,
        "final_f1": result.final_f1,
        "final_precision": final.precision,
        "final_recall": final.recall,
        "final_threshold": final.threshold,
    }


def write_candidates_jsonl(result: RunResult, path: Path) -> None:
    engine = result.engine
    base = engine.base
    with path.open("w") as handle:
        for pair in range(base.pair_count):
            payload = {
                "pair_id": pair,
                "id_a": base.id_a(pair),
                "id_b": base.id_b(pair),
                "record_sim": round(float(base.record_sims[pair]), 10),
                "is_match": bool(engine.is_match[pair]),
                "confidence": round(float(engine.confidence[pair]), 10),
                "layer": int(engine.label_layer[pair]),
                "truth": bool(base.truth_mask[pair]),
            }
            handle.write(json.dumps(payload, sort_keys=True, separators=(",", ":")))
            handle.write("\n")


# ------------------------------------------------------------ privacy reports


def clerical_pool(result: RunResult) -> list[DisclosedRecord]:
    """Records put in front of reviewers, with their disclosed attributes.

    Records reviewed symbols-only stay in the pool with an empty
    disclosure set; they count for availability but contribute no
    re-identification risk.
    """
    engine = result.engine
    owners = {"a": engine.base.owner_a, "b": engine.base.owner_b}
    disclosed: dict[tuple[str, str], set[str]] = {}
    for review in result.clerical_reviews:
        disclosed.setdefault(("a", review.id_a), set()).update(review.disclosed_a)
        disclosed.setdefault(("b", review.id_b), set()).update(review.disclosed_b)
    pool = []
    for (source, record_id), attrs in sorted(disclosed.items()):
        record = owners[source].record(record_id)
        values = {
            attr: record.value(attr)
            for attr in ATTRIBUTES
            if record.value(attr) is not None
        }
        pool.append(
            DisclosedRecord(
                record_id=f"{source}:{record_id}",
                values=values,
                disclosed=frozenset(attrs),
            )
        )
    return pool


def attribute_layer_report(result: RunResult) -> dict:
    """Bit-distribution flatness of the pair-keyed encodings sent upward."""
    engine = result.engine
    per_attribute = {}
    for attr in ATTRIBUTES:
        count = engine.attribute_encoding_counts[attr]
        if count == 0:
            per_attribute[attr] = {"n_encodings": 0, "gini": None, "jsd": None}
            continue
        frequencies = engine.attribute_bit_counts[attr] / count
        per_attribute[attr] = {
            "n_encodings": count,
            "gini": gini(frequencies),
            "jsd": jsd(frequencies),
        }
    return per_attribute


def privacy_report(result: RunResult) -> dict:
    pool = clerical_pool(result)
    return {
        "run_id": result.run_id,
        "strategy": result.config.strategy.value,
        "layers": [
            {
                "layer": "attribute",
                "per_attribute": attribute_layer_report(result),
            },
            {
                "layer": "clerical",
                "n_records": len(pool),
                "kapr": kapr(pool) if pool else 0.0,
                "attribute_availability": availability_stats(pool),
            },
        ],
    }


# ------------------------------------------------------------------- baseline


@dataclass
class BaselineResult:
    threshold: float
    metrics: Metrics
    per_attribute: dict[str, dict]
    sims: np.ndarray
    truth_mask: np.ndarray
    truth_total: int


def run_baseline(
    config: RunConfig,
    out_dir: str | Path | None = None,
    *,
    dataset: tuple[list[PlainRecord], list[PlainRecord], set[tuple[str, str]]]
    | None = None,
) -> BaselineResult:
    """Shared-key attribute encodings, weighted mean, fixed threshold sweep.

    The privacy side of the report shows what the pair-keyed scheme is
    being compared against: every record's attribute filters use one
    shared key, so bit positions align across all records.
    """
    records_a, records_b, truth = dataset if dataset is not None else load_dataset(
        config
    )
    base = build_base(config, (records_a, records_b, truth))
    params = config.encoding
    encodings_a = [
        encode_shared_attributes(record, params, config.secret)
        for record in records_a
    ]
    encodings_b = [
        encode_shared_attributes(record, params, config.secret)
        for record in records_b
    ]

    n_pairs = base.pair_count
    weights = np.array([BASELINE_WEIGHTS[attr] for attr in ATTRIBUTES])
    sim_sum = np.zeros(n_pairs, dtype=np.float64)
    weight_sum = np.zeros(n_pairs, dtype=np.float64)
    per_attribute: dict[str, dict] = {}
    for k, attr in enumerate(ATTRIBUTES):
        size = params.attribute_size
        vectors_a = np.zeros((len(records_a), size), dtype=bool)
        vectors_b = np.zeros((len(records_b), size), dtype=bool)
        present_a = np.zeros(len(records_a), dtype=bool)
        present_b = np.zeros(len(records_b), dtype=bool)
        for i, enc in enumerate(encodings_a):
            if attr in enc:
                vectors_a[i] = enc[attr]
                present_a[i] = True
        for i, enc in enumerate(encodings_b):
            if attr in enc:
                vectors_b[i] = enc[attr]
                present_b[i] = True
        sims = dice_packed(
            pack_vectors(vectors_a), pack_vectors(vectors_b), base.index_a, base.index_b
        )
        both = present_a[base.index_a] & present_b[base.index_b]
        sim_sum[both] += weights[k] * sims[both]
        weight_sum[both] += weights[k]

        stacked = np.concatenate([vectors_a[present_a], vectors_b[present_b]])
        if len(stacked):
            frequencies = stacked.mean(axis=0)
            per_attribute[attr] = {
                "n_encodings": int(len(stacked)),
                "gini": gini(frequencies),
                "jsd": jsd(frequencies),
            }
        else:
            per_attribute[attr] = {"n_encodings": 0, "gini": None, "jsd": None}

    covered = weight_sum > 0.0
    combined = np.zeros(n_pairs, dtype=np.float64)
    combined[covered] = sim_sum[covered] / weight_sum[covered]
    threshold, _ = find_optimal_threshold(
        combined, base.truth_mask, base.truth_total
    )
    metrics = evaluate(combined >= threshold, base.truth_mask, base.truth_total)
    result = BaselineResult(
        threshold=threshold,
        metrics=metrics,
        per_attribute=per_attribute,
        sims=combined,
        truth_mask=base.truth_mask,
        truth_total=base.truth_total,
    )
    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        payload = {
            "threshold": threshold,
            "precision": metrics.precision,
            "recall": metrics.recall,
            "f1": metrics.f1,
            "per_attribute": per_attribute,
        }
        (out_dir / "baseline.json").write_text(
            json.dumps(payload, indent=2, sort_keys=True)
        )
    return result


def write_encoder_comparison_csv(
    shared: Mapping[str, dict], pair_keyed: Mapping[str, dict], path: Path
) -> None:
    """Per-attribute flatness table: shared-key vs pair-keyed encodings."""
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["attribute", "encoder", "n_encodings", "gini", "jsd"])
        for attr in ATTRIBUTES:
            for encoder, report in (("shared-key", shared), ("pair-keyed", pair_keyed)):
                entry = report[attr]
                writer.writerow(
                    [
                        attr,
                        encoder,
                        entry["n_encodings"],
                        "" if entry["gini"] is None else f"{entry['gini']:.6f}",
                        "" if entry["jsd"] is None else f"{entry['jsd']:.6f}",
                    ]
                )


def run_privacy_report(config: RunConfig, out_dir: str | Path) -> dict:
    """Encoder comparison plus re-identification risk per review strategy."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    dataset = load_dataset(config)
    baseline = run_baseline(config, dataset=dataset)
    strategies = {}
    pair_keyed_report: dict | None = None
    for strategy in SelectionStrategy:
        run_config = replace_strategy(config, strategy)
        base = build_base(run_config, dataset)
        result = run_link(run_config, base=base, run_id=f"privacy-{strategy.value}")
        report = privacy_report(result)
        strategies[strategy.value] = report["layers"][1]
        if pair_keyed_report is None:
            pair_keyed_report = report["layers"][0]["per_attribute"]
    assert pair_keyed_report is not None
    write_encoder_comparison_csv(
        baseline.per_attribute, pair_keyed_report, out_dir / "encoders.csv"
    )
    payload = {
        "encoders": {
            "shared-key": baseline.per_attribute,
            "pair-keyed": pair_keyed_report,
        },
        "clerical_by_strategy": strategies,
    }
    (out_dir / "privacy_report.json").write_text(
        json.dumps(payload, indent=2, sort_keys=True)
    )
    return payload


def replace_strategy(config: RunConfig, strategy: SelectionStrategy) -> RunConfig:
    protocol = replace(config.protocol, strategy=strategy)
    clone = replace(config, protocol=protocol)
    return clone


# --------------------------------------------------------------------- matrix


@dataclass(frozen=True)
class MatrixRow:
    repeat: int
    dataset_seed: int
    budget: int
    error_rate: float
    offset: float
    initial_threshold: float
    final_threshold: float
    optimal_threshold: float
    initial: Metrics
    final: Metrics


@dataclass
class MatrixResult:
    rows: list[MatrixRow]

    def select(
        self, budget: int | None = None, error_rate: float | None = None
    ) -> list[MatrixRow]:
        return [
            row
            for row in self.rows
            if (budget is None or row.budget == budget)
            and (error_rate is None or row.error_rate == error_rate)
        ]

    @staticmethod
    def micro(metrics: Sequence[Metrics]) -> Metrics:
        tp = sum(m.true_positives for m in metrics)
        fp = sum(m.false_positives for m in metrics)
        fn = sum(m.false_negatives for m in metrics)
        precision = tp / (tp + fp) if tp + fp > 0 else 0.0
        recall = tp / (tp + fn) if tp + fn > 0 else 0.0
        f1 = (
            2.0 * precision * recall / (precision + recall)
            if precision + recall > 0
            else 0.0
        )
        return Metrics(precision, recall, f1, tp, fp, fn)

    def micro_initial(self, **filters) -> Metrics:
        return self.micro([row.initial for row in self.select(**filters)])

    def micro_final(self, **filters) -> Metrics:
        return self.micro([row.final for row in self.select(**filters)])

    def f1_range_initial(self, **filters) -> tuple[float, float]:
        values = [row.initial.f1 for row in self.select(**filters)]
        return min(values), max(values)

    def f1_range_final(self, **filters) -> tuple[float, float]:
        values = [row.final.f1 for row in self.select(**filters)]
        return min(values), max(values)


def run_matrix(
    config: RunConfig,
    out_dir: str | Path | None = None,
    *,
    progress: bool = False,
) -> MatrixResult:
    """Protocol runs over repeats x budgets x error rates x offsets.

    Each repeat draws a fresh dataset (when generating) and anchors the
    threshold sweep at that dataset's oracle-optimal record threshold,
    so offsets measure robustness to a miscalibrated starting point.
    """
    spec = config.matrix
    rows: list[MatrixRow] = []
    run_counter = 0
    for repeat in range(spec.repeats):
        if config.generate is not None:
            dataset_spec = replace(config.generate, seed=config.generate.seed + repeat)
            dataset_seed = dataset_spec.seed
            dataset = generate_dataset(dataset_spec)
        else:
            dataset_seed = config.seed
            dataset = load_dataset(config)
        base = build_base(config, dataset)
        t_opt, _ = find_optimal_threshold(
            base.record_sims, base.truth_mask, base.truth_total
        )
        for budget in spec.budgets:
            for error_rate in spec.error_rates:
                for offset in spec.offsets():
                    t0 = round(t_opt + offset, 10)
                    protocol = replace(
                        config.protocol,
                        initial_threshold=t0,
                        clerical_budget=budget,
                    )
                    result = run_protocol(
                        base,
                        protocol,
                        seed=config.seed * 100003 + run_counter,
                        oracle_factory=simulated_oracle_factory(error_rate),
                        run_id=f"matrix-{run_counter:04d}",
                    )
                    run_counter += 1
                    first, last = result.metrics[0], result.metrics[-1]
                    rows.append(
                        MatrixRow(
                            repeat=repeat,
                            dataset_seed=dataset_seed,
                            budget=budget,
                            error_rate=error_rate,
                            offset=offset,
                            initial_threshold=t0,
                            final_threshold=last.threshold,
                            optimal_threshold=t_opt,
                            initial=Metrics(
                                first.precision,
                                first.recall,
                                first.f1,
                                first.true_positives,
                                first.false_positives,
                                first.false_negatives,
                            ),
                            final=Metrics(
                                last.precision,
                                last.recall,
                                last.f1,
                                last.true_positives,
                                last.false_positives,
                                last.false_negatives,
                            ),
                        )
                    )
                    if progress:
                        print(
                            f"matrix run {run_counter}: repeat={repeat}"
                            f" budget={budget} err={error_rate}"
                            f" offset={offset:+.2f}"
                            f" f1 {first.f1:.4f} -> {last.f1:.4f}",
                            flush=True,
                        )
    matrix = MatrixResult(rows)
    if out_dir is not None:
        write_matrix_artifacts(matrix, Path(out_dir))
    return matrix


def write_matrix_artifacts(matrix: MatrixResult, out_dir: Path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    with (out_dir / "matrix.csv").open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(
            [
                "repeat",
                "dataset_seed",
                "budget",
                "error_rate",
                "offset",
                "initial_threshold",
                "final_threshold",
                "initial_precision",
                "initial_recall",
                "initial_f1",
                "final_precision",
                "final_recall",
                "final_f1",
            ]
        )
        for row in matrix.rows:
            writer.writerow(
                [
                    row.repeat,
                    row.dataset_seed,
                    row.budget,
                    f"{row.error_rate:.2f}",
                    f"{row.offset:+.2f}",
                    f"{row.initial_threshold:.6f}",
                    f"{row.final_threshold:.6f}",
                    f"{row.initial.precision:.6f}",
                    f"{row.initial.recall:.6f}",
                    f"{row.initial.f1:.6f}",
                    f"{row.final.precision:.6f}",
                    f"{row.final.recall:.6f}",
                    f"{row.final.f1:.6f}",
                ]
            )
    summary: dict = {"cells": []}
    budgets = sorted({row.budget for row in matrix.rows})
    error_rates = sorted({row.error_rate for row in matrix.rows})
    for budget in budgets:
        for error_rate in error_rates:
            selected = matrix.select(budget=budget, error_rate=error_rate)
            if not selected:
                continue
            initial = matrix.micro([row.initial for row in selected])
            final = matrix.micro([row.final for row in selected])
            summary["cells"].append(
                {
                    "budget": budget,
                    "error_rate": error_rate,
                    "runs": len(selected),
                    "micro_f1_initial": initial.f1,
                    "micro_f1_final": final.f1,
                    "f1_range_initial": list(
                        matrix.f1_range_initial(budget=budget, error_rate=error_rate)
                    ),
                    "f1_range_final": list(
                        matrix.f1_range_final(budget=budget, error_rate=error_rate)
                    ),
                }
            )
    (out_dir / "matrix_summary.json").write_text(
        json.dumps(summary, indent=2, sort_keys=True)
    )
