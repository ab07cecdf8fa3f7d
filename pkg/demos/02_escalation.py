"""One full escalation run, narrated.

Generates a small overlapping record pair, blocks it, and runs the
three-layer schedule: record-level threshold matching, pair-keyed
attribute re-classification for uncertain pairs, and masked clerical
review under a fixed label budget.  Prints the metric trail and the
threshold walk.
"""

from layerlink.data import DatasetSpec, generate_dataset
from layerlink.experiment import RunConfig, build_base, run_link
from layerlink.protocol import ProtocolConfig


def main() -> None:
    config = RunConfig(
        seed=9,
        generate=DatasetSpec(size=500, overlap=0.3, seed=9),
        protocol=ProtocolConfig(
            initial_threshold=0.74,
            warmup_iterations=2,
            warmup_batch_size=80,
            clerical_batches_per_iteration=2,
            clerical_budget=20,
            main_iterations=2,
            main_batch_size=60,
        ),
        error_rate=0.1,
    )
    dataset = generate_dataset(config.generate)
    base = build_base(config, dataset)
    print(
        f"dataset: 2 x {len(dataset[0])} records, {len(dataset[2])} true pairs;"
        f" blocking kept {base.pair_count} candidate pairs"
        f" ({base.truth_mask.sum()} of the true pairs survive)"
    )

    result = run_link(config, base=base)

    print("\niteration  layer      reviews  precision  recall   f1")
    for row in result.metrics:
        print(
            f"{row.iteration:>9}  {row.layer:<9}  {row.reviews_used:>7}"
            f"  {row.precision:>9.4f}  {row.recall:>6.4f}  {row.f1:.4f}"
        )

    print("\nthreshold walk (each update moves at most 0.02):")
    print(f"  start: {config.protocol.initial_threshold:.3f}")
    for iteration, target, threshold in result.threshold_trace:
        print(
            f"  iteration {iteration}: grid target {target:.3f},"
            f" threshold now {threshold:.3f}"
        )

    print(
        f"\nbudget: {result.clerical_used} of"
        f" {config.protocol.clerical_budget} clerical labels spent;"
        f" {result.attribute_reviews} pairs escalated to the attribute layer"
    )
    engine = result.engine
    print(
        f"final state: f1 {result.initial_f1:.4f} -> {result.final_f1:.4f},"
        f" refusals {int(engine.refused.sum())},"
        f" disclosure ledger {len(result.ledger.entries)} entries"
    )


if __name__ == "__main__":
    main()
