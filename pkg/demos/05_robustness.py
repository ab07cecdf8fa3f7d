"""Does the feedback loop rescue a badly chosen starting threshold?

Runs the protocol across a grid of deliberately miscalibrated initial
thresholds (offsets around each dataset's oracle-optimal value) and two
reviewer error rates, then checks two things: pooled F1 after the run
beats pooled F1 before it, and the spread of outcomes across offsets
shrinks, meaning the starting point matters less once the loop has run.
"""

from layerlink.data import DatasetSpec
from layerlink.experiment import MatrixSpec, RunConfig, run_matrix
from layerlink.protocol import ProtocolConfig


def main() -> None:
    config = RunConfig(
        seed=3,
        generate=DatasetSpec(size=800, overlap=0.3, seed=3),
        protocol=ProtocolConfig(
            warmup_iterations=2,
            warmup_batch_size=60,
            clerical_batches_per_iteration=2,
            clerical_budget=32,
            main_iterations=2,
            main_batch_size=60,
        ),
        matrix=MatrixSpec(
            budgets=(32,),
            error_rates=(0.0, 0.2),
            offset_span=0.04,
            offset_step=0.02,
            repeats=2,
        ),
    )
    offsets = config.matrix.offsets()
    runs = (
        config.matrix.repeats
        * len(config.matrix.budgets)
        * len(config.matrix.error_rates)
        * len(offsets)
    )
    print(f"running {runs} protocol runs (offsets {offsets})...\n")
    result = run_matrix(config)

    print(f"{'err':>4} {'f1 before':>10} {'f1 after':>9} {'spread before':>14} {'spread after':>13}")
    for err in config.matrix.error_rates:
        initial = result.micro_initial(error_rate=err)
        final = result.micro_final(error_rate=err)
        lo_i, hi_i = result.f1_range_initial(error_rate=err)
        lo_f, hi_f = result.f1_range_final(error_rate=err)
        print(
            f"{err:>4.1f} {initial.f1:>10.4f} {final.f1:>9.4f}"
            f" {hi_i - lo_i:>14.4f} {hi_f - lo_f:>13.4f}"
        )

    print("\nthreshold recovery, error rate 0.0:")
    print(f"{'offset':>7} {'start':>7} {'end':>7} {'optimal':>8}")
    for row in result.select(error_rate=0.0):
        if row.repeat != 0:
            continue
        print(
            f"{row.offset:>+7.2f} {row.initial_threshold:>7.3f}"
            f" {row.final_threshold:>7.3f} {row.optimal_threshold:>8.3f}"
        )


if __name__ == "__main__":
    main()
